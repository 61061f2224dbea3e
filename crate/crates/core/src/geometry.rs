//! Rotationally symmetric model geometries and the comparison quantities
//! used by the lower bounds.
//!
//! A model geometry is a warped product `dr² + φ(r)² g_S` (balls) or
//! `dt² + w(t)² g_N` (cylinders) of fiber dimension `n`. Radial functions
//! see only the volume density `φ(r)^n`, so the eigenvalue problem reduces
//! to a weighted one-dimensional problem on the radial domain.

use crate::error::{ensure, Error, Result};
use crate::scalar::Real;
use crate::solver::BoundaryCondition;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GeometryKind<T> {
    /// Geodesic ball in the space form of curvature `-κ²`, `φ(r) = sinh(κr)/κ`.
    HyperbolicBall { kappa: T },
    /// Euclidean ball, `φ(r) = r`.
    EuclideanBall,
    /// Interval `[0, L]`, `φ ≡ 1`, fiber dimension 0.
    Interval,
    /// `(−R, R) × N` with `dt² + e^{2t} g_N`.
    ExpCylinder,
    /// `(−R, R) × N` with `dt² + cosh²(t) g_N`.
    CoshCylinder,
}

/// A model geometry: kind, fiber dimension `n` (the manifold has dimension
/// `n + 1`) and extent (ball radius, interval length or cylinder half-length).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelGeometry<T> {
    kind: GeometryKind<T>,
    n: u32,
    extent: T,
}

impl<T: Real> ModelGeometry<T> {
    pub fn hyperbolic_ball(n: u32, kappa: T, radius: T) -> Result<Self> {
        ensure(kappa > T::zero() && kappa.is_finite(), || {
            format!("kappa must be positive, got {kappa}")
        })?;
        Self::new(GeometryKind::HyperbolicBall { kappa }, n, radius)
    }

    pub fn euclidean_ball(n: u32, radius: T) -> Result<Self> {
        Self::new(GeometryKind::EuclideanBall, n, radius)
    }

    pub fn interval(length: T) -> Result<Self> {
        Self::new(GeometryKind::Interval, 0, length)
    }

    pub fn exp_cylinder(n: u32, half_length: T) -> Result<Self> {
        Self::new(GeometryKind::ExpCylinder, n, half_length)
    }

    pub fn cosh_cylinder(n: u32, half_length: T) -> Result<Self> {
        Self::new(GeometryKind::CoshCylinder, n, half_length)
    }

    fn new(kind: GeometryKind<T>, n: u32, extent: T) -> Result<Self> {
        ensure(extent > T::zero() && extent.is_finite(), || {
            format!("extent must be positive and finite, got {extent}")
        })?;
        if !matches!(kind, GeometryKind::Interval) {
            ensure(n >= 1, || "fiber dimension n must be at least 1".into())?;
        }
        Ok(Self { kind, n, extent })
    }

    /// Same geometry family with a different radius / half-length.
    pub fn with_extent(&self, extent: T) -> Result<Self> {
        Self::new(self.kind, self.n, extent)
    }

    pub fn kind(&self) -> GeometryKind<T> {
        self.kind
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn extent(&self) -> T {
        self.extent
    }

    pub fn is_ball(&self) -> bool {
        matches!(
            self.kind,
            GeometryKind::HyperbolicBall { .. } | GeometryKind::EuclideanBall
        )
    }

    /// Radial domain: `[0, R]` for balls and intervals, `[−R, R]` for cylinders.
    pub fn domain(&self) -> (T, T) {
        match self.kind {
            GeometryKind::ExpCylinder | GeometryKind::CoshCylinder => (-self.extent, self.extent),
            _ => (T::zero(), self.extent),
        }
    }

    /// The first eigenfunction of a ball is radial with `u'(0) = 0`; the
    /// other domains carry Dirichlet conditions at both ends.
    pub fn boundary_condition(&self) -> BoundaryCondition {
        if self.is_ball() {
            BoundaryCondition::DirichletRightNaturalLeft
        } else {
            BoundaryCondition::DirichletBoth
        }
    }

    pub fn warp(&self, r: T) -> T {
        match self.kind {
            GeometryKind::HyperbolicBall { kappa } => (kappa * r).sinh() / kappa,
            GeometryKind::EuclideanBall => r,
            GeometryKind::Interval => T::one(),
            GeometryKind::ExpCylinder => r.exp(),
            GeometryKind::CoshCylinder => r.cosh(),
        }
    }

    pub fn warp_derivative(&self, r: T) -> T {
        match self.kind {
            GeometryKind::HyperbolicBall { kappa } => (kappa * r).cosh(),
            GeometryKind::EuclideanBall => T::one(),
            GeometryKind::Interval => T::zero(),
            GeometryKind::ExpCylinder => r.exp(),
            GeometryKind::CoshCylinder => r.sinh(),
        }
    }

    /// `ln φ(r)`, evaluated without overflow for large arguments.
    /// Returns `-∞` where the warp vanishes (the center of a ball).
    pub fn log_warp(&self, r: T) -> T {
        let two = T::lit(2.0);
        match self.kind {
            GeometryKind::HyperbolicBall { kappa } => {
                let x = kappa * r;
                if x <= T::zero() {
                    T::neg_infinity()
                } else if x > T::lit(20.0) {
                    x + ((T::one() - (-two * x).exp()) / two).ln() - kappa.ln()
                } else {
                    (x.sinh() / kappa).ln()
                }
            }
            GeometryKind::EuclideanBall => {
                if r <= T::zero() {
                    T::neg_infinity()
                } else {
                    r.ln()
                }
            }
            GeometryKind::Interval => T::zero(),
            GeometryKind::ExpCylinder => r,
            GeometryKind::CoshCylinder => {
                let a = r.abs();
                a + ((T::one() + (-two * a).exp()) / two).ln()
            }
        }
    }

    /// Logarithm of the volume density `φ(r)^n` (up to the fiber volume).
    pub fn log_density(&self, r: T) -> T {
        if self.n == 0 {
            return T::zero();
        }
        let lw = self.log_warp(r);
        if lw == T::neg_infinity() {
            lw
        } else {
            T::lit(f64::from(self.n)) * lw
        }
    }

    /// Volume density `φ(r)^n`; overflows for very large domains, use
    /// [`ModelGeometry::log_density`] there.
    pub fn density(&self, r: T) -> T {
        self.log_density(r).exp()
    }

    /// Laplacian of the distance to the center, `n φ'(r)/φ(r)`.
    pub fn laplacian_distance_lower(&self, r: T) -> Result<T> {
        ensure(self.is_ball(), || "distance Laplacian is defined for balls only".into())?;
        ensure(r > T::zero(), || format!("r must be positive, got {r}"))?;
        let n = T::lit(f64::from(self.n));
        Ok(match self.kind {
            GeometryKind::HyperbolicBall { kappa } => n * kappa / (kappa * r).tanh(),
            _ => n / r,
        })
    }

    pub fn name(&self) -> &'static str {
        match self.kind {
            GeometryKind::HyperbolicBall { .. } => "hyperbolic",
            GeometryKind::EuclideanBall => "euclidean",
            GeometryKind::Interval => "interval",
            GeometryKind::ExpCylinder => "exp-cylinder",
            GeometryKind::CoshCylinder => "cosh-cylinder",
        }
    }
}

/// `arccoth(x) = ½ ln((x + 1)/(x − 1))` for `x > 1`.
pub fn arccoth<T: Real>(x: T) -> Result<T> {
    ensure(x > T::one() + T::lit(1e-14), || format!("arccoth needs x > 1, got {x}"))?;
    let half = T::lit(0.5);
    Ok(half * ((x + T::one()) / (x - T::one())).ln())
}

/// Upper bound on the inscribed radius of a domain whose boundary mean
/// curvature is at least `k` under `Ric ≥ −n g`: `arccoth(k/n)`, or `+∞`
/// when `k = n`.
pub fn max_inscribed_radius<T: Real>(n: u32, k: T) -> Result<T> {
    ensure(n >= 1, || "n must be at least 1".into())?;
    let nf = T::lit(f64::from(n));
    ensure(k >= nf, || format!("need k >= n, got k = {k}, n = {n}"))?;
    let ratio = k / nf;
    if ratio <= T::one() + T::lit(1e-14) {
        return Ok(T::infinity());
    }
    arccoth(ratio)
}

/// Solution of `y' = y² − 1`, `y(0) = h0 ≥ 1`: identically 1 when `h0 = 1`,
/// otherwise `coth(arccoth(h0) − s)`, which blows up at `s = arccoth(h0)`.
pub fn riccati_lower_envelope<T: Real>(h0: T, s: T) -> Result<T> {
    ensure(h0 >= T::one(), || format!("h0 must be at least 1, got {h0}"))?;
    ensure(s >= T::zero(), || format!("s must be nonnegative, got {s}"))?;
    if h0 <= T::one() + T::lit(1e-14) {
        return Ok(T::one());
    }
    if s == T::zero() {
        return Ok(h0);
    }
    let blow_up = arccoth(h0)?;
    if s >= blow_up {
        return Err(Error::BlowUp {
            s: s.as_f64(),
            blow_up: blow_up.as_f64(),
        });
    }
    Ok(T::one() / (blow_up - s).tanh())
}

/// Initial data for the numerical Riccati integrator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RiccatiState<T> {
    /// Normalized initial mean curvature `H(0)/n`.
    pub h0: T,
    pub s_max: T,
    pub steps: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RiccatiTrajectory<T> {
    pub s: Vec<T>,
    pub h: Vec<T>,
    /// Max difference between the step-`Δs` and step-`Δs/2` solutions on
    /// the shared nodes, divided by 15.
    pub richardson_error: T,
}

fn rk4_run<T: Real, F: Fn(T, T) -> T>(h0: T, s_max: T, steps: usize, forcing: &F) -> Vec<T> {
    let rhs = |s: T, h: T| h * h - T::one() + forcing(s, h);
    let ds = s_max / T::from_usize_lossy(steps);
    let half = T::lit(0.5);
    let sixth = T::one() / T::lit(6.0);
    let mut out = Vec::with_capacity(steps + 1);
    let mut h = h0;
    out.push(h);
    for i in 0..steps {
        let s = ds * T::from_usize_lossy(i);
        let k1 = rhs(s, h);
        let k2 = rhs(s + half * ds, h + half * ds * k1);
        let k3 = rhs(s + half * ds, h + half * ds * k2);
        let k4 = rhs(s + ds, h + ds * k3);
        h += ds * sixth * (k1 + T::lit(2.0) * (k2 + k3) + k4);
        out.push(h);
    }
    out
}

/// RK4 integration of `h' = h² − 1 + F(s, h)` on `[0, s_max]`.
///
/// With `F ≡ 0` this is the comparison equation; a nonnegative forcing
/// models `|Hess ρ|² + Ric ≥ n(h² − 1)`. The unforced solution blows up at
/// `arccoth(h0)`, so `s_max` is capped at `0.95·arccoth(h0)`.
pub fn integrate_riccati<T: Real, F: Fn(T, T) -> T>(
    state: RiccatiState<T>,
    forcing: F,
) -> Result<RiccatiTrajectory<T>> {
    let RiccatiState { h0, s_max, steps } = state;
    ensure(steps >= 16, || format!("need at least 16 steps, got {steps}"))?;
    ensure(s_max > T::zero(), || format!("s_max must be positive, got {s_max}"))?;
    ensure(h0 >= T::one(), || format!("h0 must be at least 1, got {h0}"))?;
    if h0 > T::one() + T::lit(1e-14) {
        let blow_up = arccoth(h0)?;
        if s_max >= T::lit(0.95) * blow_up {
            return Err(Error::BlowUp {
                s: s_max.as_f64(),
                blow_up: blow_up.as_f64(),
            });
        }
    }
    let coarse = rk4_run(h0, s_max, steps, &forcing);
    let fine = rk4_run(h0, s_max, 2 * steps, &forcing);
    let richardson_error = coarse
        .iter()
        .enumerate()
        .map(|(i, c)| (*c - fine[2 * i]).abs())
        .fold(T::zero(), T::max)
        / T::lit(15.0);
    let ds = s_max / T::from_usize_lossy(steps);
    let s = (0..=steps).map(|i| ds * T::from_usize_lossy(i)).collect();
    Ok(RiccatiTrajectory {
        s,
        h: coarse,
        richardson_error,
    })
}

/// Mean curvature of the level set `{x = ε}` of a geodesic defining function:
/// `H_ε = n + S̄ ε²/(2n)`, at least `n` whenever `S̄ ≥ 0`.
pub fn mean_curvature_level_set<T: Real>(n: u32, eps: T, s_bar: T) -> Result<T> {
    ensure(n >= 1, || "n must be at least 1".into())?;
    ensure(eps > T::zero(), || format!("eps must be positive, got {eps}"))?;
    ensure(s_bar >= T::zero(), || format!("S_bar must be nonnegative, got {s_bar}"))?;
    let nf = T::lit(f64::from(n));
    Ok(nf + s_bar * eps * eps / (T::lit(2.0) * nf))
}

/// Boundary value of the compactified scalar curvature, `S̄(0) = n/(n−1)·S_ĝ`.
pub fn boundary_scalar_curvature<T: Real>(n: u32, s_hat: T) -> Result<T> {
    ensure(n >= 2, || "n must be at least 2".into())?;
    let nf = T::lit(f64::from(n));
    Ok(nf / (nf - T::one()) * s_hat)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn riccati_closed_form_examples() {
        assert_eq!(riccati_lower_envelope(1.0f64, 7.5).unwrap(), 1.0);
        assert_eq!(riccati_lower_envelope(2.0f64, 0.0).unwrap(), 2.0);
        // coth(arccoth 2 - 0.25) = coth(0.29930614433405...)
        assert_relative_eq!(
            riccati_lower_envelope(2.0f64, 0.25).unwrap(),
            3.440_238_619_835_847,
            max_relative = 1e-12
        );
    }

    #[test]
    fn riccati_blow_up_matches_inscribed_radius() {
        for &(n, h0) in &[(2u32, 2.0f64), (3, 1.5), (5, 4.0)] {
            let cap = max_inscribed_radius(n, h0 * f64::from(n)).unwrap();
            assert!(riccati_lower_envelope(h0, cap * (1.0 - 1e-9)).is_ok());
            assert!(matches!(riccati_lower_envelope(h0, cap), Err(Error::BlowUp { .. })));
            assert!(matches!(
                riccati_lower_envelope(h0, cap * 1.5),
                Err(Error::BlowUp { .. })
            ));
        }
        assert!(riccati_lower_envelope(0.5f64, 0.1).is_err());
    }

    #[test]
    fn inscribed_radius_examples() {
        assert!(max_inscribed_radius(2, 2.0f64).unwrap().is_infinite());
        let half_ln3 = 0.5 * 3.0f64.ln();
        assert_relative_eq!(max_inscribed_radius(2, 4.0f64).unwrap(), half_ln3, max_relative = 1e-14);
        assert_relative_eq!(
            max_inscribed_radius(3, 6.0f64).unwrap(),
            0.549_306_144_334_054_8,
            max_relative = 1e-14
        );
        assert!(matches!(
            max_inscribed_radius(3, 2.0f64),
            Err(Error::ParameterDomain(_))
        ));
    }

    #[test]
    fn rk4_matches_closed_form() {
        for &h0 in &[1.0f64, 1.2, 2.0, 5.0] {
            let s_max = if h0 > 1.0 { 0.9 * arccoth(h0).unwrap() } else { 3.0 };
            let traj = integrate_riccati(RiccatiState { h0, s_max, steps: 4000 }, |_, _| 0.0).unwrap();
            for (s, h) in traj.s.iter().zip(&traj.h) {
                let exact = riccati_lower_envelope(h0, *s).unwrap();
                assert!(
                    (h - exact).abs() < 1e-9 * exact.max(1.0),
                    "h0={h0} s={s}: {h} vs {exact}"
                );
            }
            assert!(traj.richardson_error < 1e-9);
        }
    }

    #[test]
    fn rk4_guard_rejects_near_blow_up() {
        let cap = arccoth(2.0f64).unwrap();
        let st = RiccatiState {
            h0: 2.0,
            s_max: 0.96 * cap,
            steps: 100,
        };
        assert!(matches!(integrate_riccati(st, |_, _| 0.0), Err(Error::BlowUp { .. })));
        let st = RiccatiState {
            h0: 2.0,
            s_max: 0.5,
            steps: 8,
        };
        assert!(integrate_riccati(st, |_, _| 0.0).is_err());
    }

    #[test]
    fn level_set_curvature() {
        assert_eq!(mean_curvature_level_set(2, 0.1f64, 0.0).unwrap(), 2.0);
        assert_relative_eq!(
            mean_curvature_level_set(3, 0.2f64, 6.0).unwrap(),
            3.04,
            max_relative = 1e-14
        );
        assert_relative_eq!(boundary_scalar_curvature(3, 2.0f64).unwrap(), 3.0, max_relative = 1e-15);
        assert!(mean_curvature_level_set(2, 0.1f64, -1.0).is_err());
        assert!(mean_curvature_level_set(2, 0.0f64, 1.0).is_err());
    }

    #[test]
    fn distance_laplacian() {
        let h = ModelGeometry::hyperbolic_ball(2, 1.0f64, 20.0).unwrap();
        assert_relative_eq!(
            h.laplacian_distance_lower(10.0).unwrap(),
            2.000_000_008_244_614_5,
            max_relative = 1e-14
        );
        let e = ModelGeometry::euclidean_ball(2, 1.0f64).unwrap();
        assert_eq!(e.laplacian_distance_lower(1.0).unwrap(), 2.0);
        let h2 = ModelGeometry::hyperbolic_ball(3, 2.0f64, 50.0).unwrap();
        assert_relative_eq!(h2.laplacian_distance_lower(40.0).unwrap(), 6.0, max_relative = 1e-14);
        assert!(h.laplacian_distance_lower(0.0).is_err());
        assert!(ModelGeometry::interval(1.0f64)
            .unwrap()
            .laplacian_distance_lower(0.5)
            .is_err());
    }

    #[test]
    fn densities_are_positive_and_stable() {
        let geoms = [
            ModelGeometry::hyperbolic_ball(6, 1.0f64, 100.0).unwrap(),
            ModelGeometry::euclidean_ball(3, 2.0).unwrap(),
            ModelGeometry::interval(3.0).unwrap(),
            ModelGeometry::exp_cylinder(3, 10.0).unwrap(),
            ModelGeometry::cosh_cylinder(2, 10.0).unwrap(),
        ];
        for g in &geoms {
            let (a, b) = g.domain();
            for i in 1..100 {
                let r = a + (b - a) * f64::from(i) / 100.0;
                let ld = g.log_density(r);
                assert!(ld.is_finite(), "{} at {r}", g.name());
                assert_relative_eq!(g.log_warp(r), g.warp(r).ln(), max_relative = 1e-10, epsilon = 1e-12);
            }
        }
        assert_eq!(geoms[2].density(0.7), 1.0);
        assert_eq!(geoms[0].density(0.0), 0.0);
        // sinh(100)^6 overflows in log-free form only beyond ~118
        assert_relative_eq!(
            geoms[0].log_density(100.0),
            6.0 * (100.0 - 2f64.ln()),
            max_relative = 1e-14
        );
    }

    #[test]
    fn warp_derivative_is_consistent() {
        let g = ModelGeometry::hyperbolic_ball(2, 0.7f64, 5.0).unwrap();
        for &r in &[0.3, 1.0, 4.0] {
            let h = 1e-6;
            let fd = (g.warp(r + h) - g.warp(r - h)) / (2.0 * h);
            assert_relative_eq!(g.warp_derivative(r), fd, max_relative = 1e-8);
        }
    }

    #[test]
    fn works_in_single_precision() {
        let v = riccati_lower_envelope(2.0f32, 0.25).unwrap();
        assert!((v - 3.440_238_6).abs() < 1e-4);
        assert!((max_inscribed_radius(2, 4.0f32).unwrap() - 0.549_306).abs() < 1e-5);
    }
}
