use crate::error::{ensure, Error, Result};
use crate::geometry::ModelGeometry;
use crate::numeric::CompensatedSum;
use crate::scalar::Real;

use super::{BoundaryCondition, RadialGrid};

/// Conforming P1 form of the Rayleigh quotient
///
/// ```text
/// Q(u) = Σ_cells (∫_cell ρ) φ(Du_j) / ∫ ρ |u_h|^p,
/// φ(s) = (s² + δ²)^{p/2},   Du_j = (u_{j+1} − u_j)/h,
/// ```
///
/// where `u_h` is the piecewise linear interpolant of the nodal values and
/// all integrals use three-point Gauss–Legendre rules per cell. Because
/// the P1 spaces of successive dyadic grids are nested, the discrete
/// eigenvalue does not increase under refinement. The density is scaled by
/// a common factor (its value at the domain midpoint) so that large
/// hyperbolic balls do not overflow; the quotient is invariant under that
/// scaling.
#[derive(Debug, Clone)]
pub(crate) struct Discretization<T> {
    pub h: T,
    pub bc: BoundaryCondition,
    /// Lumped mass `∫ ρ ψ_i` per node (`ψ_i` the hat function).
    pub mass: Vec<T>,
    /// `∫_cell ρ` per cell.
    pub stiff: Vec<T>,
    /// `h ω_g ρ(x_g)` at the Gauss points of every cell.
    pub quad: Vec<[T; 3]>,
}

/// Gauss–Legendre abscissae on `[0, 1]`.
pub(crate) fn gauss_points<T: Real>() -> [T; 3] {
    let d = T::lit(0.15).sqrt();
    let half = T::lit(0.5);
    [half - d, half, half + d]
}

fn gauss_weights<T: Real>() -> [T; 3] {
    [T::lit(5.0 / 18.0), T::lit(8.0 / 18.0), T::lit(5.0 / 18.0)]
}

impl<T: Real> Discretization<T> {
    pub fn new(geom: &ModelGeometry<T>, grid: &RadialGrid<T>) -> Result<Self> {
        let (a, b) = geom.domain();
        let scale = (b - a).abs().max(T::one());
        let tol = T::lit(1e-10) * scale;
        ensure((grid.start() - a).abs() <= tol && (grid.end() - b).abs() <= tol, || {
            format!(
                "grid [{}, {}] does not span the {} domain [{a}, {b}]",
                grid.start(),
                grid.end(),
                geom.name()
            )
        })?;
        let m = grid.cells();
        let h = grid.spacing();
        let shift = geom.log_density(T::lit(0.5) * (a + b));
        let weight = |r: T| {
            let ld = geom.log_density(r);
            if ld == T::neg_infinity() {
                T::zero()
            } else {
                (ld - shift).exp()
            }
        };
        let xi = gauss_points::<T>();
        let omega = gauss_weights::<T>();
        let quad: Vec<[T; 3]> = (0..m)
            .map(|j| {
                let left = grid.node(j);
                let mut w = [T::zero(); 3];
                for g in 0..3 {
                    w[g] = h * omega[g] * weight(left + xi[g] * h);
                }
                w
            })
            .collect();
        let stiff: Vec<T> = quad.iter().map(|w| w[0] + w[1] + w[2]).collect();
        let mut mass = vec![T::zero(); m + 1];
        for (j, w) in quad.iter().enumerate() {
            for g in 0..3 {
                mass[j] += w[g] * (T::one() - xi[g]);
                mass[j + 1] += w[g] * xi[g];
            }
        }
        if mass.iter().chain(&stiff).any(|w| !w.is_finite()) {
            return Err(Error::domain(format!(
                "density of the {} geometry overflows on this grid",
                geom.name()
            )));
        }
        Ok(Self {
            h,
            bc: geom.boundary_condition(),
            mass,
            stiff,
            quad,
        })
    }

    pub fn nodes(&self) -> usize {
        self.mass.len()
    }

    /// Indices of nodes that are not pinned by a Dirichlet condition.
    pub fn free_range(&self) -> std::ops::Range<usize> {
        let last = self.nodes() - 1;
        match self.bc {
            BoundaryCondition::DirichletBoth => 1..last,
            BoundaryCondition::DirichletRightNaturalLeft => 0..last,
        }
    }

    pub fn pin(&self, u: &mut [T]) {
        let last = u.len() - 1;
        u[last] = T::zero();
        if self.bc == BoundaryCondition::DirichletBoth {
            u[0] = T::zero();
        }
    }

    pub fn energy(&self, u: &[T], law: &PowerLaw<T>) -> T {
        let mut acc = CompensatedSum::new();
        let inv_h = T::one() / self.h;
        for (j, w) in self.stiff.iter().enumerate() {
            acc.add(*w * law.phi((u[j + 1] - u[j]) * inv_h));
        }
        acc.value()
    }

    pub fn mass_norm(&self, u: &[T], p: T) -> T {
        let xi = gauss_points::<T>();
        let quadratic = p == T::lit(2.0);
        let mut acc = CompensatedSum::new();
        for (j, w) in self.quad.iter().enumerate() {
            let (a, b) = (u[j], u[j + 1]);
            let mut cell = T::zero();
            for g in 0..3 {
                let v = a + (b - a) * xi[g];
                cell += w[g] * if quadratic { v * v } else { v.abs().powf(p) };
            }
            acc.add(cell);
        }
        acc.value()
    }

    pub fn quotient(&self, u: &[T], law: &PowerLaw<T>) -> Result<T> {
        let den = self.mass_norm(u, law.p);
        if !(den > T::lit(1e-300).max(T::min_positive_value())) {
            return Err(Error::ZeroDenominator);
        }
        Ok(self.energy(u, law) / den)
    }

    /// Energy, mass and their gradients.
    pub fn with_gradients(&self, u: &[T], law: &PowerLaw<T>, g_energy: &mut [T], g_mass: &mut [T]) -> (T, T) {
        let inv_h = T::one() / self.h;
        g_energy.iter_mut().for_each(|g| *g = T::zero());
        g_mass.iter_mut().for_each(|g| *g = T::zero());
        let mut e = CompensatedSum::new();
        for (j, w) in self.stiff.iter().enumerate() {
            let s = (u[j + 1] - u[j]) * inv_h;
            e.add(*w * law.phi(s));
            let flux = *w * law.dphi(s) * inv_h;
            g_energy[j] -= flux;
            g_energy[j + 1] += flux;
        }
        let p = law.p;
        let quadratic = p == T::lit(2.0);
        let xi = gauss_points::<T>();
        let mut n = CompensatedSum::new();
        for (j, w) in self.quad.iter().enumerate() {
            let (a, b) = (u[j], u[j + 1]);
            let mut cell = T::zero();
            for g in 0..3 {
                let v = a + (b - a) * xi[g];
                let (val, d) = if quadratic {
                    (v * v, T::lit(2.0) * v)
                } else {
                    let av = v.abs();
                    if av > T::zero() {
                        let pw = av.powf(p - T::one());
                        (pw * av, p * pw * v.signum())
                    } else {
                        (T::zero(), T::zero())
                    }
                };
                cell += w[g] * val;
                g_mass[j] += w[g] * d * (T::one() - xi[g]);
                g_mass[j + 1] += w[g] * d * xi[g];
            }
            n.add(cell);
        }
        (e.value(), n.value())
    }

    /// Tridiagonal `(diag, off)` of `Σ_cells Σ_g W_g c_g ψ_a ψ_b` with the
    /// per-point coefficient `c(j, g)`.
    pub fn weighted_mass(&self, mut c: impl FnMut(usize, usize) -> T) -> (Vec<T>, Vec<T>) {
        let xi = gauss_points::<T>();
        let mut diag = vec![T::zero(); self.nodes()];
        let mut off = vec![T::zero(); self.stiff.len()];
        for (j, w) in self.quad.iter().enumerate() {
            for g in 0..3 {
                let wc = w[g] * c(j, g);
                let (l, r) = (T::one() - xi[g], xi[g]);
                diag[j] += wc * l * l;
                diag[j + 1] += wc * r * r;
                off[j] += wc * l * r;
            }
        }
        (diag, off)
    }

    /// Normalizes `u` to unit discrete p-norm and pins Dirichlet nodes.
    pub fn normalize(&self, u: &mut [T], p: T) -> Result<()> {
        self.pin(u);
        let nrm = self.mass_norm(u, p);
        if !(nrm > T::zero()) || !nrm.is_finite() {
            return Err(Error::ZeroDenominator);
        }
        let s = nrm.powf(-T::one() / p);
        u.iter_mut().for_each(|x| *x *= s);
        Ok(())
    }
}

/// The integrand `φ(s) = (s² + δ²)^{p/2}` and its derivatives.
#[derive(Debug, Clone, Copy)]
pub(crate) struct PowerLaw<T> {
    pub p: T,
    pub delta: T,
    quadratic: bool,
}

impl<T: Real> PowerLaw<T> {
    pub fn new(p: T, delta: T) -> Self {
        Self {
            p,
            delta,
            quadratic: p == T::lit(2.0) && delta == T::zero(),
        }
    }

    #[inline]
    pub fn phi(&self, s: T) -> T {
        if self.quadratic {
            s * s
        } else if self.delta == T::zero() {
            s.abs().powf(self.p)
        } else {
            (s * s + self.delta * self.delta).powf(self.p / T::lit(2.0))
        }
    }

    #[inline]
    pub fn dphi(&self, s: T) -> T {
        if self.quadratic {
            T::lit(2.0) * s
        } else if self.delta == T::zero() {
            if s == T::zero() {
                T::zero()
            } else {
                self.p * s.abs().powf(self.p - T::one()) * s.signum()
            }
        } else {
            self.p * s * (s * s + self.delta * self.delta).powf(self.p / T::lit(2.0) - T::one())
        }
    }

    /// `φ''(s)/(p − 1)` with `|s|` clamped below by `floor`, used only to
    /// build the preconditioner.
    #[inline]
    pub fn curvature(&self, s: T, floor: T) -> T {
        if self.quadratic {
            return T::lit(2.0);
        }
        let m = s.abs().max(self.delta).max(floor);
        self.p * m.powf(self.p - T::lit(2.0))
    }
}
