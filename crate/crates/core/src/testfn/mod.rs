//! Explicit test functions and sub-solutions, pointwise certificates of
//! their differential inequalities, and the quadratures behind the upper
//! bounds.
//!
//! * [`eval_f_eq31`], [`verify_case1_inequality`], [`verify_case2_inequality`]:
//!   the logarithmic sub-solution `f = r − (p/k) ln sin a(r + p/k)` used for
//!   the lower bound on domains with `Δr ≥ k`.
//! * [`barta_margin`]: Barta's criterion `−Δ_p v ≥ μ v^{p−1}` for a positive
//!   discrete profile, in the same weak form as the solver.
//! * [`quotient_hyperbolic_ball`], [`quotient_cylinder`]: Rayleigh quotients
//!   of the explicit upper-bound test functions, by quadrature.

mod barta;
mod eq31;
mod quadrature;
mod special;

pub use barta::barta_margin;
pub use eq31::{
    epsilon_sweep, eval_f_eq31, implied_lower_bound, scalar_check_case1, scalar_check_case2, verify_case1_inequality,
    verify_case2_inequality, EpsilonSweep, DEFAULT_EPS, DEFAULT_GRID,
};
pub use quadrature::{
    g_deficit, quotient_cylinder, quotient_hyperbolic_ball, CylinderKind, HyperbolicQuotient, DEFAULT_QUAD_POINTS,
    MIN_QUAD_POINTS,
};
pub use special::{beta, gamma, ln_gamma, special_functions};

use crate::error::{ensure, Result};
use crate::scalar::Real;

/// Which explicit function a [`TestFunctionSpec`] describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TestFunctionTag {
    /// `r − (p/k) ln sin a(r + p/k)`
    Eq31,
    /// `e^{−nr/p} sin(πr/R)` on a hyperbolic ball.
    Eq410,
    /// `e^{−nt/p} cos(πt/2R)` on the exponential cylinder.
    Ex52,
    /// `cosh^{−n/p}(t) cos(πt/2R)` on the cosh cylinder.
    Ex53,
    /// `f = −ln v` for a positive profile `v`.
    LogOfPositive,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TestFunctionSpec<T> {
    pub tag: TestFunctionTag,
    pub n: u32,
    pub p: T,
    pub k: T,
    pub radius: T,
    /// Angle cutoff `ε` in `a = (π − ε)/(R + p/k)`.
    pub eps: T,
}

impl<T: Real> TestFunctionSpec<T> {
    pub fn eq31(p: T, k: T, radius: T, eps: T) -> Result<Self> {
        check_p(p)?;
        ensure(k > T::zero() && k.is_finite(), || {
            format!("k must be positive, got {k}")
        })?;
        check_radius(radius)?;
        ensure(eps > T::zero() && eps < T::PI(), || {
            format!("eps must lie in (0, π), got {eps}")
        })?;
        Ok(Self {
            tag: TestFunctionTag::Eq31,
            n: 0,
            p,
            k,
            radius,
            eps,
        })
    }

    pub fn eq410(n: u32, p: T, radius: T) -> Result<Self> {
        Self::profile_spec(TestFunctionTag::Eq410, n, p, radius)
    }

    pub fn ex52(n: u32, p: T, radius: T) -> Result<Self> {
        Self::profile_spec(TestFunctionTag::Ex52, n, p, radius)
    }

    pub fn ex53(n: u32, p: T, radius: T) -> Result<Self> {
        Self::profile_spec(TestFunctionTag::Ex53, n, p, radius)
    }

    fn profile_spec(tag: TestFunctionTag, n: u32, p: T, radius: T) -> Result<Self> {
        check_p(p)?;
        check_radius(radius)?;
        ensure(n >= 1, || "n must be at least 1".into())?;
        Ok(Self {
            tag,
            n,
            p,
            k: T::zero(),
            radius,
            eps: T::zero(),
        })
    }

    /// `a = (π − ε)/(R + p/k)`.
    pub fn a(&self) -> T {
        (T::PI() - self.eps) / (self.radius + self.p / self.k)
    }

    /// Value of the upper-bound test functions (`Eq410`, `Ex52`, `Ex53`)
    /// at radius or height `r`; `None` for the other tags.
    pub fn profile(&self, r: T) -> Option<T> {
        let n_over_p = T::lit(f64::from(self.n)) / self.p;
        let half_pi = T::FRAC_PI_2();
        match self.tag {
            TestFunctionTag::Eq410 => Some((-n_over_p * r).exp() * (T::PI() * r / self.radius).sin()),
            TestFunctionTag::Ex52 => Some((-n_over_p * r).exp() * (half_pi * r / self.radius).cos()),
            TestFunctionTag::Ex53 => Some(r.cosh().powf(-n_over_p) * (half_pi * r / self.radius).cos()),
            _ => None,
        }
    }
}

/// Outcome of a pointwise inequality check `LHS − RHS ≥ −tolerance`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InequalityReport<T> {
    /// Minimum of `LHS − RHS` over the sampled points.
    pub min_margin: T,
    /// Sample point where the minimum is attained.
    pub argmin: T,
    pub grid_size: usize,
    pub tolerance: T,
    pub passed: bool,
}

impl<T: Real> InequalityReport<T> {
    pub(crate) fn from_margins(points: impl IntoIterator<Item = (T, T)>, grid_size: usize, tolerance: T) -> Self {
        let mut min_margin = T::infinity();
        let mut argmin = T::nan();
        let mut any_nan = false;
        for (x, m) in points {
            if m.is_nan() {
                any_nan = true;
            }
            if m < min_margin {
                min_margin = m;
                argmin = x;
            }
        }
        Self {
            min_margin,
            argmin,
            grid_size,
            tolerance,
            passed: !any_nan && min_margin >= -tolerance,
        }
    }
}

fn check_p<T: Real>(p: T) -> Result<()> {
    ensure(p > T::one() && p.is_finite(), || format!("p must exceed 1, got {p}"))
}

fn check_radius<T: Real>(radius: T) -> Result<()> {
    ensure(radius > T::zero() && radius.is_finite(), || {
        format!("R must be positive, got {radius}")
    })
}
