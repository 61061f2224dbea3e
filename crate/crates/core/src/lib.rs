//! Numerical toolkit for the first Dirichlet eigenvalue of the p-Laplacian
//! on rotationally symmetric model domains.
//!
//! The crate has five parts:
//!
//! * [`bounds`]: closed-form lower and upper bounds for `λ_{1,p}`.
//! * [`geometry`]: warped-product model geometries, the Riccati mean-curvature
//!   comparison and the level-set quantities used by the bounds.
//! * [`solver`]: an independent variational eigensolver that minimizes the
//!   discrete Rayleigh quotient over radial profiles.
//! * [`testfn`]: explicit test functions, pointwise certificates of their
//!   differential inequalities, and the quadratures behind the upper bounds.
//! * [`asymptotics`]: least-squares fits of `λ(R) ≈ A + B/R² + C/R³`.
//!
//! Everything is generic over the floating-point type through [`Real`];
//! `f64` aliases are exported at the crate root.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod asymptotics;
pub mod bounds;
pub mod error;
pub mod geometry;
pub mod numeric;
pub mod scalar;
pub mod solver;
pub mod testfn;

pub use error::{Error, Result};
pub use scalar::Real;

pub type BoundValue64 = bounds::BoundValue<f64>;
pub type DomainParams64 = bounds::DomainParams<f64>;
pub type Thm11Params64 = bounds::Thm11Params<f64>;
pub type ModelGeometry64 = geometry::ModelGeometry<f64>;
pub type RadialGrid64 = solver::RadialGrid<f64>;
pub type RadialProfile64 = solver::RadialProfile<f64>;
pub type EigenResult64 = solver::EigenResult<f64>;
pub type SolverOptions64 = solver::SolverOptions<f64>;
pub type TestFunctionSpec64 = testfn::TestFunctionSpec<f64>;
pub type InequalityReport64 = testfn::InequalityReport<f64>;
pub type AsymptoticFit64 = asymptotics::AsymptoticFit<f64>;

pub type BoundValue32 = bounds::BoundValue<f32>;
pub type ModelGeometry32 = geometry::ModelGeometry<f32>;
