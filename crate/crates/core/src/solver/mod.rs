//! Variational eigensolver for the first Dirichlet eigenvalue of the
//! p-Laplacian on radial model domains.
//!
//! `λ_{1,p}` is the infimum of `∫|∇u|^p / ∫|u|^p`. Restricted to radial
//! profiles on a model geometry this becomes a weighted one-dimensional
//! quotient, which is discretized on a uniform grid and minimized by
//! preconditioned projected gradient descent. The minimizer at `p = 2` comes
//! from a tridiagonal eigensolve and seeds a geometric continuation in `p`.
//! Every stage minimizes the unregularized quotient: its gradient is
//! continuous for `p > 1`, and the singular or degenerate curvature of
//! `|s|^p` only enters through the floored preconditioner.

mod descent;
pub(crate) mod discrete;
mod reference;

use rayon::prelude::*;

use crate::error::{ensure, Error, Result};
use crate::geometry::ModelGeometry;
use crate::scalar::Real;

use discrete::{Discretization, PowerLaw};

pub const DEFAULT_GRID: usize = 4096;
pub const MIN_GRID: usize = 64;
pub const MAX_ITERATIONS: usize = 50_000;
/// Largest ratio between consecutive exponents on the continuation path.
pub const CONTINUATION_RATIO: f64 = 1.3;
/// Cap on the inverse-iteration steps that finish every solve.
pub const POLISH_ITERATIONS: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundaryCondition {
    DirichletBoth,
    DirichletRightNaturalLeft,
}

/// Uniform grid `r_0 < … < r_M`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialGrid<T> {
    start: T,
    end: T,
    cells: usize,
}

impl<T: Real> RadialGrid<T> {
    pub fn new(start: T, end: T, cells: usize) -> Result<Self> {
        ensure(cells >= MIN_GRID, || {
            format!("grid needs at least {MIN_GRID} cells, got {cells}")
        })?;
        ensure(end > start && (end - start).is_finite(), || {
            format!("empty grid range [{start}, {end}]")
        })?;
        Ok(Self { start, end, cells })
    }

    /// Grid spanning the domain of `geom`.
    pub fn for_geometry(geom: &ModelGeometry<T>, cells: usize) -> Result<Self> {
        let (a, b) = geom.domain();
        Self::new(a, b, cells)
    }

    pub fn start(&self) -> T {
        self.start
    }

    pub fn end(&self) -> T {
        self.end
    }

    pub fn cells(&self) -> usize {
        self.cells
    }

    pub fn spacing(&self) -> T {
        (self.end - self.start) / T::from_usize_lossy(self.cells)
    }

    pub fn node(&self, i: usize) -> T {
        if i == self.cells {
            self.end
        } else {
            self.start + self.spacing() * T::from_usize_lossy(i)
        }
    }

    pub fn nodes(&self) -> Vec<T> {
        (0..=self.cells).map(|i| self.node(i)).collect()
    }
}

/// Nodal values of a radial function together with its boundary tags.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialProfile<T> {
    values: Vec<T>,
    bc: BoundaryCondition,
}

impl<T: Real> RadialProfile<T> {
    pub fn new(values: Vec<T>, bc: BoundaryCondition) -> Result<Self> {
        ensure(values.len() >= 2, || "profile needs at least two nodes".into())?;
        let last = *values.last().unwrap();
        ensure(last == T::zero(), || {
            format!("Dirichlet node at the right end holds {last}")
        })?;
        if bc == BoundaryCondition::DirichletBoth {
            ensure(values[0] == T::zero(), || {
                format!("Dirichlet node at the left end holds {}", values[0])
            })?;
        }
        ensure(values.iter().all(|v| v.is_finite()), || {
            "profile has non-finite values".into()
        })?;
        ensure(values.iter().any(|v| *v != T::zero()), || {
            "profile is identically zero".into()
        })?;
        Ok(Self { values, bc })
    }

    /// Samples `f` on the grid and pins the Dirichlet nodes of `bc`.
    pub fn from_fn(grid: &RadialGrid<T>, bc: BoundaryCondition, f: impl Fn(T) -> T) -> Result<Self> {
        let mut values: Vec<T> = grid.nodes().into_iter().map(f).collect();
        let last = values.len() - 1;
        values[last] = T::zero();
        if bc == BoundaryCondition::DirichletBoth {
            values[0] = T::zero();
        }
        Self::new(values, bc)
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn boundary_condition(&self) -> BoundaryCondition {
        self.bc
    }

    pub fn into_values(self) -> Vec<T> {
        self.values
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EigenResult<T> {
    pub lambda: T,
    pub profile: RadialProfile<T>,
    pub grid: RadialGrid<T>,
    /// Relative Rayleigh decrease over the last convergence window (for the
    /// p=2 reference: relative eigen-residual).
    pub residual: T,
    pub iterations: usize,
    /// `(p, λ)` at the end of every continuation stage.
    pub continuation_path: Vec<(T, T)>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions<T> {
    pub grid_size: usize,
    pub tol: T,
    pub max_iterations: usize,
}

impl<T: Real> Default for SolverOptions<T> {
    fn default() -> Self {
        Self {
            grid_size: DEFAULT_GRID,
            tol: T::lit(1e-8),
            max_iterations: MAX_ITERATIONS,
        }
    }
}

fn check_p<T: Real>(p: T) -> Result<()> {
    ensure(p > T::one() && p.is_finite(), || format!("p must exceed 1, got {p}"))
}

/// Discrete Rayleigh quotient with gradient regularization `delta`.
pub fn rayleigh_quotient<T: Real>(
    geom: &ModelGeometry<T>,
    grid: &RadialGrid<T>,
    u: &RadialProfile<T>,
    p: T,
    delta: T,
) -> Result<T> {
    check_p(p)?;
    ensure(delta >= T::zero(), || format!("delta must be nonnegative, got {delta}"))?;
    ensure(u.values.len() == grid.cells + 1, || {
        format!("profile has {} nodes, grid has {}", u.values.len(), grid.cells + 1)
    })?;
    let disc = Discretization::new(geom, grid)?;
    disc.quotient(&u.values, &PowerLaw::new(p, delta))
}

/// Smallest eigenpair of the p=2 discretization (tridiagonal eigensolve).
pub fn solve_p2_reference<T: Real>(geom: &ModelGeometry<T>, grid_size: usize) -> Result<EigenResult<T>> {
    let grid = RadialGrid::for_geometry(geom, grid_size)?;
    let disc = Discretization::new(geom, &grid)?;
    let pair = reference::smallest_pair(&disc)?;
    Ok(EigenResult {
        lambda: pair.lambda,
        profile: RadialProfile::new(pair.vector, disc.bc)?,
        grid,
        residual: pair.residual,
        iterations: 0,
        continuation_path: vec![(T::lit(2.0), pair.lambda)],
    })
}

/// Exponents visited by the continuation from 2 to `p`, ending at `p`.
pub fn continuation_exponents<T: Real>(p: T) -> Vec<T> {
    let two = T::lit(2.0);
    let ratio = (p / two).ln().abs();
    let steps = (ratio / T::lit(CONTINUATION_RATIO).ln() - T::lit(1e-12))
        .ceil()
        .to_usize()
        .unwrap_or(0);
    if steps == 0 {
        return vec![p];
    }
    (1..=steps)
        .map(|k| {
            if k == steps {
                p
            } else {
                two * (p / two).powf(T::from_usize_lossy(k) / T::from_usize_lossy(steps))
            }
        })
        .collect()
}

pub fn solve_first_eigenvalue<T: Real>(
    geom: &ModelGeometry<T>,
    p: T,
    grid_size: usize,
    tol: T,
) -> Result<EigenResult<T>> {
    solve_with_options(
        geom,
        p,
        SolverOptions {
            grid_size,
            tol,
            ..SolverOptions::default()
        },
    )
}

pub fn solve_with_options<T: Real>(geom: &ModelGeometry<T>, p: T, opts: SolverOptions<T>) -> Result<EigenResult<T>> {
    check_p(p)?;
    ensure(opts.tol > T::zero() && opts.tol <= T::lit(1e-4), || {
        format!("tol must lie in (0, 1e-4], got {}", opts.tol)
    })?;
    ensure(opts.max_iterations > 0, || "iteration cap must be positive".into())?;
    let grid = RadialGrid::for_geometry(geom, opts.grid_size)?;
    let disc = Discretization::new(geom, &grid)?;
    let seed = reference::smallest_pair(&disc)?;
    let mut u = seed.vector;
    let mut path = Vec::new();
    let mut iterations = 0;
    let loose = opts.tol.max(T::lit(1e-6));

    let log_density = tilt_profile(geom, &grid);
    let exponents = continuation_exponents(p);
    let last = exponents.len() - 1;
    let mut outcome = None;
    let mut prev = T::lit(2.0);
    for (k, &pk) in exponents.iter().enumerate() {
        let final_stage = k == last;
        retilt(&disc, &log_density, &mut u, prev, pk)?;
        prev = pk;
        let stage_tol = if final_stage { opts.tol } else { loose };
        let st = descent::descend(
            &disc,
            &mut u,
            PowerLaw::new(pk, T::zero()),
            stage_tol,
            opts.max_iterations,
        )?;
        iterations += st.iterations;
        path.push((pk, st.lambda));
        if final_stage {
            outcome = Some(st);
        }
    }
    let mut st = outcome.expect("continuation path is never empty");
    if st.converged {
        let (lambda, steps) = descent::polish(&disc, &mut u, PowerLaw::new(p, T::zero()), opts.tol, POLISH_ITERATIONS)?;
        iterations += steps;
        st.lambda = lambda;
        if let Some(last) = path.last_mut() {
            last.1 = lambda;
        }
    }
    if !st.converged {
        return Err(Error::NoConvergence {
            iterations,
            residual: st.residual.as_f64(),
        });
    }
    if u.iter().copied().sum::<T>() < T::zero() {
        u.iter_mut().for_each(|v| *v = -*v);
    }
    Ok(EigenResult {
        lambda: st.lambda,
        profile: RadialProfile::new(u, disc.bc)?,
        grid,
        residual: st.residual,
        iterations,
        continuation_path: path,
    })
}

/// `log ρ` at the nodes, clamped below by its value at the first interior
/// node so the tilt stays bounded at a ball center.
fn tilt_profile<T: Real>(geom: &ModelGeometry<T>, grid: &RadialGrid<T>) -> Vec<T> {
    let raw: Vec<T> = grid.nodes().iter().map(|&r| geom.log_density(r)).collect();
    let (a, b) = geom.domain();
    let mid = geom.log_density(T::lit(0.5) * (a + b));
    let low = raw[1].min(mid);
    raw.into_iter().map(|l| l.max(low) - mid).collect()
}

/// Warm start for the stage at exponent `to`: multiplies `u` by
/// `ρ^{1/from − 1/to}`, which keeps `ρ^{1/p} u` fixed and so carries
/// exponential tails across stages. Kept only if it lowers the quotient.
fn retilt<T: Real>(disc: &Discretization<T>, log_density: &[T], u: &mut Vec<T>, from: T, to: T) -> Result<()> {
    let gap = T::one() / from - T::one() / to;
    if gap == T::zero() {
        return Ok(());
    }
    let law = PowerLaw::new(to, T::zero());
    let mut tilted: Vec<T> = u.iter().zip(log_density).map(|(x, l)| *x * (gap * *l).exp()).collect();
    if tilted.iter().any(|x| !x.is_finite()) || disc.normalize(&mut tilted, to).is_err() {
        return Ok(());
    }
    disc.normalize(u, to)?;
    if disc.quotient(&tilted, &law)? < disc.quotient(u, &law)? {
        *u = tilted;
    }
    Ok(())
}

/// Solves on `geom` rescaled to every extent in `extents` (in parallel).
/// Failures are reported per entry; output order follows `extents`.
pub fn sweep<T: Real>(
    family: &ModelGeometry<T>,
    p: T,
    extents: &[T],
    opts: SolverOptions<T>,
) -> Result<Vec<(T, Result<EigenResult<T>>)>> {
    ensure(extents.windows(2).all(|w| w[0] < w[1]), || {
        "radii must be strictly increasing".into()
    })?;
    Ok(extents
        .par_iter()
        .map(|&r| {
            let res = family.with_extent(r).and_then(|g| solve_with_options(&g, p, opts));
            (r, res)
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn interval() -> ModelGeometry<f64> {
        ModelGeometry::interval(1.0).unwrap()
    }

    #[test]
    fn grid_and_profile_validation() {
        assert!(RadialGrid::new(0.0f64, 1.0, 63).is_err());
        assert!(RadialGrid::new(1.0f64, 1.0, 64).is_err());
        let g = RadialGrid::new(0.0f64, 2.0, 64).unwrap();
        assert_eq!(g.nodes().len(), 65);
        assert_eq!(g.node(64), 2.0);
        assert!(RadialProfile::new(vec![0.0f64, 0.0, 0.0], BoundaryCondition::DirichletBoth).is_err());
        assert!(RadialProfile::new(vec![1.0f64, 1.0, 0.0], BoundaryCondition::DirichletBoth).is_err());
        assert!(RadialProfile::new(vec![1.0f64, 1.0, 0.0], BoundaryCondition::DirichletRightNaturalLeft).is_ok());
        assert!(RadialProfile::new(vec![1.0f64, 1.0, 1.0], BoundaryCondition::DirichletRightNaturalLeft).is_err());
    }

    #[test]
    fn quotient_of_sine_on_interval() {
        let geom = interval();
        let grid = RadialGrid::for_geometry(&geom, 4096).unwrap();
        let u = RadialProfile::from_fn(&grid, BoundaryCondition::DirichletBoth, |r| (PI * r).sin()).unwrap();
        let q = rayleigh_quotient(&geom, &grid, &u, 2.0, 0.0).unwrap();
        assert!((q - PI * PI).abs() < 1e-5, "{q}");
    }

    #[test]
    fn quotient_rejects_zero_and_mismatched_input() {
        let geom = interval();
        let grid = RadialGrid::for_geometry(&geom, 64).unwrap();
        let other = RadialGrid::new(0.0, 2.0, 64).unwrap();
        let u = RadialProfile::from_fn(&grid, BoundaryCondition::DirichletBoth, |r| r * (1.0 - r)).unwrap();
        assert!(matches!(
            rayleigh_quotient(&geom, &other, &u, 2.0, 0.0),
            Err(Error::ParameterDomain(_))
        ));
        assert!(rayleigh_quotient(&geom, &grid, &u, 1.0, 0.0).is_err());
        assert!(rayleigh_quotient(&geom, &grid, &u, 2.0, -1.0).is_err());
        // a spike at the ball center still has positive P1 mass
        let ball = ModelGeometry::euclidean_ball(2, 1.0).unwrap();
        let bgrid = RadialGrid::for_geometry(&ball, 64).unwrap();
        let mut v = vec![0.0; 65];
        v[0] = 1.0;
        let spike = RadialProfile::new(v, BoundaryCondition::DirichletRightNaturalLeft).unwrap();
        let q: f64 = rayleigh_quotient(&ball, &bgrid, &spike, 2.0, 0.0).unwrap();
        assert!(q.is_finite() && q > 0.0);
    }

    #[test]
    fn reference_interval_and_ball() {
        let r = solve_p2_reference(&interval(), 4096).unwrap();
        assert!((r.lambda - PI * PI).abs() < 1e-5, "{}", r.lambda);
        let ball = ModelGeometry::euclidean_ball(2, 1.0).unwrap();
        let r = solve_p2_reference(&ball, 8192).unwrap();
        assert!((r.lambda - PI * PI).abs() < 1e-4, "{}", r.lambda);
        let hyp = ModelGeometry::hyperbolic_ball(2, 1.0, 15.0).unwrap();
        let r = solve_p2_reference(&hyp, 4096).unwrap();
        assert!(r.lambda >= 1.0);
    }

    #[test]
    fn solver_interval_p2_and_p3() {
        let r = solve_first_eigenvalue(&interval(), 2.0, 4096, 1e-8).unwrap();
        assert!((r.lambda - PI * PI).abs() < 1e-3);
        let r = solve_first_eigenvalue(&interval(), 3.0, 4096, 1e-8).unwrap();
        // (p − 1) π_p^p, π_p = 2π/(p sin(π/p))
        assert!((r.lambda - 28.288_761_976_002_555).abs() < 0.1, "{}", r.lambda);
    }

    #[test]
    fn solver_hyperbolic_expansion() {
        let g = ModelGeometry::hyperbolic_ball(2, 1.0, 12.0).unwrap();
        let r = solve_first_eigenvalue(&g, 2.0, 4096, 1e-8).unwrap();
        assert!((r.lambda - (1.0 + PI * PI / 144.0)).abs() < 3e-3, "{}", r.lambda);
    }

    #[test]
    fn solver_rejects_bad_parameters() {
        assert!(matches!(
            solve_first_eigenvalue(&interval(), 0.9, 4096, 1e-8),
            Err(Error::ParameterDomain(_))
        ));
        assert!(solve_first_eigenvalue(&interval(), 2.0, 32, 1e-8).is_err());
        assert!(solve_first_eigenvalue(&interval(), 2.0, 128, 1e-3).is_err());
    }

    #[test]
    fn iteration_cap_reports_no_convergence() {
        let opts = SolverOptions {
            grid_size: 512,
            tol: 1e-12,
            max_iterations: 3,
        };
        let res = solve_with_options(&interval(), 3.0, opts);
        assert!(matches!(res, Err(Error::NoConvergence { .. })), "{res:?}");
    }

    #[test]
    fn continuation_steps_are_bounded() {
        for &p in &[1.05, 1.5, 2.0, 2.5, 4.0, 10.0] {
            let path = continuation_exponents(p);
            assert_eq!(*path.last().unwrap(), p);
            let mut prev: f64 = 2.0;
            for &q in &path {
                let ratio = if q > prev { q / prev } else { prev / q };
                assert!(ratio <= CONTINUATION_RATIO + 1e-12, "p={p}: {prev} -> {q}");
                prev = q;
            }
        }
    }

    #[test]
    fn sweep_interval_scaling_and_empty() {
        let out = sweep(&interval(), 2.0, &[], SolverOptions::default()).unwrap();
        assert!(out.is_empty());
        let out = sweep(&interval(), 2.0, &[1.0, 2.0], SolverOptions::default()).unwrap();
        assert_relative_eq!(out[0].1.as_ref().unwrap().lambda, PI * PI, epsilon = 1e-3);
        assert_relative_eq!(out[1].1.as_ref().unwrap().lambda, PI * PI / 4.0, epsilon = 1e-3);
        assert!(sweep(&interval(), 2.0, &[2.0, 1.0], SolverOptions::default()).is_err());
    }
}
