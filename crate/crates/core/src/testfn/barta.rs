use crate::error::{ensure, Error, Result};
use crate::geometry::ModelGeometry;
use crate::scalar::Real;
use crate::solver::discrete::{Discretization, PowerLaw};
use crate::solver::{RadialGrid, RadialProfile};

use super::InequalityReport;

/// Barta's criterion for a positive profile `v` on the uniform grid of
/// `geom` with `v.len() − 1` cells.
///
/// With `f = −ln v`, `Δ_p f − (p − 1)|∇f|^p = −Δ_p v / v^{p−1}`; the right
/// side is evaluated in the solver's weak form
///
/// ```text
/// (∂E/∂v_i) / (∂N/∂v_i),   E = ∫ ρ |v_h'|^p,   N = ∫ ρ |v_h|^p,
/// ```
///
/// at every node that is not pinned by a Dirichlet condition. The margin is
/// that quantity minus `mu`; at a discrete eigenfunction it equals `λ − μ`
/// everywhere.
pub fn barta_margin<T: Real>(
    profile: &RadialProfile<T>,
    geom: &ModelGeometry<T>,
    p: T,
    mu: T,
) -> Result<InequalityReport<T>> {
    ensure(p > T::one() && p.is_finite(), || format!("p must exceed 1, got {p}"))?;
    ensure(mu.is_finite(), || format!("mu must be finite, got {mu}"))?;
    let v = profile.values();
    ensure(v.len() >= 3, || "profile needs at least three nodes".into())?;
    ensure(profile.boundary_condition() == geom.boundary_condition(), || {
        format!("profile boundary condition does not match the {} geometry", geom.name())
    })?;
    let grid = RadialGrid::for_geometry(geom, v.len() - 1)?;
    let disc = Discretization::new(geom, &grid)?;
    let free = disc.free_range();
    for i in free.clone() {
        if !(v[i] > T::zero()) {
            return Err(Error::NonPositiveProfile { index: i });
        }
    }
    let mut g_energy = vec![T::zero(); v.len()];
    let mut g_mass = vec![T::zero(); v.len()];
    disc.with_gradients(v, &PowerLaw::new(p, T::zero()), &mut g_energy, &mut g_mass);
    let margins = free
        .filter(|&i| g_mass[i] > T::zero())
        .map(|i| (grid.node(i), g_energy[i] / g_mass[i] - mu));
    Ok(InequalityReport::from_margins(margins, v.len(), T::lit(1e-9)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::{solve_p2_reference, BoundaryCondition};

    #[test]
    fn constant_interior_gives_minus_mu() {
        let geom = ModelGeometry::interval(1.0f64).unwrap();
        let mut v = vec![1.0; 129];
        v[0] = 0.0;
        v[128] = 0.0;
        let prof = RadialProfile::new(v, BoundaryCondition::DirichletBoth).unwrap();
        let rep = barta_margin(&prof, &geom, 2.0, 3.0).unwrap();
        assert!((rep.min_margin + 3.0).abs() < 1e-12);
        assert!(!rep.passed);
        assert!(barta_margin(&prof, &geom, 2.0, 0.0).unwrap().passed);
    }

    #[test]
    fn eigenfunction_saturates() {
        let geom = ModelGeometry::hyperbolic_ball(2, 1.0f64, 6.0).unwrap();
        let eig = solve_p2_reference(&geom, 1024).unwrap();
        let ok = barta_margin(&eig.profile, &geom, 2.0, eig.lambda - 1e-3).unwrap();
        assert!(ok.passed, "{ok:?}");
        assert!(ok.min_margin < 2e-3);
        assert!(
            !barta_margin(&eig.profile, &geom, 2.0, eig.lambda + 1e-3)
                .unwrap()
                .passed
        );
    }

    #[test]
    fn negative_interior_value_rejected() {
        let geom = ModelGeometry::interval(1.0f64).unwrap();
        let mut v = vec![1.0; 65];
        v[0] = 0.0;
        v[64] = 0.0;
        v[10] = -1.0;
        let prof = RadialProfile::new(v, BoundaryCondition::DirichletBoth).unwrap();
        assert_eq!(
            barta_margin(&prof, &geom, 2.0, 1.0).unwrap_err(),
            Error::NonPositiveProfile { index: 10 }
        );
    }
}
