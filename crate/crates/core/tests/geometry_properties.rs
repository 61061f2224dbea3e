use approx::assert_relative_eq;
use plap_core::geometry::*;
use plap_core::Error;
use proptest::prelude::*;

#[test]
fn riccati_envelope_closed_form() {
    // coth(arccoth 2 − 0.25), from the identity coth(a − b) = (coth a coth b − 1)/(coth b − coth a)
    let cb = 1.0 / 0.25f64.tanh();
    let expected = (2.0 * cb - 1.0) / (cb - 2.0);
    assert_relative_eq!(
        riccati_lower_envelope(2.0, 0.25).unwrap(),
        expected,
        max_relative = 1e-13
    );
    assert_eq!(riccati_lower_envelope(2.0, 0.0).unwrap(), 2.0);
    assert_eq!(riccati_lower_envelope(1.0, 1e6).unwrap(), 1.0);
}

#[test]
fn inscribed_radius_examples() {
    assert!(max_inscribed_radius(2, 2.0f64).unwrap().is_infinite());
    let half_ln3 = 0.5 * 3.0f64.ln();
    assert!((max_inscribed_radius(2, 4.0).unwrap() - half_ln3).abs() < 1e-12);
    assert!((max_inscribed_radius(3, 6.0).unwrap() - half_ln3).abs() < 1e-12);
    assert!(max_inscribed_radius(3, 2.0).is_err());
}

#[test]
fn level_set_and_boundary_curvature() {
    assert_eq!(mean_curvature_level_set(2, 0.1, 0.0).unwrap(), 2.0);
    assert_relative_eq!(
        mean_curvature_level_set(3, 0.2, 6.0).unwrap(),
        3.04,
        max_relative = 1e-14
    );
    assert_relative_eq!(boundary_scalar_curvature(3, 2.0).unwrap(), 3.0);
}

#[test]
fn distance_laplacians() {
    let h = ModelGeometry::hyperbolic_ball(2, 1.0, 20.0).unwrap();
    assert_relative_eq!(
        h.laplacian_distance_lower(10.0).unwrap(),
        2.0 / 10.0f64.tanh(),
        max_relative = 1e-15
    );
    let e = ModelGeometry::euclidean_ball(2, 3.0).unwrap();
    assert_eq!(e.laplacian_distance_lower(1.0).unwrap(), 2.0);
    let h2 = ModelGeometry::hyperbolic_ball(3, 2.0, 100.0).unwrap();
    assert_relative_eq!(h2.laplacian_distance_lower(60.0).unwrap(), 6.0, max_relative = 1e-15);
}

#[test]
fn interval_density_is_one() {
    let g = ModelGeometry::interval(2.0).unwrap();
    for i in 1..20 {
        assert_eq!(g.density(0.1 * f64::from(i)), 1.0);
    }
}

proptest! {
    #[test]
    fn forced_solutions_stay_above_the_envelope(h0 in 1.0f64..4.0, amp in 0.0f64..2.0, freq in 0.1f64..5.0, offset in 0.0f64..0.5) {
        let start = h0 + offset;
        let s_max = if start > 1.0 + 1e-9 { 0.9 * arccoth(start).unwrap() } else { 2.0 };
        let traj = integrate_riccati(
            RiccatiState { h0: start, s_max, steps: 2000 },
            |s, _| amp * (freq * s).sin().powi(2),
        );
        let traj = match traj {
            Ok(t) => t,
            Err(Error::BlowUp { .. }) => return Ok(()),
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        };
        for (s, h) in traj.s.iter().zip(&traj.h) {
            if !h.is_finite() {
                break;
            }
            let y = riccati_lower_envelope(h0, *s).unwrap();
            prop_assert!(*h >= y - 1e-8, "s={s}: {h} < {y}");
        }
    }

    #[test]
    fn blow_up_matches_inscribed_radius(n in 1u32..6, h0 in 1.01f64..5.0, frac in 0.0f64..2.0) {
        let cap = max_inscribed_radius(n, f64::from(n) * h0).unwrap();
        let s = frac * cap;
        let res = riccati_lower_envelope(h0, s);
        prop_assert_eq!(matches!(res, Err(Error::BlowUp { .. })), s >= cap);
    }

    #[test]
    fn level_set_curvature_is_at_least_n(n in 1u32..8, eps in 1e-4f64..1.0, s_bar in 0.0f64..100.0) {
        prop_assert!(mean_curvature_level_set(n, eps, s_bar).unwrap() >= f64::from(n));
    }

    #[test]
    fn rk4_matches_closed_form(h0 in 1.01f64..5.0) {
        let s_max = 0.9 * arccoth(h0).unwrap();
        let traj = integrate_riccati(RiccatiState { h0, s_max, steps: 20_000 }, |_, _| 0.0).unwrap();
        for (s, h) in traj.s.iter().zip(&traj.h) {
            let exact = riccati_lower_envelope(h0, *s).unwrap();
            prop_assert!((h - exact).abs() <= 1e-9 * exact.max(1.0), "s={s}: {h} vs {exact}");
        }
    }

    #[test]
    fn densities_are_positive(n in 1u32..6, extent in 0.5f64..40.0, frac in 0.001f64..0.999) {
        let geoms = [
            ModelGeometry::hyperbolic_ball(n, 1.0, extent).unwrap(),
            ModelGeometry::euclidean_ball(n, extent).unwrap(),
            ModelGeometry::interval(extent).unwrap(),
            ModelGeometry::exp_cylinder(n, extent).unwrap(),
            ModelGeometry::cosh_cylinder(n, extent).unwrap(),
        ];
        for g in geoms {
            let (a, b) = g.domain();
            let r = a + frac * (b - a);
            prop_assert!(g.density(r) > 0.0, "{} at {r}", g.name());
        }
    }
}
