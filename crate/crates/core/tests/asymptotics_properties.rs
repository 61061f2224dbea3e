use std::f64::consts::PI;

use plap_core::asymptotics::*;
use plap_core::bounds::ends_criterion_p15;
use plap_core::geometry::ModelGeometry;
use plap_core::solver::solve_first_eigenvalue;
use plap_core::Error;
use proptest::prelude::*;

fn b_of(n: u32, p: f64, source: ExpansionSource<f64>) -> f64 {
    expected_coefficients(n, p, source).unwrap().1
}

fn solver_fit(geom: &ModelGeometry<f64>, p: f64, radii: &[f64]) -> AsymptoticFit<f64> {
    let samples: Vec<(f64, f64)> = radii
        .iter()
        .map(|&r| {
            let g = geom.with_extent(r).unwrap();
            (r, solve_first_eigenvalue(&g, p, 4096, 1e-10).unwrap().lambda)
        })
        .collect();
    fit_expansion(&samples, FitModel::ABC).unwrap()
}

#[test]
fn hyperbolic_p2_sweep_recovers_the_expansion() {
    let geom = ModelGeometry::hyperbolic_ball(2, 1.0, 10.0).unwrap();
    let fit = solver_fit(&geom, 2.0, &[10.0, 14.0, 18.0, 22.0, 26.0, 30.0]);
    assert!((fit.a - 1.0).abs() < 1e-3, "{fit:?}");
    assert!((fit.b - PI * PI).abs() < 0.5, "{fit:?}");
}

#[test]
fn exp_cylinder_p2_sweep_recovers_the_expansion() {
    let geom = ModelGeometry::exp_cylinder(3, 10.0).unwrap();
    let fit = solver_fit(&geom, 2.0, &[10.0, 14.0, 18.0, 22.0, 26.0, 30.0]);
    let (a, b) = expected_coefficients(3, 2.0f64, ExpansionSource::Ex52).unwrap();
    assert!((fit.a - a).abs() < 1e-3 * a, "{fit:?}");
    assert!((fit.b - b).abs() < 0.1 * b, "{fit:?} vs {b}");
}

#[test]
fn expected_pairs_by_direct_evaluation() {
    let (a, b) = expected_coefficients(2, 2.0, ExpansionSource::T14Lower).unwrap();
    assert_eq!((a, b), (1.0, PI * PI));
    let (a, b) = expected_coefficients(3, 2.0f64, ExpansionSource::Ex52).unwrap();
    assert!((a - 2.25).abs() < 1e-15 && (b - PI * PI / 4.0).abs() < 1e-14);
    let (a, b) = expected_coefficients(2, 4.0f64, ExpansionSource::T14Upper).unwrap();
    assert!((a - 0.0625).abs() < 1e-15 && (b - PI * PI / 2.0).abs() < 1e-14);
    let (a, _) = expected_coefficients(7, 3.0, ExpansionSource::Ex53).unwrap();
    assert!((a - (2.0f64 / 3.0).powi(3)).abs() < 1e-15);
    assert!(expected_coefficients(1, 2.0, ExpansionSource::T14Lower).is_err());
    assert!(expected_coefficients(2, 1.0, ExpansionSource::T14Lower).is_err());
}

#[test]
fn too_few_or_small_radii_are_rejected() {
    let few = [(10.0, 1.0), (20.0, 1.0), (30.0, 1.0)];
    assert!(matches!(
        fit_expansion(&few, FitModel::ABC),
        Err(Error::ParameterDomain(_))
    ));
    let small = [(4.0, 1.0), (10.0, 1.0), (20.0, 1.0), (30.0, 1.0)];
    assert!(fit_expansion(&small, FitModel::AB).is_err());
}

fn distinct_radii(count: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(5.0f64..60.0, count).prop_filter("distinct radii", |rs| {
        let mut s = rs.clone();
        s.sort_by(|a, b| a.partial_cmp(b).unwrap());
        s.windows(2).all(|w| w[1] - w[0] > 1.0)
    })
}

proptest! {
    #[test]
    fn two_term_fit_is_exact(a in -5.0f64..5.0, b in -50.0f64..50.0, radii in distinct_radii(5)) {
        let s: Vec<(f64, f64)> = radii.iter().map(|&r| (r, a + b / (r * r))).collect();
        let fit = fit_expansion(&s, FitModel::AB).unwrap();
        prop_assert!((fit.a - a).abs() < 1e-9 * (1.0 + a.abs()));
        prop_assert!((fit.b - b).abs() < 1e-7 * (1.0 + b.abs()));
        prop_assert!(fit.residual_rms < 1e-10);
    }

    #[test]
    fn three_term_fit_is_exact(a in -5.0f64..5.0, b in -50.0f64..50.0, c in -100.0f64..100.0, radii in distinct_radii(6)) {
        let s: Vec<(f64, f64)> = radii.iter().map(|&r| (r, a + b / (r * r) + c / (r * r * r))).collect();
        let fit = fit_expansion(&s, FitModel::ABC).unwrap();
        prop_assert!(fit.residual_rms < 1e-10, "{:?}", fit);
        for &r in &radii {
            let exact = a + b / (r * r) + c / (r * r * r);
            prop_assert!((fit.predict(r) - exact).abs() < 1e-10);
        }
    }

    #[test]
    fn lower_coefficient_never_exceeds_upper(n in 2u32..8, p in 1.01f64..10.0) {
        let lo = b_of(n, p, ExpansionSource::T14Lower);
        let hi = b_of(n, p, ExpansionSource::T14Upper);
        prop_assert!(lo < hi || p == 2.0);
        prop_assert_eq!(b_of(n, 2.0, ExpansionSource::T14Lower), b_of(n, 2.0, ExpansionSource::T14Upper));
    }

    #[test]
    fn ends_criterion_matches_coefficient_comparison(n in 2u32..8, p in 1.01f64..12.0) {
        let lower = b_of(n, p, ExpansionSource::T14Lower);
        let ends = b_of(n, p, ExpansionSource::Ex52);
        prop_assert_eq!(lower > ends, ends_criterion_p15(p));
    }
}
