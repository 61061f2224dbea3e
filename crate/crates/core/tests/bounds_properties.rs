use std::f64::consts::PI;

use approx::assert_relative_eq;
use plap_core::bounds::*;
use plap_core::Error;
use proptest::prelude::*;

fn t12(n: u32, k: f64, p: f64, r: f64) -> f64 {
    lower_bound_t12(DomainParams::new(n, k, r, 1.0).unwrap(), p)
        .unwrap()
        .value
}

#[test]
fn t11_scaling_example() {
    let base = lower_bound_t11(Thm11Params::new(2.0, 2.0, 1.0, 1.0).unwrap())
        .unwrap()
        .value;
    let scaled = lower_bound_t11(Thm11Params::new(2.0, 2.0, 1.0 / 3.0, 3.0).unwrap())
        .unwrap()
        .value;
    assert_eq!(base, 1.0);
    assert_relative_eq!(scaled, 1.0, max_relative = 1e-14);
}

#[test]
fn t22_matches_gradient_bounded_case() {
    for n in 2..=5u32 {
        for p in [1.3, 2.0, 3.5] {
            let v = lower_bound_t22(1.0, f64::from(n), 2.0, p).unwrap().value;
            assert_relative_eq!(v, (f64::from(n) / p).powf(p), max_relative = 1e-14);
        }
    }
    assert_relative_eq!(
        lower_bound_t22(1.0, 1.0, 5.0, 1.5).unwrap().value,
        0.544_331_053_951_817_4,
        max_relative = 1e-12
    );
}

#[test]
fn t12_examples_against_direct_evaluation() {
    assert_relative_eq!(t12(2, 2.0, 2.0, 9.0), 1.098_696_044_010_893_6, max_relative = 1e-12);
    // (k/p)^p (1 + π²/(1 + kR/p)²)^{min(p−1,1)} evaluated term by term
    let direct = (3.0f64 / 1.5).powf(1.5) * (1.0 + PI * PI / 21.0f64.powi(2)).powf(0.5);
    assert_relative_eq!(t12(2, 3.0, 1.5, 10.0), direct, max_relative = 1e-14);
}

#[test]
fn c31_against_direct_evaluation() {
    let coth = 1.0 / 10.0f64.tanh();
    let direct = coth * coth * (1.0 + PI * PI / (1.0 + 10.0 * coth).powi(2));
    let v = lower_bound_c31(DomainParams::new(2, 2.0, 10.0, 1.0).unwrap(), 2.0)
        .unwrap()
        .value;
    assert_relative_eq!(v, direct, max_relative = 1e-14);
    let far = lower_bound_c31(DomainParams::new(2, 2.0, 1e8, 1.0).unwrap(), 2.0)
        .unwrap()
        .value;
    assert_relative_eq!(far, 1.0, max_relative = 1e-12);
}

#[test]
fn c23_examples() {
    assert_relative_eq!(largest_root_c23(2, 2.0, 1.0).unwrap(), 1.0, max_relative = 1e-12);
    assert_relative_eq!(
        lower_bound_c23(2, 2.0, 2.0, 1.0).unwrap().value,
        0.25,
        max_relative = 1e-12
    );
    assert_relative_eq!(
        lower_bound_c23(3, 2.0, 2.0, 2.0).unwrap().value,
        0.25,
        max_relative = 1e-12
    );
    let err = largest_root_c23(2, 3.0, 1.0).unwrap_err();
    assert!(matches!(err, Error::NoRealRoot { .. }));
    assert!(err.is_domain_error());
}

#[test]
fn ex52_and_bracket_limits() {
    assert_relative_eq!(
        upper_bound_ex52(3, 2.0, 10.0).unwrap().value,
        2.274_674_011_002_723_4,
        max_relative = 1e-12
    );
    assert_relative_eq!(upper_bound_ex52(2, 2.0, 1e9).unwrap().value, 1.0, max_relative = 1e-12);
    let (lo, hi) = bracket_t14(2, 2.0, 1e9).unwrap();
    assert_relative_eq!(lo.value, 1.0, max_relative = 1e-12);
    assert_eq!(hi.theorem_tag, TheoremTag::T14Upper);
}

#[test]
fn ex53_is_finite_and_above_its_limit() {
    for r in [5.0, 10.0, 20.0] {
        let v = upper_bound_ex53(2.0, r).unwrap();
        assert_eq!(v.kind, BoundKind::Upper);
        assert!(v.value > 1.0 && v.value < 1.5, "R={r}: {}", v.value);
    }
}

#[test]
fn cheeger_examples() {
    assert_relative_eq!(cheeger_monotone_value(2.0, 1.0).unwrap(), 2.0);
    assert_relative_eq!(
        cheeger_monotone_value(3.0, (2.0f64 / 3.0).powi(3)).unwrap(),
        2.0,
        max_relative = 1e-14
    );
    assert!(cheeger_monotone_value(2.0, 0.0).is_err());
}

#[test]
fn p15_exhaustive_scan() {
    for i in 1..=20_000 {
        let p = 1.0 + 11.0 * f64::from(i) / 20_000.0;
        let expected = if p <= 2.0 { p - 1.0 > p / 8.0 } else { 1.0 > p / 8.0 };
        assert_eq!(ends_criterion_p15(p), expected, "p = {p}");
    }
    assert!(!ends_criterion_p15(8.0 / 7.0));
    assert!(!ends_criterion_p15(9.0));
}

proptest! {
    #[test]
    fn t11_is_scaling_invariant(
        p1 in 1.1f64..4.0,
        gap in 0.1f64..4.0,
        c in 0.1f64..10.0,
        d in 0.1f64..10.0,
        k in 0.05f64..20.0,
    ) {
        let p2 = p1 - 1.0 + gap;
        let base = lower_bound_t11(Thm11Params::new(p1, p2, c, d).unwrap()).unwrap().value;
        let scaled = lower_bound_t11(
            Thm11Params::new(p1, p2, c * k.powf(p1 - p2 - 1.0), d * k.powf(p1 - 1.0)).unwrap(),
        )
        .unwrap()
        .value;
        prop_assert!((base - scaled).abs() <= 1e-12 * base);
    }

    #[test]
    fn t12_decreases_to_its_limit(k in 0.5f64..6.0, p in 1.05f64..8.0, r in 1.0f64..200.0) {
        let n = 2;
        let limit = (k / p).powf(p);
        let here = t12(n, k, p, r);
        let further = t12(n, k, p, 2.0 * r);
        prop_assert!(here >= further && further >= limit);
        // (here − limit) R² stays bounded by the leading constant
        let lead = limit * (p - 1.0).min(1.0) * PI * PI * (p / k).powi(2);
        prop_assert!((here - limit) * r * r <= lead * (1.0 + 1e-9));
    }

    #[test]
    fn c23_root_certificate(n in 1u32..8, p in 1.05f64..6.0, frac in 0.0f64..1.0) {
        let nf = f64::from(n);
        let lambda = frac * (nf / p).powf(p);
        let y = largest_root_c23(n, p, lambda).unwrap();
        let g = (p - 1.0) * y.powf(p) - nf * y.powf(p - 1.0) + lambda;
        let dg = p * (p - 1.0) * y.powf(p - 1.0) - nf * (p - 1.0) * y.powf(p - 2.0);
        prop_assert!(g.abs() < 1e-10 * lambda.max(1.0), "g = {g}");
        prop_assert!(dg >= -1e-9 * y.powf(p - 1.0) * nf);
        prop_assert!(y >= nf / p * (1.0 - 1e-12));
    }

    #[test]
    fn c23_above_threshold_has_no_root(n in 1u32..8, p in 1.05f64..6.0, excess in 1e-6f64..10.0) {
        let lambda = (f64::from(n) / p).powf(p) * (1.0 + excess);
        prop_assert!(
            matches!(largest_root_c23(n, p, lambda), Err(Error::NoRealRoot { .. })),
            "expected NoRealRoot for n={}, p={}, excess={}", n, p, excess
        );
    }

    #[test]
    fn t14_bracket_is_ordered(n in 2u32..=6, p in 1.05f64..10.0, r in 5.0f64..100.0) {
        let (lo, hi) = bracket_t14(n, p, r).unwrap();
        prop_assert!(lo.value <= hi.value);
        prop_assert_eq!(lo.kind, BoundKind::Lower);
        if (p - 2.0).abs() > 1e-9 {
            prop_assert!(lo.value < hi.value);
        }
    }

    #[test]
    fn t14_collapses_at_p2(n in 2u32..=6, r in 5.0f64..100.0) {
        let (lo, hi) = bracket_t14(n, 2.0, r).unwrap();
        prop_assert_eq!(lo.value, hi.value);
    }

    #[test]
    fn c13_equals_t12_below_the_radius_cap(n in 1u32..6, ratio in 1.01f64..5.0, frac in 0.01f64..0.99, p in 1.1f64..5.0) {
        let k = f64::from(n) * ratio;
        let cap = plap_core::geometry::max_inscribed_radius(n, k).unwrap();
        let r = frac * cap;
        let d = DomainParams::new(n, k, r, 1.0).unwrap();
        prop_assert_eq!(lower_bound_c13(d, p).unwrap().value, lower_bound_t12(d, p).unwrap().value);
    }
}
