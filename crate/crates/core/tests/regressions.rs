//! Monotonicity and ordering facts, and regressions found while testing.

use levbound::energy::{energy_lower_bound, hermite_interpolate, verify_g_in_g, Potential};
use levbound::krein::{conjecture_scan, ell_star, ratio_root, DEFAULT_STEP};
use levbound::levenshtein::{bound_l2k, EvenBoundCurve};
use levbound::real::{int, to_f64};
use levbound::{BoundError, Real};

#[test]
fn ell_star_increases_as_k_decreases() {
    for n in [3, 5, 8] {
        let stars: Vec<f64> = (1..=6).map(|k| ell_star(n, k, DEFAULT_STEP).unwrap().value).collect();
        for w in stars.windows(2) {
            assert!(w[1] < w[0], "n={n}: {stars:?}");
        }
    }
}

#[test]
fn ell_star_lies_below_ratio_root() {
    for n in [3, 4, 6, 10] {
        for k in [1, 2, 4, 7] {
            let star = ell_star(n, k, DEFAULT_STEP).unwrap().value;
            assert!(star < ratio_root(n, k).unwrap(), "n={n} k={k}");
        }
    }
}

#[test]
fn condition_holds_everywhere_below_ell_star() {
    for (n, k, samples) in [(4, 3, 50), (3, 1, 10)] {
        let scan = conjecture_scan(n, k, samples).unwrap();
        assert_eq!(scan.samples.len(), samples);
        assert!(scan.all_pass, "n={n} k={k}");
    }
}

#[test]
fn even_bound_increases_with_s() {
    for k in 1..=5 {
        let curve = EvenBoundCurve::new(4, -0.95, k).unwrap();
        let (lo, hi) = curve.window;
        let values: Vec<f64> = (1..40)
            .filter_map(|i| curve.value(lo + (hi - lo) * int(i) / int(40)).map(to_f64))
            .collect();
        assert!(values.len() > 30);
        for w in values.windows(2) {
            assert!(w[1] > w[0], "k={k}");
        }
    }
}

#[test]
fn energy_bound_increases_with_m() {
    let h = Potential::Riesz(2.0);
    let mut last = 0.0;
    for m in [6.0, 7.0, 8.0, 14.0, 18.0, 21.0] {
        let r = energy_lower_bound(4, m, -0.9, &h).unwrap();
        assert!(r.value > last, "M={m}");
        last = r.value;
    }
}

#[test]
fn membership_flags_g_above_h() {
    let nodes = [(Real::from(-0.9), 1), (Real::from(0.1), 2), (Real::from(0.5), 2)];
    let g = hermite_interpolate(&nodes, &Potential::Poly(vec![0.0, 1.0]), Some(5)).unwrap();
    let h = Potential::Poly(vec![0.0, -1.0]);
    let m = verify_g_in_g(&g, &h, 5, Real::from(-0.9), 256).unwrap();
    assert!(!m.g_below_h);
    assert!(m.worst_t > 0.9);

    let r = energy_lower_bound(5, 24.0, -0.9, &Potential::Gaussian(1.0)).unwrap();
    assert!(r.membership.g_below_h && r.membership.positive_definite.holds);
}

/// `(12, ℓ, s, 2)` with `ℓ` between `ℓ(12,2)` and the ratio root, where
/// `f_0 < 0` although the window and ratio tests hold.
#[test]
fn negative_f0_above_ell_star_is_rejected() {
    let (n, ell, s, k) = (12, -0.42856513878802405, 0.562576820373339, 2);
    assert!(ell > ell_star(n, k, DEFAULT_STEP).unwrap().value);
    let curve = EvenBoundCurve::new(n, ell, k).unwrap();
    assert!(to_f64(curve.formula(Real::from(s))) < 0.0);
    assert!(curve.value(Real::from(s)).is_none());
    match bound_l2k(n, ell, s, k) {
        Err(BoundError::NonPositiveWeight { index, .. }) => assert_eq!(index, k + 1),
        other => panic!("expected a nonpositive last weight, got {other:?}"),
    }
}
