//! Library values checked against independent reference computations.

mod common;

use common::*;
use levbound::energy::{classical_ulb, energy_lower_bound, Potential};
use levbound::krein::{lsk_check, ratio_root, KREIN_TOLERANCE};
use levbound::levenshtein::{
    bound_l2k, bound_u4, build_f2k, classical_even_bound, classical_odd_bound, crossover,
    quadrature_from,
};
use levbound::orthopoly::{
    adjacent10_family, adjacent11_family, expand_gegenbauer, gauss_rule, gegenbauer_eval,
    gegenbauer_norm, integrate_mu, mu_moments, radau_right_rule,
};
use levbound::real::{ratio, to_f64};
use levbound::signed_ortho::build_1l_family;
use levbound::{PolyPower, Real};

#[test]
fn gegenbauer_matches_explicit_jacobi_sum() {
    for n in [3, 4, 5, 8, 12] {
        for k in 0..=12 {
            for &t in &[-0.93, -0.4, 0.0, 0.31, 0.77, 1.0] {
                let got = gegenbauer_eval(n, k, t).unwrap();
                let want = gegenbauer_ref(n, k, t);
                assert!((got - want).abs() < 1e-11, "n={n} k={k} t={t}: {got} vs {want}");
            }
        }
    }
}

#[test]
fn adjacent_families_match_jacobi() {
    for n in [3, 4, 7, 10] {
        let f10 = adjacent10_family(n, 9).unwrap();
        let f11 = adjacent11_family(n, 9).unwrap();
        for k in 0..=9 {
            for &t in &[-0.8, -0.1, 0.45, 0.9] {
                let tr = Real::from(t);
                assert!((to_f64(f10.eval(k, tr)) - adjacent10_ref(n, k, t)).abs() < 1e-11);
                assert!((to_f64(f11.eval(k, tr)) - adjacent11_ref(n, k, t)).abs() < 1e-11);
            }
        }
    }
}

#[test]
fn adjacent_zeros_match_scanned_roots() {
    for n in [3, 4, 9] {
        let fam = adjacent10_family(n, 6).unwrap();
        for k in 1..=6 {
            let want = scan_roots(|t| adjacent10_ref(n, k, t), -1.0, 1.0, 4000);
            let got = fam.zeros_f64(k);
            assert_eq!(want.len(), k);
            for (a, b) in got.iter().zip(&want) {
                assert!((a - b).abs() < 1e-12, "n={n} k={k}: {a} vs {b}");
            }
        }
    }
}

#[test]
fn degree_two_adjacent_zero_in_dimension_four() {
    let fam = adjacent10_family(4, 2).unwrap();
    let z = to_f64(fam.largest_zero(2));
    assert!((z - 0.27429).abs() < 1e-5);
    // P_2^{1,0} ∝ Jacobi P_2^{(3/2,1/2)}; its largest zero solved in closed form
    let roots = scan_roots(|t| adjacent10_ref(4, 2, t), -1.0, 1.0, 1000);
    assert!((z - roots[1]).abs() < 1e-13);
    assert_eq!(fam.smallest_zero(1), Real::from(-0.25));
}

#[test]
fn moments_match_simpson() {
    for n in [3, 4, 6, 11] {
        let m = mu_moments(n, 10);
        for (j, mj) in m.iter().enumerate() {
            let want = mu_integral(n, |t| t.powi(j as i32), 4000);
            assert!((to_f64(*mj) - want).abs() < 1e-10, "n={n} j={j}");
        }
    }
}

#[test]
fn gegenbauer_norms_match_simpson() {
    for n in [3, 5, 9] {
        for j in 0..6 {
            let sq = mu_integral(n, |t| gegenbauer_ref(n, j, t).powi(2), 4000);
            assert!(rel(to_f64(gegenbauer_norm(n, j)), 1.0 / sq) < 1e-9);
        }
    }
}

#[test]
fn zeroth_coefficient_is_the_mean() {
    let p = PolyPower::from_f64(&[0.3, -1.2, 0.5, 2.0, -0.7, 0.1]);
    for n in [3, 4, 8] {
        let e = expand_gegenbauer(&p, n).unwrap();
        let rule = gauss_rule(n, 4).unwrap();
        let q = to_f64(rule.integrate(&p));
        assert!(rel(to_f64(e.zeroth()), q) < 1e-10);
        let simpson = mu_integral(n, |t| to_f64(p.eval(Real::from(t))), 4000);
        assert!(rel(to_f64(e.zeroth()), simpson) < 1e-9);
    }
}

#[test]
fn radau_rule_integrates_with_simpson() {
    let rule = radau_right_rule(5, 4).unwrap();
    let p = PolyPower::from_f64(&[1.0, 0.0, -2.0, 0.5, 0.0, 0.0, 1.0]);
    let simpson = mu_integral(5, |t| to_f64(p.eval(Real::from(t))), 4000);
    assert!(rel(to_f64(rule.integrate(&p)), simpson) < 1e-10);
}

#[test]
fn first_signed_polynomial_closed_form() {
    for n in [3, 4, 7] {
        for &l in &[-1.0, -0.9, -0.6] {
            let fam = build_1l_family(n, l, 1).unwrap();
            let nf = n as f64;
            for &t in &[-0.5, 0.2, 0.8] {
                let want = ((nf * l + 1.0) * t + l + 1.0) / ((nf + 1.0) * l + 2.0);
                assert!((to_f64(fam.eval(1, Real::from(t))) - want).abs() < 1e-13);
            }
        }
    }
}

#[test]
fn signed_polynomials_are_orthogonal_by_simpson() {
    let (n, l) = (6, -0.8);
    let fam = build_1l_family(n, l, 3).unwrap();
    let p = |i: usize, t: f64| to_f64(fam.eval(i, Real::from(t)));
    for i in 0..=3 {
        for j in 0..i {
            let ip = mu_integral(n, |t| (t - l) * (1.0 - t) * p(i, t) * p(j, t), 6000);
            assert!(ip.abs() < 1e-10, "({i},{j}) -> {ip}");
        }
    }
}

#[test]
fn quadrature_weights_match_lagrange_integrals() {
    let lev = build_f2k(5, -0.9, 0.55, 3).unwrap();
    let rule = quadrature_from(&lev).unwrap();
    let nodes: Vec<f64> = rule.nodes.iter().map(|&x| to_f64(x)).collect();
    for (i, w) in rule.weights.iter().enumerate() {
        let basis = |t: f64| {
            nodes
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .map(|(_, &x)| (t - x) / (nodes[i] - x))
                .product::<f64>()
        };
        let want = mu_integral(5, basis, 8000);
        assert!(rel(to_f64(*w), want) < 1e-9, "weight {i}");
    }
}

#[test]
fn degree_four_closed_form_matches_construction() {
    let mid = |n: usize, l: f64| {
        let c = levbound::levenshtein::EvenBoundCurve::new(n, l, 2).unwrap();
        to_f64(c.window.0 + c.window.1) / 2.0
    };
    let cases = [(7, -1.0, 1.0 / 3.0), (5, -0.9, 0.3), (8, -0.7, 0.3), (22, -0.3, mid(22, -0.3))];
    for (n, l, s) in cases {
        let u4 = bound_u4(n, l, s).unwrap();
        let l4 = bound_l2k(n, l, s, 2).unwrap();
        assert!(rel(u4.value, l4.value) < 1e-10, "n={n}: {} vs {}", u4.value, l4.value);
    }
}

#[test]
fn attained_code_m2() {
    let r = bound_l2k(7, -1.0, ratio(1, 3), 2).unwrap();
    assert!(rel(r.value, 56.0) < 1e-12);
    assert!((r.rho[3] - 1.0 / 56.0).abs() < 1e-14);
    for (a, b) in r.nodes.iter().zip([-1.0, -1.0 / 3.0, 1.0 / 3.0, 1.0]) {
        assert!((a - b).abs() < 1e-13);
    }
}

#[test]
fn u4_for_m3_parameters_is_275() {
    let r = bound_u4(22, -0.25, 0.25).unwrap();
    assert!(rel(r.value, 275.0) < 1e-12);
    let m3 = 81.0 * (3.0 * 9.0 - 5.0) / 2.0;
    assert_eq!(m3, 891.0);
    assert!(rel(r.value, m3) > 0.5);
    // ℓ = -1/4 is exactly the smallest zero of P_2^{1,0} in dimension 22
    let fam = adjacent10_family(22, 2).unwrap();
    assert!((to_f64(fam.smallest_zero(2)) + 0.25).abs() < 1e-15);
    assert!(adjacent10_ref(22, 2, -0.25).abs() < 1e-14);
}

#[test]
fn classical_bounds_closed_forms() {
    for n in [3, 5, 9] {
        let nf = n as f64;
        // L_1(n, s) = (s - 1)/s on [-1, -1/n]
        for &s in &[-0.9, -0.5, -1.0 / nf] {
            let b = classical_odd_bound(n, s, 1).unwrap();
            assert!(rel(b.value, (s - 1.0) / s) < 1e-12);
        }
        // L_2(n, s) = 2n(1-s)/(1-ns) at ℓ = -1
        let (lo, hi) = levbound::levenshtein::even_validity_range(n, 1).unwrap();
        let s = 0.5 * to_f64(lo + hi);
        let b = classical_even_bound(n, s, 1).unwrap();
        assert!(rel(b.value, 2.0 * nf * (1.0 - s) / (1.0 - nf * s)) < 1e-12);
        let ours = bound_l2k(n, -1.0, s, 1).unwrap();
        assert!(rel(b.value, ours.value) < 1e-12);
    }
}

#[test]
fn even_bound_reduces_to_classical_at_minus_one() {
    for (n, k) in [(3, 2), (4, 3), (6, 2), (9, 4)] {
        let (lo, hi) = levbound::levenshtein::even_validity_range(n, k).unwrap();
        for frac in [0.2, 0.5, 0.9] {
            let s = to_f64(lo) + frac * to_f64(hi - lo);
            let a = classical_even_bound(n, s, k).unwrap().value;
            let b = bound_l2k(n, -1.0, s, k).unwrap().value;
            assert!(rel(a, b) < 1e-10, "n={n} k={k} s={s}");
        }
    }
}

#[test]
fn figure_crossovers() {
    let c1 = crossover(4, -0.95, 1).unwrap();
    let c2 = crossover(4, -0.95, 2).unwrap();
    assert!((c1 - 0.0175).abs() <= 0.002);
    assert!((c2 - 0.4195).abs() <= 0.002);
}

#[test]
fn ratio_roots_of_table_corners() {
    // P_2^{1,0}(t) = P_1^{1,0}(t) in closed form for k = 1
    for n in [3, 4, 5, 10] {
        let want = scan_roots(|t| adjacent10_ref(n, 2, t) - adjacent10_ref(n, 1, t), -1.0, 0.99, 4000)[0];
        assert!((ratio_root(n, 1).unwrap() - want).abs() < 1e-12);
    }
}

#[test]
fn krein_regime_for_figure() {
    for k in 1..=7 {
        assert!(lsk_check(4, -0.95, k, KREIN_TOLERANCE).unwrap().overall);
    }
    assert!(!lsk_check(4, -0.95, 8, KREIN_TOLERANCE).unwrap().overall);
}

#[test]
fn krein_products_match_simpson_coefficients() {
    // Gegenbauer coefficients of (t-ℓ)P_i P_j computed by quadrature
    let (n, l, k) = (5, -0.85, 3);
    let fam = build_1l_family(n, l, k).unwrap();
    let rep = lsk_check(n, l, k, KREIN_TOLERANCE).unwrap();
    for pair in rep.pairs.iter().filter(|p| p.passed.is_some()) {
        let f = |t: f64| (t - l) * to_f64(fam.eval(pair.i, Real::from(t)) * fam.eval(pair.j, Real::from(t)));
        let coeffs: Vec<f64> = (0..=pair.i + pair.j + 1)
            .map(|m| to_f64(gegenbauer_norm(n, m)) * mu_integral(n, |t| f(t) * gegenbauer_ref(n, m, t), 6000))
            .collect();
        let max = coeffs.iter().fold(0f64, |a, c| a.max(c.abs()));
        let min = coeffs.iter().cloned().fold(f64::INFINITY, f64::min);
        assert_eq!(pair.passed, Some(min > 1e-9 * max), "pair ({}, {})", pair.i, pair.j);
    }
}

#[test]
fn energy_matches_classical_path_at_minus_one() {
    for (n, m) in [(7, 56.0), (5, 24.0), (4, 16.0)] {
        for h in [Potential::Riesz(1.0), Potential::Gaussian(0.7), Potential::Log] {
            let r = energy_lower_bound(n, m, -1.0, &h).unwrap();
            let c = classical_ulb(n, m, &h).unwrap();
            assert_eq!(r.k, c.k);
            assert!(rel(r.value, c.value) < 1e-9, "n={n} M={m} {h}");
        }
    }
}

#[test]
fn energy_with_linear_potential_is_closed_form() {
    let r = energy_lower_bound(5, 25.0, -0.9, &Potential::Poly(vec![1.0, 1.0])).unwrap();
    let nodes = &r.nodes;
    let w = &r.weights;
    let k = r.k;
    let want: f64 = 25.0 * 25.0 * (0..=k).map(|i| w[i] * (nodes[i] + 1.0)).sum::<f64>();
    assert!(rel(r.value, want) < 1e-12);
    assert!(rel(r.value, r.value_from_g) < 1e-12);
    let direct = integrate_mu(&PolyPower::from_f64(&[1.0, 1.0]), 5);
    assert!(rel(to_f64(direct), 1.0) < 1e-15);
}
