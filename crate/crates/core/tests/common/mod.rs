//! Independent reference computations shared by the integration tests.

#![allow(dead_code)]

use levbound::krein::KreinChecker;
use levbound::levenshtein::EvenBoundCurve;
use levbound::real::to_f64;
use levbound::Real;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Generalized binomial coefficient `binom(x, m)`.
pub fn gbinom(x: f64, m: usize) -> f64 {
    (0..m).fold(1.0, |acc, i| acc * (x - i as f64) / (i + 1) as f64)
}

/// Jacobi polynomial `P_k^{(a,b)}(t)` from the explicit sum, scaled to 1 at `t = 1`.
pub fn jacobi_normalized(a: f64, b: f64, k: usize, t: f64) -> f64 {
    let (x, y) = ((t - 1.0) / 2.0, (t + 1.0) / 2.0);
    let sum: f64 = (0..=k)
        .map(|s| gbinom(k as f64 + a, k - s) * gbinom(k as f64 + b, s) * x.powi(s as i32) * y.powi((k - s) as i32))
        .sum();
    sum / gbinom(k as f64 + a, k)
}

pub fn alpha(n: usize) -> f64 {
    (n as f64 - 3.0) / 2.0
}

pub fn gegenbauer_ref(n: usize, k: usize, t: f64) -> f64 {
    jacobi_normalized(alpha(n), alpha(n), k, t)
}

/// Polynomial orthogonal for `(1 - t) dμ`.
pub fn adjacent10_ref(n: usize, k: usize, t: f64) -> f64 {
    jacobi_normalized(alpha(n) + 1.0, alpha(n), k, t)
}

/// Polynomial orthogonal for `(1 - t^2) dμ`.
pub fn adjacent11_ref(n: usize, k: usize, t: f64) -> f64 {
    jacobi_normalized(alpha(n) + 1.0, alpha(n) + 1.0, k, t)
}

/// `∫ f dμ` by composite Simpson in `θ` with `t = cos θ`, where the density
/// becomes `sin^{n-2} θ`.
pub fn mu_integral(n: usize, f: impl Fn(f64) -> f64, panels: usize) -> f64 {
    let panels = panels + panels % 2;
    let h = std::f64::consts::PI / panels as f64;
    let (mut num, mut den) = (0.0, 0.0);
    for i in 0..=panels {
        let w = if i == 0 || i == panels {
            1.0
        } else if i % 2 == 1 {
            4.0
        } else {
            2.0
        };
        let th = i as f64 * h;
        let d = th.sin().powi(n as i32 - 2);
        num += w * d * f(th.cos());
        den += w * d;
    }
    num / den
}

/// Roots of `f` on `[lo, hi]` located by a fine sign scan and bisection.
pub fn scan_roots(f: impl Fn(f64) -> f64, lo: f64, hi: f64, cells: usize) -> Vec<f64> {
    let mut out = Vec::new();
    let step = (hi - lo) / cells as f64;
    let mut a = lo;
    let mut fa = f(a);
    for i in 1..=cells {
        let b = lo + step * i as f64;
        let fb = f(b);
        if fa == 0.0 {
            out.push(a);
        } else if fa * fb < 0.0 {
            let (mut x, mut y) = (a, b);
            for _ in 0..200 {
                let m = 0.5 * (x + y);
                if f(x) * f(m) <= 0.0 {
                    y = m;
                } else {
                    x = m;
                }
            }
            out.push(0.5 * (x + y));
        }
        a = b;
        fa = fb;
    }
    out
}

/// An admissible configuration `(n, ℓ, s, k)` with `s` inside the window and
/// the ratio condition satisfied.
#[derive(Debug, Clone, Copy)]
pub struct Case {
    pub n: usize,
    pub ell: f64,
    pub s: f64,
    pub k: usize,
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Draws a case with `n ≤ n_max`, `k ≤ k_max`. When `below_star` is set, `ℓ`
/// is kept at or below the Krein threshold `ℓ(n, k)`; otherwise below the
/// ratio root.
pub fn random_case(rng: &mut ChaCha8Rng, n_max: usize, k_max: usize, below_star: bool) -> Case {
    loop {
        let n = rng.gen_range(3..=n_max);
        let k = rng.gen_range(1..=k_max);
        let checker = KreinChecker::new(n, k).unwrap();
        let top = if below_star {
            levbound::krein::ell_star_with(&checker, 1e-2, levbound::krein::KREIN_TOLERANCE, Default::default())
                .unwrap()
                .value
        } else {
            to_f64(checker.ratio_root().unwrap())
        };
        let ell = if rng.gen_bool(0.1) { -1.0 } else { rng.gen_range(-1.0..top) };
        let Ok(curve) = EvenBoundCurve::new(n, ell, k) else { continue };
        let (lo, hi) = (to_f64(curve.window.0), to_f64(curve.window.1));
        for _ in 0..20 {
            let s = rng.gen_range(lo..=hi);
            if curve.value(Real::from(s)).is_some() {
                return Case { n, ell, s, k };
            }
        }
    }
}

pub fn rel(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}
