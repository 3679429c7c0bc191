//! The ℓ-strengthened Krein condition: strict positive definiteness of
//! `(t - ℓ) P_i^{1,ℓ}(t) P_j^{1,ℓ}(t)` for the required index pairs, and the
//! threshold `ℓ(n, k)` up to which it holds.

mod exact;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{BoundError, Result};
use crate::orthopoly::{adjacent10_family, check_dimension, GegenbauerExpansion, OrthoFamily};
use crate::poly::PolyPower;
use crate::real::{int, max_abs, one, to_f64, truncate3, zero, Real};
use crate::roots::refine_root_with;
use crate::signed_ortho::admissibility_with;

/// Relative strictness threshold for Krein coefficients.
pub const KREIN_TOLERANCE: f64 = 1e-12;

/// Default sweep resolution for [`ell_star`].
pub const DEFAULT_STEP: f64 = 1e-3;

/// Bracket width at which the threshold bisection stops.
pub const BISECTION_WIDTH: f64 = 1e-6;

/// Coefficients within this relative distance of the threshold are decided
/// again in exact rational arithmetic.
const EXACT_RECHECK_BAND: f64 = 1e-20;

/// Which index pairs are tested.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum PairMode {
    /// All `i, j ≤ k` except `i = j = k`.
    #[default]
    Full,
    /// Only `i ∈ {k-1, k}`, `j ≤ k-1`.
    Weak,
}

/// Outcome for one unordered pair `i ≥ j`.
#[derive(Debug, Clone, Serialize)]
pub struct PairResult {
    pub i: usize,
    pub j: usize,
    /// `None` for the excluded pair `(k, k)`.
    pub passed: Option<bool>,
    /// Smallest Gegenbauer coefficient divided by the largest.
    pub min_relative: f64,
    pub argmin: usize,
    /// The verdict came from the exact rational recheck.
    pub exact_recheck: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct KreinReport {
    pub n: usize,
    pub ell: f64,
    pub k: usize,
    pub mode: PairMode,
    pub tol: f64,
    /// Whether `ℓ` also satisfies the bound admissibility conditions.
    pub admissible: bool,
    /// One entry per unordered pair `i ≥ j`; the product is symmetric.
    pub pairs: Vec<PairResult>,
    pub overall: bool,
    pub first_failure: Option<(usize, usize)>,
}

/// Precomputed ℓ-independent data for repeated checks at fixed `(n, k)`.
#[derive(Debug, Clone)]
pub struct KreinChecker {
    n: usize,
    k: usize,
    base: OrthoFamily,
    /// Gegenbauer expansions of `P_m^{1,0}` for `m ≤ k+1`.
    expansions: Vec<GegenbauerExpansion>,
}

impl KreinChecker {
    pub fn new(n: usize, k: usize) -> Result<Self> {
        check_dimension(n)?;
        if k < 1 {
            return Err(BoundError::Argument("degree k must be at least 1".into()));
        }
        let base = adjacent10_family(n, k)?;
        let expansions = base
            .polys
            .iter()
            .map(|p| GegenbauerExpansion::from_power(p, n))
            .collect();
        Ok(KreinChecker {
            n,
            k,
            base,
            expansions,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    fn pairs(&self, mode: PairMode) -> Vec<(usize, usize)> {
        let k = self.k;
        let mut out = Vec::new();
        for i in 0..=k {
            for j in 0..=i {
                let include = match mode {
                    PairMode::Full => !(i == k && j == k),
                    PairMode::Weak => i + 1 >= k && j < k,
                };
                if include {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Expansions of `(t-ℓ) P_i^{1,ℓ}` and power forms of `P_i^{1,ℓ}`.
    fn signed_data(&self, ell: Real) -> (Vec<GegenbauerExpansion>, Vec<PolyPower>) {
        let mut lin = Vec::with_capacity(self.k + 1);
        let mut power = Vec::with_capacity(self.k + 1);
        for i in 0..=self.k {
            let rho = self.base.eval(i + 1, ell) / self.base.eval(i, ell);
            let scale = (one() - ell) / (one() - rho);
            let mut e = self.expansions[i + 1].clone();
            e.add_scaled(&self.expansions[i], -rho);
            lin.push(e.scale(scale));
            let numer = self.base.poly(i + 1) - &self.base.poly(i).scale(rho);
            power.push(numer.div_linear(ell).0.scale(scale));
        }
        (lin, power)
    }

    /// The products are defined whenever every `P_i^{1,ℓ}`, `i ≤ k`, is; the
    /// stronger bound admissibility is reported but not required.
    fn precondition(&self, ell: Real) -> Result<()> {
        if ell < -one() || ell >= one() {
            return Err(BoundError::precondition(
                "ell_range",
                format!("ell = {} must lie in [-1, 1)", to_f64(ell)),
            ));
        }
        for i in 0..=self.k {
            let p = self.base.eval(i, ell);
            if p == zero() {
                return Err(BoundError::precondition(
                    "signed_family_defined",
                    format!("P_{i}^(1,0) vanishes at ell = {}", to_f64(ell)),
                ));
            }
            let rho = self.base.eval(i + 1, ell) / p;
            if (one() - rho).abs() <= Real::from(1e-28) {
                return Err(BoundError::precondition(
                    "signed_family_defined",
                    format!("P_{}^(1,0)(ell) / P_{i}^(1,0)(ell) equals 1", i + 1),
                ));
            }
        }
        Ok(())
    }

    fn judge(&self, ell: Real, i: usize, j: usize, coeffs: &[Real], tol: f64) -> PairResult {
        let scale = max_abs(coeffs);
        let threshold = scale * Real::from(tol);
        let band = scale * Real::from(EXACT_RECHECK_BAND);
        let (argmin, min) = coeffs
            .iter()
            .enumerate()
            .fold((0, coeffs[0]), |(ai, m), (idx, &c)| if c < m { (idx, c) } else { (ai, m) });
        let near = coeffs.iter().any(|&c| (c - threshold).abs() <= band);
        let min_relative = if scale == zero() { 0.0 } else { to_f64(min / scale) };
        if near {
            let (passed, rel) = exact::pair_is_strictly_positive(self.n, ell, i, j, tol);
            return PairResult {
                i,
                j,
                passed: Some(passed),
                min_relative: rel,
                argmin,
                exact_recheck: true,
            };
        }
        PairResult {
            i,
            j,
            passed: Some(coeffs.iter().all(|&c| c > threshold)),
            min_relative,
            argmin,
            exact_recheck: false,
        }
    }

    /// Full report at `ℓ`.
    pub fn check(&self, ell: impl Into<Real>, tol: f64, mode: PairMode) -> Result<KreinReport> {
        let ell = ell.into();
        self.precondition(ell)?;
        let (lin, power) = self.signed_data(ell);
        let mut pairs = Vec::new();
        let mut first_failure = None;
        for i in 0..=self.k {
            for j in 0..=i {
                if i == self.k && j == self.k {
                    pairs.push(PairResult {
                        i,
                        j,
                        passed: None,
                        min_relative: f64::NAN,
                        argmin: 0,
                        exact_recheck: false,
                    });
                    continue;
                }
                if !self.pairs(mode).contains(&(i, j)) {
                    continue;
                }
                let prod = lin[i].mul_power(&power[j]);
                let res = self.judge(ell, i, j, &prod.coeffs, tol);
                if res.passed == Some(false) && first_failure.is_none() {
                    first_failure = Some((i, j));
                }
                pairs.push(res);
            }
        }
        Ok(KreinReport {
            n: self.n,
            ell: to_f64(ell),
            k: self.k,
            mode,
            tol,
            admissible: admissibility_with(&self.base, ell, self.k).is_ok(),
            pairs,
            overall: first_failure.is_none(),
            first_failure,
        })
    }

    /// Verdict only, stopping at the first failing pair.
    pub fn passes(&self, ell: Real, tol: f64, mode: PairMode) -> Result<bool> {
        self.precondition(ell)?;
        let (lin, power) = self.signed_data(ell);
        for (i, j) in self.pairs(mode) {
            let prod = lin[i].mul_power(&power[j]);
            if self.judge(ell, i, j, &prod.coeffs, tol).passed == Some(false) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Smallest root of `P_{k+1}^{1,0}(t) = P_k^{1,0}(t)`, which lies in
    /// `(t_{k+1,1}^{1,0}, t_{k,1}^{1,0})`.
    pub fn ratio_root(&self) -> Result<Real> {
        let k = self.k;
        let g = |t: Real| {
            let (a, da) = self.base.eval_with_derivative(k + 1, t);
            let (b, db) = self.base.eval_with_derivative(k, t);
            (a - b, da - db)
        };
        refine_root_with(g, self.base.smallest_zero(k + 1), self.base.smallest_zero(k))
    }
}

/// Checks the ℓ-strengthened Krein condition for all pairs.
pub fn lsk_check(n: usize, ell: impl Into<Real>, k: usize, tol: f64) -> Result<KreinReport> {
    KreinChecker::new(n, k)?.check(ell, tol, PairMode::Full)
}

/// [`lsk_check`] with an explicit pair mode.
pub fn lsk_check_mode(
    n: usize,
    ell: impl Into<Real>,
    k: usize,
    tol: f64,
    mode: PairMode,
) -> Result<KreinReport> {
    KreinChecker::new(n, k)?.check(ell, tol, mode)
}

/// Smallest root of `P_{k+1}^{1,0}(t) / P_k^{1,0}(t) = 1`.
pub fn ratio_root(n: usize, k: usize) -> Result<f64> {
    Ok(to_f64(KreinChecker::new(n, k)?.ratio_root()?))
}

/// How the threshold search ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepStatus {
    /// A pass followed by a failure was found and bisected.
    Transition,
    /// No failure below the admissibility limit (the ratio root).
    HoldsUpToAdmissibilityLimit,
    /// The condition already fails at `ℓ = -1`.
    FailsAtMinusOne,
}

/// Estimated `ℓ(n, k)`.
#[derive(Debug, Clone, Serialize)]
pub struct EllStar {
    pub n: usize,
    pub k: usize,
    /// Last `ℓ` at which the condition was verified to hold.
    pub value: f64,
    /// `value` truncated after the third decimal.
    pub value_truncated: f64,
    pub step: f64,
    pub bisected: bool,
    /// `(last pass, first fail)`.
    pub bracket: (f64, f64),
    pub status: SweepStatus,
    pub tol: f64,
}

/// Sweeps `ℓ = -1 + m·step` upward to the first failure, then bisects the
/// last pass/first fail bracket to width `1e-6`.
pub fn ell_star(n: usize, k: usize, step: f64) -> Result<EllStar> {
    ell_star_with(&KreinChecker::new(n, k)?, step, KREIN_TOLERANCE, PairMode::Full)
}

pub fn ell_star_with(checker: &KreinChecker, step: f64, tol: f64, mode: PairMode) -> Result<EllStar> {
    if !(step > 0.0 && step < 1.0) {
        return Err(BoundError::Argument(format!("sweep step must lie in (0, 1), got {step}")));
    }
    let (n, k) = (checker.n, checker.k);
    let ceiling = checker.ratio_root()?;
    let step_r = Real::from(step);
    let at = |m: i64| -one() + int(m) * step_r;
    let finish = |lo: Real, hi: Real, bisected: bool, status: SweepStatus| EllStar {
        n,
        k,
        value: to_f64(lo),
        value_truncated: truncate3(to_f64(lo)),
        step,
        bisected,
        bracket: (to_f64(lo), to_f64(hi)),
        status,
        tol,
    };

    if !checker.passes(-one(), tol, mode)? {
        return Ok(finish(-one(), -one(), false, SweepStatus::FailsAtMinusOne));
    }
    let mut m = 1i64;
    let (mut lo, mut hi) = loop {
        let ell = at(m);
        if ell >= ceiling {
            return Ok(finish(
                at(m - 1),
                ceiling,
                false,
                SweepStatus::HoldsUpToAdmissibilityLimit,
            ));
        }
        if !checker.passes(ell, tol, mode)? {
            break (at(m - 1), ell);
        }
        m += 1;
    };
    let width = Real::from(BISECTION_WIDTH);
    while hi - lo > width {
        let mid = (lo + hi) / int(2);
        if checker.passes(mid, tol, mode)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(finish(lo, hi, true, SweepStatus::Transition))
}

/// Result of sampling the condition on `[-1, ℓ(n,k)]`.
#[derive(Debug, Clone, Serialize)]
pub struct ConjectureScan {
    pub n: usize,
    pub k: usize,
    pub ell_star: f64,
    /// `(ℓ, holds)` for each sample.
    pub samples: Vec<(f64, bool)>,
    pub all_pass: bool,
}

/// Evaluates the condition at `samples` evenly spaced points of
/// `[-1, ℓ(n,k)]`, both ends included. Failures are findings, not errors.
pub fn conjecture_scan(n: usize, k: usize, samples: usize) -> Result<ConjectureScan> {
    let checker = KreinChecker::new(n, k)?;
    let star = ell_star_with(&checker, DEFAULT_STEP, KREIN_TOLERANCE, PairMode::Full)?;
    let top = Real::from(star.value);
    let count = samples.max(1);
    let mut out = Vec::with_capacity(count);
    for i in 0..count {
        let ell = if count == 1 {
            -one()
        } else {
            -one() + (top + one()) * int(i as i64) / int(count as i64 - 1)
        };
        let holds = checker.passes(ell, KREIN_TOLERANCE, PairMode::Full).unwrap_or(false);
        out.push((to_f64(ell), holds));
    }
    let all_pass = out.iter().all(|(_, h)| *h);
    Ok(ConjectureScan {
        n,
        k,
        ell_star: star.value,
        samples: out,
        all_pass,
    })
}

/// One cell of the `ℓ(n, k)` table.
#[derive(Debug, Clone, Serialize)]
pub struct TableCell {
    pub n: usize,
    pub k: usize,
    pub ell_star: EllStar,
    pub ratio_root: f64,
    pub ratio_root_truncated: f64,
}

/// Computes `ℓ(n,k)` and the ratio root for every `(n, k)`; cells run in
/// parallel and come back in row-major order.
pub fn krein_table(ns: &[usize], ks: &[usize], step: f64) -> Result<Vec<TableCell>> {
    let cells: Vec<(usize, usize)> = ns
        .iter()
        .flat_map(|&n| ks.iter().map(move |&k| (n, k)))
        .collect();
    cells
        .par_iter()
        .map(|&(n, k)| {
            let checker = KreinChecker::new(n, k)?;
            let star = ell_star_with(&checker, step, KREIN_TOLERANCE, PairMode::Full)?;
            let root = to_f64(checker.ratio_root()?);
            Ok(TableCell {
                n,
                k,
                ell_star: star,
                ratio_root: root,
                ratio_root_truncated: truncate3(root),
            })
        })
        .collect()
}
