//! The Levenshtein-type polynomial `f_{2k}^{(n,ℓ,s)}`, its quadrature, the
//! resulting cardinality bounds, and the classical bounds used for
//! comparison.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{BoundError, Result};
use crate::krein;
use crate::orthopoly::{
    adjacent10_family, adjacent11_family, check_dimension, integrate_mu,
    lagrange_weights, pd_verdict, BaseQuadrature, GegenbauerExpansion, OrthoFamily, PD_TOLERANCE,
};
use crate::poly::PolyPower;
use crate::real::{int, one, serialize_real, to_f64, to_f64_vec, zero, Real, WORKING_EPS};
use crate::roots::refine_root;
use crate::signed_ortho::{
    admissibility_with, build_1l_family_with, build_1ls_from, s_window, KernelPoly1LS,
    SignedFamily1L, WINDOW_SLACK,
};

/// Relative tolerance for internal consistency checks on bound values.
pub const CONSISTENCY_TOLERANCE: f64 = 1e-10;

/// `f_{2k}(t) = (t - ℓ)(t - s)(P_{k-1}^{1,ℓ,s}(t))^2` with its expansion.
#[derive(Debug, Clone, Serialize)]
pub struct LevPolynomial {
    pub n: usize,
    #[serde(serialize_with = "serialize_real")]
    pub ell: Real,
    #[serde(serialize_with = "serialize_real")]
    pub s: Real,
    pub k: usize,
    pub coeffs: PolyPower,
    pub gegenbauer: GegenbauerExpansion,
    /// Zeroth Gegenbauer coefficient.
    #[serde(serialize_with = "serialize_real")]
    pub f0: Real,
    /// `f_0` through the orthogonality shortcut
    /// `(1-s)/(1-κ) ∫ (t-ℓ)(P_k^{1,ℓ} - κ P_{k-1}^{1,ℓ}) dμ`.
    #[serde(serialize_with = "serialize_real")]
    pub f0_closed: Real,
    #[serde(serialize_with = "serialize_real")]
    pub f_at_1: Real,
    #[serde(skip)]
    pub kernel: KernelPoly1LS,
}

impl LevPolynomial {
    pub fn eval(&self, t: Real) -> Real {
        self.coeffs.eval(t)
    }
}

pub fn build_f2k(n: usize, ell: impl Into<Real>, s: impl Into<Real>, k: usize) -> Result<LevPolynomial> {
    let kernel = crate::signed_ortho::build_1ls_poly(n, ell, s, k)?;
    Ok(build_f2k_from(kernel))
}

pub fn build_f2k_from(kernel: KernelPoly1LS) -> LevPolynomial {
    let (n, ell, s, k) = (kernel.n, kernel.ell, kernel.s, kernel.k);
    let p = &kernel.coeffs;
    let coeffs = &(&PolyPower::linear_root(ell) * &PolyPower::linear_root(s)) * &(p * p);
    let gegenbauer = GegenbauerExpansion::from_power(&coeffs, n);
    let f0 = gegenbauer.zeroth();
    let fam = &kernel.family;
    let kappa = kernel.kappa;
    let quasi = fam.poly(k) - &fam.poly(k - 1).scale(kappa);
    let f0_closed = (one() - s) / (one() - kappa) * integrate_mu(&quasi.mul_linear_root(ell), n);
    let f_at_1 = coeffs.eval(one());
    LevPolynomial {
        n,
        ell,
        s,
        k,
        coeffs,
        gegenbauer,
        f0,
        f0_closed,
        f_at_1,
        kernel,
    }
}

/// Reassembles `f_{2k}` as `c (t-ℓ)(P_k^{1,ℓ} + c_1 P_{k-1}^{1,ℓ}) R_{k-1}(t,s)`
/// with `c_1 = -κ` and `c = (1-s)/((1+c_1) R_{k-1}(1,s))`.
///
/// Returns the reassembled polynomial together with `(c, c_1)`.
pub fn lev_pd_reassembly(lev: &LevPolynomial) -> (PolyPower, Real, Real) {
    let fam = &lev.kernel.family;
    let k = lev.k;
    let s = lev.s;
    let c1 = -lev.kernel.kappa;
    let kernel = fam.family.kernel_poly(k - 1, s);
    let c = (one() - s) / ((one() + c1) * kernel.eval(one()));
    let head = (fam.poly(k) + &fam.poly(k - 1).scale(c1)).mul_linear_root(lev.ell);
    ((&head * &kernel).scale(c), c, c1)
}

/// Quadrature with nodes `ℓ, β_1, …, β_{k-1}, s, 1` exact to degree `2k`.
pub type QuadratureRule = BaseQuadrature;

/// Weights must be positive; on a window endpoint one of them may vanish to
/// working precision, which `allow_zero` permits.
fn weights_checked(
    n: usize,
    nodes: Vec<Real>,
    exactness_degree: usize,
    allow_zero: bool,
) -> Result<QuadratureRule> {
    let weights = lagrange_weights(n, &nodes);
    let floor = if allow_zero {
        -Real::from(1e3 * WORKING_EPS)
    } else {
        zero()
    };
    if let Some((index, w)) = weights.iter().enumerate().find(|(_, w)| **w <= floor) {
        return Err(BoundError::NonPositiveWeight {
            index,
            value: to_f64(*w),
        });
    }
    Ok(BaseQuadrature {
        n,
        nodes,
        weights,
        exactness_degree,
    })
}

pub fn quadrature_from(lev: &LevPolynomial) -> Result<QuadratureRule> {
    let mut nodes = Vec::with_capacity(lev.k + 2);
    nodes.push(lev.ell);
    nodes.extend_from_slice(&lev.kernel.betas);
    nodes.push(lev.s);
    nodes.push(one());
    weights_checked(lev.n, nodes, 2 * lev.k, lev.kernel.on_window_endpoint)
}

pub fn build_quadrature(
    n: usize,
    ell: impl Into<Real>,
    s: impl Into<Real>,
    k: usize,
) -> Result<QuadratureRule> {
    quadrature_from(&build_f2k(n, ell, s, k)?)
}

/// Outcome of one named check in a report.
#[derive(Debug, Clone, Serialize)]
pub struct CheckOutcome {
    pub passed: bool,
    pub detail: String,
}

impl CheckOutcome {
    pub fn new(passed: bool, detail: impl Into<String>) -> Self {
        CheckOutcome {
            passed,
            detail: detail.into(),
        }
    }
}

pub type Checks = BTreeMap<String, CheckOutcome>;

/// `L_{2k}(n; [ℓ, s])` with the data that certifies it.
#[derive(Debug, Clone, Serialize)]
pub struct BoundReport {
    pub n: usize,
    pub ell: f64,
    pub s: f64,
    pub k: usize,
    /// `1 / ρ_{k+1}`.
    pub value: f64,
    /// `(1-ℓ)(1-s) / f_0`.
    pub value_from_f0: f64,
    pub rho: Vec<f64>,
    pub nodes: Vec<f64>,
    pub gegenbauer_coeffs: Vec<f64>,
    pub checks: Checks,
    /// `verified` when every check passed, `unverified hypothesis` otherwise.
    pub status: String,
    #[serde(skip)]
    pub polynomial: LevPolynomial,
    #[serde(skip)]
    pub quadrature: QuadratureRule,
}

fn rel_gap(a: Real, b: Real) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == zero() {
        return 0.0;
    }
    to_f64((a - b).abs() / scale)
}

pub(crate) fn status_of(checks: &Checks) -> String {
    if checks.values().all(|c| c.passed) {
        "verified".into()
    } else {
        "unverified hypothesis".into()
    }
}

/// Largest value of `f` on a uniform grid of `(ℓ, s)`, relative to `f(1)`.
fn max_on_interval(lev: &LevPolynomial, samples: usize) -> f64 {
    let (a, b) = (lev.ell, lev.s);
    let mut worst = f64::NEG_INFINITY;
    for i in 1..samples {
        let t = a + (b - a) * int(i as i64) / int(samples as i64);
        worst = worst.max(to_f64(lev.eval(t) / lev.f_at_1));
    }
    worst
}

/// The bound `L_{2k}(n; [ℓ, s]) = 1/ρ_{k+1} = (1-ℓ)(1-s)/f_0`.
///
/// The Krein-type hypothesis is evaluated and recorded in `checks` but not
/// enforced.
pub fn bound_l2k(n: usize, ell: impl Into<Real>, s: impl Into<Real>, k: usize) -> Result<BoundReport> {
    let (ell, s) = (ell.into(), s.into());
    let lev = build_f2k(n, ell, s, k)?;
    bound_from(lev)
}

pub fn bound_from(lev: LevPolynomial) -> Result<BoundReport> {
    let rule = quadrature_from(&lev)?;
    let (n, ell, s, k) = (lev.n, lev.ell, lev.s, lev.k);
    let value = one() / rule.weights[k + 1];
    let value_from_f0 = (one() - ell) * (one() - s) / lev.f0;

    let mut checks = Checks::new();
    checks.insert(
        "admissibility".into(),
        CheckOutcome::new(true, "ell in [-1, t_{k,1}^{1,0}) and ratio below 1"),
    );
    let window_detail = if lev.kernel.on_window_endpoint {
        format!("s on an endpoint of [{}, {}]", lev.kernel.window.0, lev.kernel.window.1)
    } else {
        format!("s inside [{}, {}]", lev.kernel.window.0, lev.kernel.window.1)
    };
    checks.insert("s_window".into(), CheckOutcome::new(true, window_detail));
    checks.insert(
        "ratio_condition".into(),
        CheckOutcome::new(
            true,
            format!(
                "kappa(s) = {} > kappa(ell) = {}",
                to_f64(lev.kernel.kappa),
                to_f64(lev.kernel.kappa_ell)
            ),
        ),
    );
    checks.insert(
        "weights_positive".into(),
        CheckOutcome::new(true, format!("min rho = {:e}", to_f64_vec(&rule.weights).iter().cloned().fold(f64::INFINITY, f64::min))),
    );
    let moment_error = rule.moment_error();
    checks.insert(
        "quadrature_exactness".into(),
        CheckOutcome::new(
            moment_error <= CONSISTENCY_TOLERANCE,
            format!("max relative moment error up to degree {} is {moment_error:e}", 2 * k),
        ),
    );
    let dual = rel_gap(value, value_from_f0);
    checks.insert(
        "dual_representation".into(),
        CheckOutcome::new(
            dual <= CONSISTENCY_TOLERANCE,
            format!("1/rho_(k+1) vs (1-ell)(1-s)/f0 relative gap {dual:e}"),
        ),
    );
    let f0_gap = rel_gap(lev.f0, lev.f0_closed);
    checks.insert(
        "f0_paths".into(),
        CheckOutcome::new(
            f0_gap <= CONSISTENCY_TOLERANCE,
            format!("expansion vs closed form relative gap {f0_gap:e}"),
        ),
    );
    let worst = max_on_interval(&lev, 256);
    checks.insert(
        "nonpositive_on_interval".into(),
        CheckOutcome::new(
            worst <= 1e-12,
            format!("sampled max of f/f(1) on [ell, s] is {worst:e}"),
        ),
    );
    let pd = pd_verdict(&lev.gegenbauer.coeffs, false, PD_TOLERANCE);
    checks.insert(
        "f2k_positive_definite".into(),
        CheckOutcome::new(
            pd.holds,
            format!("min coefficient / max = {:e} at index {}", pd.min_relative, pd.argmin),
        ),
    );
    let lsk = match krein::lsk_check(n, ell, k, krein::KREIN_TOLERANCE) {
        Ok(report) => CheckOutcome::new(
            report.overall,
            match report.first_failure {
                None => "all pairs strictly positive definite".to_string(),
                Some((i, j)) => format!("pair ({i}, {j}) fails"),
            },
        ),
        Err(e) => CheckOutcome::new(false, e.to_string()),
    };
    checks.insert("l_strengthened_krein".into(), lsk);

    let status = status_of(&checks);
    Ok(BoundReport {
        n,
        ell: to_f64(ell),
        s: to_f64(s),
        k,
        value: to_f64(value),
        value_from_f0: to_f64(value_from_f0),
        rho: to_f64_vec(&rule.weights),
        nodes: to_f64_vec(&rule.nodes),
        gegenbauer_coeffs: lev.gegenbauer.coeffs_f64(),
        checks,
        status,
        polynomial: lev,
        quadrature: rule,
    })
}

/// Side conditions of the degree-4 closed form, evaluated at the zero `α`
/// of `P_1^{1,ℓ,s}`.
#[derive(Debug, Clone, Serialize)]
pub struct U4Constraints {
    /// `ℓ + s + 2α ≤ 0`.
    pub first: bool,
    /// `α² + 2(ℓ+s)α + ℓs + 6/(n+4) ≥ 0`.
    pub second: bool,
    /// `(ℓ+s)α² + 2α(ℓs + 3/(n+2)) + 3(ℓ+s)/(n+2) ≤ 0`.
    pub third: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct U4Report {
    pub n: usize,
    pub ell: f64,
    pub s: f64,
    pub value: f64,
    /// `None` when `α` is undefined.
    pub alpha: Option<f64>,
    pub constraints: Option<U4Constraints>,
    /// The bracket `3 + (n+2)(nℓs + ℓs + 2ℓ + 2s + 1)` vanishes, so the
    /// closed form collapses to zero.
    pub degenerate: bool,
}

const U4_RELATIVE_ZERO: f64 = 1e-12;

/// Closed form of `f_4(1)/f_0`:
/// `n(1-ℓ)(1-s)[3+(n+2)(nℓs+ℓs+2ℓ+2s+1)] / ((n+2)[nℓ²s²-(ℓ-s)²] - 6ℓs + 3)`.
pub fn bound_u4(n: usize, ell: impl Into<Real>, s: impl Into<Real>) -> Result<U4Report> {
    check_dimension(n)?;
    let (l, s) = (ell.into(), s.into());
    let nn = int(n as i64);
    let n2 = nn + int(2);
    let three = int(3);

    let bracket_terms = [nn * l * s, l * s, int(2) * l, int(2) * s, one()];
    let inner = bracket_terms.iter().copied().sum::<Real>();
    let bracket = three + n2 * inner;
    let bracket_scale =
        three + n2 * bracket_terms.iter().map(|x| x.abs()).sum::<Real>();
    let degenerate = bracket.abs() <= bracket_scale * Real::from(U4_RELATIVE_ZERO);

    let d = l - s;
    let denom_terms = [n2 * nn * l * l * s * s, -(n2 * d * d), -(int(6) * l * s), three];
    let denom = denom_terms.iter().copied().sum::<Real>();
    let denom_scale = denom_terms.iter().map(|x| x.abs()).sum::<Real>();
    if !degenerate && denom.abs() <= denom_scale * Real::from(U4_RELATIVE_ZERO) {
        return Err(BoundError::Degenerate(format!(
            "denominator of the degree-4 bound vanishes at n = {n}, ell = {}, s = {}",
            to_f64(l),
            to_f64(s)
        )));
    }
    let value = if degenerate {
        zero()
    } else {
        nn * (one() - l) * (one() - s) * bracket / denom
    };

    // α = -(3 + (n+2)(ℓs+ℓ+s)) / ((n+2)(nℓs+ℓ+s+1))
    let alpha_den = n2 * (nn * l * s + l + s + one());
    let (alpha, constraints) = if alpha_den == zero() {
        (None, None)
    } else {
        let a = -(three + n2 * (l * s + l + s)) / alpha_den;
        let sum = l + s;
        let first = sum + int(2) * a <= zero();
        let second = a * a + int(2) * sum * a + l * s + int(6) / (nn + int(4)) >= zero();
        let third = sum * a * a + int(2) * a * (l * s + three / n2) + three * sum / n2 <= zero();
        (
            Some(to_f64(a)),
            Some(U4Constraints {
                first,
                second,
                third,
            }),
        )
    };
    Ok(U4Report {
        n,
        ell: to_f64(l),
        s: to_f64(s),
        value: to_f64(value),
        alpha,
        constraints,
        degenerate,
    })
}

/// Zeros of the kernel `T_{k-1}(t, s) = Σ_{i<k} r_i Q_i(t) Q_i(s)` in `t`,
/// for `s` above the largest zero of `Q_{k-1}`.
///
/// These are the zeros of `Q_k - κ Q_{k-1}` other than `s`; one lies in
/// each gap between consecutive zeros of `Q_{k-1}` and one below them.
fn kernel_zeros(fam: &OrthoFamily, k: usize, s: Real, kernel: &PolyPower) -> Result<Vec<Real>> {
    if k == 1 {
        return Ok(Vec::new());
    }
    let z = &fam.zeros[k - 1];
    if s <= *z.last().unwrap() {
        return Err(BoundError::Numeric(format!(
            "s = {} does not exceed the largest zero of Q_{}",
            to_f64(s),
            k - 1
        )));
    }
    let mut lo = z[0] - one();
    let sign_at = |t: Real| kernel.eval(t) > zero();
    let mut guard = 0;
    while sign_at(lo) == sign_at(z[0]) {
        lo = z[0] - (z[0] - lo) * int(2);
        guard += 1;
        if guard > 60 {
            return Err(BoundError::Numeric("no kernel zero below the base zeros".into()));
        }
    }
    let mut out = vec![refine_root(kernel, lo, z[0])?];
    for j in 0..k - 2 {
        out.push(refine_root(kernel, z[j], z[j + 1])?);
    }
    Ok(out)
}

/// A classical bound with the quadrature that certifies it.
#[derive(Debug, Clone, Serialize)]
pub struct ClassicalBound {
    pub n: usize,
    pub s: f64,
    pub k: usize,
    /// Degree of the polynomial (`2k-1` or `2k`).
    pub degree: usize,
    pub value: f64,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    #[serde(skip)]
    pub rule: QuadratureRule,
    #[serde(skip)]
    pub polynomial: PolyPower,
}

fn classical_from(
    n: usize,
    s: Real,
    k: usize,
    degree: usize,
    poly: PolyPower,
    nodes: Vec<Real>,
) -> Result<ClassicalBound> {
    if nodes.iter().any(|&x| x < -one() - Real::from(WINDOW_SLACK)) {
        return Err(BoundError::Range {
            s: to_f64(s),
            lo: f64::NAN,
            hi: f64::NAN,
        });
    }
    let rule = weights_checked(n, nodes, degree, false)?;
    let value = poly.eval(one()) / integrate_mu(&poly, n);
    Ok(ClassicalBound {
        n,
        s: to_f64(s),
        k,
        degree,
        value: to_f64(value),
        nodes: to_f64_vec(&rule.nodes),
        weights: to_f64_vec(&rule.weights),
        rule,
        polynomial: poly,
    })
}

/// Classical odd-degree bound `L_{2k-1}(n, s)` from
/// `f(t) = (t - s)(T_{k-1}^{1,0}(t, s))^2`.
///
/// Valid for `s ∈ [t_{k-1,k-1}^{1,1}, t_{k,k}^{1,0}]`, which is checked
/// through the nodes and weights of the matching quadrature.
pub fn classical_odd_bound(n: usize, s: impl Into<Real>, k: usize) -> Result<ClassicalBound> {
    check_dimension(n)?;
    if k < 1 {
        return Err(BoundError::Argument("degree k must be at least 1".into()));
    }
    let s = s.into();
    let (lo, hi) = odd_validity_range(n, k)?;
    let slack = Real::from(WINDOW_SLACK);
    if s < lo - slack || s > hi + slack {
        return Err(BoundError::Range {
            s: to_f64(s),
            lo: to_f64(lo),
            hi: to_f64(hi),
        });
    }
    let fam = adjacent10_family(n, k)?;
    let kernel = fam.kernel_poly(k - 1, s);
    let mut nodes = kernel_zeros(&fam, k, s, &kernel)?;
    nodes.push(s);
    nodes.push(one());
    let poly = (&kernel * &kernel).mul_linear_root(s);
    classical_from(n, s, k, 2 * k - 1, poly, nodes)
}

/// `[t_{k-1,k-1}^{1,1}, t_{k,k}^{1,0}]` with `t_{0,0}^{1,1} = -1`.
pub fn odd_validity_range(n: usize, k: usize) -> Result<(Real, Real)> {
    let hi = adjacent10_family(n, k)?.largest_zero(k);
    let lo = if k == 1 {
        -one()
    } else {
        adjacent11_family(n, k - 1)?.largest_zero(k - 1)
    };
    Ok((lo, hi))
}

/// `[t_{k,k}^{1,0}, t_{k,k}^{1,1}]`.
pub fn even_validity_range(n: usize, k: usize) -> Result<(Real, Real)> {
    let lo = adjacent10_family(n, k)?.largest_zero(k);
    let hi = adjacent11_family(n, k)?.largest_zero(k);
    Ok((lo, hi))
}

/// Classical even-degree bound from `f(t) = (t+1)(t-s)(T_{k-1}^{1,1}(t,s))^2`,
/// built on the family orthogonal for `(1 - t^2) dμ`.
pub fn classical_even_bound(n: usize, s: impl Into<Real>, k: usize) -> Result<ClassicalBound> {
    check_dimension(n)?;
    if k < 1 {
        return Err(BoundError::Argument("degree k must be at least 1".into()));
    }
    let s = s.into();
    let (lo, hi) = even_validity_range(n, k)?;
    let slack = Real::from(WINDOW_SLACK);
    if s < lo - slack || s > hi + slack {
        return Err(BoundError::Range {
            s: to_f64(s),
            lo: to_f64(lo),
            hi: to_f64(hi),
        });
    }
    let fam = adjacent11_family(n, k)?;
    let kernel = fam.kernel_poly(k - 1, s);
    let mut nodes = vec![-one()];
    nodes.extend(kernel_zeros(&fam, k, s, &kernel)?);
    nodes.push(s);
    nodes.push(one());
    let poly = (&kernel * &kernel).mul_linear_root(s).mul_linear_root(-one());
    classical_from(n, s, k, 2 * k, poly, nodes)
}

/// Raw odd-bound formula `f(1)/f_0` without range checks.
pub fn odd_bound_formula(fam: &OrthoFamily, k: usize, s: Real) -> Real {
    let kernel = fam.kernel_poly(k - 1, s);
    let poly = (&kernel * &kernel).mul_linear_root(s);
    poly.eval(one()) / integrate_mu(&poly, fam.n)
}

/// Fast evaluation of `L_{2k}(n; [ℓ, s])` as a function of `s` for fixed
/// `(n, ℓ, k)`.
///
/// With `I_j = ∫ (t-ℓ) P_j^{1,ℓ} dμ` and `κ = P_k^{1,ℓ}(s)/P_{k-1}^{1,ℓ}(s)`,
/// the bound is `(1-ℓ)(1-κ) / (I_k - κ I_{k-1})`.
#[derive(Debug, Clone)]
pub struct EvenBoundCurve {
    pub family: SignedFamily1L,
    pub window: (Real, Real),
    i_k: Real,
    i_km1: Real,
    kappa_ell: Real,
}

impl EvenBoundCurve {
    pub fn new(n: usize, ell: impl Into<Real>, k: usize) -> Result<Self> {
        check_dimension(n)?;
        if k < 1 {
            return Err(BoundError::Argument("degree k must be at least 1".into()));
        }
        let ell = ell.into();
        let base = adjacent10_family(n, k)?;
        let verdict = admissibility_with(&base, ell, k);
        if !verdict.is_ok() {
            return Err(BoundError::precondition("admissibility", verdict.describe()));
        }
        let family = build_1l_family_with(base, ell, k)?;
        let moment = |j: usize| integrate_mu(&family.poly(j).mul_linear_root(ell), n);
        let i_k = moment(k);
        let i_km1 = moment(k - 1);
        let kappa_ell = family.eval(k, ell) / family.eval(k - 1, ell);
        let window = s_window(&family);
        Ok(EvenBoundCurve {
            family,
            window,
            i_k,
            i_km1,
            kappa_ell,
        })
    }

    /// The closed expression, evaluated regardless of hypotheses.
    pub fn formula(&self, s: Real) -> Real {
        let k = self.family.k;
        let kappa = self.family.eval(k, s) / self.family.eval(k - 1, s);
        (one() - self.family.ell) * (one() - kappa) / (self.i_k - kappa * self.i_km1)
    }

    /// The bound where the window and ratio hypotheses hold and `f_0 > 0`.
    ///
    /// Above `ℓ(n, k)` the window and ratio tests alone do not keep `f_0`
    /// positive, so a nonpositive value is reported as `None`.
    pub fn value(&self, s: Real) -> Option<Real> {
        let slack = Real::from(WINDOW_SLACK);
        if s < self.window.0 - slack || s > self.window.1 + slack {
            return None;
        }
        let k = self.family.k;
        let kappa = self.family.eval(k, s) / self.family.eval(k - 1, s);
        if kappa <= self.kappa_ell {
            return None;
        }
        Some(self.formula(s)).filter(|v| *v > zero())
    }

    /// Full construction at `s`, for certificates.
    pub fn polynomial(&self, s: Real) -> Result<LevPolynomial> {
        Ok(build_f2k_from(build_1ls_from(self.family.clone(), s)?))
    }
}

/// Where `L_{2k}(n; [ℓ, ·])` meets the odd bound `L_{2k+1}(n, ·)`, i.e. the
/// right end of the range of `s` on which the even bound is the smaller.
pub fn crossover(n: usize, ell: impl Into<Real>, k: usize) -> Result<f64> {
    let curve = EvenBoundCurve::new(n, ell, k)?;
    let odd = adjacent10_family(n, k + 1)?;
    let diff = |s: Real| curve.formula(s) - odd_bound_formula(&odd, k + 1, s);
    let (lo, hi) = curve.window;
    let span = hi - lo;
    let start = lo + span * Real::from(1e-3);
    let stop = hi + span * Real::from(0.1);
    let steps = 400;
    let mut prev_s = start;
    let mut prev = diff(start);
    for i in 1..=steps {
        let s = start + (stop - start) * int(i) / int(steps);
        let d = diff(s);
        if (prev <= zero()) != (d <= zero()) {
            let (mut a, mut b) = (prev_s, s);
            let neg_at_a = prev <= zero();
            for _ in 0..200 {
                let m = (a + b) / int(2);
                if (diff(m) <= zero()) == neg_at_a {
                    a = m;
                } else {
                    b = m;
                }
                if b - a < Real::from(1e-28) {
                    break;
                }
            }
            return Ok(to_f64((a + b) / int(2)));
        }
        prev = d;
        prev_s = s;
    }
    Err(BoundError::Numeric(format!(
        "no crossing between L_{} and L_{} found on [{}, {}]",
        2 * k,
        2 * k + 1,
        to_f64(start),
        to_f64(stop)
    )))
}

/// One row of the comparison figure; `None` where hypotheses fail.
#[derive(Debug, Clone, Serialize)]
pub struct FigureRow {
    pub s: f64,
    /// `L_1, L_3, L_5, L_7`.
    pub odd: [Option<f64>; 4],
    /// `L_2, L_4, L_6, L_8`.
    pub even: [Option<f64>; 4],
}

/// Bound curves over `s_values` for `k = 1..4`.
pub fn figure_rows(n: usize, ell: impl Into<Real>, s_values: &[f64]) -> Result<Vec<FigureRow>> {
    check_dimension(n)?;
    let ell = ell.into();
    let curves: Vec<Option<EvenBoundCurve>> =
        (1..=4).map(|k| EvenBoundCurve::new(n, ell, k).ok()).collect();
    let odd_fam = adjacent10_family(n, 4)?;
    let odd_ranges = (1..=4)
        .map(|k| odd_validity_range(n, k))
        .collect::<Result<Vec<_>>>()?;
    let slack = Real::from(WINDOW_SLACK);
    Ok(s_values
        .iter()
        .map(|&sv| {
            let s = Real::from(sv);
            let mut odd = [None; 4];
            let mut even = [None; 4];
            for k in 1..=4 {
                let (lo, hi) = odd_ranges[k - 1];
                if s >= lo - slack && s <= hi + slack {
                    odd[k - 1] = Some(to_f64(odd_bound_formula(&odd_fam, k, s)));
                }
                if let Some(curve) = &curves[k - 1] {
                    even[k - 1] = curve.value(s).map(to_f64);
                }
            }
            FigureRow { s: sv, odd, even }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::real::{ratio, real};

    #[test]
    fn attained_case_m2() {
        let rep = bound_l2k(7, -1.0, ratio(1, 3), 2).unwrap();
        assert!((rep.value - 56.0).abs() < 1e-20 * 56.0 + 1e-12);
        assert!((rep.rho[3] - 1.0 / 56.0).abs() < 1e-14);
        assert!(rep.checks.values().all(|c| c.passed), "{:?}", rep.checks);
        let u4 = bound_u4(7, -1.0, ratio(1, 3)).unwrap();
        assert!((u4.value - 56.0).abs() < 1e-12);
        let c = u4.constraints.unwrap();
        assert!(c.first && c.second && c.third);
        assert!((u4.alpha.unwrap() + 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn u4_special_values() {
        let r = bound_u4(22, -0.25, 0.25).unwrap();
        assert!((r.value - 275.0).abs() < 1e-10);
        let r = bound_u4(22, -0.25, ratio(1, 6)).unwrap();
        assert!(r.degenerate);
        assert_eq!(r.value, 0.0);
    }

    #[test]
    fn odd_bounds() {
        let l1 = classical_odd_bound(5, ratio(-1, 5), 1).unwrap();
        assert!((l1.value - 6.0).abs() < 1e-13);
        for n in [3, 4, 8] {
            let l3 = classical_odd_bound(n, zero(), 2).unwrap();
            assert!((l3.value - 2.0 * n as f64).abs() < 1e-12);
        }
        assert!(classical_odd_bound(4, real(0.5), 1).is_err());
    }

    #[test]
    fn l2_equals_l1_at_smallest_adjacent_zero() {
        let rep = bound_l2k(4, -0.95, -0.25, 1).unwrap();
        assert!((rep.value - 5.0).abs() < 1e-12);
    }

    #[test]
    fn curve_matches_full_construction() {
        let curve = EvenBoundCurve::new(5, -0.8, 3).unwrap();
        let (lo, hi) = curve.window;
        for i in 0..=4 {
            let s = lo + (hi - lo) * int(i) / int(4);
            let fast = curve.value(s).unwrap();
            let full = bound_l2k(5, -0.8, s, 3).unwrap();
            assert!((to_f64(fast) - full.value).abs() < 1e-11 * full.value);
        }
    }

    #[test]
    fn classical_even_agrees_at_minus_one() {
        let (lo, hi) = even_validity_range(6, 3).unwrap();
        let s = (lo + hi) / int(2);
        let a = classical_even_bound(6, s, 3).unwrap();
        let b = bound_l2k(6, -1.0, s, 3).unwrap();
        assert!((a.value - b.value).abs() < 1e-12 * a.value);
        for (x, y) in a.weights.iter().zip(&b.rho) {
            assert!((x - y).abs() < 1e-13);
        }
    }

    #[test]
    fn reassembly_matches() {
        let lev = build_f2k(6, -0.9, 0.52, 3).unwrap();
        let (p, c, c1) = lev_pd_reassembly(&lev);
        assert!(p.relative_distance(&lev.coeffs) < 1e-24);
        assert!(c > zero() && c1 > zero());
    }
}
