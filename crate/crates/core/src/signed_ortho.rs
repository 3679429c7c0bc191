//! Orthogonal polynomials for the signed measures
//! `dν_ℓ = (t - ℓ)(1 - t) dμ` and `dν_{ℓ,s} = (t - ℓ)(s - t)(1 - t) dμ`.

use serde::Serialize;

use crate::error::{BoundError, Result};
use crate::orthopoly::{
    adjacent10_family, check_dimension, gauss_rule, polys_from_recurrence, radau_right_rule,
    serialize_reals, FamilyKind, FamilyParams, OrthoFamily,
};
use crate::poly::PolyPower;
use crate::real::{one, to_f64, zero, Real};
use crate::roots::{refine_root, refine_root_with};

/// Default upper limit for [`max_k_for_ell`].
pub const DEFAULT_K_CAP: usize = 40;

/// Slack applied to both ends of the `s` window.
pub const WINDOW_SLACK: f64 = 1e-14;

/// Outcome of the admissibility test for `(n, ℓ, k)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Admissibility {
    Admissible,
    /// `ℓ < -1`.
    EllBelowMinusOne { ell: f64 },
    /// `ℓ ≥ t_{k,1}^{1,0}`.
    NotBelowSmallestZero { ell: f64, smallest_zero: f64 },
    /// `P_{k+1}^{1,0}(ℓ) / P_k^{1,0}(ℓ) ≥ 1`.
    RatioNotBelowOne { ratio: f64 },
}

impl Admissibility {
    pub fn is_ok(&self) -> bool {
        matches!(self, Admissibility::Admissible)
    }

    pub fn describe(&self) -> String {
        match self {
            Admissibility::Admissible => "admissible".into(),
            Admissibility::EllBelowMinusOne { ell } => format!("ell = {ell} is below -1"),
            Admissibility::NotBelowSmallestZero { ell, smallest_zero } => format!(
                "ell = {ell} is not below the smallest zero {smallest_zero} of P_k^(1,0)"
            ),
            Admissibility::RatioNotBelowOne { ratio } => {
                format!("P_(k+1)^(1,0)(ell) / P_k^(1,0)(ell) = {ratio} is not below 1")
            }
        }
    }
}

fn check_degree(k: usize) -> Result<()> {
    if k < 1 {
        return Err(BoundError::Argument("degree k must be at least 1".into()));
    }
    Ok(())
}

/// Admissibility against a precomputed adjacent family of degree ≥ k+1.
pub(crate) fn admissibility_with(base: &OrthoFamily, ell: Real, k: usize) -> Admissibility {
    if ell < -one() {
        return Admissibility::EllBelowMinusOne { ell: to_f64(ell) };
    }
    let t_k1 = base.smallest_zero(k);
    if ell >= t_k1 {
        return Admissibility::NotBelowSmallestZero {
            ell: to_f64(ell),
            smallest_zero: to_f64(t_k1),
        };
    }
    let ratio = base.eval(k + 1, ell) / base.eval(k, ell);
    if ratio >= one() {
        return Admissibility::RatioNotBelowOne {
            ratio: to_f64(ratio),
        };
    }
    Admissibility::Admissible
}

/// Tests `-1 ≤ ℓ < t_{k,1}^{1,0}` and `P_{k+1}^{1,0}(ℓ)/P_k^{1,0}(ℓ) < 1`.
pub fn admissible(n: usize, ell: impl Into<Real>, k: usize) -> Result<Admissibility> {
    check_dimension(n)?;
    check_degree(k)?;
    let base = adjacent10_family(n, k)?;
    Ok(admissibility_with(&base, ell.into(), k))
}

/// Result of [`max_k_for_ell`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "status", content = "k", rename_all = "snake_case")]
pub enum MaxK {
    /// Largest `k` with `ℓ < t_{k,1}^{1,0}` (0 if none).
    Finite(usize),
    /// The condition still held at the cap.
    Cap(usize),
}

/// Largest `k` with `ℓ < t_{k,1}^{1,0}`, searched up to `cap`.
pub fn max_k_for_ell_capped(n: usize, ell: impl Into<Real>, cap: usize) -> Result<MaxK> {
    check_dimension(n)?;
    check_degree(cap)?;
    let ell = ell.into();
    let base = adjacent10_family(n, cap)?;
    for k in 1..=cap {
        if ell >= base.smallest_zero(k) {
            return Ok(MaxK::Finite(k - 1));
        }
    }
    Ok(MaxK::Cap(cap))
}

/// [`max_k_for_ell_capped`] with the default cap of 40.
pub fn max_k_for_ell(n: usize, ell: impl Into<Real>) -> Result<MaxK> {
    max_k_for_ell_capped(n, ell, DEFAULT_K_CAP)
}

/// The family `P_0^{1,ℓ}, …, P_k^{1,ℓ}` orthogonal for `ν_ℓ`.
#[derive(Debug, Clone, Serialize)]
pub struct SignedFamily1L {
    pub n: usize,
    #[serde(serialize_with = "crate::real::serialize_real")]
    pub ell: Real,
    pub k: usize,
    /// Recurrence data, norms, leading coefficients and zeros. `r[k]` is
    /// reported for completeness; only `r[0..k]` are guaranteed positive.
    pub family: OrthoFamily,
    /// `ρ_i = P_{i+1}^{1,0}(ℓ) / P_i^{1,0}(ℓ)` for `i ≤ k`.
    #[serde(serialize_with = "serialize_reals")]
    pub rho: Vec<Real>,
    /// Largest relative coefficient gap between the kernel construction
    /// and the recurrence construction.
    pub path_agreement: f64,
    /// Largest relative gap between quadrature norms and recurrence norms.
    pub norm_agreement: f64,
    #[serde(skip)]
    pub base: OrthoFamily,
}

impl SignedFamily1L {
    pub fn poly(&self, i: usize) -> &PolyPower {
        self.family.poly(i)
    }

    pub fn eval(&self, i: usize, t: Real) -> Real {
        self.family.eval(i, t)
    }

    /// `t_{i,j}^{1,ℓ}` (0-based `j`).
    pub fn zeros(&self, i: usize) -> &[Real] {
        &self.family.zeros[i]
    }

    /// Kernel `R_i(x, y) = Σ_{j≤i} r_j P_j(x) P_j(y)`.
    pub fn kernel(&self, i: usize, x: Real, y: Real) -> Real {
        self.family.kernel(i, x, y)
    }
}

/// Brackets for the zeros of `P_i^{1,ℓ}` prescribed by the interlacing
/// theorem with the adjacent family.
fn signed_brackets(base: &OrthoFamily, i: usize, rho_i: Real) -> Vec<(Real, Real)> {
    let low = &base.zeros[i];
    let high = &base.zeros[i + 1];
    if rho_i <= zero() {
        (0..i).map(|j| (low[j], high[j + 1])).collect()
    } else {
        // ℓ between t_{i+1,1} and t_{i,1}: the largest zero moves above
        // t_{i+1,i+1}.
        let mut out: Vec<(Real, Real)> = (0..i.saturating_sub(1))
            .map(|j| (high[j + 1], low[j + 1]))
            .collect();
        out.push((high[i], one()));
        out
    }
}

/// Builds `P_i^{1,ℓ}` for `i ≤ k` along two independent paths.
pub fn build_1l_family(n: usize, ell: impl Into<Real>, k: usize) -> Result<SignedFamily1L> {
    check_dimension(n)?;
    check_degree(k)?;
    let ell = ell.into();
    let base = adjacent10_family(n, k)?;
    let verdict = admissibility_with(&base, ell, k);
    if !verdict.is_ok() {
        return Err(BoundError::precondition("admissibility", verdict.describe()));
    }
    build_1l_family_with(base, ell, k)
}

pub(crate) fn build_1l_family_with(base: OrthoFamily, ell: Real, k: usize) -> Result<SignedFamily1L> {
    let n = base.n;
    let scale = one() - ell;

    // Kernel path: P_i^{1,ℓ} = (1-ℓ)(P_{i+1} - ρ_i P_i) / ((t-ℓ)(1-ρ_i)).
    let mut rho = Vec::with_capacity(k + 1);
    let mut kernel_polys = Vec::with_capacity(k + 1);
    for i in 0..=k {
        let r = base.eval(i + 1, ell) / base.eval(i, ell);
        let numer = base.poly(i + 1) - &base.poly(i).scale(r);
        let (q, _) = numer.div_linear(ell);
        kernel_polys.push(q.scale(scale / (one() - r)));
        rho.push(r);
    }

    // Recurrence path: discretized Stieltjes procedure on a Radau rule
    // exact to degree 2k+2, with b_i fixed by P_i(1) = 1.
    let rule = radau_right_rule(n, k + 1)?;
    let weight: Vec<Real> = rule
        .nodes
        .iter()
        .zip(&rule.weights)
        .map(|(&x, &w)| w * (x - ell) * (one() - x))
        .collect();
    let inner = |u: &[Real], v: &[Real]| -> Real {
        u.iter()
            .zip(v)
            .zip(&weight)
            .fold(zero(), |acc, ((&a, &b), &w)| acc + a * b * w)
    };
    let mut a = Vec::with_capacity(k);
    let mut b = Vec::with_capacity(k);
    let mut c = Vec::with_capacity(k);
    let mut prev: Vec<Real> = vec![zero(); rule.nodes.len()];
    let mut cur: Vec<Real> = vec![one(); rule.nodes.len()];
    let mut prev_norm = one();
    for i in 0..k {
        let tcur: Vec<Real> = cur.iter().zip(&rule.nodes).map(|(&v, &x)| v * x).collect();
        let norm = inner(&cur, &cur);
        let ai = inner(&tcur, &cur) / norm;
        let ci = if i == 0 {
            zero()
        } else {
            inner(&tcur, &prev) / prev_norm
        };
        let bi = one() - ai - ci;
        let next: Vec<Real> = (0..cur.len())
            .map(|m| ((rule.nodes[m] - ai) * cur[m] - ci * prev[m]) / bi)
            .collect();
        a.push(ai);
        b.push(bi);
        c.push(ci);
        prev = std::mem::replace(&mut cur, next);
        prev_norm = norm;
    }
    let recurrence_polys = polys_from_recurrence(&a, &b, &c);
    let path_agreement = kernel_polys
        .iter()
        .zip(&recurrence_polys)
        .map(|(p, q)| p.relative_distance(q))
        .fold(0.0, f64::max);

    // Norms from the kernel-path polynomials, cross-checked against
    // r_i = r_{i-1} b_{i-1} / c_i.
    let r: Vec<Real> = kernel_polys
        .iter()
        .map(|p| {
            let vals: Vec<Real> = rule.nodes.iter().map(|&x| p.eval(x)).collect();
            one() / inner(&vals, &vals)
        })
        .collect();
    let mut norm_agreement = 0.0f64;
    for i in 1..k {
        let via = r[i - 1] * b[i - 1] / c[i];
        norm_agreement = norm_agreement.max(to_f64(((via - r[i]) / r[i]).abs()));
    }

    let eta = kernel_polys.iter().map(|p| p.leading()).collect();
    let mut zeros = vec![Vec::new()];
    let mut brackets = vec![Vec::new()];
    for i in 1..=k {
        let br = signed_brackets(&base, i, rho[i]);
        let ri = rho[i];
        let g = |t: Real| {
            let (p1, d1) = base.eval_with_derivative(i + 1, t);
            let (p0, d0) = base.eval_with_derivative(i, t);
            (p1 - ri * p0, d1 - ri * d0)
        };
        let z = br
            .iter()
            .map(|&(lo, hi)| refine_root_with(g, lo, hi))
            .collect::<Result<Vec<_>>>()?;
        zeros.push(z);
        brackets.push(br);
    }

    let family = OrthoFamily {
        n,
        kind: FamilyKind::Signed1L,
        params: FamilyParams {
            ell: Some(to_f64(ell)),
            s: None,
        },
        a,
        b,
        c,
        r,
        eta,
        polys: kernel_polys,
        zeros,
        brackets,
    };
    Ok(SignedFamily1L {
        n,
        ell,
        k,
        family,
        rho,
        path_agreement,
        norm_agreement,
        base,
    })
}

/// `P_{k-1}^{1,ℓ,s}` with its zeros `β_1 < … < β_{k-1}`.
#[derive(Debug, Clone, Serialize)]
pub struct KernelPoly1LS {
    pub n: usize,
    #[serde(serialize_with = "crate::real::serialize_real")]
    pub ell: Real,
    #[serde(serialize_with = "crate::real::serialize_real")]
    pub s: Real,
    pub k: usize,
    pub coeffs: PolyPower,
    #[serde(serialize_with = "serialize_reals")]
    pub betas: Vec<Real>,
    #[serde(skip)]
    pub brackets: Vec<(Real, Real)>,
    /// `P_k^{1,ℓ}(s) / P_{k-1}^{1,ℓ}(s)`.
    #[serde(serialize_with = "crate::real::serialize_real")]
    pub kappa: Real,
    /// `P_k^{1,ℓ}(ℓ) / P_{k-1}^{1,ℓ}(ℓ)`.
    #[serde(serialize_with = "crate::real::serialize_real")]
    pub kappa_ell: Real,
    /// `[t_{k,k}^{1,0}, min(1, t_{k,k}^{1,ℓ})]`.
    pub window: (f64, f64),
    pub on_window_endpoint: bool,
    /// Relative gap to the normalized kernel `R_{k-1}(t,s)/R_{k-1}(1,s)`.
    pub kernel_agreement: f64,
    #[serde(skip)]
    pub family: SignedFamily1L,
}

impl KernelPoly1LS {
    pub fn eval(&self, t: Real) -> Real {
        self.coeffs.eval(t)
    }
}

/// Builds `P_{k-1}^{1,ℓ,s} = (1-s)(P_k^{1,ℓ} - κ P_{k-1}^{1,ℓ}) / ((1-κ)(t-s))`.
pub fn build_1ls_poly(
    n: usize,
    ell: impl Into<Real>,
    s: impl Into<Real>,
    k: usize,
) -> Result<KernelPoly1LS> {
    let family = build_1l_family(n, ell, k)?;
    build_1ls_from(family, s.into())
}

/// The `s` window `[t_{k,k}^{1,0}, min(1, t_{k,k}^{1,ℓ})]` of a family.
pub fn s_window(family: &SignedFamily1L) -> (Real, Real) {
    let k = family.k;
    let lo = family.base.largest_zero(k);
    let hi = family.family.largest_zero(k).min(one());
    (lo, hi)
}

pub fn build_1ls_from(family: SignedFamily1L, s: Real) -> Result<KernelPoly1LS> {
    let k = family.k;
    let ell = family.ell;
    let (lo, hi) = s_window(&family);
    let slack = Real::from(WINDOW_SLACK);
    if s < lo - slack || s > hi + slack {
        return Err(BoundError::Range {
            s: to_f64(s),
            lo: to_f64(lo),
            hi: to_f64(hi),
        });
    }
    let on_window_endpoint = (s - lo).abs() <= slack || (s - hi).abs() <= slack;

    let kappa = family.eval(k, s) / family.eval(k - 1, s);
    let kappa_ell = family.eval(k, ell) / family.eval(k - 1, ell);
    if kappa <= kappa_ell {
        return Err(BoundError::precondition(
            "ratio condition",
            format!(
                "P_k/P_(k-1) at s is {} which does not exceed its value {} at ell",
                to_f64(kappa),
                to_f64(kappa_ell)
            ),
        ));
    }
    let numer = family.poly(k) - &family.poly(k - 1).scale(kappa);
    let (q, _) = numer.div_linear(s);
    let coeffs = q.scale((one() - s) / (one() - kappa));

    let kernel = {
        let kp = family.family.kernel_poly(k - 1, s);
        kp.scale(one() / kp.eval(one()))
    };
    let kernel_agreement = coeffs.relative_distance(&kernel);

    let zeros_prev = family.zeros(k - 1);
    let mut brackets = Vec::with_capacity(k.saturating_sub(1));
    if k >= 2 {
        brackets.push((ell, zeros_prev[0]));
        for i in 0..k - 2 {
            brackets.push((zeros_prev[i], zeros_prev[i + 1]));
        }
    }
    let betas = brackets
        .iter()
        .map(|&(a, b)| refine_root(&coeffs, a, b))
        .collect::<Result<Vec<_>>>()?;

    Ok(KernelPoly1LS {
        n: family.n,
        ell,
        s,
        k,
        coeffs,
        betas,
        brackets,
        kappa,
        kappa_ell,
        window: (to_f64(lo), to_f64(hi)),
        on_window_endpoint,
        kernel_agreement,
        family,
    })
}

/// Polynomials `Q_0, …, Q_degree` orthogonal for `weight(t) dμ(t)` and
/// normalized by `Q_i(1) = 1`, by the discretized Stieltjes procedure.
///
/// `weight` need not be positive; the procedure fails with a numeric error
/// if some `∫ Q_i^2 weight dμ` vanishes or `Q_i(1) = 0`.
pub fn gram_schmidt(n: usize, weight: &PolyPower, degree: usize) -> Result<Vec<PolyPower>> {
    check_dimension(n)?;
    let m = degree + weight.degree() / 2 + 2;
    let rule = gauss_rule(n, m)?;
    let w: Vec<Real> = rule
        .nodes
        .iter()
        .zip(&rule.weights)
        .map(|(&x, &wt)| wt * weight.eval(x))
        .collect();
    let inner = |p: &PolyPower, q: &PolyPower| -> Real {
        rule.nodes
            .iter()
            .zip(&w)
            .fold(zero(), |acc, (&x, &wt)| acc + p.eval(x) * q.eval(x) * wt)
    };
    let mut out: Vec<PolyPower> = Vec::with_capacity(degree + 1);
    for i in 0..=degree {
        let mut p = PolyPower::monomial(i);
        for q in &out {
            let qq = inner(q, q);
            if qq == zero() {
                return Err(BoundError::Numeric(format!("degenerate norm at degree {i}")));
            }
            p = &p - &q.scale(inner(&p, q) / qq);
        }
        let at_one = p.eval(one());
        if at_one == zero() {
            return Err(BoundError::Numeric(format!("Q_{i}(1) vanishes")));
        }
        out.push(p.scale(one() / at_one));
    }
    Ok(out)
}
