//! Three-term-recurrence families with isolated, interlacing zeros.

use serde::Serialize;

use super::gegenbauer::{check_dimension, gegenbauer_norm, mul_t_coefficients, serialize_reals};
use crate::error::{BoundError, Result};
use crate::poly::PolyPower;
use crate::real::{binom, int, one, ratio, to_f64_vec, zero, Real};
use crate::roots::{interlacing_brackets, refine_root_with};

/// Which orthogonality measure a family belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyKind {
    Gegenbauer,
    Adjacent10,
    Adjacent11,
    #[serde(rename = "signed_1l")]
    Signed1L,
    #[serde(rename = "signed_1ls")]
    Signed1LS,
}

/// Scalar parameters of a family (`ell`, `s` where applicable).
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct FamilyParams {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ell: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s: Option<f64>,
}

/// Polynomials `Q_0 = 1, Q_1, …` satisfying
/// `t Q_i = b_i Q_{i+1} + a_i Q_i + c_i Q_{i-1}` and `Q_i(1) = 1`.
///
/// `zeros[i]` holds the sorted zeros of `Q_i` and `brackets[i]` the
/// intervals used to isolate them.
#[derive(Debug, Clone, Serialize)]
pub struct OrthoFamily {
    pub n: usize,
    pub kind: FamilyKind,
    pub params: FamilyParams,
    #[serde(serialize_with = "serialize_reals")]
    pub a: Vec<Real>,
    #[serde(serialize_with = "serialize_reals")]
    pub b: Vec<Real>,
    #[serde(serialize_with = "serialize_reals")]
    pub c: Vec<Real>,
    #[serde(serialize_with = "serialize_reals")]
    pub r: Vec<Real>,
    #[serde(serialize_with = "serialize_reals")]
    pub eta: Vec<Real>,
    #[serde(skip)]
    pub polys: Vec<PolyPower>,
    #[serde(serialize_with = "serialize_nested")]
    pub zeros: Vec<Vec<Real>>,
    #[serde(skip)]
    pub brackets: Vec<Vec<(Real, Real)>>,
}

fn serialize_nested<S: serde::Serializer>(
    xs: &[Vec<Real>],
    serializer: S,
) -> std::result::Result<S::Ok, S::Error> {
    xs.iter()
        .map(|v| to_f64_vec(v))
        .collect::<Vec<_>>()
        .serialize(serializer)
}

/// Runs `Q_{i+1} = ((t - a_i) Q_i - c_i Q_{i-1}) / b_i` up to degree `len(a)`.
pub(crate) fn polys_from_recurrence(a: &[Real], b: &[Real], c: &[Real]) -> Vec<PolyPower> {
    let mut out = vec![PolyPower::one()];
    for i in 0..a.len() {
        let mut next = out[i].mul_linear_root(a[i]);
        if i > 0 {
            next = &next - &out[i - 1].scale(c[i]);
        }
        out.push(next.scale(one() / b[i]));
    }
    out
}

/// Value and derivative of `Q_i(t)` by running the recurrence.
pub(crate) fn recurrence_eval(a: &[Real], b: &[Real], c: &[Real], i: usize, t: Real) -> (Real, Real) {
    let (mut q0, mut d0) = (zero(), zero());
    let (mut q1, mut d1) = (one(), zero());
    for j in 0..i {
        let q2 = ((t - a[j]) * q1 - c[j] * q0) / b[j];
        let d2 = (q1 + (t - a[j]) * d1 - c[j] * d0) / b[j];
        q0 = q1;
        d0 = d1;
        q1 = q2;
        d1 = d2;
    }
    (q1, d1)
}

/// Isolates zeros of degrees `1..=max_degree` by interlacing each degree
/// with the previous one inside `(lo, hi)`.
pub(crate) fn interlaced_zeros(
    max_degree: usize,
    eval: impl Fn(usize, Real) -> (Real, Real),
    lo: Real,
    hi: Real,
) -> Result<(Vec<Vec<Real>>, Vec<Vec<(Real, Real)>>)> {
    let mut zeros: Vec<Vec<Real>> = vec![Vec::new()];
    let mut brackets: Vec<Vec<(Real, Real)>> = vec![Vec::new()];
    for i in 1..=max_degree {
        let br = interlacing_brackets(zeros.last().unwrap(), lo, hi);
        let z = br
            .iter()
            .map(|&(x, y)| refine_root_with(|t| eval(i, t), x, y))
            .collect::<Result<Vec<_>>>()?;
        zeros.push(z);
        brackets.push(br);
    }
    Ok((zeros, brackets))
}

impl OrthoFamily {
    pub fn max_degree(&self) -> usize {
        self.polys.len() - 1
    }

    pub fn poly(&self, i: usize) -> &PolyPower {
        &self.polys[i]
    }

    /// `Q_i(t)` by the recurrence (stable where the power form cancels).
    pub fn eval(&self, i: usize, t: Real) -> Real {
        self.eval_with_derivative(i, t).0
    }

    pub fn eval_with_derivative(&self, i: usize, t: Real) -> (Real, Real) {
        recurrence_eval(&self.a, &self.b, &self.c, i, t)
    }

    /// Smallest zero of degree `i` (`t_{i,1}`).
    pub fn smallest_zero(&self, i: usize) -> Real {
        self.zeros[i][0]
    }

    /// Largest zero of degree `i` (`t_{i,i}`).
    pub fn largest_zero(&self, i: usize) -> Real {
        *self.zeros[i].last().unwrap()
    }

    pub fn zeros_f64(&self, i: usize) -> Vec<f64> {
        to_f64_vec(&self.zeros[i])
    }

    /// Kernel `Σ_{j≤i} r_j Q_j(x) Q_j(y)`.
    pub fn kernel(&self, i: usize, x: Real, y: Real) -> Real {
        (0..=i).fold(zero(), |acc, j| acc + self.r[j] * self.eval(j, x) * self.eval(j, y))
    }

    /// Kernel in `t` with the second argument fixed, as a polynomial.
    pub fn kernel_poly(&self, i: usize, y: Real) -> PolyPower {
        let mut out = PolyPower::zero();
        for j in 0..=i {
            out = &out + &self.polys[j].scale(self.r[j] * self.eval(j, y));
        }
        out
    }
}

fn finish_family(
    n: usize,
    kind: FamilyKind,
    a: Vec<Real>,
    b: Vec<Real>,
    c: Vec<Real>,
    r: Vec<Real>,
) -> Result<OrthoFamily> {
    let polys = polys_from_recurrence(&a, &b, &c);
    let eta = polys.iter().map(|p| p.leading()).collect();
    let top = polys.len() - 1;
    let (mut zeros, brackets) =
        interlaced_zeros(top, |i, t| recurrence_eval(&a, &b, &c, i, t), -one(), one())?;
    if top >= 1 {
        // Q_1 = (t - a_0)/b_0 has its zero exactly at a_0.
        zeros[1][0] = a[0];
    }
    Ok(OrthoFamily {
        n,
        kind,
        params: FamilyParams::default(),
        a,
        b,
        c,
        r,
        eta,
        polys,
        zeros,
        brackets,
    })
}

/// Gegenbauer family `P_0^{(n)}, …, P_{kmax}^{(n)}`.
pub fn gegenbauer_family(n: usize, kmax: usize) -> Result<OrthoFamily> {
    check_dimension(n)?;
    let mut a = Vec::with_capacity(kmax);
    let mut b = Vec::with_capacity(kmax);
    let mut c = Vec::with_capacity(kmax);
    for j in 0..kmax {
        let (up, down) = mul_t_coefficients(n, j);
        a.push(zero());
        b.push(up);
        c.push(down);
    }
    let r = (0..=kmax).map(|j| gegenbauer_norm(n, j)).collect();
    finish_family(n, FamilyKind::Gegenbauer, a, b, c, r)
}

/// Recurrence coefficients `(a_i, b_i, c_i)` of the adjacent family
/// orthogonal for `(1 - t) dμ`.
pub fn adjacent10_recurrence(n: usize, i: usize) -> (Real, Real, Real) {
    let (n, i) = (n as i64, i as i64);
    let a = ratio(-(n - 2), (2 * i + n - 2) * (2 * i + n));
    let b = ratio((i + n - 1) * (2 * i + n + 1), (2 * i + n - 1) * (2 * i + n));
    let c = ratio(i * (2 * i + n - 3), (2 * i + n - 2) * (2 * i + n - 1));
    (a, b, c)
}

/// `r_i^{1,0} = ((n+2i-1)/(n-1))^2 binom(n+i-2, i)`.
pub fn adjacent10_norm(n: usize, i: usize) -> Real {
    let q = ratio((n + 2 * i - 1) as i64, (n - 1) as i64);
    q * q * binom(int((n + i - 2) as i64), i)
}

/// Adjacent family `P_i^{1,0}` for `i ≤ kmax + 1`.
pub fn adjacent10_family(n: usize, kmax: usize) -> Result<OrthoFamily> {
    check_dimension(n)?;
    if kmax < 1 {
        return Err(BoundError::Argument("kmax must be at least 1".into()));
    }
    let top = kmax + 1;
    let mut a = Vec::with_capacity(top);
    let mut b = Vec::with_capacity(top);
    let mut c = Vec::with_capacity(top);
    for i in 0..top {
        let (ai, bi, ci) = adjacent10_recurrence(n, i);
        a.push(ai);
        b.push(bi);
        c.push(ci);
    }
    let r = (0..=top).map(|i| adjacent10_norm(n, i)).collect();
    finish_family(n, FamilyKind::Adjacent10, a, b, c, r)
}

/// Adjacent family orthogonal for `(1 - t^2) dμ`, which is the Gegenbauer
/// family of dimension `n + 2` with norms taken against the normalized
/// measure.
pub fn adjacent11_family(n: usize, kmax: usize) -> Result<OrthoFamily> {
    let mut fam = gegenbauer_family(n + 2, kmax)?;
    fam.n = n;
    fam.kind = FamilyKind::Adjacent11;
    Ok(fam)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orthopoly::gegenbauer::gegenbauer_value;
    use crate::real::{real, to_f64};

    #[test]
    fn adjacent_first_degree() {
        let fam = adjacent10_family(4, 2).unwrap();
        let p1 = fam.poly(1).coeffs_f64();
        assert!((p1[0] - 0.2).abs() < 1e-16 && (p1[1] - 0.8).abs() < 1e-16);
        assert_eq!(to_f64(fam.smallest_zero(1)), -0.25);
        assert!((to_f64(fam.largest_zero(2)) - 0.27429).abs() < 1e-5);
        assert!((to_f64(fam.r[1]) - 25.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn normalized_at_one() {
        for n in [3, 4, 7, 12] {
            let fam = adjacent10_family(n, 9).unwrap();
            for p in &fam.polys {
                assert!(to_f64(p.eval(one()) - one()).abs() < 1e-28);
            }
            let g = gegenbauer_family(n, 9).unwrap();
            for (k, p) in g.polys.iter().enumerate() {
                assert!(to_f64(p.eval(one()) - one()).abs() < 1e-28);
                let t = real(0.37);
                assert!(to_f64(p.eval(t) - gegenbauer_value(n, k, t)).abs() < 1e-28);
            }
        }
    }

    #[test]
    fn norm_consistency_with_recurrence() {
        // c_i r_i = r_{i-1} b_{i-1}
        for n in [3, 5, 10] {
            let fam = adjacent10_family(n, 8).unwrap();
            for i in 1..=8 {
                let lhs = fam.c[i] * fam.r[i];
                let rhs = fam.r[i - 1] * fam.b[i - 1];
                assert!(to_f64((lhs - rhs) / rhs).abs() < 1e-28);
            }
        }
    }

    #[test]
    fn zeros_interlace() {
        let fam = adjacent10_family(6, 10).unwrap();
        for i in 2..=fam.max_degree() {
            let (lo, hi) = (&fam.zeros[i - 1], &fam.zeros[i]);
            for j in 0..lo.len() {
                assert!(hi[j] < lo[j] && lo[j] < hi[j + 1]);
            }
        }
    }

    #[test]
    fn adjacent11_is_shifted_gegenbauer() {
        let fam = adjacent11_family(4, 3).unwrap();
        assert_eq!(fam.kind, FamilyKind::Adjacent11);
        let v = fam.eval(2, real(0.5));
        assert!((to_f64(v) - gegenbauer_value(6, 2, real(0.5)).hi()).abs() < 1e-15);
    }
}
