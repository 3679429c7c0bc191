//! Gegenbauer polynomials `P_k^{(n)}` normalized by `P_k(1) = 1`, and
//! expansions in that basis.

use serde::Serialize;

use crate::error::{BoundError, Result};
use crate::poly::PolyPower;
use crate::real::{binom, int, max_abs, one, ratio, to_f64, to_f64_vec, zero, Real};

pub(crate) fn check_dimension(n: usize) -> Result<()> {
    if n < 3 {
        return Err(BoundError::Argument(format!(
            "dimension n must be at least 3, got {n}"
        )));
    }
    Ok(())
}

/// Coefficients of `t P_j = up_j P_{j+1} + down_j P_{j-1}`.
#[inline]
pub(crate) fn mul_t_coefficients(n: usize, j: usize) -> (Real, Real) {
    let denom = (2 * j + n - 2) as i64;
    (ratio((j + n - 2) as i64, denom), ratio(j as i64, denom))
}

/// `P_k^{(n)}(t)` by the three-term recurrence, in working precision.
pub fn gegenbauer_value(n: usize, k: usize, t: Real) -> Real {
    let mut prev = zero();
    let mut cur = one();
    for j in 0..k {
        let (up, down) = mul_t_coefficients(n, j);
        let next = (t * cur - down * prev) / up;
        prev = cur;
        cur = next;
    }
    cur
}

/// Evaluates `P_k^{(n)}(t)`.
pub fn gegenbauer_eval(n: usize, k: usize, t: f64) -> Result<f64> {
    check_dimension(n)?;
    Ok(to_f64(gegenbauer_value(n, k, Real::from(t))))
}

/// `P_k^{(n)}` in the monomial basis.
pub fn gegenbauer_poly(n: usize, k: usize) -> PolyPower {
    let mut prev = PolyPower::zero();
    let mut cur = PolyPower::one();
    for j in 0..k {
        let (up, down) = mul_t_coefficients(n, j);
        let next = &cur.mul_linear_root(zero()) - &prev.scale(down);
        prev = cur;
        cur = next.scale(one() / up);
    }
    cur
}

/// `(∫ P_j^2 dμ)^{-1}`, the dimension of degree-`j` harmonics in `R^n`.
pub fn gegenbauer_norm(n: usize, j: usize) -> Real {
    let m = n as i64;
    binom(int(j as i64 + m - 3), j) * int(2 * j as i64 + m - 2) / int(m - 2)
}

/// A polynomial written as `Σ f_k P_k^{(n)}(t)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GegenbauerExpansion {
    pub n: usize,
    #[serde(serialize_with = "serialize_reals")]
    pub coeffs: Vec<Real>,
}

pub(crate) fn serialize_reals<S: serde::Serializer>(
    xs: &[Real],
    serializer: S,
) -> std::result::Result<S::Ok, S::Error> {
    to_f64_vec(xs).serialize(serializer)
}

impl GegenbauerExpansion {
    pub fn new(n: usize, coeffs: Vec<Real>) -> Self {
        GegenbauerExpansion { n, coeffs }
    }

    pub fn constant(n: usize, c: Real) -> Self {
        GegenbauerExpansion { n, coeffs: vec![c] }
    }

    /// Exact change of basis by Horner's scheme carried out in the
    /// Gegenbauer basis: `acc ← t·acc + c_m`.
    pub fn from_power(p: &PolyPower, n: usize) -> Self {
        let mut acc = GegenbauerExpansion { n, coeffs: Vec::new() };
        for &c in p.coeffs().iter().rev() {
            acc = acc.mul_t();
            if acc.coeffs.is_empty() {
                acc.coeffs.push(zero());
            }
            acc.coeffs[0] += c;
        }
        acc
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    /// Multiplies by `t` using the three-term recurrence.
    pub fn mul_t(&self) -> Self {
        if self.coeffs.is_empty() {
            return self.clone();
        }
        let mut out = vec![zero(); self.coeffs.len() + 1];
        for (j, &f) in self.coeffs.iter().enumerate() {
            let (up, down) = mul_t_coefficients(self.n, j);
            out[j + 1] += f * up;
            if j > 0 {
                out[j - 1] += f * down;
            }
        }
        GegenbauerExpansion { n: self.n, coeffs: out }
    }

    /// Multiplies by `(t - root)`.
    pub fn mul_linear_root(&self, root: Real) -> Self {
        let mut out = self.mul_t();
        for (o, &f) in out.coeffs.iter_mut().zip(&self.coeffs) {
            *o -= root * f;
        }
        out
    }

    /// Multiplies by a power-basis polynomial (Horner in this basis).
    pub fn mul_power(&self, q: &PolyPower) -> Self {
        let mut acc = GegenbauerExpansion { n: self.n, coeffs: Vec::new() };
        for &c in q.coeffs().iter().rev() {
            acc = acc.mul_t();
            acc.add_scaled(self, c);
        }
        acc
    }

    pub fn add_scaled(&mut self, other: &Self, factor: Real) {
        if self.coeffs.len() < other.coeffs.len() {
            self.coeffs.resize(other.coeffs.len(), zero());
        }
        for (a, &b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a += factor * b;
        }
    }

    pub fn scale(&self, factor: Real) -> Self {
        GegenbauerExpansion {
            n: self.n,
            coeffs: self.coeffs.iter().map(|&c| c * factor).collect(),
        }
    }

    /// Clenshaw summation of `Σ f_k P_k(t)`.
    pub fn eval(&self, t: Real) -> Real {
        let mut b1 = zero();
        let mut b2 = zero();
        for j in (0..self.coeffs.len()).rev() {
            // P_{j+1} = (t/up_j) P_j - (down_j/up_j) P_{j-1}
            let (up, _) = mul_t_coefficients(self.n, j);
            let (up1, down1) = mul_t_coefficients(self.n, j + 1);
            let b0 = self.coeffs[j] + (t / up) * b1 - (down1 / up1) * b2;
            b2 = b1;
            b1 = b0;
        }
        b1
    }

    /// `f(1) = Σ f_k`.
    pub fn value_at_one(&self) -> Real {
        self.coeffs.iter().fold(zero(), |acc, &c| acc + c)
    }

    /// `f_0 = ∫ f dμ`.
    pub fn zeroth(&self) -> Real {
        self.coeffs.first().copied().unwrap_or_else(zero)
    }

    pub fn to_power(&self) -> PolyPower {
        let mut out = PolyPower::zero();
        for (k, &c) in self.coeffs.iter().enumerate() {
            out = &out + &gegenbauer_poly(self.n, k).scale(c);
        }
        out
    }

    pub fn coeffs_f64(&self) -> Vec<f64> {
        to_f64_vec(&self.coeffs)
    }
}

/// Expands a monomial-basis polynomial in the Gegenbauer basis.
pub fn expand_gegenbauer(p: &PolyPower, n: usize) -> Result<GegenbauerExpansion> {
    check_dimension(n)?;
    Ok(GegenbauerExpansion::from_power(p, n))
}

/// Default relative tolerance for positive-definiteness decisions.
pub const PD_TOLERANCE: f64 = 1e-12;

/// Outcome of a positive-definiteness test, with the coefficient vector as
/// witness.
#[derive(Debug, Clone, Serialize)]
pub struct PdCheck {
    pub holds: bool,
    pub strict: bool,
    pub tol: f64,
    pub coeffs: Vec<f64>,
    /// Smallest coefficient divided by the largest absolute coefficient.
    pub min_relative: f64,
    /// Index of the smallest coefficient.
    pub argmin: usize,
}

/// Decides membership in the positive-definite cone from coefficients.
///
/// Non-strict: every `f_k ≥ -tol·max|f|`. Strict: every `f_k > tol·max|f|`.
pub fn pd_verdict(coeffs: &[Real], strict: bool, tol: f64) -> PdCheck {
    let scale = max_abs(coeffs);
    let (argmin, min) = coeffs
        .iter()
        .enumerate()
        .fold((0, None::<Real>), |(ai, am), (i, &c)| match am {
            Some(m) if m <= c => (ai, Some(m)),
            _ => (i, Some(c)),
        });
    let min = min.unwrap_or_else(zero);
    let threshold = scale * Real::from(tol);
    let holds = if coeffs.is_empty() {
        !strict
    } else if strict {
        coeffs.iter().all(|&c| c > threshold)
    } else {
        coeffs.iter().all(|&c| c >= -threshold)
    };
    let min_relative = if scale == zero() {
        0.0
    } else {
        to_f64(min / scale)
    };
    PdCheck {
        holds,
        strict,
        tol,
        coeffs: to_f64_vec(coeffs),
        min_relative,
        argmin,
    }
}

/// Tests whether `p` is (strictly) positive definite on `S^{n-1}`.
pub fn is_positive_definite(p: &PolyPower, n: usize, strict: bool, tol: f64) -> Result<PdCheck> {
    let e = expand_gegenbauer(p, n)?;
    Ok(pd_verdict(&e.coeffs, strict, tol))
}
