//! Exact rational re-evaluation of a single Krein product, used when a
//! working-precision coefficient lands too close to the threshold to call.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::real::Real;

type Q = BigRational;
type QPoly = Vec<Q>;

fn q(p: i64, r: i64) -> Q {
    Q::new(BigInt::from(p), BigInt::from(r))
}

/// Exact value of a finite double-double.
pub(super) fn from_real(x: Real) -> Q {
    let hi = Q::from_float(x.hi()).expect("finite value");
    let lo = Q::from_float(x.lo()).expect("finite value");
    hi + lo
}

fn eval(p: &[Q], t: &Q) -> Q {
    p.iter().rev().fold(Q::zero(), |acc, c| acc * t + c)
}

fn mul(a: &[Q], b: &[Q]) -> QPoly {
    let mut out = vec![Q::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn sub_scaled(a: &[Q], b: &[Q], f: &Q) -> QPoly {
    let len = a.len().max(b.len());
    (0..len)
        .map(|i| {
            let x = a.get(i).cloned().unwrap_or_else(Q::zero);
            let y = b.get(i).cloned().unwrap_or_else(Q::zero);
            x - y * f
        })
        .collect()
}

/// Adjacent polynomials `P_0^{1,0}, …, P_top^{1,0}` with rational coefficients.
fn adjacent(n: i64, top: usize) -> Vec<QPoly> {
    let mut out: Vec<QPoly> = vec![vec![Q::one()]];
    for i in 0..top as i64 {
        let a = q(-(n - 2), (2 * i + n - 2) * (2 * i + n));
        let b = q((i + n - 1) * (2 * i + n + 1), (2 * i + n - 1) * (2 * i + n));
        let c = q(i * (2 * i + n - 3), (2 * i + n - 2) * (2 * i + n - 1));
        let cur = &out[i as usize];
        let mut next = mul(cur, &[-a, Q::one()]);
        if i > 0 {
            next = sub_scaled(&next, &out[i as usize - 1], &c);
        }
        out.push(next.into_iter().map(|x| x / &b).collect());
    }
    out
}

/// `(1-ℓ)(P_{i+1} - ρ P_i) / ((t-ℓ)(1-ρ))` exactly.
fn signed_poly(base: &[QPoly], ell: &Q, i: usize) -> QPoly {
    let rho = eval(&base[i + 1], ell) / eval(&base[i], ell);
    let numer = sub_scaled(&base[i + 1], &base[i], &rho);
    let d = numer.len() - 1;
    let mut quot = vec![Q::zero(); d];
    let mut rem = numer[d].clone();
    for k in (0..d).rev() {
        quot[k] = rem.clone();
        rem = &numer[k] + rem * ell;
    }
    let scale = (Q::one() - ell) / (Q::one() - rho);
    quot.into_iter().map(|x| x * &scale).collect()
}

fn to_gegenbauer(p: &[Q], n: i64) -> QPoly {
    let mut acc: QPoly = Vec::new();
    for c in p.iter().rev() {
        let mut next = vec![Q::zero(); acc.len() + 1];
        for (j, f) in acc.iter().enumerate() {
            let jj = j as i64;
            let denom = 2 * jj + n - 2;
            next[j + 1] += f * q(jj + n - 2, denom);
            if j > 0 {
                next[j - 1] += f * q(jj, denom);
            }
        }
        if next.is_empty() {
            next.push(Q::zero());
        }
        next[0] += c;
        acc = next;
    }
    acc.truncate(p.len());
    acc
}

/// Decides `f_m > tol · max|f|` for every Gegenbauer coefficient of
/// `(t-ℓ) P_i^{1,ℓ} P_j^{1,ℓ}` exactly. Returns the verdict and the
/// smallest coefficient relative to the largest.
pub(super) fn pair_is_strictly_positive(n: usize, ell: Real, i: usize, j: usize, tol: f64) -> (bool, f64) {
    let ell = from_real(ell);
    let base = adjacent(n as i64, i.max(j) + 1);
    let pi = signed_poly(&base, &ell, i);
    let pj = signed_poly(&base, &ell, j);
    let prod = mul(&mul(&pi, &pj), &[-ell.clone(), Q::one()]);
    let coeffs = to_gegenbauer(&prod, n as i64);
    let max = coeffs
        .iter()
        .map(|c| c.abs())
        .fold(Q::zero(), |m, c| if c > m { c } else { m });
    let threshold = Q::from_float(tol).expect("finite tolerance") * &max;
    let holds = coeffs.iter().all(|c| *c > threshold);
    let min = coeffs
        .iter()
        .cloned()
        .fold(None::<Q>, |m, c| match m {
            Some(m) if m <= c => Some(m),
            _ => Some(c),
        })
        .unwrap_or_else(Q::zero);
    let rel = if max.is_zero() {
        0.0
    } else {
        ratio_to_f64(&(min / max))
    };
    (holds, rel)
}

fn ratio_to_f64(x: &Q) -> f64 {
    use num_traits::ToPrimitive;
    x.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::real::real;

    #[test]
    fn linear_factor_alone() {
        // (t - ℓ) with ℓ = -1/2 has coefficients (1/2, 1)
        let (ok, rel) = pair_is_strictly_positive(4, real(-0.5), 0, 0, 1e-12);
        assert!(ok);
        assert_eq!(rel, 0.5);
    }

    #[test]
    fn exact_conversion_of_double_double() {
        let x = real(0.1) + real(1e-20);
        assert_eq!(from_real(x), Q::from_float(0.1).unwrap() + Q::from_float(1e-20).unwrap());
    }
}
