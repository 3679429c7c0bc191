//! Root refinement inside sign-change brackets.
//!
//! Brackets come from interlacing theorems, so every call is expected to
//! see a genuine sign change. Refinement is bisection with Newton steps
//! accepted whenever they stay inside the current bracket.

use crate::error::{BoundError, Result};
use crate::poly::PolyPower;
use crate::real::{to_f64, zero, Real, WORKING_EPS};

const MAX_ITERATIONS: usize = 600;

/// Absolute width at which a bracket counts as converged.
fn width_tolerance() -> Real {
    Real::from(1e-2 * WORKING_EPS)
}

fn sign(x: Real) -> i8 {
    if x > zero() {
        1
    } else if x < zero() {
        -1
    } else {
        0
    }
}

/// Finds the root of `p` in `[lo, hi]`.
///
/// `p(lo)` and `p(hi)` must differ in sign (or one of them must vanish).
pub fn refine_root(p: &PolyPower, lo: Real, hi: Real) -> Result<Real> {
    if p.degree() == 1 {
        let c = p.coeffs();
        let root = -c[0] / c[1];
        if root < lo || root > hi {
            return Err(BoundError::Numeric(format!(
                "linear root {} outside bracket [{}, {}]",
                to_f64(root),
                to_f64(lo),
                to_f64(hi)
            )));
        }
        return Ok(root);
    }
    refine_root_with(|t| p.eval_with_derivative(t), lo, hi)
}

/// Bracketed root refinement for any function supplying value and
/// derivative.
pub fn refine_root_with(f: impl Fn(Real) -> (Real, Real), lo: Real, hi: Real) -> Result<Real> {
    let (mut a, mut b) = (lo, hi);
    let sa = sign(f(a).0);
    if sa == 0 {
        return Ok(a);
    }
    let sb = sign(f(b).0);
    if sb == 0 {
        return Ok(b);
    }
    if sa == sb {
        return Err(BoundError::Numeric(format!(
            "no sign change on bracket [{}, {}]",
            to_f64(lo),
            to_f64(hi)
        )));
    }
    let tol = width_tolerance();
    let two = Real::from(2.0);
    let mut x = (a + b) / two;
    for _ in 0..MAX_ITERATIONS {
        let (fx, dfx) = f(x);
        let sf = sign(fx);
        if sf == 0 {
            return Ok(x);
        }
        if sf == sa {
            a = x;
        } else {
            b = x;
        }
        if b - a <= tol {
            return Ok((a + b) / two);
        }
        let mid = (a + b) / two;
        let next = if dfx != zero() {
            let cand = x - fx / dfx;
            if cand > a && cand < b {
                cand
            } else {
                mid
            }
        } else {
            mid
        };
        if (next - x).abs() <= tol || next == x {
            return Ok(next);
        }
        if mid == a || mid == b {
            return Ok(mid);
        }
        x = next;
    }
    Ok(x)
}

/// Refines one root per bracket. Brackets must be disjoint.
pub fn roots_in_brackets(p: &PolyPower, brackets: &[(Real, Real)]) -> Result<Vec<Real>> {
    brackets
        .iter()
        .map(|&(lo, hi)| refine_root(p, lo, hi))
        .collect()
}

/// Interlacing brackets for a polynomial whose zeros separate `inner`
/// (sorted) within the outer interval `(outer_lo, outer_hi)`.
pub fn interlacing_brackets(inner: &[Real], outer_lo: Real, outer_hi: Real) -> Vec<(Real, Real)> {
    let mut edges = Vec::with_capacity(inner.len() + 2);
    edges.push(outer_lo);
    edges.extend_from_slice(inner);
    edges.push(outer_hi);
    edges.windows(2).map(|w| (w[0], w[1])).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::real::{int, real};

    #[test]
    fn cubic_root_to_working_precision() {
        // t^3 - 2 has the root 2^{1/3}
        let p = PolyPower::new(vec![int(-2), zero(), zero(), int(1)]);
        let r = refine_root(&p, real(1.0), real(2.0)).unwrap();
        let resid = r * r * r - int(2);
        assert!(to_f64(resid).abs() < 1e-29);
    }

    #[test]
    fn missing_sign_change_is_reported() {
        let p = PolyPower::from_f64(&[1.0, 0.0, 1.0]);
        assert!(matches!(
            refine_root(&p, real(-1.0), real(1.0)),
            Err(BoundError::Numeric(_))
        ));
    }

    #[test]
    fn endpoint_root_is_returned() {
        let p = PolyPower::from_f64(&[-1.0, 0.0, 1.0]);
        assert_eq!(to_f64(refine_root(&p, real(0.0), real(1.0)).unwrap()), 1.0);
    }

    #[test]
    fn linear_roots_are_exact() {
        let p = PolyPower::from_f64(&[1.0, 4.0]);
        assert_eq!(to_f64(refine_root(&p, real(-1.0), real(1.0)).unwrap()), -0.25);
    }
}
