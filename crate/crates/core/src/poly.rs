//! Polynomials in the monomial basis.

use std::ops::{Add, Mul, Neg, Sub};

use serde::Serialize;

use crate::real::{int, max_abs, one, to_f64, to_f64_vec, zero, Real};

/// A real polynomial `c_0 + c_1 t + ... + c_d t^d`.
///
/// Trailing zero coefficients are stripped on construction, so the zero
/// polynomial has an empty coefficient vector.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyPower {
    coeffs: Vec<Real>,
}

impl PolyPower {
    pub fn new(mut coeffs: Vec<Real>) -> Self {
        while coeffs.last().is_some_and(|c| *c == zero()) {
            coeffs.pop();
        }
        PolyPower { coeffs }
    }

    pub fn from_f64(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Real::from(c)).collect())
    }

    pub fn zero() -> Self {
        PolyPower { coeffs: Vec::new() }
    }

    pub fn constant(c: Real) -> Self {
        Self::new(vec![c])
    }

    pub fn one() -> Self {
        Self::constant(one())
    }

    /// `t - root`.
    pub fn linear_root(root: Real) -> Self {
        Self::new(vec![-root, one()])
    }

    /// `a + b t`.
    pub fn linear(a: Real, b: Real) -> Self {
        Self::new(vec![a, b])
    }

    pub fn monomial(degree: usize) -> Self {
        let mut c = vec![zero(); degree + 1];
        c[degree] = one();
        Self::new(c)
    }

    pub fn coeffs(&self) -> &[Real] {
        &self.coeffs
    }

    pub fn coeffs_f64(&self) -> Vec<f64> {
        to_f64_vec(&self.coeffs)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading(&self) -> Real {
        self.coeffs.last().copied().unwrap_or_else(zero)
    }

    pub fn eval(&self, t: Real) -> Real {
        self.coeffs.iter().rev().fold(zero(), |acc, &c| acc * t + c)
    }

    pub fn eval_f64(&self, t: f64) -> f64 {
        to_f64(self.eval(Real::from(t)))
    }

    /// Value and first derivative by a single Horner pass.
    pub fn eval_with_derivative(&self, t: Real) -> (Real, Real) {
        let mut p = zero();
        let mut dp = zero();
        for &c in self.coeffs.iter().rev() {
            dp = dp * t + p;
            p = p * t + c;
        }
        (p, dp)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| c * int(i as i64))
                .collect(),
        )
    }

    pub fn scale(&self, factor: Real) -> Self {
        Self::new(self.coeffs.iter().map(|&c| c * factor).collect())
    }

    /// Multiplies by `(t - root)`.
    pub fn mul_linear_root(&self, root: Real) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut out = vec![zero(); self.coeffs.len() + 1];
        for (i, &c) in self.coeffs.iter().enumerate() {
            out[i + 1] += c;
            out[i] -= c * root;
        }
        Self::new(out)
    }

    /// Synthetic division by `(t - x)`; returns quotient and remainder.
    pub fn div_linear(&self, x: Real) -> (Self, Real) {
        if self.coeffs.is_empty() {
            return (Self::zero(), zero());
        }
        let d = self.coeffs.len() - 1;
        let mut q = vec![zero(); d];
        let mut rem = self.coeffs[d];
        for i in (0..d).rev() {
            q[i] = rem;
            rem = self.coeffs[i] + rem * x;
        }
        (Self::new(q), rem)
    }

    pub fn max_abs_coeff(&self) -> Real {
        max_abs(&self.coeffs)
    }

    /// Largest absolute coefficient difference, relative to the larger
    /// of the two coefficient scales.
    pub fn relative_distance(&self, other: &Self) -> f64 {
        let len = self.coeffs.len().max(other.coeffs.len());
        let get = |p: &Self, i: usize| p.coeffs.get(i).copied().unwrap_or_else(zero);
        let mut diff = zero();
        for i in 0..len {
            let d = (get(self, i) - get(other, i)).abs();
            if d > diff {
                diff = d;
            }
        }
        let scale = {
            let a = self.max_abs_coeff();
            let b = other.max_abs_coeff();
            if a > b {
                a
            } else {
                b
            }
        };
        if scale == zero() {
            return to_f64(diff);
        }
        to_f64(diff / scale)
    }
}

impl Add for &PolyPower {
    type Output = PolyPower;
    fn add(self, rhs: &PolyPower) -> PolyPower {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = vec![zero(); len];
        for (i, &c) in self.coeffs.iter().enumerate() {
            out[i] += c;
        }
        for (i, &c) in rhs.coeffs.iter().enumerate() {
            out[i] += c;
        }
        PolyPower::new(out)
    }
}

impl Sub for &PolyPower {
    type Output = PolyPower;
    fn sub(self, rhs: &PolyPower) -> PolyPower {
        self + &(-rhs)
    }
}

impl Neg for &PolyPower {
    type Output = PolyPower;
    fn neg(self) -> PolyPower {
        PolyPower::new(self.coeffs.iter().map(|&c| -c).collect())
    }
}

impl Mul for &PolyPower {
    type Output = PolyPower;
    fn mul(self, rhs: &PolyPower) -> PolyPower {
        if self.is_zero() || rhs.is_zero() {
            return PolyPower::zero();
        }
        let mut out = vec![zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        PolyPower::new(out)
    }
}

/// Serialized form: coefficients rounded to `f64`, lowest degree first.
impl Serialize for PolyPower {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.coeffs_f64().serialize(serializer)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::real::real;

    fn p(c: &[f64]) -> PolyPower {
        PolyPower::from_f64(c)
    }

    #[test]
    fn trailing_zeros_are_stripped() {
        assert_eq!(p(&[1.0, 2.0, 0.0, 0.0]).degree(), 1);
        assert!(p(&[0.0, 0.0]).is_zero());
        assert_eq!(PolyPower::zero().degree(), 0);
    }

    #[test]
    fn arithmetic() {
        let a = p(&[1.0, 1.0]);
        let b = p(&[-1.0, 1.0]);
        assert_eq!(&a * &b, p(&[-1.0, 0.0, 1.0]));
        assert_eq!(&a + &b, p(&[0.0, 2.0]));
        assert_eq!(&a - &a, PolyPower::zero());
        assert_eq!(a.mul_linear_root(real(1.0)), p(&[-1.0, 0.0, 1.0]));
    }

    #[test]
    fn synthetic_division_recovers_factor() {
        let f = p(&[6.0, -5.0, 1.0]); // (t-2)(t-3)
        let (q, r) = f.div_linear(real(2.0));
        assert_eq!(q, p(&[-3.0, 1.0]));
        assert_eq!(to_f64(r), 0.0);
        let (_, r) = f.div_linear(real(0.0));
        assert_eq!(to_f64(r), 6.0);
    }

    #[test]
    fn horner_derivative() {
        let f = p(&[1.0, -3.0, 0.0, 2.0]);
        let (v, d) = f.eval_with_derivative(real(2.0));
        assert_eq!(to_f64(v), 11.0);
        assert_eq!(to_f64(d), 21.0);
        assert_eq!(f.derivative(), p(&[-3.0, 0.0, 6.0]));
    }
}
