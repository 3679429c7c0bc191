//! Moments of μ and interpolatory quadrature rules built from them.

use serde::Serialize;

use super::family::{adjacent10_family, gegenbauer_family};
use super::gegenbauer::{check_dimension, serialize_reals};
use crate::error::{BoundError, Result};
use crate::poly::PolyPower;
use crate::real::{int, one, to_f64, zero, Real};

/// Moments `m_j = ∫ t^j dμ` for `j ≤ degree`.
///
/// `m_0 = 1`, `m_1 = 0`, `m_j = m_{j-2} (j-1)/(n+j-2)`.
pub fn mu_moments(n: usize, degree: usize) -> Vec<Real> {
    let mut m = Vec::with_capacity(degree + 1);
    for j in 0..=degree {
        let v = match j {
            0 => one(),
            1 => zero(),
            _ => m[j - 2] * int(j as i64 - 1) / int((n + j) as i64 - 2),
        };
        m.push(v);
    }
    m
}

/// `∫ p dμ` from the moment sequence.
pub fn integrate_mu(p: &PolyPower, n: usize) -> Real {
    let m = mu_moments(n, p.degree());
    p.coeffs()
        .iter()
        .zip(&m)
        .fold(zero(), |acc, (&c, &mj)| acc + c * mj)
}

/// Weights `∫ L_i dμ` of the Lagrange basis on distinct `nodes`.
///
/// The weights are those of the unique rule that is exact up to degree
/// `len - 1`; for Gauss-type node sets the rule is exact beyond that.
pub fn lagrange_weights(n: usize, nodes: &[Real]) -> Vec<Real> {
    let mut w = PolyPower::one();
    for &x in nodes {
        w = w.mul_linear_root(x);
    }
    let moments = mu_moments(n, nodes.len());
    nodes
        .iter()
        .map(|&x| {
            let (q, _) = w.div_linear(x);
            let denom = q.eval(x);
            let integral = q
                .coeffs()
                .iter()
                .zip(&moments)
                .fold(zero(), |acc, (&c, &mj)| acc + c * mj);
            integral / denom
        })
        .collect()
}

/// A positive quadrature for μ.
#[derive(Debug, Clone, Serialize)]
pub struct BaseQuadrature {
    pub n: usize,
    #[serde(serialize_with = "serialize_reals")]
    pub nodes: Vec<Real>,
    #[serde(serialize_with = "serialize_reals")]
    pub weights: Vec<Real>,
    pub exactness_degree: usize,
}

impl BaseQuadrature {
    pub fn apply(&self, f: impl Fn(Real) -> Real) -> Real {
        self.nodes
            .iter()
            .zip(&self.weights)
            .fold(zero(), |acc, (&x, &w)| acc + w * f(x))
    }

    pub fn integrate(&self, p: &PolyPower) -> Real {
        self.apply(|t| p.eval(t))
    }

    /// Largest relative moment error up to the exactness degree.
    pub fn moment_error(&self) -> f64 {
        let m = mu_moments(self.n, self.exactness_degree);
        let mut worst = 0.0f64;
        for (j, &mj) in m.iter().enumerate() {
            let got = self.apply(|t| t.powi(j as i32));
            let scale = if mj == zero() { one() } else { mj.abs() };
            worst = worst.max(to_f64((got - mj).abs() / scale));
        }
        worst
    }
}

fn positive_rule(n: usize, nodes: Vec<Real>, exactness_degree: usize) -> Result<BaseQuadrature> {
    let weights = lagrange_weights(n, &nodes);
    if let Some((index, w)) = weights.iter().enumerate().find(|(_, w)| **w <= zero()) {
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

/// Radau rule with nodes at the zeros of `P_k^{1,0}` and at `1`, exact
/// to degree `2k`.
pub fn radau_right_rule(n: usize, k: usize) -> Result<BaseQuadrature> {
    check_dimension(n)?;
    if k < 1 {
        return Err(BoundError::Argument("Radau rule needs k >= 1".into()));
    }
    let fam = adjacent10_family(n, k)?;
    let mut nodes = fam.zeros[k].clone();
    nodes.push(one());
    positive_rule(n, nodes, 2 * k)
}

/// Gauss rule at the zeros of `P_k^{(n)}`, exact to degree `2k - 1`.
pub fn gauss_rule(n: usize, k: usize) -> Result<BaseQuadrature> {
    check_dimension(n)?;
    if k < 1 {
        return Err(BoundError::Argument("Gauss rule needs k >= 1".into()));
    }
    let fam = gegenbauer_family(n, k)?;
    positive_rule(n, fam.zeros[k].clone(), 2 * k - 1)
}
