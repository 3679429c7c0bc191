//! Lower bounds for the `h`-energy of `M`-point codes with inner products in
//! `[ℓ, 1)`, obtained from the Hermite interpolant of `h` at the nodes of the
//! quadrature attached to `f_{2k}^{(n,ℓ,s)}`.

use std::fmt;
use std::path::Path;

use serde::Serialize;

use crate::error::{BoundError, Result};
use crate::krein;
use crate::levenshtein::{
    bound_from, classical_even_bound, even_validity_range, status_of, CheckOutcome, Checks,
    EvenBoundCurve,
};
use crate::orthopoly::{
    adjacent11_family, check_dimension, integrate_mu, pd_verdict, GegenbauerExpansion, PdCheck,
    PD_TOLERANCE,
};
use crate::poly::PolyPower;
use crate::real::{int, one, to_f64, to_f64_vec, zero, Real};
use crate::signed_ortho::{DEFAULT_K_CAP, WINDOW_SLACK};

/// Default number of Chebyshev points for the sampled `g ≤ h` check.
pub const DEFAULT_GRID: usize = 2048;

/// Right end of the sampled interval is `1 - CHECK_GAP`.
pub const CHECK_GAP: f64 = 1e-6;

/// Step for central differences when a table has no derivative column.
pub const DIFF_STEP: f64 = 1e-6;

/// Relative tolerance for the two bound expressions.
pub const IDENTITY_TOLERANCE: f64 = 1e-9;

/// Potential `h(t)` as a function of the inner product `t`.
#[derive(Debug, Clone, PartialEq)]
pub enum Potential {
    /// `(2 - 2t)^{-σ/2}`.
    Riesz(f64),
    /// `exp(-c(2 - 2t))`.
    Gaussian(f64),
    /// `-½ ln(2 - 2t)`.
    Log,
    /// Polynomial in `t`, coefficients in ascending order.
    Poly(Vec<f64>),
    Table(TablePotential),
}

/// Tabulated potential with linear interpolation.
#[derive(Debug, Clone, PartialEq)]
pub struct TablePotential {
    pub t: Vec<f64>,
    pub h: Vec<f64>,
    pub dh: Option<Vec<f64>>,
}

impl TablePotential {
    /// Reads rows `t h [h']` separated by whitespace or commas; `#` starts a
    /// comment.
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| BoundError::Argument(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut rows: Vec<Vec<f64>> = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let fields: std::result::Result<Vec<f64>, _> = line
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|f| !f.is_empty())
                .map(str::parse::<f64>)
                .collect();
            let fields = fields.map_err(|e| {
                BoundError::Argument(format!("potential table line {}: {e}", lineno + 1))
            })?;
            if fields.len() != 2 && fields.len() != 3 {
                return Err(BoundError::Argument(format!(
                    "potential table line {}: expected 2 or 3 columns, found {}",
                    lineno + 1,
                    fields.len()
                )));
            }
            rows.push(fields);
        }
        if rows.len() < 2 {
            return Err(BoundError::Argument("potential table needs at least two rows".into()));
        }
        let width = rows[0].len();
        if rows.iter().any(|r| r.len() != width) {
            return Err(BoundError::Argument("potential table rows differ in width".into()));
        }
        if rows.windows(2).any(|w| w[1][0] <= w[0][0]) {
            return Err(BoundError::Argument("potential table abscissae must increase".into()));
        }
        Ok(TablePotential {
            t: rows.iter().map(|r| r[0]).collect(),
            h: rows.iter().map(|r| r[1]).collect(),
            dh: (width == 3).then(|| rows.iter().map(|r| r[2]).collect()),
        })
    }

    fn interpolate(&self, ys: &[f64], t: f64) -> Result<f64> {
        let last = self.t.len() - 1;
        if !(t >= self.t[0] && t <= self.t[last]) {
            return Err(BoundError::Domain { t });
        }
        let i = match self.t.partition_point(|&x| x <= t) {
            0 => 0,
            p if p > last => last - 1,
            p => p - 1,
        };
        let w = (t - self.t[i]) / (self.t[i + 1] - self.t[i]);
        Ok(ys[i] + w * (ys[i + 1] - ys[i]))
    }

    fn upper(&self) -> f64 {
        self.t[self.t.len() - 1]
    }
}

impl Potential {
    /// Parses `riesz:<σ>`, `gaussian:<c>`, `log`, `newton`, `file:<path>` or
    /// `poly:<c0>,<c1>,...`. `newton` is the Riesz potential with `σ = n - 2`.
    pub fn parse(spec: &str, n: usize) -> Result<Self> {
        let (name, arg) = match spec.split_once(':') {
            Some((a, b)) => (a.trim(), Some(b.trim())),
            None => (spec.trim(), None),
        };
        let number = |what: &str| -> Result<f64> {
            let raw = arg.ok_or_else(|| BoundError::Argument(format!("{name} needs a parameter: {what}")))?;
            let v: f64 = raw
                .parse()
                .map_err(|_| BoundError::Argument(format!("bad {what} in potential `{spec}`")))?;
            if !v.is_finite() {
                return Err(BoundError::Argument(format!("bad {what} in potential `{spec}`")));
            }
            Ok(v)
        };
        match name {
            "riesz" => Ok(Potential::Riesz(number("exponent")?)),
            "gaussian" => Ok(Potential::Gaussian(number("scale")?)),
            "log" if arg.is_none() => Ok(Potential::Log),
            "newton" if arg.is_none() => {
                check_dimension(n)?;
                Ok(Potential::Riesz((n - 2) as f64))
            }
            "file" => {
                let path = arg.ok_or_else(|| BoundError::Argument("file needs a path".into()))?;
                Ok(Potential::Table(TablePotential::from_file(Path::new(path))?))
            }
            "poly" => {
                let raw = arg.ok_or_else(|| BoundError::Argument("poly needs coefficients".into()))?;
                let coeffs: std::result::Result<Vec<f64>, _> =
                    raw.split(',').map(|c| c.trim().parse::<f64>()).collect();
                let coeffs = coeffs
                    .map_err(|_| BoundError::Argument(format!("bad coefficients in `{spec}`")))?;
                Ok(Potential::Poly(coeffs))
            }
            _ => Err(BoundError::Argument(format!("unknown potential `{spec}`"))),
        }
    }

    /// True when `h'` is replaced by central differences.
    pub fn derivative_approximated(&self) -> bool {
        matches!(self, Potential::Table(t) if t.dh.is_none())
    }

    /// Largest `t` at which `h` may be evaluated.
    fn upper(&self) -> f64 {
        match self {
            Potential::Table(t) => t.upper(),
            Potential::Poly(_) | Potential::Gaussian(_) => 1.0,
            _ => 1.0 - CHECK_GAP,
        }
    }

    pub fn value(&self, t: Real) -> Result<Real> {
        let x = to_f64(t);
        let v = match self {
            Potential::Poly(c) => return Ok(PolyPower::from_f64(c).eval(t)),
            Potential::Riesz(sigma) => {
                if x >= 1.0 {
                    return Err(BoundError::Domain { t: x });
                }
                to_f64(int(2) - int(2) * t).powf(-sigma / 2.0)
            }
            Potential::Gaussian(c) => (2.0 * c * to_f64(t - one())).exp(),
            Potential::Log => {
                if x >= 1.0 {
                    return Err(BoundError::Domain { t: x });
                }
                -0.5 * to_f64(int(2) - int(2) * t).ln()
            }
            Potential::Table(tab) => tab.interpolate(&tab.h, x)?,
        };
        finite(v, x)
    }

    pub fn derivative(&self, t: Real) -> Result<Real> {
        let x = to_f64(t);
        let v = match self {
            Potential::Poly(c) => return Ok(PolyPower::from_f64(c).derivative().eval(t)),
            Potential::Riesz(sigma) => {
                if x >= 1.0 {
                    return Err(BoundError::Domain { t: x });
                }
                sigma * to_f64(int(2) - int(2) * t).powf(-sigma / 2.0 - 1.0)
            }
            Potential::Gaussian(c) => 2.0 * c * (2.0 * c * to_f64(t - one())).exp(),
            Potential::Log => {
                if x >= 1.0 {
                    return Err(BoundError::Domain { t: x });
                }
                0.5 / to_f64(one() - t)
            }
            Potential::Table(tab) => match &tab.dh {
                Some(dh) => tab.interpolate(dh, x)?,
                None => {
                    let up = tab.interpolate(&tab.h, x + DIFF_STEP)?;
                    let down = tab.interpolate(&tab.h, x - DIFF_STEP)?;
                    (up - down) / (2.0 * DIFF_STEP)
                }
            },
        };
        finite(v, x)
    }
}

fn finite(v: f64, t: f64) -> Result<Real> {
    if v.is_finite() {
        Ok(Real::from(v))
    } else {
        Err(BoundError::Domain { t })
    }
}

impl fmt::Display for Potential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Potential::Riesz(s) => write!(f, "riesz:{s}"),
            Potential::Gaussian(c) => write!(f, "gaussian:{c}"),
            Potential::Log => write!(f, "log"),
            Potential::Poly(c) => {
                let parts: Vec<String> = c.iter().map(|x| x.to_string()).collect();
                write!(f, "poly:{}", parts.join(","))
            }
            Potential::Table(t) => write!(
                f,
                "table[{} rows{}]",
                t.t.len(),
                if t.dh.is_some() { ", with derivative" } else { "" }
            ),
        }
    }
}

/// Solution of `L_{2k}(n; [ℓ, s]) = M`.
#[derive(Debug, Clone, Serialize)]
pub struct SSolution {
    pub k: usize,
    pub s: f64,
    #[serde(skip)]
    pub s_exact: Real,
    /// `(k, L at window start, L at window end)` for every `k` examined.
    pub ranges: Vec<(usize, f64, f64)>,
    /// Degrees whose solution `s` kept `f_{2k}` positive definite.
    pub feasible_k: Vec<usize>,
    #[serde(skip)]
    curve: Option<EvenBoundCurve>,
}

fn bisect_increasing(f: impl Fn(Real) -> Real, target: Real, mut lo: Real, mut hi: Real) -> Real {
    for _ in 0..200 {
        let mid = (lo + hi) / int(2);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let (flo, fhi) = (f(lo), f(hi));
    if (flo - target).abs() <= (fhi - target).abs() {
        lo
    } else {
        hi
    }
}

/// Finds `(k, s)` with `L_{2k}(n; [ℓ, s]) = M`, ascending in `k` and keeping
/// the largest `k` whose `f_{2k}` is positive definite.
pub fn solve_s_for_m(n: usize, ell: impl Into<Real>, m: f64) -> Result<SSolution> {
    check_dimension(n)?;
    let ell = ell.into();
    if !(m.is_finite() && m > 1.0) {
        return Err(BoundError::Argument(format!("M must exceed 1, got {m}")));
    }
    let target = Real::from(m);
    let slack = Real::from(WINDOW_SLACK);
    let mut ranges = Vec::new();
    let mut best: Option<(usize, Real, EvenBoundCurve)> = None;
    let mut feasible_k = Vec::new();
    for k in 1..=DEFAULT_K_CAP {
        let curve = match EvenBoundCurve::new(n, ell, k) {
            Ok(c) => c,
            Err(BoundError::Precondition { .. }) => break,
            Err(e) => return Err(e),
        };
        let (lo, hi) = curve.window;
        let (l_lo, l_hi) = (curve.formula(lo), curve.formula(hi));
        ranges.push((k, to_f64(l_lo), to_f64(l_hi)));
        if l_lo > target + slack * target {
            break;
        }
        if target > l_hi {
            continue;
        }
        let s = bisect_increasing(|s| curve.formula(s), target, lo, hi);
        if curve.value(s).is_none() {
            continue;
        }
        let lev = curve.polynomial(s)?;
        if pd_verdict(&lev.gegenbauer.coeffs, false, PD_TOLERANCE).holds {
            feasible_k.push(k);
            best = Some((k, s, curve));
        }
    }
    match best {
        Some((k, s, curve)) => Ok(SSolution {
            k,
            s: to_f64(s),
            s_exact: s,
            ranges,
            feasible_k,
            curve: Some(curve),
        }),
        None => Err(BoundError::MOutOfRange { m, ranges }),
    }
}

/// Polynomial matching `h` at simple nodes and `h, h'` at double nodes.
#[derive(Debug, Clone, Serialize)]
pub struct HermiteInterpolant {
    /// `(node, multiplicity)`.
    pub nodes: Vec<(f64, usize)>,
    pub coeffs: PolyPower,
    pub gegenbauer: Vec<f64>,
    pub g_at_1: f64,
    /// Largest interpolation residual relative to `max(1, |h|)`.
    pub max_residual: f64,
    #[serde(skip)]
    pub nodes_exact: Vec<(Real, usize)>,
    #[serde(skip)]
    pub expansion: Option<GegenbauerExpansion>,
}

/// Newton-form Hermite interpolation with generalized divided differences.
/// The Gegenbauer expansion is filled in when `n` is given.
pub fn hermite_interpolate(
    nodes: &[(Real, usize)],
    h: &Potential,
    n: Option<usize>,
) -> Result<HermiteInterpolant> {
    if nodes.is_empty() {
        return Err(BoundError::Argument("no interpolation nodes".into()));
    }
    let mut z = Vec::new();
    for &(t, mult) in nodes {
        if !(1..=2).contains(&mult) {
            return Err(BoundError::Argument(format!("node multiplicity {mult} is not 1 or 2")));
        }
        z.extend(std::iter::repeat_n(t, mult));
    }
    let values: Vec<Real> = z.iter().map(|&t| h.value(t)).collect::<Result<_>>()?;
    let mut column = values.clone();
    let mut newton = vec![column[0]];
    for order in 1..z.len() {
        let mut next = Vec::with_capacity(column.len() - 1);
        for i in 0..column.len() - 1 {
            let (a, b) = (z[i], z[i + order]);
            if a == b {
                // only reachable for order 1 with multiplicities at most 2
                next.push(h.derivative(a)?);
            } else {
                next.push((column[i + 1] - column[i]) / (b - a));
            }
        }
        newton.push(next[0]);
        column = next;
    }
    // back-substitution of the Newton form into the power basis
    let mut g = PolyPower::constant(newton[z.len() - 1]);
    for i in (0..z.len() - 1).rev() {
        g = &g.mul_linear_root(z[i]) + &PolyPower::constant(newton[i]);
    }

    let mut max_residual = 0f64;
    for &(t, mult) in nodes {
        let hv = h.value(t)?;
        let scale = hv.abs().max(one());
        max_residual = max_residual.max(to_f64((g.eval(t) - hv).abs() / scale));
        if mult == 2 {
            let dv = h.derivative(t)?;
            let (_, dg) = g.eval_with_derivative(t);
            max_residual = max_residual.max(to_f64((dg - dv).abs() / dv.abs().max(one())));
        }
    }
    let expansion = n.map(|n| GegenbauerExpansion::from_power(&g, n));
    Ok(HermiteInterpolant {
        nodes: nodes.iter().map(|&(t, m)| (to_f64(t), m)).collect(),
        g_at_1: to_f64(g.eval(one())),
        gegenbauer: expansion.as_ref().map(|e| e.coeffs_f64()).unwrap_or_default(),
        coeffs: g,
        max_residual,
        nodes_exact: nodes.to_vec(),
        expansion,
    })
}

/// Findings of the membership test `g ∈ G_{n,ℓ;h}`.
#[derive(Debug, Clone, Serialize)]
pub struct GMembership {
    /// The `g ≤ h` part is checked on sample points only.
    pub sampled: bool,
    pub grid_size: usize,
    pub points_checked: usize,
    pub g_below_h: bool,
    /// Largest `g - h` relative to `max(1, |h|)`, and where it occurs.
    pub max_excess: f64,
    pub worst_t: f64,
    pub g0_positive: bool,
    pub positive_definite: PdCheck,
}

/// Samples `g ≤ h` at Chebyshev points of `[ℓ, 1 - 1e-6]` and at midpoints
/// between consecutive nodes; checks `g_0 > 0` and positive definiteness.
pub fn verify_g_in_g(
    interp: &HermiteInterpolant,
    h: &Potential,
    n: usize,
    ell: Real,
    grid_size: usize,
) -> Result<GMembership> {
    let expansion = match &interp.expansion {
        Some(e) if e.n == n => e.clone(),
        _ => GegenbauerExpansion::from_power(&interp.coeffs, n),
    };
    let top = Real::from((1.0 - CHECK_GAP).min(h.upper()));
    let mut points = Vec::with_capacity(grid_size + interp.nodes.len());
    let (mid, half) = ((ell + top) / int(2), (top - ell) / int(2));
    for j in 0..grid_size {
        let theta = std::f64::consts::PI * (2 * j + 1) as f64 / (2 * grid_size) as f64;
        points.push(mid + half * Real::from(theta.cos()));
    }
    let mut sorted: Vec<Real> = interp.nodes_exact.iter().map(|&(t, _)| t).collect();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    for w in sorted.windows(2) {
        points.push((w[0] + w[1]) / int(2));
    }
    let (mut max_excess, mut worst_t) = (f64::NEG_INFINITY, f64::NAN);
    let mut checked = 0;
    for t in points {
        if t < ell || t > top {
            continue;
        }
        let hv = h.value(t)?;
        let excess = to_f64((interp.coeffs.eval(t) - hv) / hv.abs().max(one()));
        checked += 1;
        if excess > max_excess {
            max_excess = excess;
            worst_t = to_f64(t);
        }
    }
    // the constant term only shifts the bound; positivity is needed from degree 1 on
    let pd = pd_verdict(&expansion.coeffs[1.min(expansion.coeffs.len())..], false, PD_TOLERANCE);
    Ok(GMembership {
        sampled: true,
        grid_size,
        points_checked: checked,
        g_below_h: max_excess <= 1e-10,
        max_excess,
        worst_t,
        g0_positive: expansion.zeroth() > zero(),
        positive_definite: pd,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct EnergyReport {
    pub n: usize,
    #[serde(rename = "M")]
    pub m: f64,
    pub ell: f64,
    pub potential: String,
    pub derivative_approximated: bool,
    pub k: usize,
    pub s: f64,
    /// `M^2 Σ_{i≤k} ρ_i h(β_i)`.
    pub value: f64,
    /// `M (M g_0 - g(1))`.
    pub value_from_g: f64,
    /// `ℓ, β_1, …, β_{k-1}, s, 1`.
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub interpolant: HermiteInterpolant,
    pub membership: GMembership,
    pub solution: SSolution,
    pub checks: Checks,
    pub status: String,
}

/// Options for [`energy_lower_bound_with`].
#[derive(Debug, Clone, Copy)]
pub struct EnergyOptions {
    pub grid_size: usize,
}

impl Default for EnergyOptions {
    fn default() -> Self {
        EnergyOptions {
            grid_size: DEFAULT_GRID,
        }
    }
}

pub fn energy_lower_bound(n: usize, m: f64, ell: impl Into<Real>, h: &Potential) -> Result<EnergyReport> {
    energy_lower_bound_with(n, m, ell, h, EnergyOptions::default())
}

/// Lower bound on the `h`-energy of `M` points with inner products in
/// `[ℓ, 1)`. Fails when the interpolant is not positive definite; a failed
/// Krein check only marks the report as unverified.
pub fn energy_lower_bound_with(
    n: usize,
    m: f64,
    ell: impl Into<Real>,
    h: &Potential,
    opts: EnergyOptions,
) -> Result<EnergyReport> {
    let ell = ell.into();
    let solution = solve_s_for_m(n, ell, m)?;
    let (k, s) = (solution.k, solution.s_exact);
    let curve = solution.curve.as_ref().expect("solution carries its curve");
    let bound = bound_from(curve.polynomial(s)?)?;
    let rule = &bound.quadrature;
    let betas = &bound.polynomial.kernel.betas;

    let mut nodes = vec![(ell, 1)];
    nodes.extend(betas.iter().map(|&b| (b, 2)));
    nodes.push((s, 2));
    let interp = hermite_interpolate(&nodes, h, Some(n))?;
    let membership = verify_g_in_g(&interp, h, n, ell, opts.grid_size)?;
    if !membership.positive_definite.holds {
        return Err(BoundError::Hypothesis(format!(
            "interpolant is not positive definite: coefficient {} has relative value {:e}",
            membership.positive_definite.argmin, membership.positive_definite.min_relative
        )));
    }

    let mm = Real::from(m);
    let mut sum = zero();
    for i in 0..=k {
        sum += rule.weights[i] * h.value(rule.nodes[i])?;
    }
    let value = mm * mm * sum;
    let expansion = interp.expansion.as_ref().expect("expansion requested");
    let value_from_g = mm * (mm * expansion.zeroth() - interp.coeffs.eval(one()));

    let mut checks = Checks::new();
    let h_scale = (0..=k)
        .map(|i| h.value(rule.nodes[i]).map(|v| to_f64(v).abs()))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold(0f64, f64::max);
    let gap = to_f64((value - value_from_g).abs()) / (m * m * h_scale.max(f64::MIN_POSITIVE));
    checks.insert(
        "formula_identity".into(),
        CheckOutcome::new(
            gap <= IDENTITY_TOLERANCE,
            format!("|M^2 sum rho h - M(M g0 - g(1))| / (M^2 max|h|) = {gap:e}"),
        ),
    );
    let rho_m = to_f64((rule.weights[k + 1] * mm - one()).abs());
    checks.insert(
        "rho_times_m".into(),
        CheckOutcome::new(rho_m <= 1e-10, format!("|rho_(k+1) M - 1| = {rho_m:e}")),
    );
    checks.insert(
        "interpolation".into(),
        CheckOutcome::new(
            interp.max_residual <= 1e-10,
            format!("max relative residual {:e}", interp.max_residual),
        ),
    );
    checks.insert(
        "g_positive_definite".into(),
        CheckOutcome::new(
            true,
            format!("min coefficient / max = {:e}", membership.positive_definite.min_relative),
        ),
    );
    checks.insert(
        "g_below_h_sampled".into(),
        CheckOutcome::new(
            membership.g_below_h,
            format!(
                "max (g - h) / max(1, |h|) = {:e} at t = {} over {} sampled points",
                membership.max_excess, membership.worst_t, membership.points_checked
            ),
        ),
    );
    // g_0 > 0 belongs to the class of nonnegative potentials; for a potential
    // that is negative at ℓ it is reported but not required
    let h_ell = h.value(ell)?;
    checks.insert(
        "g0_positive".into(),
        CheckOutcome::new(
            membership.g0_positive || h_ell < zero(),
            format!("g_0 = {}, h(ell) = {}", to_f64(expansion.zeroth()), to_f64(h_ell)),
        ),
    );
    checks.insert(
        "f2k_positive_definite".into(),
        bound.checks["f2k_positive_definite"].clone(),
    );
    let lsk = match krein::lsk_check(n, ell, k, krein::KREIN_TOLERANCE) {
        Ok(r) => CheckOutcome::new(
            r.overall,
            match r.first_failure {
                None => "all pairs strictly positive definite".to_string(),
                Some((i, j)) => format!("pair ({i}, {j}) fails"),
            },
        ),
        Err(e) => CheckOutcome::new(false, e.to_string()),
    };
    checks.insert("l_strengthened_krein".into(), lsk);
    let status = status_of(&checks);

    Ok(EnergyReport {
        n,
        m,
        ell: to_f64(ell),
        potential: h.to_string(),
        derivative_approximated: h.derivative_approximated(),
        k,
        s: to_f64(s),
        value: to_f64(value),
        value_from_g: to_f64(value_from_g),
        nodes: to_f64_vec(&rule.nodes),
        weights: to_f64_vec(&rule.weights),
        interpolant: interp,
        membership,
        solution,
        checks,
        status,
    })
}

/// Energy bound at `ℓ = -1` computed only from the family orthogonal for
/// `(1 - t^2) dμ` and the classical even-degree quadrature.
#[derive(Debug, Clone, Serialize)]
pub struct ClassicalUlb {
    pub n: usize,
    #[serde(rename = "M")]
    pub m: f64,
    pub k: usize,
    pub s: f64,
    pub value: f64,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

fn classical_even_value(n: usize, k: usize, s: Real) -> Result<Real> {
    let fam = adjacent11_family(n, k)?;
    let kernel = fam.kernel_poly(k - 1, s);
    let f = (&kernel * &kernel).mul_linear_root(s).mul_linear_root(-one());
    Ok(f.eval(one()) / integrate_mu(&f, n))
}

pub fn classical_ulb(n: usize, m: f64, h: &Potential) -> Result<ClassicalUlb> {
    check_dimension(n)?;
    let target = Real::from(m);
    let mut ranges = Vec::new();
    for k in 1..=DEFAULT_K_CAP {
        let (lo, hi) = even_validity_range(n, k)?;
        let fam = adjacent11_family(n, k)?;
        let value = |s: Real| {
            let kernel = fam.kernel_poly(k - 1, s);
            let f = (&kernel * &kernel).mul_linear_root(s).mul_linear_root(-one());
            f.eval(one()) / integrate_mu(&f, n)
        };
        let (l_lo, l_hi) = (classical_even_value(n, k, lo)?, classical_even_value(n, k, hi)?);
        ranges.push((k, to_f64(l_lo), to_f64(l_hi)));
        if l_lo > target + Real::from(WINDOW_SLACK) * target {
            break;
        }
        if target > l_hi {
            continue;
        }
        let s = bisect_increasing(value, target, lo, hi);
        let bound = classical_even_bound(n, s, k)?;
        let mm = Real::from(m);
        let mut sum = zero();
        for i in 0..=k {
            sum += bound.rule.weights[i] * h.value(bound.rule.nodes[i])?;
        }
        return Ok(ClassicalUlb {
            n,
            m,
            k,
            s: to_f64(s),
            value: to_f64(mm * mm * sum),
            nodes: bound.nodes,
            weights: bound.weights,
        });
    }
    Err(BoundError::MOutOfRange { m, ranges })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_potentials() {
        assert_eq!(Potential::parse("riesz:1", 4).unwrap(), Potential::Riesz(1.0));
        assert_eq!(Potential::parse("newton", 5).unwrap(), Potential::Riesz(3.0));
        assert_eq!(Potential::parse("gaussian:0.5", 4).unwrap(), Potential::Gaussian(0.5));
        assert_eq!(Potential::parse("log", 4).unwrap(), Potential::Log);
        assert_eq!(Potential::parse("poly:1,2", 4).unwrap(), Potential::Poly(vec![1.0, 2.0]));
        assert!(Potential::parse("riesz", 4).is_err());
        assert!(Potential::parse("coulomb:1", 4).is_err());
    }

    #[test]
    fn table_interpolation() {
        let tab = TablePotential::parse("# t h\n-1 0\n0 1\n1, 3\n").unwrap();
        let p = Potential::Table(tab);
        assert!((to_f64(p.value(real(0.5)).unwrap()) - 2.0).abs() < 1e-15);
        assert!(p.derivative_approximated());
        assert!((to_f64(p.derivative(real(0.5)).unwrap()) - 2.0).abs() < 1e-8);
        assert!(p.value(real(1.5)).is_err());
    }

    fn real(x: f64) -> Real {
        Real::from(x)
    }

    #[test]
    fn solves_attained_case() {
        let sol = solve_s_for_m(7, -1.0, 56.0).unwrap();
        assert_eq!(sol.k, 2);
        assert!((sol.s - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn hermite_reproduces_polynomials() {
        let h = Potential::Poly(vec![0.5, -1.0, 2.0, 0.25, 1.0]);
        let nodes = [(real(-0.5), 1), (real(0.1), 2), (real(0.6), 2)];
        let g = hermite_interpolate(&nodes, &h, None).unwrap();
        let expected = PolyPower::from_f64(&[0.5, -1.0, 2.0, 0.25, 1.0]);
        assert!(g.coeffs.relative_distance(&expected) < 1e-28);

        let single = hermite_interpolate(&[(real(0.3), 1)], &Potential::Log, None).unwrap();
        assert_eq!(single.coeffs.degree(), 0);
    }

    #[test]
    fn constant_potential_counts_pairs() {
        let r = energy_lower_bound(7, 56.0, -1.0, &Potential::Poly(vec![1.0])).unwrap();
        assert_eq!(r.value, 56.0 * 56.0 - 56.0);
    }

    #[test]
    fn riesz_on_attained_configuration() {
        let r = energy_lower_bound(7, 56.0, -1.0, &Potential::Riesz(1.0)).unwrap();
        let expected = [-1.0, -1.0 / 3.0, 1.0 / 3.0, 1.0];
        for (a, b) in r.nodes.iter().zip(expected) {
            assert!((a - b).abs() < 1e-12);
        }
        assert_eq!(r.status, "verified", "{:?}", r.checks);
        let c = classical_ulb(7, 56.0, &Potential::Riesz(1.0)).unwrap();
        assert!((c.value - r.value).abs() < 1e-9 * r.value);
    }
}
