use thiserror::Error;

/// Errors raised by the bound constructions.
#[derive(Debug, Clone, Error)]
pub enum BoundError {
    #[error("invalid argument: {0}")]
    Argument(String),

    /// A hypothesis of the construction does not hold for the given input.
    #[error("hypothesis `{hypothesis}` violated: {detail}")]
    Precondition {
        hypothesis: &'static str,
        detail: String,
    },

    #[error("s = {s} lies outside the admissible window [{lo}, {hi}]")]
    Range { s: f64, lo: f64, hi: f64 },

    #[error("quadrature weight rho_{index} = {value:e} is not positive")]
    NonPositiveWeight { index: usize, value: f64 },

    #[error("numeric failure: {0}")]
    Numeric(String),

    #[error("degenerate configuration: {0}")]
    Degenerate(String),

    #[error("potential is not finite at t = {t}")]
    Domain { t: f64 },

    #[error("M = {m} is out of range; achievable L_2k ranges: {}", format_ranges(.ranges))]
    MOutOfRange {
        m: f64,
        ranges: Vec<(usize, f64, f64)>,
    },

    #[error("hypothesis violation: {0}")]
    Hypothesis(String),
}

fn format_ranges(ranges: &[(usize, f64, f64)]) -> String {
    if ranges.is_empty() {
        return "none".to_string();
    }
    ranges
        .iter()
        .map(|(k, lo, hi)| format!("k={k}: [{lo:.6}, {hi:.6}]"))
        .collect::<Vec<_>>()
        .join(", ")
}

impl BoundError {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            BoundError::Numeric(_) => 3,
            _ => 2,
        }
    }

    pub(crate) fn precondition(hypothesis: &'static str, detail: impl Into<String>) -> Self {
        BoundError::Precondition {
            hypothesis,
            detail: detail.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, BoundError>;
