use thiserror::Error;

/// One violated admissibility constraint on a multi-exponent.
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    /// Σ 1/q_i differs from (or, in inequality mode, exceeds) the required value.
    ExponentSum { actual: f64, required: f64 },
    /// Some q_i lies outside the allowed interval.
    Range {
        index: usize,
        value: f64,
        lo: f64,
        hi: f64,
    },
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Violation::ExponentSum { actual, required } => write!(
                f,
                "exponent sum: sum of 1/q_i is {actual}, required {required}"
            ),
            Violation::Range {
                index,
                value,
                lo,
                hi,
            } => write!(
                f,
                "range: q_{} = {value} is outside [{lo}, {hi}]",
                index + 1
            ),
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("inadmissible exponent: {}", join_violations(.0))]
    Admissibility(Vec<Violation>),

    #[error("root finder did not converge within {iters} iterations")]
    Convergence { iters: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid tensor: {0}")]
    InvalidTensor(String),

    #[error("enumeration cap exceeded: n*(m-1) = {need} > cap {cap}")]
    CapExceeded { need: usize, cap: usize },

    #[error("certified ratio {ratio} exceeds the proven upper bound {bound}")]
    CeilingViolation { ratio: f64, bound: f64 },
}

fn join_violations(v: &[Violation]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
