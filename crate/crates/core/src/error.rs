use thiserror::Error;

/// Errors raised by the constructions and verifiers.
///
/// The variants group into three families that the command-line front end
/// maps onto exit codes: invalid input or parameters, violated hypotheses of
/// a construction, and numerical non-certification.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("sample index {index} out of range (len {len})")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("invalid profile: {0}")]
    InvalidProfile(String),

    #[error("invalid surface metric: {0}")]
    InvalidMetric(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("too few samples: need at least {need}, got {got}")]
    TooFewSamples { need: usize, got: usize },

    #[error("hypothesis {clause} violated: {detail}")]
    Hypothesis { clause: String, detail: String },

    #[error("admissibility: {0}")]
    Admissibility(String),

    #[error("infeasible parameters: {0}")]
    Infeasible(String),

    #[error("not converged: {0}")]
    NotConverged(String),

    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl Error {
    pub fn hypothesis(clause: impl Into<String>, detail: impl Into<String>) -> Self {
        Error::Hypothesis {
            clause: clause.into(),
            detail: detail.into(),
        }
    }

    /// Coarse classification used for exit codes.
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::IndexOutOfRange { .. }
            | Error::InvalidProfile(_)
            | Error::InvalidMetric(_)
            | Error::Domain(_)
            | Error::TooFewSamples { .. } => ErrorKind::Input,
            Error::Hypothesis { .. } | Error::Admissibility(_) | Error::Infeasible(_) => {
                ErrorKind::Hypothesis
            }
            Error::NotConverged(_) | Error::Numerical(_) => ErrorKind::Numerical,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Input,
    Hypothesis,
    Numerical,
}

pub type Result<T> = std::result::Result<T, Error>;
