use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum FabError {
    #[error("domain error in {function}: {detail}")]
    Domain { function: &'static str, detail: String },

    #[error("range error in {function}: {detail}")]
    Range { function: &'static str, detail: String },

    /// A root solve could not bracket or converge.
    #[error("numerical failure at theta0 = {theta0}: {detail}")]
    NumericalFailure { theta0: f64, detail: String },

    #[error("region is open-ended: no boundary found within |theta0 - y| <= {limit}")]
    OpenRegion { limit: f64 },

    #[error("unsupported model: {0}")]
    Unsupported(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("design matrix is rank deficient (condition number {condition:.3e})")]
    RankDeficient { condition: f64 },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("support truncation insufficient: accumulated mass {mass} < {required}")]
    Truncation { mass: f64, required: f64 },
}

impl FabError {
    pub(crate) fn domain(function: &'static str, detail: impl Into<String>) -> Self {
        FabError::Domain {
            function,
            detail: detail.into(),
        }
    }

    pub(crate) fn range(function: &'static str, detail: impl Into<String>) -> Self {
        FabError::Range {
            function,
            detail: detail.into(),
        }
    }

    /// True for errors that stem from a numerical solve rather than bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            FabError::NumericalFailure { .. }
                | FabError::OpenRegion { .. }
                | FabError::Range { .. }
                | FabError::RankDeficient { .. }
                | FabError::Truncation { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, FabError>;
