use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Numeric and validation failures raised by the estimators and samplers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("moment M_{{{j}/2}} of F(.,{nu2}) does not exist: need j < {nu2}")]
    MomentDoesNotExist { j: u32, nu2: u32 },

    #[error("equal scales: the two distributions never cross, no changepoint")]
    NoChangepoint,

    #[error("equal sample standard deviations: the changepoint estimate is undefined")]
    DegenerateRatio,

    #[error("series truncation k = {k} exceeds the bound {max} (n2 - 2)")]
    TruncationBound { k: u32, max: u32 },

    #[error("at least 3 observations are needed in the arm with the larger SD, got {n}")]
    InsufficientData { n: u32 },

    #[error("relative width is undefined when the true changepoint is 0")]
    UndefinedRelativeWidth,

    #[error("all {b} bootstrap replicates were degenerate")]
    AllReplicatesDegenerate { b: usize },

    #[error("empty input")]
    EmptyInput,

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
