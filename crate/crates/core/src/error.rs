use thiserror::Error;

use crate::correction::CorrectionModel;
use crate::estimators::EstimatorKind;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("empty sample")]
    EmptySample,

    #[error("rank out of range: k = {k}, n = {n}")]
    RankOutOfRange { k: usize, n: usize },

    #[error("nonpositive weight at position {index}")]
    NonPositiveWeight { index: usize },

    #[error("need at least 2 observations, got {n}")]
    TooFewObservations { n: usize },

    #[error("non-finite observation at position {index}")]
    NonFinite { index: usize },

    #[error("model not defined for estimator: {model} is not available for {kind}")]
    UndefinedModel {
        kind: EstimatorKind,
        model: CorrectionModel,
    },

    #[error("probability {0} is outside (0, 1)")]
    InvalidProbability(f64),

    #[error("SD needs no calibration")]
    SdNeedsNoCalibration,

    #[error("degenerate estimator distribution (mean is zero)")]
    DegenerateDistribution,

    #[error("underdetermined fit: {points} point(s) after filtering, need at least 2")]
    UnderdeterminedFit { points: usize },

    #[error("singular design matrix: all sample sizes are equal")]
    SingularDesign,

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("output error: {0}")]
    Output(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Output(e.to_string())
    }
}
