use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("cannot factorize {0}: input must be positive")]
    NonPositive(String),

    #[error("primality of {0} cannot be decided deterministically (above the Miller-Rabin base-set bound)")]
    BeyondDeterministicRange(String),

    #[error("pollard rho failed to split {0}")]
    RhoFailed(String),

    #[error("parameter {param} is not admissible for the {family} family: {reason}")]
    Inadmissible {
        family: &'static str,
        param: String,
        reason: String,
    },

    #[error("row {row}: {reason}")]
    Transcription { row: String, reason: String },

    #[error("row {0} is not present in the instantiated table")]
    MissingRow(String),

    #[error("{0}")]
    Usage(String),
}
