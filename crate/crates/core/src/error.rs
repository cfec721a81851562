use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    /// The reduced dynamics cannot be set up (G = 0): the effective frequency
    /// and ladder operators of the reduced oscillator do not exist.
    #[error("reduction undefined: {0}")]
    UndefinedReduction(String),

    #[error("degenerate constraint set: {0}")]
    DegenerateConstraints(String),

    #[error("structural error: {0}")]
    Structural(String),

    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error(
        "insufficient truncation: {found} band states resolved at n_per_mode = {n_per_mode} \
         (need {needed}); try n_per_mode >= {suggested}"
    )]
    InsufficientTruncation {
        n_per_mode: usize,
        found: usize,
        needed: usize,
        suggested: usize,
    },

    #[error("basis dimension {dim} exceeds cap {cap}")]
    DimensionCap { dim: usize, cap: usize },

    #[error("internal consistency failure: {0}")]
    Consistency(String),

    #[error("model validity: {0}")]
    ModelValidity(String),

    #[error("eigensolver failed: {0}")]
    Eigen(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
