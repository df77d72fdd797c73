use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("no gesture is active")]
    NoActiveGesture,

    #[error("gesture score is empty")]
    EmptyScore,

    #[error("gestures address different tract variables: `{0}` and `{1}`")]
    MixedTractVariables(String, String),

    #[error("integration diverged at t = {time_s:.6} s")]
    Diverged { time_s: f64 },

    #[error("non-divergence guard violated: d * {max_displacement:.4}^2 = {product:.4} >= k = {stiffness:.4}")]
    GuardViolation {
        max_displacement: f64,
        product: f64,
        stiffness: f64,
    },

    #[error("objective is non-finite at d = {d}")]
    DivergedFit { d: f64 },

    #[error("oscillators did not settle within {max_time_s} s")]
    Unconverged { max_time_s: f64 },

    #[error("settled phase for pair ({i}, {j}) is {phase:.6} rad, declared {declared}")]
    WrongSettledPhase {
        i: usize,
        j: usize,
        phase: f64,
        declared: &'static str,
    },

    #[error("speaker `{speaker}` has zero variance on channel `{channel}`")]
    DegenerateSpeaker { speaker: String, channel: String },

    #[error("series of length {len} is too short (need at least {min})")]
    TooShort { len: usize, min: usize },

    #[error("expected at least 2 channels, got {0}")]
    Arity(usize),

    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("missing channel `{0}`")]
    MissingChannel(String),

    #[error("time {time_s:.6} s lies outside the trajectory [0, {end_s:.6}] s")]
    OutOfBounds { time_s: f64, end_s: f64 },

    #[error("non-finite sample in channel `{channel}` at index {index}")]
    NonFinite { channel: String, index: usize },

    #[error("duplicate label `{0}`")]
    DuplicateLabel(String),

    #[error("cluster count {k} out of range 1..={n}")]
    ClusterCount { k: usize, n: usize },

    #[error("column `{0}` has zero variance")]
    ZeroVariance(String),

    #[error("empty group `{0}`")]
    EmptyGroup(String),

    #[error("{0}")]
    Validation(String),

    #[error("{path}: {source}")]
    Json { path: PathBuf, source: serde_json::Error },

    #[error("{path}: {source}")]
    Csv { path: PathBuf, source: csv::Error },

    #[error("singular value decomposition failed: {0}")]
    Decomposition(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    /// Whether the error stems from user input rather than an internal failure.
    pub fn is_validation(&self) -> bool {
        !matches!(
            self,
            Error::Io(_)
                | Error::Decomposition(_)
                | Error::Diverged { .. }
                | Error::DivergedFit { .. }
                | Error::Unconverged { .. }
        )
    }
}
