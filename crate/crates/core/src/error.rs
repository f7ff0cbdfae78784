use thiserror::Error;

/// Errors raised by the simulation and the experiment harness.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A time or index lies outside the valid range.
    #[error("range error: {0}")]
    Range(String),

    /// The dense state would exceed the supported qubit count.
    #[error("capacity error: {0} qubits requested, supported range is [1, {max}]", max = crate::state::MAX_QUBITS)]
    Capacity(usize),

    /// Two operands disagree in size.
    #[error("size mismatch: expected {expected}, got {actual}")]
    SizeMismatch { expected: usize, actual: usize },

    /// The requested phase cannot be reached with a non-negative hold time.
    #[error("target phase {target} rad unreachable: the ramps alone accumulate {ramp_only} rad")]
    Unreachable { target: f64, ramp_only: f64 },

    /// The state is not normalized.
    #[error("state norm {0} differs from 1")]
    NotNormalized(f64),

    /// Invalid configuration.
    #[error("config: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
