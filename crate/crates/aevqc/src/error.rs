//! Error type shared across the crate.

use thiserror::Error;

/// Errors produced by simulation, training, and I/O operations.
#[derive(Debug, Error)]
pub enum Error {
    #[error("qubit count {0} outside the supported range 1..=24")]
    Capacity(usize),

    #[error("qubit index {qubit} out of range for a {n_qubits}-qubit register")]
    QubitIndex { qubit: usize, n_qubits: usize },

    #[error("CNOT control and target coincide (qubit {0})")]
    CnotSameQubit(usize),

    #[error("gate of kind {kind} must {expectation}")]
    InvalidGate { kind: &'static str, expectation: &'static str },

    #[error("parameter slot {0} is never referenced by any gate")]
    UnusedParamSlot(usize),

    #[error("expected {expected} parameters, got {got}")]
    ParamCount { expected: usize, got: usize },

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("input vector norm is below 1e-12; cannot normalize")]
    DegenerateInput,

    #[error("analytic gradient not supported for parameterized {0} gates")]
    UnsupportedGradient(&'static str),

    #[error("label {label} out of range for {n_classes} classes")]
    LabelIndex { label: usize, n_classes: usize },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("data error: {0}")]
    Data(String),

    #[error("non-finite loss at epoch {epoch}, batch {batch}; aborting before writing a corrupt checkpoint")]
    Divergence { epoch: usize, batch: usize },

    #[error("checkpoint format error: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
