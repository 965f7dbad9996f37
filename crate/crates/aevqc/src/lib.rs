//! Hybrid image classification with a quantum head in place of global pooling.
//!
//! A classical convolutional backbone extracts feature maps; instead of
//! collapsing them with global average/max pooling, the quantum variant
//! amplitude-encodes the flattened features into ceil(log2 N) qubits, evolves
//! the state through a trainable ansatz, and reads out per-qubit Pauli-Z
//! expectations as the feature vector for the final classifier. Both variants
//! share the backbone, the trainer, and the evaluation harness, so the two
//! heads can be compared like for like.
//!
//! The crate is organized along the pipeline:
//!
//! - [`quantum`]: dense state-vector simulation (states, gates, circuits)
//! - [`grad`]: analytic gradients of Z-expectations (adjoint, parameter-shift,
//!   input gradients through the encoding)
//! - [`head`]: amplitude encoding, the two ansatz families, parameter counting
//! - [`nn`]: a small from-scratch classical stack (conv, pooling, dense,
//!   softmax cross-entropy, Adam)
//! - [`pipeline`]: model assembly, training, checkpoints
//! - [`data`]: PGM/PPM directory loading and a seeded synthetic generator
//! - [`metrics`]: accuracy, macro-F1, confusion matrices
//!
//! A long-form guide lives under [`guide`]; its chapters double as doc-tests.

pub mod data;
pub mod error;
pub mod grad;
pub mod guide;
pub mod head;
pub mod metrics;
pub mod nn;
pub mod pipeline;
pub mod quantum;
pub mod rng;

pub use error::{Error, Result};
