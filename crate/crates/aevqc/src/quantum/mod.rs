//! State-vector simulation: states, gates, and circuits.

mod circuit;
mod gate;
mod state;

pub use circuit::Circuit;
pub use gate::{apply_gate, apply_gate_inverse, one_qubit_matrix, Gate, GateKind};
pub use state::{StateVector, MAX_QUBITS};

pub(crate) use gate::apply_one_qubit_matrix;
