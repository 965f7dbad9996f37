//! The two ansatz families.
//!
//! Family A1 is D repeated layers of per-qubit RX rotations. Family A2 opens
//! with one layer of Hadamards (applied once, outside the repeated block),
//! then repeats D times: RX on every qubit, RZ on every qubit, and a CNOT
//! chain (0 -> 1), (1 -> 2), ..., (n-2 -> n-1). Parameter slots are assigned
//! gate-by-gate in circuit order starting at 0.

use std::fmt;
use std::str::FromStr;

use crate::error::Error;
use crate::quantum::{Circuit, Gate};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AnsatzFamily {
    /// Per-qubit RX layers only; n_qubits * D parameters.
    A1,
    /// Hadamard opening, then RX/RZ/CNOT-chain layers; 2 * n_qubits * D
    /// parameters. The CNOTs can entangle the register.
    A2,
}

impl fmt::Display for AnsatzFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AnsatzFamily::A1 => write!(f, "a1"),
            AnsatzFamily::A2 => write!(f, "a2"),
        }
    }
}

impl FromStr for AnsatzFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "a1" => Ok(AnsatzFamily::A1),
            "a2" => Ok(AnsatzFamily::A2),
            other => Err(Error::Config(format!("unknown ansatz {other:?}; expected \"a1\" or \"a2\""))),
        }
    }
}

/// A fully specified ansatz: family, register size, and layer count D.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AnsatzSpec {
    pub family: AnsatzFamily,
    pub n_qubits: usize,
    pub depth: usize,
}

impl AnsatzSpec {
    pub fn n_params(&self) -> usize {
        match self.family {
            AnsatzFamily::A1 => self.n_qubits * self.depth,
            AnsatzFamily::A2 => 2 * self.n_qubits * self.depth,
        }
    }
}

/// Compile an ansatz spec into a circuit.
pub fn build_ansatz(spec: &AnsatzSpec) -> Circuit {
    let n = spec.n_qubits;
    let mut gates = Vec::new();
    let mut slot = 0;
    match spec.family {
        AnsatzFamily::A1 => {
            for _ in 0..spec.depth {
                for q in 0..n {
                    gates.push(Gate::rx(q, slot));
                    slot += 1;
                }
            }
        }
        AnsatzFamily::A2 => {
            for q in 0..n {
                gates.push(Gate::h(q));
            }
            for _ in 0..spec.depth {
                for q in 0..n {
                    gates.push(Gate::rx(q, slot));
                    slot += 1;
                }
                for q in 0..n {
                    gates.push(Gate::rz(q, slot));
                    slot += 1;
                }
                for q in 0..n.saturating_sub(1) {
                    gates.push(Gate::cnot(q, q + 1));
                }
            }
        }
    }
    Circuit::new(n, gates).expect("ansatz construction yields a valid circuit")
}
