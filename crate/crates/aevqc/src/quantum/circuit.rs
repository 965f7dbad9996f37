//! Ordered gate programs with parameter slots.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::quantum::gate::{apply_gate, Gate};
use crate::quantum::state::StateVector;

/// An ordered gate list over a fixed register, with `n_params` parameter
/// slots shared by its rotation gates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Circuit {
    n_qubits: usize,
    gates: Vec<Gate>,
    n_params: usize,
}

impl Circuit {
    /// Validate the gate list and derive the parameter count
    /// (1 + max referenced slot; 0 when nothing is parameterized).
    /// Every slot below the maximum must be referenced by at least one gate.
    pub fn new(n_qubits: usize, gates: Vec<Gate>) -> Result<Self> {
        if n_qubits == 0 || n_qubits > crate::quantum::state::MAX_QUBITS {
            return Err(Error::Capacity(n_qubits));
        }
        for gate in &gates {
            gate.validate(n_qubits)?;
        }
        let n_params = gates
            .iter()
            .filter_map(Gate::param_slot)
            .max()
            .map_or(0, |max| max + 1);
        let mut referenced = vec![false; n_params];
        for slot in gates.iter().filter_map(Gate::param_slot) {
            referenced[slot] = true;
        }
        if let Some(unused) = referenced.iter().position(|r| !r) {
            return Err(Error::UnusedParamSlot(unused));
        }
        Ok(Self { n_qubits, gates, n_params })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn n_params(&self) -> usize {
        self.n_params
    }

    /// Apply the gates in list order to `state`.
    pub fn run_in_place(&self, state: &mut StateVector, params: &[f64]) -> Result<()> {
        if state.n_qubits() != self.n_qubits {
            return Err(Error::Shape(format!(
                "circuit over {} qubits applied to a {}-qubit state",
                self.n_qubits,
                state.n_qubits()
            )));
        }
        if params.len() != self.n_params {
            return Err(Error::ParamCount { expected: self.n_params, got: params.len() });
        }
        for gate in &self.gates {
            apply_gate(state, gate, params)?;
        }
        Ok(())
    }

    /// Run on a copy of `input`.
    pub fn run(&self, input: &StateVector, params: &[f64]) -> Result<StateVector> {
        let mut state = input.clone();
        self.run_in_place(&mut state, params)?;
        Ok(state)
    }

    /// Text dump: header `qubits=<n> params=<P>`, then one gate per line as
    /// `KIND target[,target2] [slot=k]`.
    pub fn dump(&self) -> String {
        let mut out = format!("qubits={} params={}\n", self.n_qubits, self.n_params);
        for gate in &self.gates {
            let targets: Vec<String> = gate.targets().iter().map(ToString::to_string).collect();
            let _ = write!(out, "{} {}", gate.kind().name(), targets.join(","));
            if let Some(slot) = gate.param_slot() {
                let _ = write!(out, " slot={slot}");
            }
            out.push('\n');
        }
        out
    }
}
