//! The quantum classification head: amplitude encoding of flattened backbone
//! features, a trainable ansatz, and Pauli-Z readout.

mod ansatz;
mod encode;

pub use ansatz::{build_ansatz, AnsatzFamily, AnsatzSpec};
pub use encode::{amplitude_encode, qubits_needed};

use rand::Rng;

use crate::error::{Error, Result};
use crate::grad;
use crate::quantum::Circuit;

/// Trainable parameter counts after the backbone, split by origin.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ParamCounts {
    /// Rotation angles in the ansatz.
    pub quantum: usize,
    /// Weights of the bias-free fully connected layer reading the head.
    pub classical_fc: usize,
    pub total: usize,
}

/// Parameters after the backbone for a quantum head followed by a bias-free
/// fully connected layer onto `n_classes` logits.
pub fn count_head_params(spec: &AnsatzSpec, n_classes: usize) -> ParamCounts {
    let quantum = spec.n_params();
    let classical_fc = spec.n_qubits * n_classes;
    ParamCounts { quantum, classical_fc, total: quantum + classical_fc }
}

/// A compiled quantum head: ansatz circuit plus its trainable angles.
///
/// The register size is always derived from the raw feature length, never
/// user-set: `n_qubits = qubits_needed(input_len)`.
#[derive(Clone, Debug)]
pub struct QuantumHead {
    spec: AnsatzSpec,
    circuit: Circuit,
    /// Rotation angles, interpreted mod 2*pi.
    pub theta: Vec<f64>,
    input_len: usize,
}

impl QuantumHead {
    /// Build a head for raw feature vectors of length `input_len`.
    /// Angles start at zero; see [`QuantumHead::init_theta`].
    pub fn new(family: AnsatzFamily, depth: usize, input_len: usize) -> Result<Self> {
        let n_qubits = qubits_needed(input_len)?;
        let spec = AnsatzSpec { family, n_qubits, depth };
        if depth == 0 {
            return Err(Error::Config("ansatz depth must be >= 1".into()));
        }
        let circuit = build_ansatz(&spec);
        let theta = vec![0.0; spec.n_params()];
        Ok(Self { spec, circuit, theta, input_len })
    }

    /// Draw each angle independently from [0, 2*pi).
    pub fn init_theta<R: Rng>(&mut self, rng: &mut R) {
        for t in &mut self.theta {
            *t = rng.gen_range(0.0..std::f64::consts::TAU);
        }
    }

    pub fn spec(&self) -> &AnsatzSpec {
        &self.spec
    }

    pub fn circuit(&self) -> &Circuit {
        &self.circuit
    }

    pub fn n_qubits(&self) -> usize {
        self.spec.n_qubits
    }

    pub fn input_len(&self) -> usize {
        self.input_len
    }

    /// Encode, evolve, decode: per-qubit Z expectations of
    /// U(theta)|x_normalized>, each in [-1, 1].
    pub fn forward(&self, raw_features: &[f64]) -> Result<Vec<f64>> {
        self.check_input(raw_features)?;
        let encoded = amplitude_encode(raw_features)?;
        let evolved = self.circuit.run(&encoded, &self.theta)?;
        Ok(evolved.z_expectations())
    }

    /// Vector-Jacobian product for training: contract `upstream` (one weight
    /// per Z output) against the angle and input Jacobians.
    pub fn vjp(&self, raw_features: &[f64], upstream: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
        self.check_input(raw_features)?;
        grad::head_vjp(&self.circuit, raw_features, &self.theta, upstream)
    }

    fn check_input(&self, raw_features: &[f64]) -> Result<()> {
        if raw_features.len() != self.input_len {
            return Err(Error::Shape(format!(
                "head expects {} raw features, got {}",
                self.input_len,
                raw_features.len()
            )));
        }
        Ok(())
    }
}
