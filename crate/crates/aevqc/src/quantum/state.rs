//! Dense state-vector representation of an n-qubit register.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest supported register: 2^24 amplitudes is ~256 MiB of complex doubles.
pub const MAX_QUBITS: usize = 24;

/// A pure n-qubit state as 2^n complex amplitudes.
///
/// Basis-index convention: reading index `i` in binary, the most significant
/// bit is qubit 0 (the top circuit wire) and the least significant bit is
/// qubit n-1. For n = 2, index 2 = bitstring "10" = qubit 0 in |1>, qubit 1
/// in |0>. Every module and file format in this crate uses this convention.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// The |0...0> state on `n_qubits` qubits.
    pub fn zero(n_qubits: usize) -> Result<Self> {
        if n_qubits == 0 || n_qubits > MAX_QUBITS {
            return Err(Error::Capacity(n_qubits));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n_qubits];
        amps[0] = Complex64::new(1.0, 0.0);
        Ok(Self { n_qubits, amps })
    }

    /// Wrap an amplitude vector, checking length and normalization (1e-9).
    pub fn from_amplitudes(n_qubits: usize, amps: Vec<Complex64>) -> Result<Self> {
        if n_qubits == 0 || n_qubits > MAX_QUBITS {
            return Err(Error::Capacity(n_qubits));
        }
        if amps.len() != 1 << n_qubits {
            return Err(Error::Shape(format!(
                "state over {} qubits needs {} amplitudes, got {}",
                n_qubits,
                1usize << n_qubits,
                amps.len()
            )));
        }
        let state = Self { n_qubits, amps };
        let norm = state.norm_sqr();
        if !norm.is_finite() || (norm - 1.0).abs() > 1e-9 {
            return Err(Error::Shape(format!("state is not normalized: |psi|^2 = {norm}")));
        }
        Ok(state)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub(crate) fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amps
    }

    /// Sum of |amp|^2 over the register; 1 for a valid state.
    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Bit mask selecting `qubit` inside a basis index (qubit 0 = MSB).
    pub(crate) fn qubit_mask(n_qubits: usize, qubit: usize) -> usize {
        1 << (n_qubits - 1 - qubit)
    }

    /// Per-qubit Pauli-Z expectation values, each in [-1, 1].
    ///
    /// Element q is sum_i |amp_i|^2 * (+1 if qubit q reads 0 in i, else -1).
    pub fn z_expectations(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.n_qubits];
        for (i, amp) in self.amps.iter().enumerate() {
            let p = amp.norm_sqr();
            if p == 0.0 {
                continue;
            }
            for (q, val) in out.iter_mut().enumerate() {
                if i & Self::qubit_mask(self.n_qubits, q) == 0 {
                    *val += p;
                } else {
                    *val -= p;
                }
            }
        }
        out
    }
}
