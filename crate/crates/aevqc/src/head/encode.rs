//! Amplitude encoding of raw feature vectors.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quantum::{StateVector, MAX_QUBITS};

/// Qubits needed to amplitude-encode a length-N vector: ceil(log2 N),
/// minimum 1.
pub fn qubits_needed(feature_len: usize) -> Result<usize> {
    if feature_len == 0 {
        return Err(Error::Shape("cannot encode an empty feature vector".into()));
    }
    let n = feature_len.next_power_of_two().trailing_zeros() as usize;
    let n = n.max(1);
    if n > MAX_QUBITS {
        return Err(Error::Capacity(n));
    }
    Ok(n)
}

/// Store `raw` as the amplitudes of a ceil(log2 N)-qubit state: zero-pad to
/// the next power of two and divide by the L2 norm of the original vector
/// (padding contributes nothing to the norm). Value j lands on basis index j;
/// imaginary parts are zero. Signs are kept as-is, so mixed-sign features
/// encode to mixed-sign amplitudes.
pub fn amplitude_encode(raw: &[f64]) -> Result<StateVector> {
    let n_qubits = qubits_needed(raw.len())?;
    let norm = raw.iter().map(|x| x * x).sum::<f64>().sqrt();
    if !norm.is_finite() || norm < 1e-12 {
        return Err(Error::DegenerateInput);
    }
    let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n_qubits];
    for (amp, &x) in amps.iter_mut().zip(raw) {
        *amp = Complex64::new(x / norm, 0.0);
    }
    StateVector::from_amplitudes(n_qubits, amps)
}
