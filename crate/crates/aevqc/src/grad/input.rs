//! Gradients of Z expectations with respect to the raw input features.
//!
//! The head consumes unnormalized features, so the Jacobian of the L2
//! normalization (and the zero padding to 2^n) is part of the model. With
//! M = U(theta)^dag Z_q U(theta) and x_hat the normalized, padded input,
//! d<Z_q>/d(x_hat) = 2 Re(M |x_hat>) because the state is real and M is
//! Hermitian; composing with the normalization Jacobian
//! (I/|x| - x x^T/|x|^3) and restricting to the unpadded coordinates gives
//! the gradient in raw-feature space.

use crate::error::{Error, Result};
use crate::grad::adjoint::ZObservable;
use crate::head::amplitude_encode;
use crate::quantum::{apply_gate_inverse, Circuit, StateVector};

/// 2 Re(U^dag O U |encoded>), computed by forward run, diagonal observable,
/// and a reverse sweep of gate inverses.
fn two_re_m_psi(
    circuit: &Circuit,
    encoded: &StateVector,
    params: &[f64],
    obs: &ZObservable<'_>,
) -> Result<Vec<f64>> {
    let mut v = circuit.run(encoded, params)?;
    obs.apply(&mut v);
    for gate in circuit.gates().iter().rev() {
        apply_gate_inverse(&mut v, gate, params)?;
    }
    Ok(v.amplitudes().iter().map(|a| 2.0 * a.re).collect())
}

/// Pull a normalized-coordinate gradient back through the L2 normalization,
/// restricted to the first `raw.len()` coordinates.
fn through_normalization(full_grad: &[f64], raw: &[f64], norm: f64) -> Vec<f64> {
    let projection: f64 = raw
        .iter()
        .zip(full_grad)
        .map(|(&x, &g)| g * (x / norm))
        .sum();
    raw.iter()
        .zip(full_grad)
        .map(|(&x, &g)| (g - (x / norm) * projection) / norm)
        .collect()
}

/// Jacobian (q, i) = d<Z_q>/d(raw_input_i), through encoding and circuit.
/// Shape m x N where N is the raw (pre-padding) feature count.
pub fn grad_input(
    circuit: &Circuit,
    raw_input: &[f64],
    params: &[f64],
) -> Result<Vec<Vec<f64>>> {
    let encoded = amplitude_encode(raw_input)?;
    if encoded.n_qubits() != circuit.n_qubits() {
        return Err(Error::Shape(format!(
            "input of length {} encodes to {} qubits but the circuit has {}",
            raw_input.len(),
            encoded.n_qubits(),
            circuit.n_qubits()
        )));
    }
    let norm = raw_input.iter().map(|x| x * x).sum::<f64>().sqrt();
    (0..circuit.n_qubits())
        .map(|q| {
            let g = two_re_m_psi(circuit, &encoded, params, &ZObservable::Single(q))?;
            Ok(through_normalization(&g, raw_input, norm))
        })
        .collect()
}

/// Contract `upstream` against both Jacobians without forming them:
/// d_params = upstream^T * dZ/dtheta (length P) and
/// d_input = upstream^T * dZ/dx (length N). A weighted-Z observable makes
/// each side a single adjoint-style sweep.
pub fn head_vjp(
    circuit: &Circuit,
    raw_input: &[f64],
    params: &[f64],
    upstream: &[f64],
) -> Result<(Vec<f64>, Vec<f64>)> {
    if upstream.len() != circuit.n_qubits() {
        return Err(Error::Shape(format!(
            "upstream has length {} but the head emits {} outputs",
            upstream.len(),
            circuit.n_qubits()
        )));
    }
    if upstream.iter().any(|u| !u.is_finite()) {
        return Err(Error::Shape("upstream cotangent must be finite".into()));
    }
    let encoded = amplitude_encode(raw_input)?;
    if encoded.n_qubits() != circuit.n_qubits() {
        return Err(Error::Shape(format!(
            "input of length {} encodes to {} qubits but the circuit has {}",
            raw_input.len(),
            encoded.n_qubits(),
            circuit.n_qubits()
        )));
    }
    let obs = ZObservable::Weighted(upstream);

    let d_params = crate::grad::adjoint::adjoint_rows(circuit, &encoded, params, &[obs])?
        .pop()
        .expect("one observable yields one row");

    let norm = raw_input.iter().map(|x| x * x).sum::<f64>().sqrt();
    let g = two_re_m_psi(circuit, &encoded, params, &ZObservable::Weighted(upstream))?;
    let d_input = through_normalization(&g, raw_input, norm);
    Ok((d_params, d_input))
}
