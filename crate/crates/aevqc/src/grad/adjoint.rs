//! Reverse-sweep (adjoint) differentiation of Z-expectation outputs.
//!
//! One forward pass and one backward pass over the gate list, never
//! materializing the circuit unitary: cost O(m * |gates| * 2^n) for m
//! observables.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quantum::{apply_gate_inverse, apply_one_qubit_matrix, Circuit, GateKind, StateVector};

/// Observables this module differentiates: a single-qubit Z, or a weighted
/// sum of per-qubit Zs (the contraction used by vector-Jacobian products).
pub(crate) enum ZObservable<'a> {
    Single(usize),
    Weighted(&'a [f64]),
}

impl ZObservable<'_> {
    /// Replace `state` by O|state>. Both observables are diagonal in the
    /// computational basis, so this is a per-amplitude scale.
    pub(crate) fn apply(&self, state: &mut StateVector) {
        let n = state.n_qubits();
        match self {
            ZObservable::Single(q) => {
                let mask = StateVector::qubit_mask(n, *q);
                for (i, amp) in state.amplitudes_mut().iter_mut().enumerate() {
                    if i & mask != 0 {
                        *amp = -*amp;
                    }
                }
            }
            ZObservable::Weighted(weights) => {
                for (i, amp) in state.amplitudes_mut().iter_mut().enumerate() {
                    let mut factor = 0.0;
                    for (q, w) in weights.iter().enumerate() {
                        if i & StateVector::qubit_mask(n, q) == 0 {
                            factor += w;
                        } else {
                            factor -= w;
                        }
                    }
                    *amp *= factor;
                }
            }
        }
    }
}

/// d(R(theta))/d(theta) as a 2x2 matrix; the generators are -X/2, -Y/2, -Z/2
/// times i applied to the rotation itself.
fn derivative_matrix(kind: GateKind, theta: f64) -> Result<[Complex64; 4]> {
    let (c, s) = ((theta / 2.0).cos() / 2.0, (theta / 2.0).sin() / 2.0);
    match kind {
        GateKind::Rx => Ok([
            Complex64::new(-s, 0.0),
            Complex64::new(0.0, -c),
            Complex64::new(0.0, -c),
            Complex64::new(-s, 0.0),
        ]),
        GateKind::Ry => Ok([
            Complex64::new(-s, 0.0),
            Complex64::new(-c, 0.0),
            Complex64::new(c, 0.0),
            Complex64::new(-s, 0.0),
        ]),
        GateKind::Rz => Ok([
            Complex64::new(-s, -c),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(-s, c),
        ]),
        other => Err(Error::UnsupportedGradient(other.name())),
    }
}

fn inner(a: &StateVector, b: &StateVector) -> Complex64 {
    a.amplitudes()
        .iter()
        .zip(b.amplitudes())
        .map(|(x, y)| x.conj() * y)
        .sum()
}

/// One gradient row per observable, each of length `circuit.n_params()`.
/// Gates sharing a parameter slot have their contributions summed.
pub(crate) fn adjoint_rows(
    circuit: &Circuit,
    input: &StateVector,
    params: &[f64],
    observables: &[ZObservable<'_>],
) -> Result<Vec<Vec<f64>>> {
    let final_state = circuit.run(input, params)?;
    let mut lambdas: Vec<StateVector> = observables
        .iter()
        .map(|obs| {
            let mut lambda = final_state.clone();
            obs.apply(&mut lambda);
            lambda
        })
        .collect();
    let mut rows = vec![vec![0.0; circuit.n_params()]; observables.len()];

    let mut phi = final_state;
    for gate in circuit.gates().iter().rev() {
        apply_gate_inverse(&mut phi, gate, params)?;
        if let Some(slot) = gate.param_slot() {
            let deriv = derivative_matrix(gate.kind(), params[slot])?;
            let mut mu = phi.clone();
            apply_one_qubit_matrix(&mut mu, gate.targets()[0], &deriv);
            for (row, lambda) in rows.iter_mut().zip(&lambdas) {
                row[slot] += 2.0 * inner(lambda, &mu).re;
            }
        }
        for lambda in &mut lambdas {
            apply_gate_inverse(lambda, gate, params)?;
        }
    }
    Ok(rows)
}

/// Jacobian of every per-qubit Z expectation with respect to the circuit
/// parameters: entry (q, k) = d<Z_q>/d(theta_k). Shape m x P.
pub fn grad_params_adjoint(
    circuit: &Circuit,
    input: &StateVector,
    params: &[f64],
) -> Result<Vec<Vec<f64>>> {
    let observables: Vec<ZObservable> =
        (0..circuit.n_qubits()).map(ZObservable::Single).collect();
    adjoint_rows(circuit, input, params, &observables)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::Gate;

    #[test]
    fn rx_gradient_is_minus_sin_theta() {
        let circuit = Circuit::new(1, vec![Gate::rx(0, 0)]).unwrap();
        let input = StateVector::zero(1).unwrap();
        for theta in [0.0, 0.3, 1.1, std::f64::consts::PI, 5.0] {
            let grad = grad_params_adjoint(&circuit, &input, &[theta]).unwrap();
            assert!((grad[0][0] - (-theta.sin())).abs() < 1e-12, "theta = {theta}");
        }
    }

    #[test]
    fn gradient_at_zero_is_zero() {
        let circuit = Circuit::new(1, vec![Gate::rx(0, 0)]).unwrap();
        let input = StateVector::zero(1).unwrap();
        let grad = grad_params_adjoint(&circuit, &input, &[0.0]).unwrap();
        assert_eq!(grad[0][0], 0.0);
    }

    #[test]
    fn shared_slot_contributions_sum() {
        // Two RX gates reading the same angle: f = cos(2 theta),
        // df/dtheta = -2 sin(2 theta).
        let circuit = Circuit::new(1, vec![Gate::rx(0, 0), Gate::rx(0, 0)]).unwrap();
        let input = StateVector::zero(1).unwrap();
        let theta = 0.4;
        let grad = grad_params_adjoint(&circuit, &input, &[theta]).unwrap();
        assert!((grad[0][0] - (-2.0 * (2.0 * theta).sin())).abs() < 1e-12);
    }

    #[test]
    fn unparameterized_circuit_yields_empty_rows() {
        let circuit = Circuit::new(2, vec![Gate::h(0), Gate::cnot(0, 1)]).unwrap();
        let input = StateVector::zero(2).unwrap();
        let grad = grad_params_adjoint(&circuit, &input, &[]).unwrap();
        assert_eq!(grad.len(), 2);
        assert!(grad.iter().all(Vec::is_empty));
    }
}
