//! Parameter-shift gradients.
//!
//! For half-angle rotation gates the rule is exact:
//! d<Z_q>/d(theta_k) = [f_q(theta_k + pi/2) - f_q(theta_k - pi/2)] / 2.
//! Two circuit evaluations per parameter; used as the test oracle for the
//! adjoint production path.

use std::f64::consts::FRAC_PI_2;

use crate::error::Result;
use crate::quantum::{Circuit, StateVector};

/// Jacobian (q, k) = d<Z_q>/d(theta_k) via shifted evaluations. Shape m x P.
pub fn grad_params_shift(
    circuit: &Circuit,
    input: &StateVector,
    params: &[f64],
) -> Result<Vec<Vec<f64>>> {
    let m = circuit.n_qubits();
    let p = circuit.n_params();
    // Validate shapes the same way a run would, even for p = 0.
    circuit.run(input, params)?;
    let mut rows = vec![vec![0.0; p]; m];
    let mut shifted = params.to_vec();
    for k in 0..p {
        shifted[k] = params[k] + FRAC_PI_2;
        let plus = circuit.run(input, &shifted)?.z_expectations();
        shifted[k] = params[k] - FRAC_PI_2;
        let minus = circuit.run(input, &shifted)?.z_expectations();
        shifted[k] = params[k];
        for q in 0..m {
            rows[q][k] = (plus[q] - minus[q]) / 2.0;
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::Gate;

    #[test]
    fn rx_shift_rule_reproduces_minus_sin() {
        // (cos(theta + pi/2) - cos(theta - pi/2)) / 2 = -sin(theta)
        let circuit = Circuit::new(1, vec![Gate::rx(0, 0)]).unwrap();
        let input = StateVector::zero(1).unwrap();
        for theta in [0.0, 0.25, 2.0, 4.5] {
            let grad = grad_params_shift(&circuit, &input, &[theta]).unwrap();
            assert!((grad[0][0] - (-theta.sin())).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_gate_circuit_gives_empty_matrix() {
        let circuit = Circuit::new(3, vec![]).unwrap();
        let input = StateVector::zero(3).unwrap();
        let grad = grad_params_shift(&circuit, &input, &[]).unwrap();
        assert_eq!(grad.len(), 3);
        assert!(grad.iter().all(Vec::is_empty));
    }
}
