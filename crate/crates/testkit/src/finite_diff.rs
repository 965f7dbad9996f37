//! Central finite-difference gradient oracles.
//!
//! These differentiate the forward path numerically and never touch the
//! analytic gradient code they are used to check.

use aevqc::head::amplitude_encode;
use aevqc::quantum::{Circuit, StateVector};

/// d z_expectations / d params by central differences, one m-vector column
/// per parameter. Returns an m x P matrix.
pub fn fd_grad_params(
    circuit: &Circuit,
    input: &StateVector,
    params: &[f64],
    h: f64,
) -> Vec<Vec<f64>> {
    let m = circuit.n_qubits();
    let p = circuit.n_params();
    let mut grad = vec![vec![0.0; p]; m];
    let mut shifted = params.to_vec();
    for k in 0..p {
        shifted[k] = params[k] + h;
        let plus = circuit.run(input, &shifted).unwrap().z_expectations();
        shifted[k] = params[k] - h;
        let minus = circuit.run(input, &shifted).unwrap().z_expectations();
        shifted[k] = params[k];
        for q in 0..m {
            grad[q][k] = (plus[q] - minus[q]) / (2.0 * h);
        }
    }
    grad
}

/// d z_expectations / d raw input by central differences, through the
/// amplitude encoding (normalization + zero padding). Returns m x N.
pub fn fd_grad_input(
    circuit: &Circuit,
    raw_input: &[f64],
    params: &[f64],
    h: f64,
) -> Vec<Vec<f64>> {
    let forward = |raw: &[f64]| -> Vec<f64> {
        let encoded = amplitude_encode(raw).unwrap();
        circuit.run(&encoded, params).unwrap().z_expectations()
    };
    let m = circuit.n_qubits();
    let n = raw_input.len();
    let mut grad = vec![vec![0.0; n]; m];
    let mut shifted = raw_input.to_vec();
    for i in 0..n {
        shifted[i] = raw_input[i] + h;
        let plus = forward(&shifted);
        shifted[i] = raw_input[i] - h;
        let minus = forward(&shifted);
        shifted[i] = raw_input[i];
        for q in 0..m {
            grad[q][i] = (plus[q] - minus[q]) / (2.0 * h);
        }
    }
    grad
}

/// Central difference of a scalar function over a flat parameter vector.
pub fn fd_scalar(f: &mut dyn FnMut(&[f64]) -> f64, x: &[f64], h: f64) -> Vec<f64> {
    let mut grad = vec![0.0; x.len()];
    let mut shifted = x.to_vec();
    for i in 0..x.len() {
        shifted[i] = x[i] + h;
        let plus = f(&shifted);
        shifted[i] = x[i] - h;
        let minus = f(&shifted);
        shifted[i] = x[i];
        grad[i] = (plus - minus) / (2.0 * h);
    }
    grad
}

/// Agreement check with an absolute floor:
/// |a - b| <= max(abs_floor, rel * max(|a|, |b|)).
pub fn close(a: f64, b: f64, rel: f64, abs_floor: f64) -> bool {
    (a - b).abs() <= abs_floor.max(rel * a.abs().max(b.abs()))
}
