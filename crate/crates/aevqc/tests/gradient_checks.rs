//! Three-way gradient agreement (adjoint, parameter-shift, finite
//! differences) and the input-gradient contracts.

use aevqc::grad::{grad_input, grad_params_adjoint, grad_params_shift, head_jacobians, head_vjp};
use aevqc::head::amplitude_encode;
use aevqc_testkit::finite_diff::{close, fd_grad_input, fd_grad_params};
use aevqc_testkit::random::{random_features, random_params, random_rotation_circuit, random_state, rng};
use rand::Rng;

const FD_H_THETA: f64 = 1e-4;
const FD_H_INPUT: f64 = 1e-5;

#[test]
fn adjoint_shift_and_finite_differences_agree() {
    let mut rng = rng(0x5EED);
    let mut cases = 0;
    while cases < 50 {
        // bias sizes upward so several cases sit at the 10-qubit / 60-param cap
        let n = if cases % 5 == 0 { 10 } else { rng.gen_range(2..=10) };
        let max_params = if cases % 5 == 0 { 60 } else { rng.gen_range(1..=60) };
        let gates = rng.gen_range(max_params..=max_params + 40);
        let circuit = random_rotation_circuit(&mut rng, n, gates, max_params);
        if circuit.n_params() == 0 {
            continue;
        }
        cases += 1;
        let params = random_params(&mut rng, circuit.n_params());
        let input = random_state(&mut rng, n);

        let adjoint = grad_params_adjoint(&circuit, &input, &params).unwrap();
        let shift = grad_params_shift(&circuit, &input, &params).unwrap();
        let fd = fd_grad_params(&circuit, &input, &params, FD_H_THETA);

        for q in 0..n {
            for k in 0..circuit.n_params() {
                let abs_diff = (adjoint[q][k] - shift[q][k]).abs();
                assert!(
                    abs_diff < 1e-10,
                    "case {cases} entry ({q},{k}): adjoint {} vs shift {}",
                    adjoint[q][k],
                    shift[q][k]
                );
                for (name, grad) in [("adjoint", &adjoint), ("shift", &shift)] {
                    assert!(
                        close(grad[q][k], fd[q][k], 1e-5, 1e-8),
                        "case {cases} entry ({q},{k}): {name} {} vs fd {}",
                        grad[q][k],
                        fd[q][k]
                    );
                }
            }
        }
    }
}

#[test]
fn input_gradients_match_finite_differences() {
    let mut rng = rng(0xF00D);
    for case in 0..15 {
        let n: usize = rng.gen_range(1..=5);
        let raw_len = rng.gen_range((1 << (n - 1)) + 1..=1 << n);
        let gates = rng.gen_range(3..=20);
        let circuit = random_rotation_circuit(&mut rng, n, gates, 12);
        let params = random_params(&mut rng, circuit.n_params());
        let raw = random_features(&mut rng, raw_len);

        let analytic = grad_input(&circuit, &raw, &params).unwrap();
        let fd = fd_grad_input(&circuit, &raw, &params, FD_H_INPUT);
        for q in 0..n {
            for i in 0..raw_len {
                assert!(
                    close(analytic[q][i], fd[q][i], 1e-5, 1e-8),
                    "case {case} entry ({q},{i}): analytic {} vs fd {}",
                    analytic[q][i],
                    fd[q][i]
                );
            }
        }
    }
}

#[test]
fn simple_identity_circuit_input_gradient_fd() {
    let circuit = aevqc::quantum::Circuit::new(1, vec![]).unwrap();
    let analytic = grad_input(&circuit, &[3.0, 4.0], &[]).unwrap();
    let fd = fd_grad_input(&circuit, &[3.0, 4.0], &[], FD_H_INPUT);
    for i in 0..2 {
        assert!(close(analytic[0][i], fd[0][i], 1e-5, 1e-8));
    }
}

#[test]
fn input_gradient_rows_are_orthogonal_to_the_normalized_input() {
    let mut rng = rng(0xABBA);
    for _ in 0..10 {
        let n = rng.gen_range(1..=5);
        let raw_len = 1 << n;
        let circuit = random_rotation_circuit(&mut rng, n, 15, 10);
        let params = random_params(&mut rng, circuit.n_params());
        let raw = random_features(&mut rng, raw_len);
        let norm = raw.iter().map(|x| x * x).sum::<f64>().sqrt();

        let rows = grad_input(&circuit, &raw, &params).unwrap();
        for row in rows {
            let dot: f64 = row.iter().zip(&raw).map(|(g, x)| g * x / norm).sum();
            assert!(dot.abs() < 1e-10, "projection property violated: {dot:.3e}");
        }
    }
}

#[test]
fn vjp_equals_explicit_jacobian_contraction() {
    let mut rng = rng(0xD1CE);
    for _ in 0..10 {
        let n: usize = rng.gen_range(1..=5);
        let raw_len = rng.gen_range((1 << (n - 1)) + 1..=1 << n);
        let circuit = random_rotation_circuit(&mut rng, n, 18, 10);
        let params = random_params(&mut rng, circuit.n_params());
        let raw = random_features(&mut rng, raw_len);
        let upstream: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();

        let (d_params, d_input) = head_vjp(&circuit, &raw, &params, &upstream).unwrap();
        let jac = head_jacobians(&circuit, &raw, &params).unwrap();

        for k in 0..circuit.n_params() {
            let expected: f64 = (0..n).map(|q| upstream[q] * jac.d_params[q][k]).sum();
            assert!((d_params[k] - expected).abs() < 1e-12);
        }
        for i in 0..raw_len {
            let expected: f64 = (0..n).map(|q| upstream[q] * jac.d_input[q][i]).sum();
            assert!((d_input[i] - expected).abs() < 1e-12);
        }
    }
}

#[test]
fn one_hot_upstream_selects_a_jacobian_row() {
    let mut rng = rng(0x0417);
    let n = 3;
    let circuit = random_rotation_circuit(&mut rng, n, 12, 6);
    let params = random_params(&mut rng, circuit.n_params());
    let raw = random_features(&mut rng, 7);
    let jac = head_jacobians(&circuit, &raw, &params).unwrap();
    for q in 0..n {
        let mut upstream = vec![0.0; n];
        upstream[q] = 1.0;
        let (d_params, d_input) = head_vjp(&circuit, &raw, &params, &upstream).unwrap();
        for k in 0..circuit.n_params() {
            assert!((d_params[k] - jac.d_params[q][k]).abs() < 1e-12);
        }
        for i in 0..7 {
            assert!((d_input[i] - jac.d_input[q][i]).abs() < 1e-12);
        }
    }
}

#[test]
fn vjp_is_linear_in_the_upstream() {
    let mut rng = rng(0x11AA);
    let n = 4;
    let circuit = random_rotation_circuit(&mut rng, n, 16, 8);
    let params = random_params(&mut rng, circuit.n_params());
    let raw = random_features(&mut rng, 13);
    let u: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let v: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let a = 1.7;
    let combo: Vec<f64> = u.iter().zip(&v).map(|(x, y)| a * x + y).collect();

    let (pu, iu) = head_vjp(&circuit, &raw, &params, &u).unwrap();
    let (pv, iv) = head_vjp(&circuit, &raw, &params, &v).unwrap();
    let (pc, ic) = head_vjp(&circuit, &raw, &params, &combo).unwrap();

    for k in 0..pc.len() {
        assert!((pc[k] - (a * pu[k] + pv[k])).abs() < 1e-12);
    }
    for i in 0..ic.len() {
        assert!((ic[i] - (a * iu[i] + iv[i])).abs() < 1e-12);
    }
}

#[test]
fn eight_qubit_a2_adjoint_matches_shift_rule() {
    use aevqc::head::{build_ansatz, AnsatzFamily, AnsatzSpec};
    let mut rng = rng(0x88);
    let circuit =
        build_ansatz(&AnsatzSpec { family: AnsatzFamily::A2, n_qubits: 8, depth: 2 });
    let params = random_params(&mut rng, circuit.n_params());
    let input = random_state(&mut rng, 8);
    let adjoint = grad_params_adjoint(&circuit, &input, &params).unwrap();
    let shift = grad_params_shift(&circuit, &input, &params).unwrap();
    for q in 0..8 {
        for k in 0..circuit.n_params() {
            assert!((adjoint[q][k] - shift[q][k]).abs() < 1e-10, "entry ({q},{k})");
        }
    }
}

#[test]
fn encoded_single_qubit_rx_gradient_is_minus_sin() {
    // A1-style single-qubit check: d<Z>/dtheta of RX on an encoded state.
    let circuit =
        aevqc::quantum::Circuit::new(1, vec![aevqc::quantum::Gate::rx(0, 0)]).unwrap();
    let encoded = amplitude_encode(&[1.0, 0.0]).unwrap();
    for theta in [0.0, 0.4, 2.2] {
        let grad = grad_params_adjoint(&circuit, &encoded, &[theta]).unwrap();
        assert!((grad[0][0] + theta.sin()).abs() < 1e-12);
    }
}
