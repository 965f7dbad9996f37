//! Dense-matrix circuit oracle.
//!
//! Builds the full 2^n x 2^n unitary of a circuit by explicit Kronecker
//! products of 2x2 gate matrices (typed here from their definitions, not
//! imported from the simulator), multiplied together in gate order. This is
//! the independent reference the stride-arithmetic simulator is checked
//! against; it is O(4^n) and test-only by design.

use aevqc::quantum::{Circuit, GateKind};
use num_complex::Complex64;

pub type Matrix = Vec<Vec<Complex64>>;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn identity(dim: usize) -> Matrix {
    let mut m = vec![vec![c(0.0, 0.0); dim]; dim];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = c(1.0, 0.0);
    }
    m
}

/// Kronecker product a (x) b.
pub fn kron(a: &Matrix, b: &Matrix) -> Matrix {
    let (ar, ac) = (a.len(), a[0].len());
    let (br, bc) = (b.len(), b[0].len());
    let mut out = vec![vec![c(0.0, 0.0); ac * bc]; ar * br];
    for i in 0..ar {
        for j in 0..ac {
            for k in 0..br {
                for l in 0..bc {
                    out[i * br + k][j * bc + l] = a[i][j] * b[k][l];
                }
            }
        }
    }
    out
}

pub fn matmul(a: &Matrix, b: &Matrix) -> Matrix {
    let (ar, inner, bc) = (a.len(), b.len(), b[0].len());
    let mut out = vec![vec![c(0.0, 0.0); bc]; ar];
    for i in 0..ar {
        for k in 0..inner {
            let aik = a[i][k];
            if aik == c(0.0, 0.0) {
                continue;
            }
            for j in 0..bc {
                out[i][j] += aik * b[k][j];
            }
        }
    }
    out
}

pub fn matvec(m: &Matrix, v: &[Complex64]) -> Vec<Complex64> {
    m.iter()
        .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
        .collect()
}

/// The defining 2x2 matrix of a single-qubit gate kind.
pub fn gate_matrix_2x2(kind: GateKind, theta: f64) -> Matrix {
    let half = theta / 2.0;
    match kind {
        GateKind::X => vec![vec![c(0.0, 0.0), c(1.0, 0.0)], vec![c(1.0, 0.0), c(0.0, 0.0)]],
        GateKind::Y => vec![vec![c(0.0, 0.0), c(0.0, -1.0)], vec![c(0.0, 1.0), c(0.0, 0.0)]],
        GateKind::Z => vec![vec![c(1.0, 0.0), c(0.0, 0.0)], vec![c(0.0, 0.0), c(-1.0, 0.0)]],
        GateKind::H => {
            let s = 1.0 / 2.0_f64.sqrt();
            vec![vec![c(s, 0.0), c(s, 0.0)], vec![c(s, 0.0), c(-s, 0.0)]]
        }
        GateKind::Rx => vec![
            vec![c(half.cos(), 0.0), c(0.0, -half.sin())],
            vec![c(0.0, -half.sin()), c(half.cos(), 0.0)],
        ],
        GateKind::Ry => vec![
            vec![c(half.cos(), 0.0), c(-half.sin(), 0.0)],
            vec![c(half.sin(), 0.0), c(half.cos(), 0.0)],
        ],
        GateKind::Rz => vec![
            vec![c(half.cos(), -half.sin()), c(0.0, 0.0)],
            vec![c(0.0, 0.0), c(half.cos(), half.sin())],
        ],
        GateKind::Cnot => panic!("CNOT is embedded via projectors, not a 2x2 matrix"),
    }
}

/// Embed a 2x2 matrix at qubit `q` of an n-qubit register, qubit 0 being the
/// most significant bit: I^(x)q (x) g (x) I^(x)(n-1-q).
pub fn embed_single(n_qubits: usize, qubit: usize, g: &Matrix) -> Matrix {
    let left = identity(1 << qubit);
    let right = identity(1 << (n_qubits - 1 - qubit));
    kron(&kron(&left, g), &right)
}

/// Full CNOT as the projector sum
/// |0><0|_c (x) I_t + |1><1|_c (x) X_t, each term an explicit Kronecker chain.
pub fn embed_cnot(n_qubits: usize, control: usize, target: usize) -> Matrix {
    let p0: Matrix = vec![vec![c(1.0, 0.0), c(0.0, 0.0)], vec![c(0.0, 0.0), c(0.0, 0.0)]];
    let p1: Matrix = vec![vec![c(0.0, 0.0), c(0.0, 0.0)], vec![c(0.0, 0.0), c(1.0, 0.0)]];
    let x = gate_matrix_2x2(GateKind::X, 0.0);
    let eye2 = identity(2);

    let chain = |ctrl_block: &Matrix, tgt_block: &Matrix| -> Matrix {
        let mut m = identity(1);
        for q in 0..n_qubits {
            let factor = if q == control {
                ctrl_block
            } else if q == target {
                tgt_block
            } else {
                &eye2
            };
            m = kron(&m, factor);
        }
        m
    };

    let a = chain(&p0, &eye2);
    let b = chain(&p1, &x);
    let mut out = a;
    for (row_out, row_b) in out.iter_mut().zip(&b) {
        for (v, w) in row_out.iter_mut().zip(row_b) {
            *v += w;
        }
    }
    out
}

/// The whole circuit as one dense unitary: U = G_L ... G_1.
pub fn circuit_unitary(circuit: &Circuit, params: &[f64]) -> Matrix {
    let n = circuit.n_qubits();
    let mut u = identity(1 << n);
    for gate in circuit.gates() {
        let full = match gate.kind() {
            GateKind::Cnot => embed_cnot(n, gate.targets()[0], gate.targets()[1]),
            kind => {
                let theta = gate.param_slot().map_or(0.0, |slot| params[slot]);
                embed_single(n, gate.targets()[0], &gate_matrix_2x2(kind, theta))
            }
        };
        u = matmul(&full, &u);
    }
    u
}

/// Amplitudes of `circuit` applied to `input` via the dense unitary.
pub fn dense_run(circuit: &Circuit, input: &[Complex64], params: &[f64]) -> Vec<Complex64> {
    matvec(&circuit_unitary(circuit, params), input)
}
