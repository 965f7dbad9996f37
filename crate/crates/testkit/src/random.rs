//! Deterministic random generators for circuits, states, and inputs.

use aevqc::quantum::{Circuit, Gate, StateVector};
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random gate soup over all supported kinds. Each rotation gets its own
/// parameter slot, assigned in circuit order.
pub fn random_circuit(rng: &mut ChaCha8Rng, n_qubits: usize, n_gates: usize) -> Circuit {
    let mut gates = Vec::with_capacity(n_gates);
    let mut next_slot = 0;
    for _ in 0..n_gates {
        let q = rng.gen_range(0..n_qubits);
        let choice = if n_qubits > 1 { rng.gen_range(0..8) } else { rng.gen_range(0..7) };
        let gate = match choice {
            0 => Gate::x(q),
            1 => Gate::y(q),
            2 => Gate::z(q),
            3 => Gate::h(q),
            4 => {
                next_slot += 1;
                Gate::rx(q, next_slot - 1)
            }
            5 => {
                next_slot += 1;
                Gate::ry(q, next_slot - 1)
            }
            6 => {
                next_slot += 1;
                Gate::rz(q, next_slot - 1)
            }
            _ => {
                let mut t = rng.gen_range(0..n_qubits);
                while t == q {
                    t = rng.gen_range(0..n_qubits);
                }
                Gate::cnot(q, t)
            }
        };
        gates.push(gate);
    }
    Circuit::new(n_qubits, gates).unwrap()
}

/// A rotations-only circuit with at most `max_params` parameters, useful for
/// gradient cross-checks (plus H/CNOT which carry no parameters).
pub fn random_rotation_circuit(
    rng: &mut ChaCha8Rng,
    n_qubits: usize,
    n_gates: usize,
    max_params: usize,
) -> Circuit {
    let mut gates = Vec::with_capacity(n_gates);
    let mut next_slot = 0;
    for _ in 0..n_gates {
        let q = rng.gen_range(0..n_qubits);
        let parameterized = next_slot < max_params && rng.gen_bool(0.6);
        let gate = if parameterized {
            next_slot += 1;
            match rng.gen_range(0..3) {
                0 => Gate::rx(q, next_slot - 1),
                1 => Gate::ry(q, next_slot - 1),
                _ => Gate::rz(q, next_slot - 1),
            }
        } else if n_qubits > 1 && rng.gen_bool(0.5) {
            let mut t = rng.gen_range(0..n_qubits);
            while t == q {
                t = rng.gen_range(0..n_qubits);
            }
            Gate::cnot(q, t)
        } else {
            Gate::h(q)
        };
        gates.push(gate);
    }
    Circuit::new(n_qubits, gates).unwrap()
}

/// Rotation angles drawn uniformly from [0, 2*pi).
pub fn random_params(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(0.0..std::f64::consts::TAU)).collect()
}

/// A Haar-ish random normalized state (Gaussian components, normalized).
pub fn random_state(rng: &mut ChaCha8Rng, n_qubits: usize) -> StateVector {
    let dim = 1usize << n_qubits;
    let mut amps: Vec<Complex64> = (0..dim)
        .map(|_| {
            Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        })
        .collect();
    let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    for a in &mut amps {
        *a /= norm;
    }
    StateVector::from_amplitudes(n_qubits, amps).unwrap()
}

/// A raw feature vector with entries in [-1, 1], guaranteed non-degenerate.
pub fn random_features(rng: &mut ChaCha8Rng, len: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..len).map(|_| rng.gen_range(-1.0..1.0)).collect();
        if v.iter().map(|x| x * x).sum::<f64>().sqrt() > 1e-3 {
            return v;
        }
    }
}
