//! Gate descriptors and in-place gate application.
//!
//! Single-qubit gates are applied with stride arithmetic over the amplitude
//! array, O(2^n) per gate; no full 2^n x 2^n matrix is ever built here.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quantum::state::StateVector;

/// Supported gate kinds.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GateKind {
    X,
    Y,
    Z,
    H,
    Rx,
    Ry,
    Rz,
    Cnot,
}

impl GateKind {
    pub fn is_rotation(self) -> bool {
        matches!(self, GateKind::Rx | GateKind::Ry | GateKind::Rz)
    }

    pub fn arity(self) -> usize {
        match self {
            GateKind::Cnot => 2,
            _ => 1,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            GateKind::X => "X",
            GateKind::Y => "Y",
            GateKind::Z => "Z",
            GateKind::H => "H",
            GateKind::Rx => "RX",
            GateKind::Ry => "RY",
            GateKind::Rz => "RZ",
            GateKind::Cnot => "CNOT",
        }
    }
}

/// One gate in a circuit: a kind, its target qubit(s), and the index of the
/// parameter it reads (rotations only).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Gate {
    kind: GateKind,
    targets: [usize; 2],
    param_slot: Option<usize>,
}

impl Gate {
    /// General constructor; enforces arity and slot/kind consistency.
    pub fn new(kind: GateKind, targets: &[usize], param_slot: Option<usize>) -> Result<Self> {
        if targets.len() != kind.arity() {
            return Err(Error::InvalidGate {
                kind: kind.name(),
                expectation: "target exactly its arity in qubits",
            });
        }
        match (kind.is_rotation(), param_slot) {
            (true, Some(_)) | (false, None) => {}
            (true, None) => {
                return Err(Error::InvalidGate {
                    kind: kind.name(),
                    expectation: "carry a parameter slot",
                })
            }
            (false, Some(_)) => {
                return Err(Error::InvalidGate {
                    kind: kind.name(),
                    expectation: "not carry a parameter slot",
                })
            }
        }
        let mut t = [0; 2];
        t[..targets.len()].copy_from_slice(targets);
        Ok(Self { kind, targets: t, param_slot })
    }

    pub fn x(qubit: usize) -> Self {
        Self { kind: GateKind::X, targets: [qubit, 0], param_slot: None }
    }

    pub fn y(qubit: usize) -> Self {
        Self { kind: GateKind::Y, targets: [qubit, 0], param_slot: None }
    }

    pub fn z(qubit: usize) -> Self {
        Self { kind: GateKind::Z, targets: [qubit, 0], param_slot: None }
    }

    pub fn h(qubit: usize) -> Self {
        Self { kind: GateKind::H, targets: [qubit, 0], param_slot: None }
    }

    pub fn rx(qubit: usize, slot: usize) -> Self {
        Self { kind: GateKind::Rx, targets: [qubit, 0], param_slot: Some(slot) }
    }

    pub fn ry(qubit: usize, slot: usize) -> Self {
        Self { kind: GateKind::Ry, targets: [qubit, 0], param_slot: Some(slot) }
    }

    pub fn rz(qubit: usize, slot: usize) -> Self {
        Self { kind: GateKind::Rz, targets: [qubit, 0], param_slot: Some(slot) }
    }

    pub fn cnot(control: usize, target: usize) -> Self {
        Self { kind: GateKind::Cnot, targets: [control, target], param_slot: None }
    }

    pub fn kind(&self) -> GateKind {
        self.kind
    }

    /// Target qubits: one entry, or (control, target) for CNOT.
    pub fn targets(&self) -> &[usize] {
        &self.targets[..self.kind.arity()]
    }

    pub fn param_slot(&self) -> Option<usize> {
        self.param_slot
    }

    /// Check targets against a register size.
    pub fn validate(&self, n_qubits: usize) -> Result<()> {
        for &q in self.targets() {
            if q >= n_qubits {
                return Err(Error::QubitIndex { qubit: q, n_qubits });
            }
        }
        if self.kind == GateKind::Cnot && self.targets[0] == self.targets[1] {
            return Err(Error::CnotSameQubit(self.targets[0]));
        }
        Ok(())
    }

    /// Rotation angle for this gate, read from `params`.
    fn angle(&self, params: &[f64]) -> Result<f64> {
        let slot = self.param_slot.expect("rotation gate carries a slot");
        params.get(slot).copied().ok_or(Error::ParamCount {
            expected: slot + 1,
            got: params.len(),
        })
    }
}

/// 2x2 matrix entries (row-major) of a single-qubit gate.
pub fn one_qubit_matrix(kind: GateKind, angle: f64) -> [Complex64; 4] {
    let zero = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    match kind {
        GateKind::X => [zero, one, one, zero],
        GateKind::Y => [zero, Complex64::new(0.0, -1.0), Complex64::new(0.0, 1.0), zero],
        GateKind::Z => [one, zero, zero, -one],
        GateKind::H => {
            let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
            [h, h, h, -h]
        }
        GateKind::Rx => {
            let (c, s) = ((angle / 2.0).cos(), (angle / 2.0).sin());
            let off = Complex64::new(0.0, -s);
            [Complex64::new(c, 0.0), off, off, Complex64::new(c, 0.0)]
        }
        GateKind::Ry => {
            let (c, s) = ((angle / 2.0).cos(), (angle / 2.0).sin());
            [
                Complex64::new(c, 0.0),
                Complex64::new(-s, 0.0),
                Complex64::new(s, 0.0),
                Complex64::new(c, 0.0),
            ]
        }
        GateKind::Rz => {
            let half = angle / 2.0;
            [
                Complex64::new(half.cos(), -half.sin()),
                zero,
                zero,
                Complex64::new(half.cos(), half.sin()),
            ]
        }
        GateKind::Cnot => panic!("CNOT has no 2x2 matrix"),
    }
}

/// Apply an arbitrary 2x2 matrix `m` (row-major) to `qubit`, identity on the
/// rest. Also used with non-unitary matrices (gate derivatives), so no norm
/// check happens here.
pub(crate) fn apply_one_qubit_matrix(state: &mut StateVector, qubit: usize, m: &[Complex64; 4]) {
    let n = state.n_qubits();
    let mask = StateVector::qubit_mask(n, qubit);
    let amps = state.amplitudes_mut();
    for i in 0..amps.len() {
        if i & mask == 0 {
            let a0 = amps[i];
            let a1 = amps[i | mask];
            amps[i] = m[0] * a0 + m[1] * a1;
            amps[i | mask] = m[2] * a0 + m[3] * a1;
        }
    }
}

fn apply_cnot(state: &mut StateVector, control: usize, target: usize) {
    let n = state.n_qubits();
    let cmask = StateVector::qubit_mask(n, control);
    let tmask = StateVector::qubit_mask(n, target);
    let amps = state.amplitudes_mut();
    for i in 0..amps.len() {
        if i & cmask != 0 && i & tmask == 0 {
            amps.swap(i, i | tmask);
        }
    }
}

/// Apply `gate` to `state` in place, reading any rotation angle from `params`.
pub fn apply_gate(state: &mut StateVector, gate: &Gate, params: &[f64]) -> Result<()> {
    gate.validate(state.n_qubits())?;
    match gate.kind() {
        GateKind::Cnot => apply_cnot(state, gate.targets()[0], gate.targets()[1]),
        kind => {
            let angle = if kind.is_rotation() { gate.angle(params)? } else { 0.0 };
            let m = one_qubit_matrix(kind, angle);
            apply_one_qubit_matrix(state, gate.targets()[0], &m);
        }
    }
    Ok(())
}

/// Apply the inverse of `gate`: rotations invert by negating the angle; the
/// remaining kinds are involutions.
pub fn apply_gate_inverse(state: &mut StateVector, gate: &Gate, params: &[f64]) -> Result<()> {
    gate.validate(state.n_qubits())?;
    match gate.kind() {
        GateKind::Cnot => apply_cnot(state, gate.targets()[0], gate.targets()[1]),
        kind if kind.is_rotation() => {
            let m = one_qubit_matrix(kind, -gate.angle(params)?);
            apply_one_qubit_matrix(state, gate.targets()[0], &m);
        }
        kind => {
            let m = one_qubit_matrix(kind, 0.0);
            apply_one_qubit_matrix(state, gate.targets()[0], &m);
        }
    }
    Ok(())
}
