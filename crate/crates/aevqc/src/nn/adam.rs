//! Adam optimizer with bias correction.

use crate::error::{Error, Result};

/// Optimizer state over one flat parameter vector.
#[derive(Clone, Debug, PartialEq)]
pub struct AdamState {
    pub step: u64,
    pub m: Vec<f64>,
    pub v: Vec<f64>,
    pub lr: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub eps: f64,
}

impl AdamState {
    /// Fresh state with the standard defaults beta1 = 0.9, beta2 = 0.999,
    /// eps = 1e-8.
    pub fn new(n_params: usize, lr: f64) -> Self {
        Self {
            step: 0,
            m: vec![0.0; n_params],
            v: vec![0.0; n_params],
            lr,
            beta1: 0.9,
            beta2: 0.999,
            eps: 1e-8,
        }
    }

    pub fn n_params(&self) -> usize {
        self.m.len()
    }
}

/// One bias-corrected update in place:
/// m <- b1 m + (1 - b1) g;  v <- b2 v + (1 - b2) g^2;
/// theta <- theta - lr * m_hat / (sqrt(v_hat) + eps).
pub fn adam_step(params: &mut [f64], grads: &[f64], state: &mut AdamState) -> Result<()> {
    if params.len() != grads.len() || params.len() != state.m.len() {
        return Err(Error::Shape(format!(
            "adam saw params {} / grads {} / state {}",
            params.len(),
            grads.len(),
            state.m.len()
        )));
    }
    state.step += 1;
    let t = state.step as i32;
    let bc1 = 1.0 - state.beta1.powi(t);
    let bc2 = 1.0 - state.beta2.powi(t);
    for i in 0..params.len() {
        state.m[i] = state.beta1 * state.m[i] + (1.0 - state.beta1) * grads[i];
        state.v[i] = state.beta2 * state.v[i] + (1.0 - state.beta2) * grads[i] * grads[i];
        let m_hat = state.m[i] / bc1;
        let v_hat = state.v[i] / bc2;
        params[i] -= state.lr * m_hat / (v_hat.sqrt() + state.eps);
    }
    Ok(())
}
