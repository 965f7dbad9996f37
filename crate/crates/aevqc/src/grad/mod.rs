//! Analytic gradients of Z-expectation outputs.
//!
//! Two independent routes exist for the angle Jacobian — the adjoint sweep
//! ([`grad_params_adjoint`], the production path) and the parameter-shift
//! rule ([`grad_params_shift`], exact for half-angle rotations) — so each can
//! check the other. Input gradients flow through the amplitude-encoding
//! normalization; [`head_vjp`] contracts everything against an upstream
//! cotangent for the training loop.

mod adjoint;
mod input;
mod shift;

pub use adjoint::grad_params_adjoint;
pub use input::{grad_input, head_vjp};
pub use shift::grad_params_shift;

use crate::error::Result;
use crate::quantum::Circuit;

/// Full Jacobians of a head evaluation: angles (m x P) and raw inputs
/// (m x N), m being the number of Z outputs.
#[derive(Clone, Debug, PartialEq)]
pub struct HeadGradients {
    pub d_params: Vec<Vec<f64>>,
    pub d_input: Vec<Vec<f64>>,
}

/// Compute both Jacobians at once via the adjoint route.
pub fn head_jacobians(
    circuit: &Circuit,
    raw_input: &[f64],
    params: &[f64],
) -> Result<HeadGradients> {
    let encoded = crate::head::amplitude_encode(raw_input)?;
    let d_params = grad_params_adjoint(circuit, &encoded, params)?;
    let d_input = grad_input(circuit, raw_input, params)?;
    Ok(HeadGradients { d_params, d_input })
}
