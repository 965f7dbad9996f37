//! Test-only oracles and generators for the `aevqc` workspace.
//!
//! Nothing here is part of the production path: the dense-matrix oracle
//! re-derives circuit semantics from gate definitions, and the finite
//! difference helpers differentiate forward evaluations numerically.

pub mod dense;
pub mod finite_diff;
pub mod random;
