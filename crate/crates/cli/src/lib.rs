//! Library surface of the CLI, so command implementations are testable
//! without spawning processes.

pub mod commands;
pub mod config;
