//! Library side of the command-line driver: configuration handling, the
//! check registry, and suite assembly. The binary in `main.rs` is a thin
//! argument parser over these pieces.

pub mod checks;
pub mod config;
pub mod suite;
