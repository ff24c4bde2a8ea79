//! Experiment harness and command-line driver for the `dgff` library.

pub mod commands;
pub mod config;
pub mod experiment;

pub use commands::{exit_code, run, Cli};
