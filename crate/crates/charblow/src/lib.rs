//! Experiments, sweeps and checks for gradient blow-up in 1D balance laws,
//! with JSON configuration and CSV/JSON outputs.

// `!(x > 0.0)` deliberately also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod check;
pub mod config;
pub mod error;
pub mod experiment;
pub mod output;
pub mod presets;
pub mod sweep;
pub mod witness;

pub use error::{CliError, Result};
