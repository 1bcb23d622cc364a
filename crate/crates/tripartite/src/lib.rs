//! Std companion of `tripartite-core`: JSON state files, CSV output, the
//! parallel Monte-Carlo sweep engine and the `tripartite` command line.

pub mod cli;
mod error;
pub mod montecarlo;
pub mod output;
pub mod state_file;

pub use error::{Error, Result};
pub use tripartite_core as core;
