//! File formats and the command-line front end for `trimanual-core`.
//!
//! [`export`] writes Scala tuning files, CSV tables and the layout JSON read
//! by the browser keyboard; [`cli`] wires every operation to a subcommand.

pub mod cli;
pub mod export;

pub use trimanual_core as core;
