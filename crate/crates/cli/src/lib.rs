//! Experiment harness around the `blits` library: instance ingestion, runs
//! across algorithms and seeds, trace files and plot data.

pub mod error;
pub mod experiment;
pub mod io;
pub mod plot;
pub mod spec;

pub use error::{CliError, Result};
