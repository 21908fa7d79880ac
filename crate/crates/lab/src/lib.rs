//! Command-line driver and file formats for `gse-core`.

pub mod app;
pub mod io;

pub use app::{run, Cli, Outcome};
pub use io::{CliError, CliResult};
