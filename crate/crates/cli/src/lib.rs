//! Library side of the `xidep` command-line tool: input parsing, column
//! selection and report generation.

pub mod dataset;
pub mod error;
pub mod run;
pub mod select;

pub use dataset::{parse_dataset, read_dataset, Dataset};
pub use error::{CliError, Result};
pub use run::{error_report, run, Command, Report, RunConfig, Simulation, DEFAULT_SEED};
