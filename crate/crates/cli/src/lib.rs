//! Command-line experiments over `formsums`.

pub mod config;
pub mod output;
pub mod run;

pub use config::{BoundMode, CommandKind, ExperimentConfig, Format, HSpec};
pub use output::{Assertion, ErrorRecord, Outcome, Summary};
pub use run::{run, RunError};
