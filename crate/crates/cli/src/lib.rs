//! Suite runner behind the `quantaequiv` command.

pub mod config;
pub mod emit;
pub mod report;
pub mod suites;

use thiserror::Error;

pub use config::{OutputFormat, SuiteConfig};
pub use report::{CheckRecord, CheckStatus, SuiteReport, Table};
pub use suites::{run_suite, SUITES};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("unknown suite `{0}` (see `quantaequiv list-suites`)")]
    UnknownSuite(String),
    #[error("config error: {0}")]
    Config(String),
    #[error("output error: {0}")]
    Output(String),
}

impl HarnessError {
    /// Every harness error is a configuration problem from the caller's side.
    pub fn exit_code(&self) -> i32 {
        2
    }
}
