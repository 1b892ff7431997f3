//! Batch front-end for the verification engine: randomized suites over
//! every module invariant, classification of user complexes and `K₀`
//! witnesses, all reported as canonical JSON.

pub mod commands;
pub mod config;
pub mod report;
pub mod suites;

use thiserror::Error;

pub use config::{Sabotage, SuiteConfig};
pub use report::{CheckReport, Report};
pub use suites::{anchors, verify};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    ConfigInvalid(String),
    #[error("cannot parse input: {0}")]
    Parse(String),
    #[error("i/o error: {0}")]
    Io(String),
}

/// Exit status for a finished run.
pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Serializes with sorted keys and a trailing newline.
pub fn canonical_json(value: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("json values serialize");
    s.push('\n');
    s
}
