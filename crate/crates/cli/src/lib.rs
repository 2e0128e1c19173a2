//! Command-line front end for `undernewton`: benchmark runs with CSV/SVG
//! traces, step-rule comparisons and the verification suites.

pub mod commands;
pub mod report;
pub mod verify;

pub use commands::{compare, list, run, CommandError, RunSpec};
