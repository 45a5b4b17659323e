//! Command-line front end: configuration parsing, run orchestration and
//! output files.

pub mod config;
pub mod execute;
pub mod svg;
