//! File formats, reports and the `kcat0` command line.

pub mod cli;
pub mod complex;
pub mod error;
pub mod report;
pub mod selftest;
pub mod spec;
