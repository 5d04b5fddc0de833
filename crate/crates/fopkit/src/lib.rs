//! File formats, reports, threaded execution and the command line for
//! `fopkit-core`.

pub mod cli;
pub mod exec;
pub mod report;
pub mod text;

pub use exec::Parallel;
