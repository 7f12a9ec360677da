//! Command-line front end for `sqsp-core`: spec files, circuit output,
//! verification, benchmark sweeps and random instances.

pub mod bench;
pub mod cli;
pub mod error;
pub mod files;
pub mod gen;
pub mod run;

pub use error::CliError;
