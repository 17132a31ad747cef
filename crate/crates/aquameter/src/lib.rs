//! File formats, exports, and run orchestration around [`aquameter_core`].
//!
//! The kernel crate owns the math; this crate owns everything that touches
//! the filesystem: CSV parsers for the input tables, deterministic dataset
//! exports, the key-value run configuration, and the subcommand plumbing
//! behind the `aquameter` binary.

pub mod config;
pub mod error;
pub mod export;
pub mod ingest;
pub mod report;
pub mod run;

pub use aquameter_core as core;
pub use config::{RunConfig, CONFIG_ENV};
pub use error::{Error, Issue, ValidationReport};
