//! File-facing side of the toolkit: configuration, data ingestion, parallel
//! runs, result records and the `meltdown` command.

pub mod cli;
pub mod config;
pub mod dump;
pub mod emit;
pub mod error;
pub mod ingest;
pub mod record;
pub mod runner;

pub use cli::main_with;
pub use config::{parse_config, parse_config_with, Mode, OutputFormat, Overrides, RunConfig};
pub use error::LabError;
pub use record::{Payload, Provenance, ResultRecord};
pub use runner::{execute, run, Progress, RunSummary};
