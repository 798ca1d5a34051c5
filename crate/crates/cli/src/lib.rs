//! Application layer behind the `lexatlas` binary: run configurations and
//! the spatial/temporal/lexicon/match entry points, kept as a library so
//! integration tests can drive whole runs in-process.

pub mod config;
pub mod error;
pub mod lexicon_cmd;
pub mod match_cmd;
pub mod spatial;
pub mod temporal_run;

pub use config::{LexiconSource, SpatialConfig, TemporalConfig};
pub use error::{CliError, EXIT_INVALID_LEXICON, EXIT_MISSING_INPUT, EXIT_OTHER, EXIT_VIOLATIONS};
