//! File formats, parallel replication runner and command implementations
//! on top of [`itfleet_core`].
//!
//! * [`assets`]: the asset register CSV and fleet summary exports.
//! * [`laws`]: `law.json` with fitted laws and survival summaries.
//! * [`scenario_file`]: scenario documents and built-in names.
//! * [`runner`]: replications in parallel with deterministic aggregation.
//! * [`commands`]: `fit`, `score`, `simulate`, `synth` and `report`.

pub mod assets;
pub mod commands;
pub mod error;
pub mod laws;
pub mod manifest;
pub mod runner;
pub mod scenario_file;
pub mod tables;

pub use error::{Error, Result};
pub use itfleet_core as core;
