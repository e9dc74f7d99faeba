//! File formats, run configuration and pipeline commands for `synhash`.
//!
//! The algorithms live in `synhash-core`; this crate reads and writes the
//! on-disk artifacts (corpora, OMW tab files, taxonomies, models, label sets,
//! hash files, reports) and wires the stages together for the CLI.

pub mod config;
pub mod error;
pub mod fixture;
pub mod formats;
pub mod fsio;
pub mod pipeline;
pub mod report;

pub use config::RunConfig;
pub use error::{Error, Result};
