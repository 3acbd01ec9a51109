//! Experiment runner for `bmo-core`: configuration, corpora, file formats,
//! the Theorem A/B comparisons and the property suite.

pub mod config;
pub mod constants;
pub mod corpus;
pub mod error;
pub mod experiments;
pub mod io;
pub mod report;
pub mod suite;

pub use config::ExperimentConfig;
pub use error::{LabError, LabResult};
