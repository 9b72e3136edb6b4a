//! Offline surprise evaluation over rating logs: item representations,
//! distance-matrix caching, timeframe segmentation, the measurement harness,
//! greedy-vs-exact validation and a synthetic log generator.

pub mod cli;
pub mod config;
pub mod error;
pub mod evaluation;
pub mod matrix_io;
pub mod pipeline;
pub mod ratings;
pub mod representations;
pub mod synth;
pub mod validation;

pub use error::{EvalError, Result};
