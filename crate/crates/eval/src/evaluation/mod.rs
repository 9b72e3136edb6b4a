//! Segmentation of a rating log, the measurement harness and summaries.

pub mod harness;
pub mod segment;
pub mod summary;

pub use harness::{evaluate_interval, run_series, HarnessConfig, Measurement, Mode, SurpriseSeries};
pub use segment::{segment, EligibleInterval, Segmentation, Timeframe};
pub use summary::{summarize, Summary};
