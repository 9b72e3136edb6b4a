use serde::Serialize;

use super::harness::SurpriseSeries;
use crate::error::{EvalError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Summary {
    pub median: f64,
    pub mean: f64,
    /// Sample standard deviation; 0 when there is a single measurement.
    pub stdev: f64,
    #[serde(skip)]
    pub stdev_defined: bool,
    pub n_intervals: usize,
}

pub fn summarize_values(values: &[f64]) -> Result<Summary> {
    if values.is_empty() {
        return Err(EvalError::data("cannot summarise an empty series"));
    }
    let n = values.len();
    let mean = values.iter().sum::<f64>() / n as f64;
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let median = if n % 2 == 1 {
        sorted[n / 2]
    } else {
        (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0
    };
    let (stdev, stdev_defined) = if n > 1 {
        let ss: f64 = values.iter().map(|v| (v - mean) * (v - mean)).sum();
        ((ss / (n - 1) as f64).sqrt(), true)
    } else {
        (0.0, false)
    };
    Ok(Summary {
        median,
        mean,
        stdev,
        stdev_defined,
        n_intervals: n,
    })
}

/// Statistics over the per-interval means.
pub fn summarize(series: &SurpriseSeries) -> Result<Summary> {
    let means: Vec<f64> = series.measurements.iter().map(|m| m.mean).collect();
    summarize_values(&means)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn three_values() {
        let s = summarize_values(&[0.6, 0.2, 0.4]).unwrap();
        assert!((s.median - 0.4).abs() < 1e-15);
        assert!((s.mean - 0.4).abs() < 1e-15);
        assert!((s.stdev - 0.2).abs() < 1e-15);
        assert!(s.stdev_defined);
    }

    #[test]
    fn single_value() {
        let s = summarize_values(&[0.7]).unwrap();
        assert_eq!((s.median, s.mean, s.stdev, s.stdev_defined), (0.7, 0.7, 0.0, false));
    }

    #[test]
    fn even_count_median() {
        assert_eq!(summarize_values(&[1.0, 0.0, 0.5, 0.25]).unwrap().median, 0.375);
    }

    #[test]
    fn empty() {
        assert!(summarize_values(&[]).is_err());
    }
}
