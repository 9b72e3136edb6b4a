//! Distances over dense real vectors.
//!
//! | Function | Range | Input requirement |
//! |----------|-------|-------------------|
//! | [`euclidean`] | `[0, ∞)` | finite |
//! | [`cosine_distance`] | `[0, 2]` | non-zero |
//! | [`weighted_jaccard`] | `[0, 1]` | non-negative, not both zero |
//! | [`jensen_shannon`] | `[0, 1]` | non-negative, non-zero sum |
//! | [`aitchison`] | `[0, ∞)` | strictly positive (see [`bmt_smooth`]) |

use alloc::vec::Vec;

use crate::error::{Error, Result};

fn same_dim(x: &[f64], y: &[f64]) -> Result<()> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    if x.is_empty() {
        return Err(Error::EmptyVector);
    }
    Ok(())
}

fn non_negative(x: &[f64]) -> Result<()> {
    for (index, &value) in x.iter().enumerate() {
        if !value.is_finite() {
            return Err(Error::NonFiniteComponent { index });
        }
        if value < 0.0 {
            return Err(Error::NegativeComponent { index, value });
        }
    }
    Ok(())
}

pub fn euclidean(x: &[f64], y: &[f64]) -> Result<f64> {
    same_dim(x, y)?;
    let sum: f64 = x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum();
    Ok(libm::sqrt(sum))
}

/// `1 - cos(x, y)`.
pub fn cosine_distance(x: &[f64], y: &[f64]) -> Result<f64> {
    same_dim(x, y)?;
    let mut dot = 0.0;
    let mut nx = 0.0;
    let mut ny = 0.0;
    for (a, b) in x.iter().zip(y) {
        dot += a * b;
        nx += a * a;
        ny += b * b;
    }
    if nx == 0.0 || ny == 0.0 {
        return Err(Error::ZeroVector);
    }
    // sqrt(nx * nx) == nx in IEEE arithmetic, so d(x, x) is exactly zero.
    let cos = dot / libm::sqrt(nx * ny);
    Ok((1.0 - cos).clamp(0.0, 2.0))
}

/// Weighted (Ruzicka) Jaccard distance, `1 - Σ min / Σ max`. Reduces to
/// set Jaccard on 0/1 vectors.
pub fn weighted_jaccard(x: &[f64], y: &[f64]) -> Result<f64> {
    same_dim(x, y)?;
    non_negative(x)?;
    non_negative(y)?;
    let mut lo = 0.0;
    let mut hi = 0.0;
    for (&a, &b) in x.iter().zip(y) {
        lo += a.min(b);
        hi += a.max(b);
    }
    if hi == 0.0 {
        return Err(Error::AllZero);
    }
    Ok((1.0 - lo / hi).clamp(0.0, 1.0))
}

/// Scales a non-negative vector to sum to one.
pub fn closure(x: &[f64]) -> Result<Vec<f64>> {
    if x.is_empty() {
        return Err(Error::EmptyVector);
    }
    non_negative(x)?;
    let total: f64 = x.iter().sum();
    if total <= 0.0 {
        return Err(Error::AllZero);
    }
    Ok(x.iter().map(|v| v / total).collect())
}

/// Jensen-Shannon divergence (base 2) between two probability vectors.
/// Inputs are assumed closed; see [`jensen_shannon`] for raw vectors.
pub fn jensen_shannon_closed(p: &[f64], q: &[f64]) -> Result<f64> {
    same_dim(p, q)?;
    let mut kl_p = 0.0;
    let mut kl_q = 0.0;
    for (&a, &b) in p.iter().zip(q) {
        let m = (a + b) / 2.0;
        if a > 0.0 {
            kl_p += a * libm::log2(a / m);
        }
        if b > 0.0 {
            kl_q += b * libm::log2(b / m);
        }
    }
    Ok((0.5 * (kl_p + kl_q)).clamp(0.0, 1.0))
}

/// Jensen-Shannon divergence after closing both vectors. Zero parts need no
/// smoothing: the mixture is positive wherever either input is.
pub fn jensen_shannon(x: &[f64], y: &[f64]) -> Result<f64> {
    same_dim(x, y)?;
    jensen_shannon_closed(&closure(x)?, &closure(y)?)
}

/// Centred log-ratio transform: `ln x_i - mean_j ln x_j`.
pub fn clr(x: &[f64]) -> Result<Vec<f64>> {
    if x.is_empty() {
        return Err(Error::EmptyVector);
    }
    let mut logs = Vec::with_capacity(x.len());
    for (index, &value) in x.iter().enumerate() {
        if !value.is_finite() {
            return Err(Error::NonFiniteComponent { index });
        }
        if value <= 0.0 {
            return Err(Error::NonPositiveComponent { index, value });
        }
        logs.push(libm::log(value));
    }
    let mean = logs.iter().sum::<f64>() / logs.len() as f64;
    for v in &mut logs {
        *v -= mean;
    }
    Ok(logs)
}

/// Aitchison distance: Euclidean distance between centred log-ratio images.
pub fn aitchison(x: &[f64], y: &[f64]) -> Result<f64> {
    same_dim(x, y)?;
    euclidean(&clr(x)?, &clr(y)?)
}

/// Bayesian multiplicative replacement of zero parts with a Perks prior
/// (`s = 1`, `t_i = 1/D`).
///
/// Zero parts become `t_i s / (n + s)` where `n` is the raw total; non-zero
/// proportions are scaled by one minus the total replaced mass, which keeps
/// their ratios intact. The output is a strictly positive composition.
pub fn bmt_smooth(counts: &[f64]) -> Result<Vec<f64>> {
    let proportions = closure(counts)?;
    let n: f64 = counts.iter().sum();
    let parts = counts.len() as f64;
    const PRIOR_STRENGTH: f64 = 1.0;
    let replacement = (1.0 / parts) * PRIOR_STRENGTH / (n + PRIOR_STRENGTH);
    let zeros = counts.iter().filter(|&&c| c == 0.0).count();
    if zeros == 0 {
        return Ok(proportions);
    }
    let keep = 1.0 - replacement * zeros as f64;
    Ok(counts
        .iter()
        .zip(proportions)
        .map(|(&c, p)| if c == 0.0 { replacement } else { p * keep })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn euclidean_examples() {
        assert_eq!(euclidean(&[0.0, 0.0], &[3.0, 4.0]).unwrap(), 5.0);
        assert_eq!(euclidean(&[1.5, -2.0], &[1.5, -2.0]).unwrap(), 0.0);
        assert_eq!(euclidean(&[1.0, 1.0], &[2.0, 2.0]).unwrap(), core::f64::consts::SQRT_2);
        assert_eq!(
            euclidean(&[1.0], &[1.0, 2.0]),
            Err(Error::DimensionMismatch { left: 1, right: 2 })
        );
    }

    #[test]
    fn cosine_examples() {
        assert_eq!(cosine_distance(&[1.0, 2.0], &[2.0, 4.0]).unwrap(), 0.0);
        assert_eq!(cosine_distance(&[1.0, 0.0], &[0.0, 1.0]).unwrap(), 1.0);
        assert_eq!(cosine_distance(&[1.0, 0.0], &[-1.0, 0.0]).unwrap(), 2.0);
        assert_eq!(cosine_distance(&[0.0, 0.0], &[1.0, 0.0]), Err(Error::ZeroVector));
    }

    #[test]
    fn jaccard_examples() {
        assert_eq!(weighted_jaccard(&[0.3, 2.0], &[0.3, 2.0]).unwrap(), 0.0);
        assert_eq!(weighted_jaccard(&[1.0, 0.0], &[0.0, 1.0]).unwrap(), 1.0);
        assert_eq!(weighted_jaccard(&[1.0, 1.0], &[1.0, 0.0]).unwrap(), 0.5);
        assert_eq!(weighted_jaccard(&[0.0, 0.0], &[0.0, 0.0]), Err(Error::AllZero));
        assert!(matches!(
            weighted_jaccard(&[1.0, -1.0], &[1.0, 0.0]),
            Err(Error::NegativeComponent { index: 1, .. })
        ));
    }

    #[test]
    fn jensen_shannon_examples() {
        assert_eq!(jensen_shannon(&[0.2, 0.8], &[1.0, 4.0]).unwrap(), 0.0);
        assert_eq!(jensen_shannon(&[1.0, 0.0], &[0.0, 1.0]).unwrap(), 1.0);
        assert!(matches!(
            jensen_shannon(&[1.0, -0.5], &[1.0, 1.0]),
            Err(Error::NegativeComponent { .. })
        ));
    }

    #[test]
    fn jensen_shannon_against_direct_summation() {
        // m = (0.375, 0.625); evaluated term by term with natural logs, and
        // against a 40-digit evaluation of the same sum.
        let (p, q, m) = ([0.5f64, 0.5], [0.25f64, 0.75], [0.375f64, 0.625]);
        let kl = |a: &[f64; 2]| -> f64 { (0..2).map(|i| a[i] * (a[i] / m[i]).ln()).sum() };
        let expected = 0.5 * (kl(&p) + kl(&q)) / core::f64::consts::LN_2;
        let got = jensen_shannon(&p, &q).unwrap();
        assert!(close(got, expected, 1e-15), "{got} vs {expected}");
        assert!(close(got, 0.048_794_940_695_398_53, 1e-15), "{got}");
    }

    #[test]
    fn aitchison_examples() {
        assert_eq!(aitchison(&[1.0, 2.0, 3.0], &[1.0, 2.0, 3.0]).unwrap(), 0.0);
        let d = aitchison(&[1.0, 1.0], &[core::f64::consts::E, 1.0]).unwrap();
        assert!(close(d, core::f64::consts::FRAC_1_SQRT_2, 1e-15), "{d}");
        let a = aitchison(&[1.0, 2.0, 5.0], &[3.0, 1.0, 1.0]).unwrap();
        let b = aitchison(&[7.0, 14.0, 35.0], &[3.0, 1.0, 1.0]).unwrap();
        assert!(close(a, b, 1e-12));
        assert!(matches!(
            aitchison(&[1.0, 0.0], &[1.0, 1.0]),
            Err(Error::NonPositiveComponent { index: 1, .. })
        ));
    }

    #[test]
    fn bmt_examples() {
        assert_eq!(bmt_smooth(&[1.0, 3.0]).unwrap(), [0.25, 0.75]);
        assert_eq!(bmt_smooth(&[3.0, 0.0]).unwrap(), [0.875, 0.125]);
        assert_eq!(bmt_smooth(&[0.0, 0.0]), Err(Error::AllZero));
        let s = bmt_smooth(&[4.0, 0.0, 2.0, 0.0, 1.0]).unwrap();
        assert!(close(s.iter().sum::<f64>(), 1.0, 1e-15));
        assert!(s.iter().all(|&v| v > 0.0));
        assert!(close(s[0] / s[2], 2.0, 1e-15));
    }
}
