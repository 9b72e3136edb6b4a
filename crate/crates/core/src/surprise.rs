//! Item surprise, sequence surprise and the greedy potential-surprise bounds.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::item::{ExposureSet, ItemId, RecSequence};

/// Absolute tolerance, in surprise units, below which the spread between the
/// maximum and minimum potential surprise is treated as zero.
pub const DEGENERACY_EPSILON: f64 = 1e-12;

/// A symmetric, non-negative distance between catalog items.
pub trait ItemDistance {
    fn distance(&self, a: ItemId, b: ItemId) -> Result<f64>;
}

impl<T: ItemDistance + ?Sized> ItemDistance for &T {
    fn distance(&self, a: ItemId, b: ItemId) -> Result<f64> {
        (**self).distance(a, b)
    }
}

/// Maximum and minimum surprise attainable by a list of a given length,
/// together with the lists that attain them.
#[derive(Debug, Clone, PartialEq)]
pub struct SurpriseBounds {
    pub max_value: f64,
    pub min_value: f64,
    pub max_seq: RecSequence,
    pub min_seq: RecSequence,
    /// `true` when produced by exhaustive enumeration, `false` for greedy.
    pub exact: bool,
}

impl SurpriseBounds {
    /// Places a sequence surprise on the `[min_value, max_value]` scale.
    ///
    /// The result is clipped to `[0, 1]` since greedy bounds may sit inside
    /// the true ones. A degenerate scale yields `1.0`.
    pub fn normalize(&self, sequence_surprise: f64) -> f64 {
        let spread = self.max_value - self.min_value;
        if spread.is_nan() || spread < DEGENERACY_EPSILON {
            return 1.0;
        }
        ((sequence_surprise - self.min_value) / spread).clamp(0.0, 1.0)
    }
}

/// Distance from `item` to the closest item in `exposed`.
pub fn item_surprise<D: ItemDistance + ?Sized>(item: ItemId, exposed: &ExposureSet, d: &D) -> Result<f64> {
    if exposed.is_empty() {
        return Err(Error::EmptyExposure);
    }
    if exposed.contains(item) {
        return Ok(0.0);
    }
    let mut best = f64::INFINITY;
    for known in exposed.iter() {
        let v = d.distance(item, known)?;
        if v < best {
            best = v;
        }
    }
    Ok(best)
}

/// Total surprise of consuming `seq` in order, each item joining the known
/// set once consumed.
pub fn sequence_surprise<D: ItemDistance + ?Sized>(seq: &RecSequence, exposed: &ExposureSet, d: &D) -> Result<f64> {
    if seq.is_empty() {
        return Ok(0.0);
    }
    if exposed.is_empty() {
        return Err(Error::EmptyExposure);
    }
    let items = seq.items();
    if let Some(&bad) = items.iter().find(|&&i| exposed.contains(i)) {
        return Err(Error::ItemExposed(bad));
    }
    let mut total = 0.0;
    for (pos, &item) in items.iter().enumerate() {
        let mut best = item_surprise(item, exposed, d)?;
        for &earlier in &items[..pos] {
            let v = d.distance(item, earlier)?;
            if v < best {
                best = v;
            }
        }
        total += best;
    }
    Ok(total)
}

#[derive(Clone, Copy)]
enum Direction {
    Most,
    Least,
}

/// Greedy selection of `k` items from `candidates`, re-evaluating the
/// surprise of every remaining candidate after each pick.
///
/// `initial[c]` must hold the surprise of `candidates[c]` against the
/// starting exposed set; `candidates` must be ascending so the first
/// extremum found is the one with the smallest id.
fn greedy_pick<D: ItemDistance + ?Sized>(
    candidates: &[ItemId],
    initial: &[f64],
    d: &D,
    k: usize,
    direction: Direction,
) -> Result<Vec<ItemId>> {
    let mut current = initial.to_vec();
    let mut taken = vec![false; candidates.len()];
    let mut picks = Vec::with_capacity(k);
    for _ in 0..k {
        let mut chosen: Option<usize> = None;
        for (c, &value) in current.iter().enumerate() {
            if taken[c] {
                continue;
            }
            let better = match chosen {
                None => true,
                Some(best) => match direction {
                    Direction::Most => value > current[best],
                    Direction::Least => value < current[best],
                },
            };
            if better {
                chosen = Some(c);
            }
        }
        let pick = chosen.ok_or(Error::InvalidLength {
            requested: k,
            available: candidates.len(),
        })?;
        taken[pick] = true;
        let pick_id = candidates[pick];
        picks.push(pick_id);
        if picks.len() == k {
            break;
        }
        for (c, &cand) in candidates.iter().enumerate() {
            if taken[c] {
                continue;
            }
            let v = d.distance(cand, pick_id)?;
            if v < current[c] {
                current[c] = v;
            }
        }
    }
    Ok(picks)
}

pub(crate) fn check_sets(unknown: &ExposureSet, exposed: &ExposureSet, k: usize) -> Result<()> {
    if exposed.is_empty() {
        return Err(Error::EmptyExposure);
    }
    if let Some(shared) = unknown.first_shared(exposed) {
        return Err(Error::ItemExposed(shared));
    }
    if k == 0 || k > unknown.len() {
        return Err(Error::InvalidLength {
            requested: k,
            available: unknown.len(),
        });
    }
    Ok(())
}

/// Greedy estimates of the maximum and minimum surprise a `k`-item list
/// drawn from `unknown` can carry.
///
/// The maximum list repeatedly takes the most surprising remaining item,
/// the minimum list the least surprising one; ties go to the smallest id.
pub fn greedy_bounds<D: ItemDistance + ?Sized>(
    unknown: &ExposureSet,
    exposed: &ExposureSet,
    d: &D,
    k: usize,
) -> Result<SurpriseBounds> {
    check_sets(unknown, exposed, k)?;
    let candidates = unknown.to_vec();
    let initial = candidates
        .iter()
        .map(|&c| item_surprise(c, exposed, d))
        .collect::<Result<Vec<_>>>()?;

    let max_seq = RecSequence::new(greedy_pick(&candidates, &initial, d, k, Direction::Most)?)?;
    let min_seq = RecSequence::new(greedy_pick(&candidates, &initial, d, k, Direction::Least)?)?;
    Ok(SurpriseBounds {
        max_value: sequence_surprise(&max_seq, exposed, d)?,
        min_value: sequence_surprise(&min_seq, exposed, d)?,
        max_seq,
        min_seq,
        exact: false,
    })
}

/// Normalised surprise of `seq` against greedy bounds over the whole
/// unknown set with target length `|seq|`, clipped to `[0, 1]`.
pub fn normalized_surprise<D: ItemDistance + ?Sized>(
    seq: &RecSequence,
    unknown: &ExposureSet,
    exposed: &ExposureSet,
    d: &D,
) -> Result<f64> {
    if seq.is_empty() {
        return Err(Error::InvalidLength {
            requested: 0,
            available: unknown.len(),
        });
    }
    for &item in seq.items() {
        if exposed.contains(item) {
            return Err(Error::ItemExposed(item));
        }
        if !unknown.contains(item) {
            return Err(Error::NotUnknown(item));
        }
    }
    let bounds = greedy_bounds(unknown, exposed, d, seq.len())?;
    Ok(bounds.normalize(sequence_surprise(seq, exposed, d)?))
}
