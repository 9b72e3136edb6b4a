//! Exact potential-surprise bounds by exhaustive enumeration.
//!
//! Only practical at desk scale: full permutations are capped at
//! [`MAX_EXACT_ITEMS`] unknown items and truncated enumeration at
//! [`ARRANGEMENT_BUDGET`] sequences. The search walks arrangements in
//! lexicographic order of ascending ids, sharing the surprise state of
//! common prefixes, so the witness returned for a tied optimum is the
//! lexicographically smallest one.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::item::{ExposureSet, ItemId, RecSequence};
use crate::surprise::{check_sets, item_surprise, ItemDistance, SurpriseBounds};

pub const MAX_EXACT_ITEMS: usize = 10;
pub const ARRANGEMENT_BUDGET: u64 = 5_000_000;

/// Number of `k`-arrangements of `n` items, `n! / (n - k)!`, or `None` on overflow.
pub fn arrangement_count(n: usize, k: usize) -> Option<u64> {
    if k > n {
        return Some(0);
    }
    (0..k).try_fold(1u64, |acc, i| acc.checked_mul((n - i) as u64))
}

struct Search<'a> {
    n: usize,
    k: usize,
    pair: &'a [f64],
    levels: Vec<Vec<f64>>,
    used: Vec<bool>,
    path: Vec<usize>,
    best_max: (f64, Vec<usize>),
    best_min: (f64, Vec<usize>),
}

impl Search<'_> {
    fn run(&mut self, depth: usize, total: f64) {
        if depth == self.k {
            if total > self.best_max.0 {
                self.best_max = (total, self.path.clone());
            }
            if total < self.best_min.0 {
                self.best_min = (total, self.path.clone());
            }
            return;
        }
        for c in 0..self.n {
            if self.used[c] {
                continue;
            }
            let step = self.levels[depth][c];
            if depth + 1 < self.k {
                let (head, rest) = self.levels.split_at_mut(depth + 1);
                let (current, next) = (&head[depth], &mut rest[0]);
                for (j, slot) in next.iter_mut().enumerate() {
                    let via = self.pair[c * self.n + j];
                    *slot = if via < current[j] { via } else { current[j] };
                }
            }
            self.used[c] = true;
            self.path.push(c);
            self.run(depth + 1, total + step);
            self.path.pop();
            self.used[c] = false;
        }
    }
}

/// True maximum and minimum surprise over every ordering of all of `unknown`.
pub fn exact_bounds<D: ItemDistance + ?Sized>(
    unknown: &ExposureSet,
    exposed: &ExposureSet,
    d: &D,
) -> Result<SurpriseBounds> {
    if unknown.len() > MAX_EXACT_ITEMS {
        return Err(Error::EnumerationBudget {
            items: unknown.len(),
            length: unknown.len(),
            limit: arrangement_count(MAX_EXACT_ITEMS, MAX_EXACT_ITEMS).unwrap_or(u64::MAX),
        });
    }
    exact_truncated_bounds(unknown, exposed, d, unknown.len())
}

/// True maximum and minimum surprise over every `k`-arrangement of `unknown`.
pub fn exact_truncated_bounds<D: ItemDistance + ?Sized>(
    unknown: &ExposureSet,
    exposed: &ExposureSet,
    d: &D,
    k: usize,
) -> Result<SurpriseBounds> {
    check_sets(unknown, exposed, k)?;
    let n = unknown.len();
    match arrangement_count(n, k) {
        Some(count) if count <= ARRANGEMENT_BUDGET => {}
        _ => {
            return Err(Error::EnumerationBudget {
                items: n,
                length: k,
                limit: ARRANGEMENT_BUDGET,
            })
        }
    }
    let candidates = unknown.to_vec();
    let initial = candidates
        .iter()
        .map(|&c| item_surprise(c, exposed, d))
        .collect::<Result<Vec<_>>>()?;
    let mut pair = Vec::new();
    if k > 1 {
        pair.reserve(n * n);
        for &a in &candidates {
            for &b in &candidates {
                pair.push(if a == b { 0.0 } else { d.distance(a, b)? });
            }
        }
    }
    let mut levels = vec![vec![0.0; n]; k];
    levels[0] = initial;
    let mut search = Search {
        n,
        k,
        pair: &pair,
        levels,
        used: vec![false; n],
        path: Vec::with_capacity(k),
        best_max: (f64::NEG_INFINITY, Vec::new()),
        best_min: (f64::INFINITY, Vec::new()),
    };
    search.run(0, 0.0);
    let to_seq = |idx: &[usize]| RecSequence::new(idx.iter().map(|&i| candidates[i]).collect::<Vec<ItemId>>());
    Ok(SurpriseBounds {
        max_value: search.best_max.0,
        min_value: search.best_min.0,
        max_seq: to_seq(&search.best_max.1)?,
        min_seq: to_seq(&search.best_min.1)?,
        exact: true,
    })
}
