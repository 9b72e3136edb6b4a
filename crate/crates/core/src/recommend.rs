//! Candidate scorers: item-kNN, most surprising item (MSI) and least
//! surprising item (LSI), plus top-N ranking.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::str::FromStr;

use crate::error::{Error, Result};
use crate::item::{ExposureSet, ItemId, RecSequence};
use crate::surprise::{item_surprise, ItemDistance};

pub const DEFAULT_NEIGHBOURS: usize = 50;
pub const MIN_RATING: u8 = 1;
pub const MAX_RATING: u8 = 5;

/// A user's star ratings; the rated items are the items they know.
#[derive(Debug, Clone, PartialEq)]
pub struct UserHistory {
    ratings: BTreeMap<ItemId, u8>,
    exposed: ExposureSet,
}

impl UserHistory {
    /// Later ratings of the same item replace earlier ones.
    pub fn new(ratings: impl IntoIterator<Item = (ItemId, u8)>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (item, stars) in ratings {
            if !(MIN_RATING..=MAX_RATING).contains(&stars) {
                return Err(Error::InvalidParameter("ratings must be between 1 and 5 stars"));
            }
            map.insert(item, stars);
        }
        if map.is_empty() {
            return Err(Error::EmptyExposure);
        }
        let exposed = map.keys().copied().collect();
        Ok(UserHistory { ratings: map, exposed })
    }

    pub fn exposed(&self) -> &ExposureSet {
        &self.exposed
    }

    pub fn rating(&self, item: ItemId) -> Option<u8> {
        self.ratings.get(&item).copied()
    }

    pub fn ratings(&self) -> impl Iterator<Item = (ItemId, u8)> + '_ {
        self.ratings.iter().map(|(&i, &r)| (i, r))
    }

    pub fn len(&self) -> usize {
        self.ratings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ratings.is_empty()
    }
}

fn ensure_unknown(item: ItemId, hist: &UserHistory) -> Result<()> {
    if hist.exposed.contains(item) {
        Err(Error::ItemExposed(item))
    } else {
        Ok(())
    }
}

/// Similarity-weighted mean rating of the `k` rated items closest to `item`,
/// with similarity `1 / (1 + d)`. Equal distances prefer the smaller id.
pub fn knn_score<D: ItemDistance + ?Sized>(item: ItemId, hist: &UserHistory, d: &D, k: usize) -> Result<f64> {
    ensure_unknown(item, hist)?;
    if k == 0 {
        return Err(Error::InvalidParameter("neighbourhood size must be at least 1"));
    }
    let mut neighbours = hist
        .ratings()
        .map(|(j, stars)| d.distance(item, j).map(|dist| (dist, j, stars)))
        .collect::<Result<Vec<_>>>()?;
    let by_distance = |a: &(f64, ItemId, u8), b: &(f64, ItemId, u8)| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1));
    if neighbours.len() > k {
        neighbours.select_nth_unstable_by(k - 1, by_distance);
        neighbours.truncate(k);
    }
    neighbours.sort_by(by_distance);
    let mut weighted = 0.0;
    let mut weights = 0.0;
    for (dist, _, stars) in neighbours {
        let sim = 1.0 / (1.0 + dist);
        weighted += sim * f64::from(stars);
        weights += sim;
    }
    Ok(weighted / weights)
}

/// Surprise of `item` against the user's rated items.
pub fn msi_score<D: ItemDistance + ?Sized>(item: ItemId, hist: &UserHistory, d: &D) -> Result<f64> {
    ensure_unknown(item, hist)?;
    item_surprise(item, &hist.exposed, d)
}

/// Negated surprise, so that a descending ranking puts familiar items first.
pub fn lsi_score<D: ItemDistance + ?Sized>(item: ItemId, hist: &UserHistory, d: &D) -> Result<f64> {
    msi_score(item, hist, d).map(|s| -s)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScorerKind {
    Knn { k: usize },
    Msi,
    Lsi,
}

impl ScorerKind {
    pub fn name(self) -> &'static str {
        match self {
            ScorerKind::Knn { .. } => "knn",
            ScorerKind::Msi => "msi",
            ScorerKind::Lsi => "lsi",
        }
    }
}

impl fmt::Display for ScorerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ScorerKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "knn" | "item-knn" => Ok(ScorerKind::Knn { k: DEFAULT_NEIGHBOURS }),
            "msi" => Ok(ScorerKind::Msi),
            "lsi" => Ok(ScorerKind::Lsi),
            _ => Err(Error::InvalidParameter("unknown algorithm; expected knn, msi or lsi")),
        }
    }
}

/// A scoring model bound to the distances of one run.
#[derive(Debug, Clone)]
pub struct Scorer<D> {
    kind: ScorerKind,
    distances: D,
}

impl<D: ItemDistance> Scorer<D> {
    pub fn new(kind: ScorerKind, distances: D) -> Result<Self> {
        if let ScorerKind::Knn { k: 0 } = kind {
            return Err(Error::InvalidParameter("neighbourhood size must be at least 1"));
        }
        Ok(Scorer { kind, distances })
    }

    pub fn kind(&self) -> ScorerKind {
        self.kind
    }

    pub fn distances(&self) -> &D {
        &self.distances
    }

    pub fn score(&self, item: ItemId, hist: &UserHistory) -> Result<f64> {
        match self.kind {
            ScorerKind::Knn { k } => knn_score(item, hist, &self.distances, k),
            ScorerKind::Msi => msi_score(item, hist, &self.distances),
            ScorerKind::Lsi => lsi_score(item, hist, &self.distances),
        }
    }
}

/// Scores every candidate and keeps the `top_n` best, highest score first
/// and smaller id first among equal scores.
pub fn rank_top_n<D: ItemDistance>(
    candidates: &[ItemId],
    scorer: &Scorer<D>,
    hist: &UserHistory,
    top_n: usize,
) -> Result<RecSequence> {
    if top_n == 0 || top_n > candidates.len() {
        return Err(Error::InvalidLength {
            requested: top_n,
            available: candidates.len(),
        });
    }
    let mut seen = BTreeSet::new();
    let mut scored = Vec::with_capacity(candidates.len());
    for &item in candidates {
        if !seen.insert(item) {
            return Err(Error::DuplicateItem(item));
        }
        scored.push((scorer.score(item, hist)?, item));
    }
    let order = |a: &(f64, ItemId), b: &(f64, ItemId)| -> Ordering { b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)) };
    if top_n < scored.len() {
        scored.select_nth_unstable_by(top_n - 1, order);
        scored.truncate(top_n);
    }
    scored.sort_by(order);
    RecSequence::new(scored.into_iter().map(|(_, i)| i).collect())
}
