//! Item distances: six kinds over vectors or an NPMI exposure model, and the
//! dense matrices the evaluation reads them from.

mod matrix;
mod npmi;
mod vector;

use alloc::boxed::Box;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

pub use matrix::{upper_len, DistanceMatrix};
pub use npmi::{npmi_distance, NpmiModel};
pub use vector::{
    aitchison, bmt_smooth, clr, closure, cosine_distance, euclidean, jensen_shannon, jensen_shannon_closed,
    weighted_jaccard,
};

use crate::error::{Error, Result};
use crate::item::ItemId;
use crate::surprise::ItemDistance;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DistanceKind {
    Euclidean,
    Cosine,
    Jaccard,
    JensenShannon,
    Aitchison,
    Npmi,
}

impl DistanceKind {
    pub const ALL: [DistanceKind; 6] = [
        DistanceKind::Euclidean,
        DistanceKind::Cosine,
        DistanceKind::Jaccard,
        DistanceKind::JensenShannon,
        DistanceKind::Aitchison,
        DistanceKind::Npmi,
    ];

    pub fn name(self) -> &'static str {
        match self {
            DistanceKind::Euclidean => "euclidean",
            DistanceKind::Cosine => "cosine",
            DistanceKind::Jaccard => "jaccard",
            DistanceKind::JensenShannon => "jensen-shannon",
            DistanceKind::Aitchison => "aitchison",
            DistanceKind::Npmi => "npmi",
        }
    }

    /// Kinds that only make sense for compositional (non-negative,
    /// relative) vectors.
    pub fn needs_compositional(self) -> bool {
        matches!(
            self,
            DistanceKind::Jaccard | DistanceKind::JensenShannon | DistanceKind::Aitchison
        )
    }

    pub fn is_vector_kind(self) -> bool {
        self != DistanceKind::Npmi
    }

    /// Distance between two raw vectors. Aitchison inputs with zero parts
    /// are smoothed with [`bmt_smooth`] first.
    pub fn between(self, x: &[f64], y: &[f64]) -> Result<f64> {
        match self {
            DistanceKind::Euclidean => euclidean(x, y),
            DistanceKind::Cosine => cosine_distance(x, y),
            DistanceKind::Jaccard => weighted_jaccard(x, y),
            DistanceKind::JensenShannon => jensen_shannon(x, y),
            DistanceKind::Aitchison => aitchison(&bmt_smooth(x)?, &bmt_smooth(y)?),
            DistanceKind::Npmi => Err(Error::IncompatibleKind("npmi distance needs an NPMI model, not vectors")),
        }
    }

    /// Per-vector preparation so that [`VectorSpace`] lookups reduce to a
    /// cheap pairwise formula.
    fn prepare(self, x: &[f64]) -> Result<Vec<f64>> {
        if x.is_empty() {
            return Err(Error::EmptyVector);
        }
        if let Some(index) = x.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFiniteComponent { index });
        }
        match self {
            DistanceKind::Euclidean => Ok(x.to_vec()),
            DistanceKind::Cosine => {
                if x.iter().all(|&v| v == 0.0) {
                    Err(Error::ZeroVector)
                } else {
                    Ok(x.to_vec())
                }
            }
            DistanceKind::Jaccard => closure(x).map(|_| x.to_vec()),
            DistanceKind::JensenShannon => closure(x),
            DistanceKind::Aitchison => clr(&bmt_smooth(x)?),
            DistanceKind::Npmi => Err(Error::IncompatibleKind("npmi distance needs an NPMI model, not vectors")),
        }
    }

    fn between_prepared(self, x: &[f64], y: &[f64]) -> Result<f64> {
        match self {
            DistanceKind::JensenShannon => jensen_shannon_closed(x, y),
            // Prepared Aitchison vectors are already in clr coordinates.
            DistanceKind::Aitchison => euclidean(x, y),
            other => other.between(x, y),
        }
    }
}

impl fmt::Display for DistanceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for DistanceKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lowered = s.trim().to_ascii_lowercase().replace('_', "-");
        DistanceKind::ALL
            .into_iter()
            .find(|k| k.name() == lowered || (lowered == "js" && *k == DistanceKind::JensenShannon))
            .ok_or(Error::InvalidParameter(
                "unknown distance; expected euclidean, cosine, jaccard, jensen-shannon, aitchison or npmi",
            ))
    }
}

/// A dense real representation of one catalog item.
#[derive(Debug, Clone, PartialEq)]
pub struct ItemVector {
    pub item: ItemId,
    pub components: Vec<f64>,
}

/// Item vectors validated and preprocessed for one vector distance kind.
#[derive(Debug, Clone)]
pub struct VectorSpace {
    kind: DistanceKind,
    ids: Vec<ItemId>,
    prepared: Vec<Vec<f64>>,
}

impl VectorSpace {
    pub fn new(kind: DistanceKind, vectors: impl IntoIterator<Item = (ItemId, Vec<f64>)>) -> Result<Self> {
        let mut rows: Vec<(ItemId, Vec<f64>)> = vectors.into_iter().collect();
        rows.sort_by_key(|(id, _)| *id);
        if let Some(pair) = rows.windows(2).find(|p| p[0].0 == p[1].0) {
            return Err(Error::DuplicateRepresentation(pair[0].0));
        }
        let dim = rows.first().map(|(_, v)| v.len());
        let mut ids = Vec::with_capacity(rows.len());
        let mut prepared = Vec::with_capacity(rows.len());
        for (item, components) in rows {
            let wrap = |reason| Error::InvalidVector {
                item,
                reason: Box::new(reason),
            };
            if Some(components.len()) != dim {
                return Err(wrap(Error::DimensionMismatch {
                    left: dim.unwrap_or(0),
                    right: components.len(),
                }));
            }
            prepared.push(kind.prepare(&components).map_err(wrap)?);
            ids.push(item);
        }
        Ok(VectorSpace { kind, ids, prepared })
    }

    pub fn from_item_vectors(kind: DistanceKind, vectors: impl IntoIterator<Item = ItemVector>) -> Result<Self> {
        Self::new(kind, vectors.into_iter().map(|v| (v.item, v.components)))
    }

    pub fn kind(&self) -> DistanceKind {
        self.kind
    }

    pub fn ids(&self) -> &[ItemId] {
        &self.ids
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    fn lookup(&self, item: ItemId) -> Result<&[f64]> {
        self.ids
            .binary_search(&item)
            .map(|i| self.prepared[i].as_slice())
            .map_err(|_| Error::UnknownItem(item))
    }
}

impl ItemDistance for VectorSpace {
    fn distance(&self, a: ItemId, b: ItemId) -> Result<f64> {
        let x = self.lookup(a)?;
        let y = self.lookup(b)?;
        if a == b {
            return Ok(0.0);
        }
        self.kind.between_prepared(x, y)
    }
}
