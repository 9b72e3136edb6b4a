//! Item representations (Models C, P, U and N) and which distances each admits.

pub mod npmi;
pub mod text;
pub mod user_item;
pub mod vectors;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use surprise_core::distance::{DistanceKind, NpmiModel, VectorSpace};
use surprise_core::{ItemDistance, ItemId};

use crate::error::{EvalError, Result};

pub use npmi::build_npmi_model;
pub use text::{build_count_vsm, Catalog, CountVsm};
pub use user_item::{build_user_item, UserItemVectors};
pub use vectors::{load_dense_vectors, parse_dense_vectors, write_dense_vectors};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Model {
    /// tf-idf over item descriptions.
    CountVsm,
    /// Precomputed dense embeddings.
    Embedding,
    /// Per-item rating vectors, one component per user.
    UserItem,
    /// Co-exposure probabilities.
    Npmi,
}

impl Model {
    pub const ALL: [Model; 4] = [Model::CountVsm, Model::Embedding, Model::UserItem, Model::Npmi];

    pub fn letter(self) -> &'static str {
        match self {
            Model::CountVsm => "C",
            Model::Embedding => "P",
            Model::UserItem => "U",
            Model::Npmi => "N",
        }
    }

    pub fn admits(self, kind: DistanceKind) -> bool {
        check_compatible(self, kind).is_ok()
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.letter())
    }
}

impl FromStr for Model {
    type Err = EvalError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "C" => Ok(Model::CountVsm),
            "P" => Ok(Model::Embedding),
            "U" => Ok(Model::UserItem),
            "N" => Ok(Model::Npmi),
            other => Err(EvalError::usage(format!("unknown model `{other}`; expected C, P, U or N"))),
        }
    }
}

/// Fails with a usage error naming the rule when `model` cannot feed `kind`.
pub fn check_compatible(model: Model, kind: DistanceKind) -> Result<()> {
    let rule = match (model, kind) {
        (Model::Npmi, DistanceKind::Npmi) => return Ok(()),
        (Model::Npmi, _) => "Model N admits only the npmi distance",
        (_, DistanceKind::Npmi) => "the npmi distance requires the NPMI model (Model N)",
        (Model::Embedding, k) if k.needs_compositional() => {
            "jaccard, jensen-shannon and aitchison need compositional data and apply only to Models C and U"
        }
        _ => return Ok(()),
    };
    Err(EvalError::usage(format!(
        "model {model} cannot be combined with distance {kind}: {rule}"
    )))
}

/// Every model/distance pair that can run, model-major.
pub fn compatible_combinations() -> Vec<(Model, DistanceKind)> {
    Model::ALL
        .iter()
        .flat_map(|&m| DistanceKind::ALL.iter().map(move |&k| (m, k)))
        .filter(|&(m, k)| m.admits(k))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RejectReason {
    MissingDescription,
    TooShort { terms: usize },
    /// Every remaining term occurs in all surviving descriptions.
    NoInformativeTerms,
    NoRatings,
}

impl fmt::Display for RejectReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RejectReason::MissingDescription => f.write_str("no description"),
            RejectReason::TooShort { terms } => write!(f, "only {terms} terms after stopword removal"),
            RejectReason::NoInformativeTerms => f.write_str("all terms occur in every description"),
            RejectReason::NoRatings => f.write_str("no ratings"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rejection {
    pub item: ItemId,
    pub reason: RejectReason,
}

/// A built representation, before a distance is chosen.
#[derive(Debug, Clone)]
pub enum ItemModel {
    Vectors(BTreeMap<ItemId, Vec<f64>>),
    Npmi(NpmiModel),
}

impl ItemModel {
    pub fn items(&self) -> Vec<ItemId> {
        match self {
            ItemModel::Vectors(v) => v.keys().copied().collect(),
            ItemModel::Npmi(m) => m.items().collect(),
        }
    }

    /// Binds the representation to a distance kind, restricted to `items`.
    pub fn distance_source(&self, kind: DistanceKind, items: &[ItemId]) -> Result<DistanceSource> {
        match (self, kind) {
            (ItemModel::Npmi(m), DistanceKind::Npmi) => Ok(DistanceSource::Npmi(m.clone())),
            (ItemModel::Vectors(v), k) if k.is_vector_kind() => {
                let rows = items.iter().filter_map(|i| v.get(i).map(|c| (*i, c.clone())));
                Ok(DistanceSource::Vectors(VectorSpace::new(k, rows)?))
            }
            _ => Err(EvalError::usage(format!("distance {kind} does not fit this representation"))),
        }
    }
}

#[derive(Debug, Clone)]
pub enum DistanceSource {
    Vectors(VectorSpace),
    Npmi(NpmiModel),
}

impl ItemDistance for DistanceSource {
    fn distance(&self, a: ItemId, b: ItemId) -> surprise_core::Result<f64> {
        match self {
            DistanceSource::Vectors(v) => v.distance(a, b),
            DistanceSource::Npmi(m) => m.distance(a, b),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn thirteen_combinations() {
        let combos = compatible_combinations();
        assert_eq!(combos.len(), 13);
        let per_model = |m| combos.iter().filter(|c| c.0 == m).count();
        assert_eq!(per_model(Model::CountVsm), 5);
        assert_eq!(per_model(Model::Embedding), 2);
        assert_eq!(per_model(Model::UserItem), 5);
        assert_eq!(per_model(Model::Npmi), 1);
    }

    #[test]
    fn npmi_rules_are_named() {
        let err = check_compatible(Model::Npmi, DistanceKind::Euclidean).unwrap_err();
        assert!(matches!(err, EvalError::Usage(_)));
        assert!(err.to_string().contains("Model N admits only"));
        assert!(check_compatible(Model::CountVsm, DistanceKind::Aitchison).is_ok());
        assert!(check_compatible(Model::Embedding, DistanceKind::Jaccard).is_err());
        assert!(check_compatible(Model::UserItem, DistanceKind::Npmi).is_err());
    }

    #[test]
    fn model_letters() {
        for m in Model::ALL {
            assert_eq!(m.letter().parse::<Model>().unwrap(), m);
        }
        assert!("Q".parse::<Model>().is_err());
    }
}
