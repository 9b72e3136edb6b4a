//! Surprise as a finite resource.
//!
//! This crate holds the allocation-only, IO-free core of the normalised
//! surprise metric for recommender systems:
//!
//! | Module | Contents |
//! |--------|----------|
//! | [`item`] | item identifiers, exposure sets, recommendation sequences |
//! | [`surprise`] | item surprise, sequence surprise, greedy bounds, normalised surprise |
//! | [`distance`] | vector distances, zero replacement, NPMI distance, dense distance matrices |
//! | [`oracle`] | exact bounds by permutation / k-arrangement enumeration |
//! | [`recommend`] | item-kNN, most-surprising and least-surprising scorers |
//!
//! The surprise of an item is its distance to the closest item the user
//! already knows. Consuming a sequence of items grows the known set, so the
//! total surprise of a recommendation list depends on its order. The maximum
//! and minimum achievable totals bound a scale on which any list can be
//! placed, giving a score in `[0, 1]`.
//!
//! ```
//! use surprise_core::{distance::{DistanceKind, VectorSpace}, item::{ExposureSet, ItemId, RecSequence}};
//! use surprise_core::surprise::{greedy_bounds, normalized_surprise};
//!
//! let space = VectorSpace::new(
//!     DistanceKind::Euclidean,
//!     [(ItemId(0), vec![0.0, 0.0]), (ItemId(1), vec![1.0, 0.0]), (ItemId(2), vec![2.0, 0.0])],
//! ).unwrap();
//! let exposed = ExposureSet::from_iter([ItemId(0)]);
//! let unknown = ExposureSet::from_iter([ItemId(1), ItemId(2)]);
//!
//! let bounds = greedy_bounds(&unknown, &exposed, &space, 2).unwrap();
//! assert_eq!(bounds.max_value, 3.0);
//! assert_eq!(bounds.min_value, 2.0);
//!
//! let seq = RecSequence::new(vec![ItemId(2), ItemId(1)]).unwrap();
//! assert_eq!(normalized_surprise(&seq, &unknown, &exposed, &space).unwrap(), 1.0);
//! ```
#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod distance;
mod error;
pub mod item;
pub mod oracle;
pub mod recommend;
pub mod surprise;

pub use error::{Error, Result};
pub use item::{ExposureSet, ItemId, RecSequence};
pub use surprise::{ItemDistance, SurpriseBounds};
