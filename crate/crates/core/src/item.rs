//! Item identifiers and the two collections the metric works over: the set
//! of items a user knows and an ordered recommendation list.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};

/// Catalog item identifier. The total order is the tie-break order
/// everywhere a choice between equal scores has to be made.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ItemId(pub u32);

impl fmt::Display for ItemId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl From<u32> for ItemId {
    fn from(v: u32) -> Self {
        ItemId(v)
    }
}

/// A finite set of items, iterated in ascending id order.
///
/// Used both for the items a user has been exposed to and for the items
/// still unknown to them.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ExposureSet {
    items: BTreeSet<ItemId>,
}

impl ExposureSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn contains(&self, item: ItemId) -> bool {
        self.items.contains(&item)
    }

    /// Returns `false` if the item was already present.
    pub fn insert(&mut self, item: ItemId) -> bool {
        self.items.insert(item)
    }

    pub fn remove(&mut self, item: ItemId) -> bool {
        self.items.remove(&item)
    }

    pub fn iter(&self) -> impl DoubleEndedIterator<Item = ItemId> + ExactSizeIterator + '_ {
        self.items.iter().copied()
    }

    /// Items of `self` that are not in `other`.
    pub fn difference(&self, other: &ExposureSet) -> ExposureSet {
        ExposureSet {
            items: self.items.difference(&other.items).copied().collect(),
        }
    }

    pub fn union(&self, other: &ExposureSet) -> ExposureSet {
        ExposureSet {
            items: self.items.union(&other.items).copied().collect(),
        }
    }

    pub fn is_disjoint(&self, other: &ExposureSet) -> bool {
        self.items.is_disjoint(&other.items)
    }

    pub fn first_shared(&self, other: &ExposureSet) -> Option<ItemId> {
        self.items.intersection(&other.items).next().copied()
    }

    pub fn to_vec(&self) -> Vec<ItemId> {
        self.iter().collect()
    }
}

impl FromIterator<ItemId> for ExposureSet {
    fn from_iter<T: IntoIterator<Item = ItemId>>(iter: T) -> Self {
        ExposureSet {
            items: iter.into_iter().collect(),
        }
    }
}

impl Extend<ItemId> for ExposureSet {
    fn extend<T: IntoIterator<Item = ItemId>>(&mut self, iter: T) {
        self.items.extend(iter)
    }
}

/// An ordered recommendation list without repeated items.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RecSequence {
    items: Vec<ItemId>,
}

impl RecSequence {
    pub fn new(items: Vec<ItemId>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for &item in &items {
            if !seen.insert(item) {
                return Err(Error::DuplicateItem(item));
            }
        }
        Ok(RecSequence { items })
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn items(&self) -> &[ItemId] {
        &self.items
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn head(&self) -> Option<ItemId> {
        self.items.first().copied()
    }

    pub fn tail(&self) -> RecSequence {
        RecSequence {
            items: self.items.get(1..).map(<[_]>::to_vec).unwrap_or_default(),
        }
    }

    /// `self` followed by `other`; fails if the two share an item.
    pub fn concat(&self, other: &RecSequence) -> Result<RecSequence> {
        let mut items = self.items.clone();
        items.extend_from_slice(&other.items);
        RecSequence::new(items)
    }

    pub fn to_exposure(&self) -> ExposureSet {
        self.items.iter().copied().collect()
    }

    pub fn into_vec(self) -> Vec<ItemId> {
        self.items
    }
}
