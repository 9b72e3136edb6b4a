use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::item::ItemId;
use crate::surprise::ItemDistance;

/// Dense symmetric item-by-item distance table with a zero diagonal.
/// Rows and columns follow ascending [`ItemId`].
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    ids: Vec<ItemId>,
    values: Vec<f64>,
}

fn sorted_unique(items: &[ItemId]) -> Result<Vec<ItemId>> {
    let mut ids = items.to_vec();
    ids.sort_unstable();
    for pair in ids.windows(2) {
        if pair[0] == pair[1] {
            return Err(Error::DuplicateRepresentation(pair[0]));
        }
    }
    Ok(ids)
}

fn check_entry(a: ItemId, b: ItemId, value: f64) -> Result<f64> {
    if value.is_finite() && value >= 0.0 {
        Ok(value)
    } else {
        Err(Error::InvalidDistance { a, b, value })
    }
}

/// Number of entries strictly above the diagonal of an `n × n` matrix.
pub fn upper_len(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

impl DistanceMatrix {
    /// Evaluates `d` once for every unordered pair. Items `d` cannot
    /// represent are reported together.
    pub fn build<D: ItemDistance + ?Sized>(items: &[ItemId], d: &D) -> Result<Self> {
        let ids = sorted_unique(items)?;
        let mut missing = Vec::new();
        for &id in &ids {
            match d.distance(id, id) {
                Ok(_) => {}
                Err(Error::UnknownItem(_)) => missing.push(id),
                Err(e) => return Err(e),
            }
        }
        if !missing.is_empty() {
            return Err(Error::MissingItems(missing));
        }
        let mut upper = Vec::with_capacity(upper_len(ids.len()));
        for (r, &a) in ids.iter().enumerate() {
            for &b in &ids[r + 1..] {
                upper.push(check_entry(a, b, d.distance(a, b)?)?);
            }
        }
        Self::from_upper_triangle(ids, upper)
    }

    /// Assembles a matrix from its strict upper triangle in row-major order.
    /// `ids` must be strictly ascending.
    pub fn from_upper_triangle(ids: Vec<ItemId>, upper: Vec<f64>) -> Result<Self> {
        if ids.windows(2).any(|p| p[0] >= p[1]) {
            return Err(Error::MalformedMatrix("item ids are not strictly ascending"));
        }
        let n = ids.len();
        if upper.len() != upper_len(n) {
            return Err(Error::MalformedMatrix("upper triangle has the wrong length"));
        }
        let mut values = vec![0.0; n * n];
        let mut it = upper.into_iter();
        for r in 0..n {
            for c in r + 1..n {
                let v = check_entry(ids[r], ids[c], it.next().unwrap_or(f64::NAN))?;
                values[r * n + c] = v;
                values[c * n + r] = v;
            }
        }
        Ok(DistanceMatrix { ids, values })
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

    pub fn index_of(&self, item: ItemId) -> Option<usize> {
        self.ids.binary_search(&item).ok()
    }

    pub fn contains(&self, item: ItemId) -> bool {
        self.index_of(item).is_some()
    }

    pub fn row(&self, index: usize) -> &[f64] {
        let n = self.ids.len();
        &self.values[index * n..(index + 1) * n]
    }

    pub fn get(&self, a: ItemId, b: ItemId) -> Option<f64> {
        let r = self.index_of(a)?;
        let c = self.index_of(b)?;
        Some(self.values[r * self.ids.len() + c])
    }

    pub fn upper_triangle(&self) -> impl Iterator<Item = f64> + '_ {
        let n = self.ids.len();
        (0..n).flat_map(move |r| self.values[r * n + r + 1..(r + 1) * n].iter().copied())
    }

    /// Restricts the matrix to `items`; every item must be present.
    pub fn subset(&self, items: &[ItemId]) -> Result<Self> {
        let ids = sorted_unique(items)?;
        let missing: Vec<ItemId> = ids.iter().copied().filter(|&i| !self.contains(i)).collect();
        if !missing.is_empty() {
            return Err(Error::MissingItems(missing));
        }
        let idx: Vec<usize> = ids.iter().filter_map(|&i| self.index_of(i)).collect();
        let n = self.ids.len();
        let mut upper = Vec::with_capacity(upper_len(ids.len()));
        for (r, &a) in idx.iter().enumerate() {
            for &b in &idx[r + 1..] {
                upper.push(self.values[a * n + b]);
            }
        }
        Self::from_upper_triangle(ids, upper)
    }
}

impl ItemDistance for DistanceMatrix {
    fn distance(&self, a: ItemId, b: ItemId) -> Result<f64> {
        let r = self.index_of(a).ok_or(Error::UnknownItem(a))?;
        let c = self.index_of(b).ok_or(Error::UnknownItem(b))?;
        Ok(self.values[r * self.ids.len() + c])
    }
}
