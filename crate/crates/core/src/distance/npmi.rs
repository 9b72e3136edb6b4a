use alloc::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::item::ItemId;
use crate::surprise::ItemDistance;

/// Exposure probabilities estimated from a user population: the share of
/// users exposed to each item and to each pair of items.
#[derive(Debug, Clone, PartialEq)]
pub struct NpmiModel {
    p_single: BTreeMap<ItemId, f64>,
    /// Keyed by `(low, high)`; absent pairs have probability zero.
    p_joint: BTreeMap<(ItemId, ItemId), f64>,
    user_count: u32,
}

fn pair_key(a: ItemId, b: ItemId) -> (ItemId, ItemId) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

impl NpmiModel {
    /// Builds the model from exposure counts. Items with zero exposure are
    /// dropped; pair counts may be given in either orientation.
    pub fn from_counts(
        user_count: u32,
        single: impl IntoIterator<Item = (ItemId, u32)>,
        joint: impl IntoIterator<Item = ((ItemId, ItemId), u32)>,
    ) -> Result<Self> {
        if user_count == 0 {
            return Err(Error::InvalidParameter("NPMI model needs at least one user"));
        }
        let users = f64::from(user_count);
        let mut p_single = BTreeMap::new();
        for (item, count) in single {
            if count > user_count {
                return Err(Error::InvalidParameter("item exposure count exceeds user count"));
            }
            if count > 0 {
                p_single.insert(item, f64::from(count) / users);
            }
        }
        let mut p_joint = BTreeMap::new();
        for ((a, b), count) in joint {
            if count == 0 || a == b {
                continue;
            }
            let (pa, pb) = match (p_single.get(&a), p_single.get(&b)) {
                (Some(&pa), Some(&pb)) => (pa, pb),
                (None, _) => return Err(Error::UnknownItem(a)),
                (_, None) => return Err(Error::UnknownItem(b)),
            };
            let p = f64::from(count) / users;
            if p > pa.min(pb) {
                return Err(Error::InvalidParameter("pair exposure exceeds single-item exposure"));
            }
            p_joint.insert(pair_key(a, b), p);
        }
        Ok(NpmiModel {
            p_single,
            p_joint,
            user_count,
        })
    }

    pub fn user_count(&self) -> u32 {
        self.user_count
    }

    pub fn items(&self) -> impl Iterator<Item = ItemId> + '_ {
        self.p_single.keys().copied()
    }

    pub fn contains(&self, item: ItemId) -> bool {
        self.p_single.contains_key(&item)
    }

    pub fn p_single(&self, item: ItemId) -> Option<f64> {
        self.p_single.get(&item).copied()
    }

    /// Joint exposure probability. On the diagonal this is `p_single`.
    pub fn p_joint(&self, a: ItemId, b: ItemId) -> Option<f64> {
        let pa = self.p_single(a)?;
        self.p_single(b)?;
        if a == b {
            return Some(pa);
        }
        Some(self.p_joint.get(&pair_key(a, b)).copied().unwrap_or(0.0))
    }
}

/// NPMI mapped from `[-1, 1]` similarity to `[0, 1]` distance: `(1 - npmi) / 2`.
///
/// Never co-consumed pairs are at distance 1; identical items and pairs
/// every user consumed together are at distance 0.
pub fn npmi_distance(a: ItemId, b: ItemId, model: &NpmiModel) -> Result<f64> {
    let pa = model.p_single(a).ok_or(Error::UnknownItem(a))?;
    let pb = model.p_single(b).ok_or(Error::UnknownItem(b))?;
    if a == b {
        return Ok(0.0);
    }
    let pab = model.p_joint(a, b).unwrap_or(0.0);
    if pab <= 0.0 {
        return Ok(1.0);
    }
    if pab >= 1.0 {
        return Ok(0.0);
    }
    let npmi = (libm::log(pab / (pa * pb)) / -libm::log(pab)).clamp(-1.0, 1.0);
    Ok((1.0 - npmi) / 2.0)
}

impl ItemDistance for NpmiModel {
    fn distance(&self, a: ItemId, b: ItemId) -> Result<f64> {
        npmi_distance(a, b, self)
    }
}
