//! Model N: exposure shares estimated from who rated what.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use surprise_core::distance::NpmiModel;
use surprise_core::ItemId;

use crate::error::{EvalError, Result};
use crate::ratings::{RatingEvent, UserId};

/// Any rating counts as exposure. The user population is everyone in the log.
pub fn build_npmi_model(events: &[RatingEvent]) -> Result<NpmiModel> {
    if events.is_empty() {
        return Err(EvalError::data("cannot build an NPMI model from an empty log"));
    }
    let mut by_user: BTreeMap<UserId, BTreeSet<ItemId>> = BTreeMap::new();
    for ev in events {
        by_user.entry(ev.user).or_default().insert(ev.item);
    }
    let mut single: HashMap<ItemId, u32> = HashMap::new();
    let mut joint: HashMap<(ItemId, ItemId), u32> = HashMap::new();
    for items in by_user.values() {
        let items: Vec<ItemId> = items.iter().copied().collect();
        for (n, &a) in items.iter().enumerate() {
            *single.entry(a).or_insert(0) += 1;
            for &b in &items[n + 1..] {
                *joint.entry((a, b)).or_insert(0) += 1;
            }
        }
    }
    let users = u32::try_from(by_user.len()).map_err(|_| EvalError::data("too many users"))?;
    Ok(NpmiModel::from_counts(users, single, joint)?)
}
