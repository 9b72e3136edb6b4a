//! Model U: each item is the vector of ratings it received, one slot per user.

use std::collections::BTreeMap;

use surprise_core::ItemId;

use super::{RejectReason, Rejection};
use crate::error::{EvalError, Result};
use crate::ratings::{RatingEvent, UserId};

#[derive(Debug, Clone, PartialEq)]
pub struct UserItemVectors {
    /// Sorted; component `j` of every vector belongs to `users[j]`.
    pub users: Vec<UserId>,
    pub vectors: BTreeMap<ItemId, Vec<f64>>,
    pub rejected: Vec<Rejection>,
}

/// Ratings from users outside `users` are ignored, so an item rated only by
/// them is rejected. A user who rated an item twice keeps the later rating.
pub fn build_user_item(events: &[RatingEvent], users: &[UserId]) -> Result<UserItemVectors> {
    let mut users = users.to_vec();
    users.sort_unstable();
    users.dedup();
    if users.is_empty() {
        return Err(EvalError::data("user universe is empty"));
    }
    let mut chronological: Vec<&RatingEvent> = events.iter().collect();
    chronological.sort();

    let mut vectors: BTreeMap<ItemId, Vec<f64>> = BTreeMap::new();
    let mut seen = std::collections::BTreeSet::new();
    for ev in chronological {
        seen.insert(ev.item);
        let Ok(col) = users.binary_search(&ev.user) else { continue };
        let v = vectors.entry(ev.item).or_insert_with(|| vec![0.0; users.len()]);
        v[col] = f64::from(ev.rating);
    }
    let rejected = seen
        .into_iter()
        .filter(|i| !vectors.contains_key(i))
        .map(|item| Rejection {
            item,
            reason: RejectReason::NoRatings,
        })
        .collect();
    Ok(UserItemVectors {
        users,
        vectors,
        rejected,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use surprise_core::distance::DistanceKind;

    #[test]
    fn single_rating() {
        let ev = [RatingEvent::new(1, 7, 5, 0)];
        let m = build_user_item(&ev, &[1, 2, 3]).unwrap();
        assert_eq!(m.vectors[&ItemId(7)], vec![5.0, 0.0, 0.0]);
    }

    #[test]
    fn outside_users_leave_item_unrated() {
        let ev = [RatingEvent::new(1, 7, 5, 0), RatingEvent::new(9, 8, 4, 1)];
        let m = build_user_item(&ev, &[1, 2]).unwrap();
        assert!(!m.vectors.contains_key(&ItemId(8)));
        assert_eq!(m.rejected, vec![Rejection { item: ItemId(8), reason: RejectReason::NoRatings }]);
    }

    #[test]
    fn later_rating_wins() {
        let ev = [RatingEvent::new(2, 7, 1, 50), RatingEvent::new(2, 7, 4, 10)];
        let m = build_user_item(&ev, &[2]).unwrap();
        assert_eq!(m.vectors[&ItemId(7)], vec![1.0]);
    }

    #[test]
    fn identical_columns_are_at_distance_zero() {
        let ev = [
            RatingEvent::new(1, 1, 3, 0),
            RatingEvent::new(1, 2, 3, 1),
            RatingEvent::new(2, 1, 5, 2),
            RatingEvent::new(2, 2, 5, 3),
        ];
        let m = build_user_item(&ev, &[1, 2]).unwrap();
        for kind in DistanceKind::ALL.into_iter().filter(|k| k.is_vector_kind()) {
            let d = kind.between(&m.vectors[&ItemId(1)], &m.vectors[&ItemId(2)]).unwrap();
            assert!(d.abs() < 1e-12, "{kind}: {d}");
        }
    }

    #[test]
    fn empty_universe() {
        assert!(build_user_item(&[], &[]).is_err());
    }
}
