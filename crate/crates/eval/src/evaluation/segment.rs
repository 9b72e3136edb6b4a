//! Chronological timeframes and the intervals eligible for measurement.

use std::collections::BTreeSet;

use crate::error::{EvalError, Result};
use crate::ratings::{RatingEvent, UserId};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Timeframe {
    /// 1-based.
    pub index: usize,
    pub events: Vec<RatingEvent>,
    pub users: BTreeSet<UserId>,
}

/// Frames `1..=end_frame` form the interval.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EligibleInterval {
    pub end_frame: usize,
    pub eval_users: BTreeSet<UserId>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Segmentation {
    pub frames: Vec<Timeframe>,
    pub intervals: Vec<EligibleInterval>,
    /// Trailing events that did not fill a frame.
    pub dropped: usize,
}

impl Segmentation {
    /// Events of frames `1..=end_frame`.
    pub fn interval_events(&self, end_frame: usize) -> impl Iterator<Item = &RatingEvent> {
        self.frames[..end_frame].iter().flat_map(|f| f.events.iter())
    }
}

/// Splits a chronological log into frames of exactly `frame_size` events and
/// marks each consecutive pair sharing at least `min_common_users` users who
/// gave a five-star rating in the later frame.
pub fn segment(events: &[RatingEvent], frame_size: usize, min_common_users: usize) -> Result<Segmentation> {
    if frame_size == 0 {
        return Err(EvalError::usage("frame size must be positive"));
    }
    if min_common_users == 0 {
        return Err(EvalError::usage("min common users must be positive"));
    }
    if events.windows(2).any(|w| w[0] > w[1]) {
        return Err(EvalError::data("rating log is not in chronological order"));
    }
    let frames: Vec<Timeframe> = events
        .chunks_exact(frame_size)
        .enumerate()
        .map(|(n, chunk)| Timeframe {
            index: n + 1,
            events: chunk.to_vec(),
            users: chunk.iter().map(|e| e.user).collect(),
        })
        .collect();

    let mut intervals = Vec::new();
    for pair in frames.windows(2) {
        let (earlier, later) = (&pair[0], &pair[1]);
        let five_star: BTreeSet<UserId> = later.events.iter().filter(|e| e.rating == 5).map(|e| e.user).collect();
        let qualifying: BTreeSet<UserId> = earlier.users.intersection(&five_star).copied().collect();
        if qualifying.len() >= min_common_users {
            intervals.push(EligibleInterval {
                end_frame: later.index,
                eval_users: qualifying,
            });
        }
    }
    Ok(Segmentation {
        frames,
        intervals,
        dropped: events.len() % frame_size,
    })
}
