//! Per-interval measurement of normalised surprise.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use surprise_core::distance::DistanceMatrix;
use surprise_core::recommend::{rank_top_n, Scorer, ScorerKind, UserHistory};
use surprise_core::surprise::{greedy_bounds, sequence_surprise};
use surprise_core::{ExposureSet, ItemId, RecSequence};

use super::segment::{EligibleInterval, Segmentation};
use crate::error::{EvalError, Result};
use crate::ratings::UserId;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    /// Rank a random pool drawn from the unknown items.
    Sampled,
    /// Select from every unknown item.
    Exhaustive,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Sampled => "sampled",
            Mode::Exhaustive => "exhaustive",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Mode {
    type Err = EvalError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "sampled" => Ok(Mode::Sampled),
            "exhaustive" => Ok(Mode::Exhaustive),
            other => Err(EvalError::usage(format!("unknown mode `{other}`; expected sampled or exhaustive"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HarnessConfig {
    pub top_n: usize,
    pub sample_size: usize,
    pub seed: u64,
    pub mode: Mode,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Measurement {
    /// 1-based position among the eligible intervals.
    pub interval: usize,
    pub end_frame: usize,
    pub per_user: BTreeMap<UserId, f64>,
    pub mean: f64,
    pub min: f64,
    pub max: f64,
}

impl Measurement {
    pub fn n_users(&self) -> usize {
        self.per_user.len()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SurpriseSeries {
    pub measurements: Vec<Measurement>,
    pub fingerprint: String,
}

/// Per-user random stream: the seed picks the generator, the
/// `(interval, user)` pair picks an independent stream within it.
pub fn user_rng(seed: u64, interval: usize, user: UserId) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((interval as u64) << 32) | u64::from(user));
    rng
}

/// What one user sees inside an interval.
#[derive(Debug, Clone)]
pub struct UserState {
    pub history: UserHistory,
    pub unknown: ExposureSet,
}

/// Exposure and unknown sets for every eval user, relative to the items of
/// the interval that `matrix` covers. Users left with an empty side are
/// skipped with a warning.
pub fn user_states(
    seg: &Segmentation,
    interval: &EligibleInterval,
    matrix: &DistanceMatrix,
) -> BTreeMap<UserId, UserState> {
    let mut universe = ExposureSet::new();
    let mut rated: BTreeMap<UserId, BTreeMap<ItemId, u8>> = BTreeMap::new();
    for ev in seg.interval_events(interval.end_frame) {
        if !matrix.contains(ev.item) {
            continue;
        }
        universe.insert(ev.item);
        if interval.eval_users.contains(&ev.user) {
            rated.entry(ev.user).or_default().insert(ev.item, ev.rating);
        }
    }
    let mut out = BTreeMap::new();
    for &user in &interval.eval_users {
        let Some(ratings) = rated.remove(&user) else {
            log::warn!("frame {}: user {user} rated no represented item, skipped", interval.end_frame);
            continue;
        };
        let history = UserHistory::new(ratings).expect("ratings are non-empty and in range");
        let unknown = universe.difference(history.exposed());
        if unknown.is_empty() {
            log::warn!("frame {}: user {user} has no unknown items, skipped", interval.end_frame);
            continue;
        }
        out.insert(user, UserState { history, unknown });
    }
    out
}

/// The list a scorer would show `user`, before normalisation.
pub fn recommend(
    state: &UserState,
    scorer: &Scorer<&DistanceMatrix>,
    cfg: &HarnessConfig,
    interval: usize,
    user: UserId,
) -> Result<RecSequence> {
    let unknown = state.unknown.to_vec();
    match cfg.mode {
        Mode::Sampled => {
            let pool_size = cfg.sample_size.min(unknown.len());
            let mut rng = user_rng(cfg.seed, interval, user);
            let mut idx = rand::seq::index::sample(&mut rng, unknown.len(), pool_size).into_vec();
            idx.sort_unstable();
            let pool: Vec<ItemId> = idx.into_iter().map(|i| unknown[i]).collect();
            Ok(rank_top_n(&pool, scorer, &state.history, cfg.top_n.min(pool_size))?)
        }
        Mode::Exhaustive => {
            let k = cfg.top_n.min(unknown.len());
            match scorer.kind() {
                ScorerKind::Msi => Ok(greedy_bounds(&state.unknown, state.history.exposed(), *scorer.distances(), k)?.max_seq),
                ScorerKind::Lsi => Ok(greedy_bounds(&state.unknown, state.history.exposed(), *scorer.distances(), k)?.min_seq),
                ScorerKind::Knn { .. } => Ok(rank_top_n(&unknown, scorer, &state.history, k)?),
            }
        }
    }
}

fn measure_user(
    state: &UserState,
    scorer: &Scorer<&DistanceMatrix>,
    cfg: &HarnessConfig,
    interval: usize,
    user: UserId,
) -> Result<f64> {
    let seq = recommend(state, scorer, cfg, interval, user)?;
    let d = *scorer.distances();
    let exposed = state.history.exposed();
    let bounds = greedy_bounds(&state.unknown, exposed, d, seq.len())?;
    Ok(bounds.normalize(sequence_surprise(&seq, exposed, d)?))
}

/// Measures one interval. Runs on the current rayon pool.
pub fn evaluate_interval(
    ordinal: usize,
    interval: &EligibleInterval,
    seg: &Segmentation,
    scorer: &Scorer<&DistanceMatrix>,
    cfg: &HarnessConfig,
) -> Result<Measurement> {
    if cfg.top_n == 0 || cfg.sample_size == 0 {
        return Err(EvalError::usage("top-n and sample size must be positive"));
    }
    if cfg.top_n > cfg.sample_size {
        return Err(EvalError::usage("top-n cannot exceed the sample size"));
    }
    let states = user_states(seg, interval, scorer.distances());
    if states.is_empty() {
        return Err(EvalError::data(format!(
            "interval ending at frame {} has no measurable users",
            interval.end_frame
        )));
    }
    let values = states
        .par_iter()
        .map(|(&user, state)| measure_user(state, scorer, cfg, ordinal, user).map(|v| (user, v)))
        .collect::<Result<Vec<_>>>()?;
    let per_user: BTreeMap<UserId, f64> = values.into_iter().collect();
    let mean = per_user.values().sum::<f64>() / per_user.len() as f64;
    let min = per_user.values().copied().fold(f64::INFINITY, f64::min);
    let max = per_user.values().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok(Measurement {
        interval: ordinal,
        end_frame: interval.end_frame,
        per_user,
        mean,
        min,
        max,
    })
}

/// One measurement per eligible interval, in order.
pub fn run_series(
    seg: &Segmentation,
    scorer: &Scorer<&DistanceMatrix>,
    cfg: &HarnessConfig,
    fingerprint: String,
) -> Result<SurpriseSeries> {
    let mut measurements = Vec::with_capacity(seg.intervals.len());
    for (n, interval) in seg.intervals.iter().enumerate() {
        let m = evaluate_interval(n + 1, interval, seg, scorer, cfg).map_err(|e| match e {
            EvalError::Data(msg) => EvalError::data(format!("interval {}: {msg}", n + 1)),
            EvalError::Surprise(err) => EvalError::data(format!("interval {}: {err}", n + 1)),
            other => other,
        })?;
        log::info!(
            "interval {} (frames 1..={}): {} users, mean {:.4}",
            m.interval,
            m.end_frame,
            m.n_users(),
            m.mean
        );
        measurements.push(m);
    }
    Ok(SurpriseSeries {
        measurements,
        fingerprint,
    })
}
