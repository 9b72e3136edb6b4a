//! Seeded synthetic worlds: a rating log with controlled frame overlap and
//! five-star placement, plus matching item descriptions and dense vectors.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use surprise_core::ItemId;

use crate::error::{EvalError, Result};
use crate::ratings::{RatingEvent, UserId};

pub const BASE_TIMESTAMP: u64 = 1_000_000_000;
pub const EVENT_SPACING: u64 = 60;
const WORDS_PER_TOPIC: usize = 40;
const SYLLABLES: [&str; 24] = [
    "ka", "lo", "mir", "tav", "sen", "dru", "pol", "vex", "nar", "qui", "bel", "zor", "fen", "gal", "hu", "jor", "wil",
    "tep", "ras", "mu", "cor", "yen", "sab", "ol",
];

/// Which users are active in each frame.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Overlap {
    /// Frame `f` uses users `f*stride .. f*stride + width` (wrapping).
    Sliding { width: usize, stride: usize },
    /// Users are split into one block per frame.
    Disjoint,
    /// Every user in every frame.
    Shared,
}

impl fmt::Display for Overlap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Overlap::Sliding { width, stride } => write!(f, "sliding:{width}:{stride}"),
            Overlap::Disjoint => f.write_str("disjoint"),
            Overlap::Shared => f.write_str("shared"),
        }
    }
}

impl FromStr for Overlap {
    type Err = EvalError;

    /// `shared`, `disjoint` or `sliding:WIDTH:STRIDE`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        match s.split(':').collect::<Vec<_>>().as_slice() {
            ["shared"] => Ok(Overlap::Shared),
            ["disjoint"] => Ok(Overlap::Disjoint),
            ["sliding", w, st] => {
                let parse = |v: &str| {
                    v.parse::<usize>()
                        .ok()
                        .filter(|&n| n > 0)
                        .ok_or_else(|| EvalError::usage(format!("`{v}` is not a positive integer in `{s}`")))
                };
                Ok(Overlap::Sliding {
                    width: parse(w)?,
                    stride: parse(st)?,
                })
            }
            _ => Err(EvalError::usage(format!(
                "unknown overlap profile `{s}`; expected shared, disjoint or sliding:WIDTH:STRIDE"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SynthConfig {
    pub users: usize,
    pub items: usize,
    pub events: usize,
    pub frame_size: usize,
    pub overlap: Overlap,
    /// 1-based frames in which no rating reaches five stars.
    pub no_five_star_frames: BTreeSet<usize>,
    pub topics: usize,
    /// Items become available evenly over this many frames; `None` spreads
    /// the release over the whole log.
    pub release_frames: Option<usize>,
    pub seed: u64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig {
            users: 100,
            items: 400,
            events: 6000,
            frame_size: 1500,
            overlap: Overlap::Sliding { width: 50, stride: 15 },
            no_five_star_frames: BTreeSet::new(),
            topics: 6,
            release_frames: None,
            seed: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SynthWorld {
    /// Chronological; user ids start at 1, item ids at 1.
    pub events: Vec<RatingEvent>,
    pub descriptions: BTreeMap<ItemId, String>,
    pub vectors: BTreeMap<ItemId, Vec<f64>>,
}

impl SynthConfig {
    fn frame_count(&self) -> usize {
        self.events.div_ceil(self.frame_size)
    }

    fn validate(&self) -> Result<()> {
        if self.users == 0
            || self.items == 0
            || self.events == 0
            || self.frame_size == 0
            || self.topics == 0
            || self.release_frames == Some(0)
        {
            return Err(EvalError::usage(
                "users, items, events, frame size, topics and release frames must be positive",
            ));
        }
        match self.overlap {
            Overlap::Sliding { width, .. } if width > self.users => Err(EvalError::usage(format!(
                "sliding width {width} exceeds the {} users",
                self.users
            ))),
            Overlap::Disjoint if self.users < self.frame_count() => Err(EvalError::usage(format!(
                "disjoint profile needs at least one user per frame ({} frames, {} users)",
                self.frame_count(),
                self.users
            ))),
            _ => Ok(()),
        }
    }

    /// Active users of 0-based frame `f`, as 0-based indices.
    fn active_users(&self, f: usize) -> Vec<usize> {
        match self.overlap {
            Overlap::Sliding { width, stride } => (0..width).map(|j| (f * stride + j) % self.users).collect(),
            Overlap::Disjoint => {
                let frames = self.frame_count();
                let start = f * self.users / frames;
                let end = (f + 1) * self.users / frames;
                (start..end).collect()
            }
            Overlap::Shared => (0..self.users).collect(),
        }
    }
}

fn mixture(rng: &mut ChaCha8Rng, topics: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..topics).map(|_| rng.gen::<f64>().powi(3)).collect();
    let total: f64 = raw.iter().sum::<f64>().max(f64::MIN_POSITIVE);
    raw.into_iter().map(|w| w / total).collect()
}

fn pick_weighted(rng: &mut ChaCha8Rng, weights: &[f64]) -> usize {
    let mut x = rng.gen::<f64>() * weights.iter().sum::<f64>();
    for (i, w) in weights.iter().enumerate() {
        if x < *w {
            return i;
        }
        x -= w;
    }
    weights.len() - 1
}

fn topic_vocabulary(rng: &mut ChaCha8Rng, topics: usize) -> Vec<Vec<String>> {
    let mut seen = BTreeSet::new();
    (0..topics)
        .map(|_| {
            let mut words = Vec::with_capacity(WORDS_PER_TOPIC);
            while words.len() < WORDS_PER_TOPIC {
                let n = rng.gen_range(2..=4);
                let w: String = (0..n).map(|_| *SYLLABLES.choose(rng).expect("non-empty")).collect();
                if seen.insert(w.clone()) {
                    words.push(w);
                }
            }
            words
        })
        .collect()
}

pub fn generate(cfg: &SynthConfig) -> Result<SynthWorld> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let item_mix: Vec<Vec<f64>> = (0..cfg.items).map(|_| mixture(&mut rng, cfg.topics)).collect();
    let user_mix: Vec<Vec<f64>> = (0..cfg.users).map(|_| mixture(&mut rng, cfg.topics)).collect();
    let frames = cfg.frame_count();
    let release_frames = cfg.release_frames.unwrap_or(frames);

    let mut rated: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); cfg.users];
    let mut events = Vec::with_capacity(cfg.events);
    for f in 0..frames {
        let active = cfg.active_users(f);
        let released = ((f + 1) * cfg.items).div_ceil(release_frames).clamp(1, cfg.items);
        let muted = cfg.no_five_star_frames.contains(&(f + 1));
        let mut started = BTreeSet::new();
        let in_frame = cfg.frame_size.min(cfg.events - f * cfg.frame_size);
        for e in 0..in_frame {
            let u = active[e % active.len()];
            let fresh: Vec<usize> = (0..released).filter(|i| !rated[u].contains(i)).collect();
            let fresh = if fresh.is_empty() {
                (0..cfg.items).filter(|i| !rated[u].contains(i)).collect()
            } else {
                fresh
            };
            if fresh.is_empty() {
                return Err(EvalError::usage(format!(
                    "user {} has rated all {} items; raise --items or lower --events",
                    u + 1,
                    cfg.items
                )));
            }
            let affinity = |i: usize| -> f64 { item_mix[i].iter().zip(&user_mix[u]).map(|(a, b)| a * b).sum() };
            let item = (0..3)
                .map(|_| fresh[rng.gen_range(0..fresh.len())])
                .max_by(|&a, &b| affinity(a).total_cmp(&affinity(b)).then(b.cmp(&a)))
                .expect("three draws");
            rated[u].insert(item);
            let noise: f64 = rng.gen_range(-1.0..1.0);
            let mut stars = (1.0 + 8.0 * affinity(item) + noise).round().clamp(1.0, 5.0) as u8;
            if started.insert(u) && !muted {
                stars = 5;
            }
            if muted {
                stars = stars.min(4);
            }
            let index = events.len() as u64;
            events.push(RatingEvent::new(
                u as UserId + 1,
                item as u32 + 1,
                stars,
                BASE_TIMESTAMP + EVENT_SPACING * index,
            ));
        }
    }
    events.sort();

    let vocab = topic_vocabulary(&mut rng, cfg.topics);
    let mut descriptions = BTreeMap::new();
    let mut vectors = BTreeMap::new();
    for (i, mix) in item_mix.iter().enumerate() {
        let len = rng.gen_range(15..=30);
        let words: Vec<&str> = (0..len)
            .map(|_| {
                let t = pick_weighted(&mut rng, mix);
                vocab[t][rng.gen_range(0..WORDS_PER_TOPIC)].as_str()
            })
            .collect();
        let id = ItemId(i as u32 + 1);
        descriptions.insert(id, words.join(" "));
        let centre = 1.0 / cfg.topics as f64;
        vectors.insert(
            id,
            mix.iter().map(|w| w - centre + rng.gen_range(-0.05..0.05)).collect(),
        );
    }
    Ok(SynthWorld {
        events,
        descriptions,
        vectors,
    })
}

pub fn write_descriptions<W: std::io::Write>(d: &BTreeMap<ItemId, String>, mut out: W) -> std::io::Result<()> {
    for (id, text) in d {
        writeln!(out, "{id}\t{text}")?;
    }
    Ok(())
}
