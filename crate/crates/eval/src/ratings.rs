//! Rating logs: MovieLens `::`-separated `.dat` files and a plain CSV form.

use std::fmt;
use std::fs;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use surprise_core::ItemId;

use crate::error::{EvalError, Result};

pub type UserId = u32;

/// One rating observation. Field order gives the chronological sort:
/// timestamp, then user, then item.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RatingEvent {
    pub timestamp: u64,
    pub user: UserId,
    pub item: ItemId,
    pub rating: u8,
}

impl RatingEvent {
    pub fn new(user: UserId, item: u32, rating: u8, timestamp: u64) -> Self {
        RatingEvent {
            timestamp,
            user,
            item: ItemId(item),
            rating,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RatingsFormat {
    /// `UserID::MovieID::Rating::Timestamp`
    MovielensDat,
    /// Header `user,item,rating,timestamp`.
    Csv,
}

impl RatingsFormat {
    /// `.dat` files are MovieLens, everything else CSV.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("dat") => RatingsFormat::MovielensDat,
            _ => RatingsFormat::Csv,
        }
    }
}

impl FromStr for RatingsFormat {
    type Err = EvalError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "movielens-dat" | "dat" | "movielens" => Ok(RatingsFormat::MovielensDat),
            "csv" => Ok(RatingsFormat::Csv),
            other => Err(EvalError::usage(format!(
                "unknown ratings format `{other}`; expected movielens-dat or csv"
            ))),
        }
    }
}

impl fmt::Display for RatingsFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RatingsFormat::MovielensDat => "movielens-dat",
            RatingsFormat::Csv => "csv",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RejectedLine {
    pub line: usize,
    pub reason: String,
}

#[derive(Debug, Clone, Default)]
pub struct ParsedRatings {
    /// Sorted by (timestamp, user, item).
    pub events: Vec<RatingEvent>,
    pub rejected: Vec<RejectedLine>,
}

fn parse_fields(fields: &[&str]) -> std::result::Result<RatingEvent, String> {
    if fields.len() != 4 {
        return Err(format!("expected 4 fields, found {}", fields.len()));
    }
    let num = |name: &str, raw: &str| -> std::result::Result<u64, String> {
        raw.trim()
            .parse::<u64>()
            .map_err(|_| format!("{name} `{}` is not a non-negative integer", raw.trim()))
    };
    let user = num("user", fields[0])?;
    let item = num("item", fields[1])?;
    let rating = num("rating", fields[2])?;
    let timestamp = num("timestamp", fields[3])?;
    let user = u32::try_from(user).map_err(|_| format!("user id {user} is out of range"))?;
    let item = u32::try_from(item).map_err(|_| format!("item id {item} is out of range"))?;
    if !(1..=5).contains(&rating) {
        return Err(format!("rating {rating} is outside 1..=5"));
    }
    Ok(RatingEvent::new(user, item, rating as u8, timestamp))
}

/// Parses a rating log held in memory. Malformed lines are collected in
/// [`ParsedRatings::rejected`]; a log without a single valid line is an error.
pub fn parse_ratings_str(text: &str, format: RatingsFormat) -> Result<ParsedRatings> {
    let mut out = ParsedRatings::default();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() {
            continue;
        }
        let fields: Vec<&str> = match format {
            RatingsFormat::MovielensDat => trimmed.split("::").collect(),
            RatingsFormat::Csv => {
                if out.events.is_empty() && out.rejected.is_empty() && trimmed.starts_with("user") {
                    continue;
                }
                trimmed.split(',').collect()
            }
        };
        match parse_fields(&fields) {
            Ok(ev) => out.events.push(ev),
            Err(reason) => out.rejected.push(RejectedLine { line, reason }),
        }
    }
    if out.events.is_empty() {
        return Err(EvalError::data(format!(
            "no valid rating lines ({} rejected)",
            out.rejected.len()
        )));
    }
    out.events.sort();
    Ok(out)
}

pub fn parse_ratings(path: &Path, format: RatingsFormat) -> Result<ParsedRatings> {
    let text = fs::read_to_string(path).map_err(|e| EvalError::io(path, e))?;
    parse_ratings_str(&text, format).map_err(|e| match e {
        EvalError::Data(msg) => EvalError::data(format!("{}: {msg}", path.display())),
        other => other,
    })
}

pub fn write_ratings_csv<W: Write>(events: &[RatingEvent], mut out: W) -> std::io::Result<()> {
    writeln!(out, "user,item,rating,timestamp")?;
    for ev in events {
        writeln!(out, "{},{},{},{}", ev.user, ev.item, ev.rating, ev.timestamp)?;
    }
    Ok(())
}
