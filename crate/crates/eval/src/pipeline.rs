//! End-to-end evaluation run: load, represent, build or reuse the distance
//! matrix, segment, measure and write reports.

use std::collections::BTreeSet;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;
use surprise_core::distance::DistanceMatrix;
use surprise_core::recommend::Scorer;
use surprise_core::ItemId;

use crate::config::RunConfig;
use crate::error::{EvalError, Result};
use crate::evaluation::{run_series, segment, summarize, Summary, SurpriseSeries};
use crate::matrix_io::{build_matrix, cached_matrix};
use crate::ratings::{parse_ratings, RatingEvent};
use crate::representations::text::{default_stopwords, load_descriptions, load_stopwords};
use crate::representations::{
    build_count_vsm, build_npmi_model, build_user_item, load_dense_vectors, ItemModel, Model,
};

pub const SERIES_HEADER: &str = "interval,end_frame,n_users,mean_ssn,min_ssn,max_ssn";

pub fn load_events(cfg: &RunConfig) -> Result<Vec<RatingEvent>> {
    let path = cfg.ratings_path()?;
    let parsed = parse_ratings(path, cfg.ratings_format()?)?;
    if !parsed.rejected.is_empty() {
        let first = &parsed.rejected[0];
        log::warn!(
            "{}: {} malformed lines skipped (first at line {}: {})",
            path.display(),
            parsed.rejected.len(),
            first.line,
            first.reason
        );
    }
    Ok(parsed.events)
}

pub fn build_item_model(cfg: &RunConfig, events: &[RatingEvent]) -> Result<ItemModel> {
    let model = match cfg.model()? {
        Model::CountVsm => {
            let path = cfg
                .descriptions_path
                .as_deref()
                .ok_or_else(|| EvalError::usage("model C needs --descriptions"))?;
            let catalog = load_descriptions(path)?;
            let stopwords = match &cfg.stopwords_path {
                Some(p) => load_stopwords(p)?,
                None => default_stopwords(),
            };
            let vsm = build_count_vsm(&catalog, &stopwords)?;
            log::info!(
                "count VSM: {} items, {} terms, {} rejected",
                vsm.vectors.len(),
                vsm.vocabulary.len(),
                vsm.rejected.len()
            );
            ItemModel::Vectors(vsm.vectors)
        }
        Model::Embedding => {
            let path = cfg.vectors_path.as_deref().ok_or_else(|| EvalError::usage("model P needs --vectors"))?;
            ItemModel::Vectors(load_dense_vectors(path)?)
        }
        Model::UserItem => {
            let users: Vec<u32> = events.iter().map(|e| e.user).collect::<BTreeSet<_>>().into_iter().collect();
            let m = build_user_item(events, &users)?;
            log::info!("user-item model: {} items over {} users", m.vectors.len(), m.users.len());
            ItemModel::Vectors(m.vectors)
        }
        Model::Npmi => ItemModel::Npmi(build_npmi_model(events)?),
    };
    Ok(model)
}

/// Represented items that occur in the log, sorted.
pub fn matrix_items(model: &ItemModel, events: &[RatingEvent]) -> Vec<ItemId> {
    let rated: BTreeSet<ItemId> = events.iter().map(|e| e.item).collect();
    model.items().into_iter().filter(|i| rated.contains(i)).collect()
}

/// The run's distance matrix, from the cache when its key matches.
pub fn prepare_matrix(cfg: &RunConfig, events: &[RatingEvent]) -> Result<DistanceMatrix> {
    let key = cfg.matrix_key()?;
    let (matrix, hit) = cached_matrix(&cfg.cache_dir(), &key, || {
        let model = build_item_model(cfg, events)?;
        let items = matrix_items(&model, events);
        if items.is_empty() {
            return Err(EvalError::data("no rated item has a representation"));
        }
        let source = model.distance_source(cfg.distance()?, &items)?;
        build_matrix(&items, &source, cfg.threads)
    })?;
    log::info!(
        "distance matrix {} ({} items){}",
        &key[..12],
        matrix.len(),
        if hit { ", from cache" } else { "" }
    );
    Ok(matrix)
}

#[derive(Debug, Clone, Serialize)]
struct SummaryRecord<'a> {
    model: String,
    distance: &'a str,
    algorithm: &'a str,
    mode: &'a str,
    median: Option<f64>,
    mean: Option<f64>,
    stdev: Option<f64>,
    n_intervals: usize,
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub series: SurpriseSeries,
    pub summary: Option<Summary>,
    pub series_path: PathBuf,
    pub summary_path: PathBuf,
    pub fingerprint_path: PathBuf,
}

pub fn write_series_csv<W: Write>(series: &SurpriseSeries, mut out: W) -> std::io::Result<()> {
    writeln!(out, "{SERIES_HEADER}")?;
    for m in &series.measurements {
        writeln!(out, "{},{},{},{},{},{}", m.interval, m.end_frame, m.n_users(), m.mean, m.min, m.max)?;
    }
    Ok(())
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    fs::write(path, bytes).map_err(|e| EvalError::io(path, e))
}

/// Runs the whole evaluation described by `cfg` and writes its reports.
pub fn evaluate(cfg: &RunConfig) -> Result<RunOutcome> {
    cfg.validate()?;
    let fingerprint = cfg.fingerprint()?;
    let events = load_events(cfg)?;
    let work = || -> Result<SurpriseSeries> {
        let matrix = prepare_matrix(cfg, &events)?;
        let seg = segment(&events, cfg.frame_size, cfg.min_common_users)?;
        log::info!(
            "{} frames, {} eligible intervals, {} trailing events dropped",
            seg.frames.len(),
            seg.intervals.len(),
            seg.dropped
        );
        let scorer = Scorer::new(cfg.algorithm()?.scorer(cfg.k), &matrix)?;
        run_series(&seg, &scorer, &cfg.harness(), fingerprint.clone())
    };
    let series = match cfg.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| EvalError::usage(format!("cannot start {n} worker threads: {e}")))?
            .install(work)?,
        None => work()?,
    };
    let summary = if series.measurements.is_empty() {
        log::warn!("no eligible intervals; writing an empty series");
        None
    } else {
        Some(summarize(&series)?)
    };

    fs::create_dir_all(&cfg.output_dir).map_err(|e| EvalError::io(&cfg.output_dir, e))?;
    let stem = cfg.output_stem()?;
    let series_path = cfg.output_dir.join(format!("{stem}.series.csv"));
    let summary_path = cfg.output_dir.join(format!("{stem}.summary.json"));
    let fingerprint_path = cfg.output_dir.join(format!("{stem}.fingerprint"));

    let mut csv = Vec::new();
    write_series_csv(&series, &mut csv).map_err(|e| EvalError::io(&series_path, e))?;
    write_file(&series_path, &csv)?;

    let distance = cfg.distance()?;
    let record = SummaryRecord {
        model: cfg.model()?.to_string(),
        distance: distance.name(),
        algorithm: cfg.algorithm()?.name(),
        mode: cfg.mode.name(),
        median: summary.map(|s| s.median),
        mean: summary.map(|s| s.mean),
        stdev: summary.map(|s| s.stdev),
        n_intervals: series.measurements.len(),
    };
    let mut json = serde_json::to_vec_pretty(&record).map_err(|e| EvalError::data(e.to_string()))?;
    json.push(b'\n');
    write_file(&summary_path, &json)?;
    write_file(&fingerprint_path, format!("{fingerprint}\n").as_bytes())?;

    Ok(RunOutcome {
        series,
        summary,
        series_path,
        summary_path,
        fingerprint_path,
    })
}

/// One line in the layout of a results table: model, distance, algorithm,
/// median, mean, standard deviation.
pub fn summary_row(cfg: &RunConfig, summary: Option<&Summary>) -> Result<String> {
    let head = format!(
        "{:<5} {:<16} {:<5}",
        cfg.model()?.to_string(),
        cfg.distance()?.name(),
        cfg.algorithm()?.name()
    );
    Ok(match summary {
        Some(s) => format!(
            "{head} {:>8.3} {:>8.3} {:>8.3}{}",
            s.median,
            s.mean,
            s.stdev,
            if s.stdev_defined { "" } else { " (single interval)" }
        ),
        None => format!("{head} {:>8} {:>8} {:>8}", "-", "-", "-"),
    })
}

pub fn summary_header() -> String {
    format!("{:<5} {:<16} {:<5} {:>8} {:>8} {:>8}", "model", "distance", "alg", "median", "mean", "stdev")
}
