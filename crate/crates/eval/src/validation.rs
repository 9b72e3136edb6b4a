//! Greedy bounds checked against exhaustive enumeration on random 2-D worlds.

use std::io::{self, Write};
use std::ops::RangeInclusive;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use surprise_core::distance::{DistanceKind, VectorSpace};
use surprise_core::oracle::{exact_bounds, MAX_EXACT_ITEMS};
use surprise_core::surprise::greedy_bounds;
use surprise_core::{ExposureSet, ItemId};

use crate::error::{EvalError, Result};

/// Gaps at or below this count as exact agreement; a greedy bound beyond
/// the exact one by more than this is a violation.
pub const GAP_TOLERANCE: f64 = 1e-9;
/// Added to every coordinate before Jaccard and Jensen-Shannon.
pub const NONNEGATIVE_SHIFT: f64 = 0.01;

pub const DEFAULT_INSTANCES: usize = 200;
pub const DEFAULT_SIZES: RangeInclusive<usize> = 5..=8;
pub const DEFAULT_KINDS: [DistanceKind; 4] = [
    DistanceKind::Euclidean,
    DistanceKind::Cosine,
    DistanceKind::Jaccard,
    DistanceKind::JensenShannon,
];

/// One exposed point (item 0) and `points.len() - 1` unknown ones.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub points: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InstanceResult {
    pub exact_max: f64,
    pub greedy_max: f64,
    pub exact_min: f64,
    pub greedy_min: f64,
}

impl InstanceResult {
    pub fn max_gap(&self) -> f64 {
        self.exact_max - self.greedy_max
    }

    pub fn min_gap(&self) -> f64 {
        self.greedy_min - self.exact_min
    }

    pub fn is_violation(&self) -> bool {
        self.max_gap() < -GAP_TOLERANCE || self.min_gap() < -GAP_TOLERANCE
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub kind: DistanceKind,
    pub instances: Vec<InstanceResult>,
}

impl ReportRow {
    fn mean(&self, f: impl Fn(&InstanceResult) -> f64) -> f64 {
        self.instances.iter().map(f).sum::<f64>() / self.instances.len() as f64
    }

    fn rate(&self, f: impl Fn(&InstanceResult) -> bool) -> f64 {
        self.instances.iter().filter(|r| f(r)).count() as f64 / self.instances.len() as f64
    }

    pub fn exact_max(&self) -> f64 {
        self.mean(|r| r.exact_max)
    }

    pub fn greedy_max(&self) -> f64 {
        self.mean(|r| r.greedy_max)
    }

    pub fn exact_min(&self) -> f64 {
        self.mean(|r| r.exact_min)
    }

    pub fn greedy_min(&self) -> f64 {
        self.mean(|r| r.greedy_min)
    }

    pub fn max_gap(&self) -> f64 {
        self.mean(InstanceResult::max_gap)
    }

    pub fn min_gap(&self) -> f64 {
        self.mean(InstanceResult::min_gap)
    }

    pub fn largest_max_gap(&self) -> f64 {
        self.instances.iter().map(InstanceResult::max_gap).fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn largest_min_gap(&self) -> f64 {
        self.instances.iter().map(InstanceResult::min_gap).fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn zero_max_gap_rate(&self) -> f64 {
        self.rate(|r| r.max_gap().abs() <= GAP_TOLERANCE)
    }

    pub fn zero_min_gap_rate(&self) -> f64 {
        self.rate(|r| r.min_gap().abs() <= GAP_TOLERANCE)
    }

    pub fn violations(&self) -> usize {
        self.instances.iter().filter(|r| r.is_violation()).count()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleReport {
    pub seed: u64,
    pub rows: Vec<ReportRow>,
}

pub fn generate_instances(count: usize, sizes: RangeInclusive<usize>, seed: u64) -> Vec<Instance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let unknown = rng.gen_range(sizes.clone());
            Instance {
                points: (0..=unknown).map(|_| [rng.gen::<f64>(), rng.gen::<f64>()]).collect(),
            }
        })
        .collect()
}

pub fn solve_instance(inst: &Instance, kind: DistanceKind) -> Result<InstanceResult> {
    let shift = if matches!(kind, DistanceKind::Jaccard | DistanceKind::JensenShannon) {
        NONNEGATIVE_SHIFT
    } else {
        0.0
    };
    let space = VectorSpace::new(
        kind,
        inst.points
            .iter()
            .enumerate()
            .map(|(n, p)| (ItemId(n as u32), vec![p[0] + shift, p[1] + shift])),
    )?;
    let exposed: ExposureSet = [ItemId(0)].into_iter().collect();
    let unknown: ExposureSet = (1..inst.points.len() as u32).map(ItemId).collect();
    let exact = exact_bounds(&unknown, &exposed, &space)?;
    let greedy = greedy_bounds(&unknown, &exposed, &space, unknown.len())?;
    Ok(InstanceResult {
        exact_max: exact.max_value,
        greedy_max: greedy.max_value,
        exact_min: exact.min_value,
        greedy_min: greedy.min_value,
    })
}

pub fn validate_greedy(
    count: usize,
    sizes: RangeInclusive<usize>,
    kinds: &[DistanceKind],
    seed: u64,
) -> Result<OracleReport> {
    if count == 0 {
        return Err(EvalError::usage("instance count must be positive"));
    }
    if sizes.is_empty() || *sizes.start() == 0 {
        return Err(EvalError::usage("instance sizes must be a non-empty range of positive sizes"));
    }
    if *sizes.end() > MAX_EXACT_ITEMS {
        return Err(EvalError::usage(format!(
            "instance size {} exceeds the exact enumeration cap of {MAX_EXACT_ITEMS}",
            sizes.end()
        )));
    }
    if kinds.is_empty() {
        return Err(EvalError::usage("no distances selected"));
    }
    if let Some(k) = kinds.iter().find(|k| !k.is_vector_kind()) {
        return Err(EvalError::usage(format!("distance {k} needs a probability model, not 2-D points")));
    }
    let instances = generate_instances(count, sizes, seed);
    let rows = kinds
        .iter()
        .map(|&kind| {
            let instances = instances
                .par_iter()
                .map(|inst| solve_instance(inst, kind))
                .collect::<Result<Vec<_>>>()?;
            Ok(ReportRow { kind, instances })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(OracleReport { seed, rows })
}

pub const CSV_HEADER: &str = "distance,s_pmax,s_pmax_greedy,s_pmin,s_pmin_greedy,max_gap,min_gap,largest_max_gap,largest_min_gap,zero_max_gap_rate,zero_min_gap_rate,violations,instances";

pub fn write_report_csv<W: Write>(report: &OracleReport, mut out: W) -> io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for r in &report.rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{},{}",
            r.kind,
            r.exact_max(),
            r.greedy_max(),
            r.exact_min(),
            r.greedy_min(),
            r.max_gap(),
            r.min_gap(),
            r.largest_max_gap(),
            r.largest_min_gap(),
            r.zero_max_gap_rate(),
            r.zero_min_gap_rate(),
            r.violations(),
            r.instances.len()
        )?;
    }
    Ok(())
}

pub fn write_report_table<W: Write>(report: &OracleReport, mut out: W) -> io::Result<()> {
    writeln!(
        out,
        "{:<16} {:>10} {:>10} {:>10} {:>10} {:>9} {:>9} {:>7} {:>7} {:>5}",
        "distance", "S_pmax", "^S_pmax", "S_pmin", "^S_pmin", "max gap", "min gap", "=max", "=min", "viol"
    )?;
    for r in &report.rows {
        writeln!(
            out,
            "{:<16} {:>10.3} {:>10.3} {:>10.3} {:>10.3} {:>9.4} {:>9.4} {:>6.1}% {:>6.1}% {:>5}",
            r.kind.name(),
            r.exact_max(),
            r.greedy_max(),
            r.exact_min(),
            r.greedy_min(),
            r.max_gap(),
            r.min_gap(),
            100.0 * r.zero_max_gap_rate(),
            100.0 * r.zero_min_gap_rate(),
            r.violations()
        )?;
    }
    writeln!(out, "instances: {}, seed: {}", report.rows[0].instances.len(), report.seed)
}
