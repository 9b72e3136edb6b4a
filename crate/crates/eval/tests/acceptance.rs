//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit on any failure.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};
use surprise_core::distance::{bmt_smooth, DistanceKind, NpmiModel, VectorSpace};
use surprise_core::surprise::{greedy_bounds, item_surprise, normalized_surprise, sequence_surprise};
use surprise_core::{ExposureSet, ItemId, RecSequence};
use surprise_eval::cli::run_with_output;
use surprise_eval::evaluation::segment;
use surprise_eval::ratings::{parse_ratings, RatingsFormat};
use surprise_eval::representations::compatible_combinations;
use surprise_eval::validation::{validate_greedy, DEFAULT_KINDS, GAP_TOLERANCE};

/// Tolerance for the exhaustive-mode predictions (MSI = 1, LSI = 0).
const PREDICTION_TOLERANCE: f64 = 1e-9;
const INVARIANT_CASES: u32 = 1000;

struct Outcome {
    pass: bool,
    detail: String,
}

fn cli(args: &[&str]) -> i32 {
    let mut sink = Vec::new();
    run_with_output(std::iter::once("surprise").chain(args.iter().copied()), &mut sink)
}

fn p(path: &Path) -> &str {
    path.to_str().expect("utf-8 temp path")
}

fn synth(dir: &Path, args: &[&str]) -> PathBuf {
    let mut full = vec!["synth", "--output-dir", p(dir)];
    full.extend_from_slice(args);
    assert_eq!(cli(&full), 0, "synth {args:?}");
    dir.to_path_buf()
}

struct Run<'a> {
    world: &'a Path,
    out: &'a Path,
    model: &'a str,
    distance: &'a str,
    algorithm: &'a str,
    extra: &'a [&'a str],
}

fn evaluate(run: &Run) -> Result<serde_json::Value, String> {
    let ratings = run.world.join("ratings.csv");
    let descriptions = run.world.join("descriptions.tsv");
    let vectors = run.world.join("vectors.txt");
    let mut args = vec![
        "evaluate",
        "--ratings", p(&ratings),
        "--descriptions", p(&descriptions),
        "--vectors", p(&vectors),
        "--model", run.model,
        "--distance", run.distance,
        "--algorithm", run.algorithm,
        "--output-dir", p(run.out),
    ];
    args.extend_from_slice(run.extra);
    let code = cli(&args);
    if code != 0 {
        return Err(format!("{} {} {}: exit {code}", run.model, run.distance, run.algorithm));
    }
    let mode = if run.extra.contains(&"exhaustive") { "exhaustive" } else { "sampled" };
    let stem = format!("{}_{}_{}_{}", run.model, run.distance, run.algorithm, mode);
    let bytes = fs::read(run.out.join(format!("{stem}.summary.json"))).map_err(|e| e.to_string())?;
    serde_json::from_slice(&bytes).map_err(|e| e.to_string())
}

fn series_means(out: &Path, stem: &str) -> Vec<f64> {
    fs::read_to_string(out.join(format!("{stem}.series.csv")))
        .unwrap()
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(3).unwrap().parse().unwrap())
        .collect()
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let report = validate_greedy(200, 5..=8, &DEFAULT_KINDS, 1).expect("oracle run");
    let elapsed = start.elapsed();
    let violations: usize = report.rows.iter().map(|r| r.violations()).sum();
    let euclid = report.rows.iter().find(|r| r.kind == DistanceKind::Euclidean).unwrap();
    let gaps = euclid.instances.iter().filter(|r| r.max_gap() > GAP_TOLERANCE).count();
    let rates: Vec<String> = report
        .rows
        .iter()
        .map(|r| format!("{} {:.1}%/{:.1}%", r.kind, 100.0 * r.zero_max_gap_rate(), 100.0 * r.zero_min_gap_rate()))
        .collect();
    Outcome {
        pass: violations == 0 && gaps > 0 && elapsed < Duration::from_secs(120),
        detail: format!(
            "{violations} violations over 200x4 instances; euclidean max_gap>0 in {gaps} instances (largest {:.4}); zero-gap max/min: {}; {:.1}s",
            euclid.largest_max_gap(),
            rates.join(", "),
            elapsed.as_secs_f64()
        ),
    }
}

fn criterion_2(tmp: &Path) -> Outcome {
    let start = Instant::now();
    let world = synth(
        &tmp.join("c2-world"),
        &["--users", "40", "--items", "60", "--events", "1200", "--frame-size", "200",
          "--overlap", "sliding:30:5", "--release-frames", "1", "--seed", "7"],
    );
    let out = tmp.join("c2-out");
    let mut failures = Vec::new();
    let mut intervals = 0;
    for (model, kind) in compatible_combinations() {
        let (model, distance) = (model.to_string(), kind.name());
        for (alg, want) in [("msi", 1.0), ("lsi", 0.0)] {
            let run = Run {
                world: &world,
                out: &out,
                model: &model,
                distance,
                algorithm: alg,
                extra: &["--mode", "exhaustive", "--frame-size", "200", "--min-common-users", "10"],
            };
            match evaluate(&run) {
                Ok(summary) => {
                    let means = series_means(&out, &format!("{model}_{distance}_{alg}_exhaustive"));
                    intervals = means.len();
                    let mean = summary["mean"].as_f64().unwrap_or(f64::NAN);
                    let worst = means.iter().map(|m| (m - want).abs()).fold((mean - want).abs(), f64::max);
                    if means.is_empty() || worst.is_nan() || worst > PREDICTION_TOLERANCE {
                        failures.push(format!("{model}/{distance}/{alg} off by {worst:e}"));
                    }
                }
                Err(e) => failures.push(e),
            }
        }
    }
    let elapsed = start.elapsed();
    Outcome {
        pass: failures.is_empty() && elapsed < Duration::from_secs(300),
        detail: format!(
            "13 combinations x {{msi, lsi}}, {intervals} intervals each, tolerance {PREDICTION_TOLERANCE:e}; {}; {:.1}s; no real log available",
            if failures.is_empty() { "all on target".to_string() } else { failures.join("; ") },
            elapsed.as_secs_f64()
        ),
    }
}

fn criterion_3(tmp: &Path) -> Outcome {
    let start = Instant::now();
    let world = synth(
        &tmp.join("c3-world"),
        &["--users", "200", "--items", "1500", "--events", "12000", "--frame-size", "1500",
          "--overlap", "sliding:100:25", "--seed", "3"],
    );
    let out = tmp.join("c3-out");
    let mut failures = Vec::new();
    let mut knn_range = (f64::INFINITY, f64::NEG_INFINITY);
    for (model, kind) in compatible_combinations() {
        let (model, distance) = (model.to_string(), kind.name());
        let mut means = Vec::new();
        for alg in ["msi", "knn", "lsi"] {
            let run = Run {
                world: &world,
                out: &out,
                model: &model,
                distance,
                algorithm: alg,
                extra: &["--mode", "sampled", "--top-n", "10", "--seed", "42"],
            };
            match evaluate(&run) {
                Ok(s) => means.push(s["mean"].as_f64().unwrap_or(f64::NAN)),
                Err(e) => failures.push(e),
            }
        }
        if let [msi, knn, lsi] = means[..] {
            knn_range = (knn_range.0.min(knn), knn_range.1.max(knn));
            let in_unit = [msi, knn, lsi].iter().all(|m| (0.0..=1.0).contains(m));
            if !(msi > knn && knn > lsi && in_unit && knn > 0.0 && knn < 1.0) {
                failures.push(format!("{model}/{distance}: msi {msi:.3} knn {knn:.3} lsi {lsi:.3}"));
            }
        }
    }
    Outcome {
        pass: failures.is_empty(),
        detail: format!(
            "12000-event synthetic log, 13 combinations; kNN means in [{:.3}, {:.3}]; {}; {:.1}s",
            knn_range.0,
            knn_range.1,
            if failures.is_empty() { "MSI > kNN > LSI everywhere".to_string() } else { failures.join("; ") },
            start.elapsed().as_secs_f64()
        ),
    }
}

fn vec_strategy(nonneg: bool) -> BoxedStrategy<Vec<f64>> {
    if nonneg {
        prop::collection::vec(prop_oneof![Just(0.0), 0.01f64..10.0], 4)
            .prop_filter("positive part", |v| v.iter().any(|&x| x > 0.0))
            .boxed()
    } else {
        prop::collection::vec(-10.0f64..10.0, 4)
            .prop_filter("non-zero", |v| v.iter().any(|&x| x != 0.0))
            .boxed()
    }
}

fn upper_bound(kind: DistanceKind, nonneg: bool) -> f64 {
    match kind {
        DistanceKind::Euclidean | DistanceKind::Aitchison => f64::INFINITY,
        DistanceKind::Cosine if !nonneg => 2.0,
        _ => 1.0,
    }
}

fn world_strategy() -> impl Strategy<Value = (Vec<(f64, f64)>, usize)> {
    (prop::collection::vec((-5.0f64..5.0, -5.0f64..5.0), 4..12), 1usize..3)
}

fn space(points: &[(f64, f64)]) -> VectorSpace {
    VectorSpace::new(
        DistanceKind::Euclidean,
        points.iter().enumerate().map(|(i, p)| (ItemId(i as u32), vec![p.0, p.1])),
    )
    .unwrap()
}

fn criterion_4() -> Outcome {
    let start = Instant::now();
    let mut results: Vec<(String, Result<(), String>)> = Vec::new();
    let mut check = |name: &str, f: &mut dyn FnMut(&mut TestRunner) -> Result<(), String>| {
        let mut runner = TestRunner::new(Config {
            cases: INVARIANT_CASES,
            failure_persistence: None,
            ..Config::default()
        });
        results.push((name.to_string(), f(&mut runner)));
    };

    for kind in DistanceKind::ALL.into_iter().filter(|k| k.is_vector_kind()) {
        let nonneg = kind.needs_compositional();
        check(&format!("{kind} axioms"), &mut |r| {
            r.run(&(vec_strategy(nonneg), vec_strategy(nonneg)), |(x, y)| {
                let d = kind.between(&x, &y).unwrap();
                prop_assert_eq!(kind.between(&x, &x).unwrap(), 0.0);
                prop_assert_eq!(d, kind.between(&y, &x).unwrap());
                prop_assert!(d >= 0.0 && d <= upper_bound(kind, nonneg));
                Ok(())
            })
            .map_err(|e| e.to_string())
        });
    }
    check("npmi axioms", &mut |r| {
        r.run(&(1u32..50, 0u32..50, 0u32..50, 0u32..50), |(users, a, b, j)| {
            let (ca, cb) = (1 + a % users, 1 + b % users);
            let cj = j % (ca.min(cb) + 1);
            let m = NpmiModel::from_counts(users, [(ItemId(1), ca), (ItemId(2), cb)], [((ItemId(1), ItemId(2)), cj)])
                .unwrap();
            let d = surprise_core::distance::npmi_distance(ItemId(1), ItemId(2), &m).unwrap();
            prop_assert_eq!(d, surprise_core::distance::npmi_distance(ItemId(2), ItemId(1), &m).unwrap());
            prop_assert_eq!(surprise_core::distance::npmi_distance(ItemId(1), ItemId(1), &m).unwrap(), 0.0);
            prop_assert!((0.0..=1.0).contains(&d));
            Ok(())
        })
        .map_err(|e| e.to_string())
    });
    check("monotone shrinkage", &mut |r| {
        r.run(&world_strategy(), |(pts, _)| {
            let s = space(&pts);
            let n = pts.len() as u32;
            let exposed: ExposureSet = [ItemId(0)].into_iter().collect();
            for i in 1..n {
                let before = item_surprise(ItemId(i), &exposed, &s).unwrap();
                for j in 1..n {
                    let mut grown = exposed.clone();
                    grown.insert(ItemId(j));
                    prop_assert!(item_surprise(ItemId(i), &grown, &s).unwrap() <= before);
                }
            }
            Ok(())
        })
        .map_err(|e| e.to_string())
    });
    check("normalized in [0,1]", &mut |r| {
        r.run(&(world_strategy(), any::<u64>()), |((pts, k), rot)| {
            let s = space(&pts);
            let exposed: ExposureSet = [ItemId(0)].into_iter().collect();
            let unknown: ExposureSet = (1..pts.len() as u32).map(ItemId).collect();
            let mut order = unknown.to_vec();
            let shift = (rot % order.len() as u64) as usize;
            order.rotate_left(shift);
            order.truncate(k.min(order.len()));
            let v = normalized_surprise(&RecSequence::new(order).unwrap(), &unknown, &exposed, &s).unwrap();
            prop_assert!((0.0..=1.0).contains(&v));
            let b = greedy_bounds(&unknown, &exposed, &s, k.min(unknown.len())).unwrap();
            prop_assert!(b.min_value <= b.max_value);
            Ok(())
        })
        .map_err(|e| e.to_string())
    });
    check("concatenation decomposition", &mut |r| {
        r.run(&(world_strategy(), 1usize..6), |((pts, _), cut)| {
            let s = space(&pts);
            let exposed: ExposureSet = [ItemId(0)].into_iter().collect();
            let all: Vec<ItemId> = (1..pts.len() as u32).map(ItemId).collect();
            let cut = cut.min(all.len());
            let a = RecSequence::new(all[..cut].to_vec()).unwrap();
            let b = RecSequence::new(all[cut..].to_vec()).unwrap();
            let whole = sequence_surprise(&a.concat(&b).unwrap(), &exposed, &s).unwrap();
            let parts = sequence_surprise(&a, &exposed, &s).unwrap()
                + sequence_surprise(&b, &exposed.union(&a.to_exposure()), &s).unwrap();
            prop_assert!((whole - parts).abs() <= 1e-9 * (1.0 + whole.abs()));
            Ok(())
        })
        .map_err(|e| e.to_string())
    });
    check("bmt simplex and ratios", &mut |r| {
        r.run(&vec_strategy(true), |counts| {
            let out = bmt_smooth(&counts).unwrap();
            prop_assert!((out.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            prop_assert!(out.iter().all(|&x| x > 0.0));
            let nz: Vec<usize> = (0..counts.len()).filter(|&i| counts[i] > 0.0).collect();
            for w in nz.windows(2) {
                let (a, b) = (w[0], w[1]);
                prop_assert!(((out[a] / out[b]) - (counts[a] / counts[b])).abs() <= 1e-9 * (counts[a] / counts[b]));
            }
            Ok(())
        })
        .map_err(|e| e.to_string())
    });

    let elapsed = start.elapsed();
    let failed: Vec<String> = results
        .iter()
        .filter_map(|(n, r)| r.as_ref().err().map(|e| format!("{n}: {e}")))
        .collect();
    Outcome {
        pass: failed.is_empty() && elapsed < Duration::from_secs(60),
        detail: format!(
            "{} suites x {INVARIANT_CASES} cases; {}; {:.1}s",
            results.len(),
            if failed.is_empty() { "zero failures".to_string() } else { failed.join("; ") },
            elapsed.as_secs_f64()
        ),
    }
}

fn criterion_5(tmp: &Path) -> Outcome {
    let engineered = ["--users", "100", "--items", "400", "--events", "6000", "--frame-size", "1500",
                      "--overlap", "sliding:50:15", "--no-five-star-frames", "3", "--seed", "5"];
    let a = synth(&tmp.join("c5-a"), &engineered);
    let b = synth(&tmp.join("c5-b"), &engineered);
    let identical_files = fs::read(a.join("ratings.csv")).unwrap() == fs::read(b.join("ratings.csv")).unwrap();

    let events = parse_ratings(&a.join("ratings.csv"), RatingsFormat::Csv).unwrap().events;
    let by_threads: Vec<_> = [1, 4]
        .into_iter()
        .map(|n| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .unwrap()
                .install(|| segment(&events, 1500, 30).unwrap())
        })
        .collect();
    let seg = &by_threads[0];
    // Frame f (1-based) holds users 15(f-1)+1 ..= 15(f-1)+50; frame 3 has no five-star ratings,
    // so only the pairs (1,2) and (3,4) qualify, each sharing 35 users.
    let expected: Vec<(usize, Vec<u32>)> = vec![(2, (16..=50).collect()), (4, (46..=80).collect())];
    let got: Vec<(usize, Vec<u32>)> = seg
        .intervals
        .iter()
        .map(|i| (i.end_frame, i.eval_users.iter().copied().collect()))
        .collect();

    let disjoint = synth(
        &tmp.join("c5-disjoint"),
        &["--users", "100", "--items", "400", "--events", "6000", "--frame-size", "1500", "--overlap", "disjoint"],
    );
    let d_events = parse_ratings(&disjoint.join("ratings.csv"), RatingsFormat::Csv).unwrap().events;
    let d_seg = segment(&d_events, 1500, 30).unwrap();

    Outcome {
        pass: seg.frames.len() == 4
            && got == expected
            && d_seg.intervals.is_empty()
            && by_threads[0] == by_threads[1]
            && identical_files,
        detail: format!(
            "{} frames; intervals ending at {:?} with {:?} users (expected frames 2 and 4, 35 users each); disjoint log: {} intervals; repeat/threads identical: {}",
            seg.frames.len(),
            got.iter().map(|g| g.0).collect::<Vec<_>>(),
            got.iter().map(|g| g.1.len()).collect::<Vec<_>>(),
            d_seg.intervals.len(),
            identical_files && by_threads[0] == by_threads[1]
        ),
    }
}

fn criterion_6(tmp: &Path) -> Outcome {
    let world = synth(
        &tmp.join("c6-world"),
        &["--users", "60", "--items", "300", "--events", "3000", "--frame-size", "500",
          "--overlap", "sliding:40:10", "--seed", "11"],
    );
    let mut mismatches = Vec::new();
    let mut compared = 0;
    for (model, distance, alg) in [("U", "cosine", "knn"), ("C", "jensen-shannon", "msi"), ("N", "npmi", "lsi")] {
        let mut outputs = Vec::new();
        for (n, threads) in ["1", "4", "4"].into_iter().enumerate() {
            let out = tmp.join(format!("c6-{model}-{alg}-{n}"));
            let run = Run {
                world: &world,
                out: &out,
                model,
                distance,
                algorithm: alg,
                extra: &["--frame-size", "500", "--min-common-users", "20", "--sample-size", "150", "--seed", "9", "--threads", threads],
            };
            if let Err(e) = evaluate(&run) {
                mismatches.push(e);
                continue;
            }
            let stem = format!("{model}_{distance}_{alg}_sampled");
            outputs.push((
                fs::read(out.join(format!("{stem}.series.csv"))).unwrap(),
                fs::read(out.join(format!("{stem}.summary.json"))).unwrap(),
            ));
        }
        compared += outputs.len();
        if outputs.windows(2).any(|w| w[0] != w[1]) || outputs.first().is_some_and(|o| o.0.len() < 60) {
            mismatches.push(format!("{model}/{distance}/{alg}"));
        }
    }
    Outcome {
        pass: mismatches.is_empty(),
        detail: format!(
            "{compared} runs (threads 1, 4, 4) over 3 configurations; {}",
            if mismatches.is_empty() { "series CSV and summary JSON byte-identical".to_string() } else { mismatches.join("; ") }
        ),
    }
}

fn main() {
    let tmp = tempfile::tempdir().expect("temp dir");
    type Check<'a> = Box<dyn Fn() -> Outcome + 'a>;
    let criteria: Vec<(&str, Check)> = vec![
        ("1 greedy-vs-oracle sandwich", Box::new(criterion_1)),
        ("2 exhaustive MSI = 1, LSI = 0", Box::new(|| criterion_2(tmp.path()))),
        ("3 sampled ordering MSI > kNN > LSI", Box::new(|| criterion_3(tmp.path()))),
        ("4 invariant suites", Box::new(criterion_4)),
        ("5 segmentation", Box::new(|| criterion_5(tmp.path()))),
        ("6 determinism across runs and threads", Box::new(|| criterion_6(tmp.path()))),
    ];
    let mut failed = 0;
    for (name, run) in &criteria {
        let outcome = run();
        println!("[{}] {name}: {}", if outcome.pass { "PASS" } else { "FAIL" }, outcome.detail);
        failed += usize::from(!outcome.pass);
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
