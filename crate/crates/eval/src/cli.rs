//! Command-line interface: `evaluate`, `oracle`, `synth` and `matrix`.

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use surprise_core::distance::DistanceKind;

use crate::config::RunConfig;
use crate::error::{EvalError, Result};
use crate::matrix_io::{load_matrix, save_matrix, write_matrix_csv};
use crate::pipeline::{self, summary_header, summary_row};
use crate::ratings::write_ratings_csv;
use crate::representations::vectors::write_dense_vectors;
use crate::synth::{self, Overlap, SynthConfig};
use crate::validation::{self, write_report_csv, write_report_table};

#[derive(Debug, Parser)]
#[command(name = "surprise", version, about = "Normalised surprise evaluation for recommender systems")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Measure normalised surprise over the eligible intervals of a rating log.
    Evaluate(EvaluateArgs),
    /// Compare greedy bounds with exhaustive enumeration on random 2-D worlds.
    Oracle(OracleArgs),
    /// Write a synthetic rating log with matching descriptions and vectors.
    Synth(SynthArgs),
    /// Build or inspect cached distance matrices.
    #[command(subcommand)]
    Matrix(MatrixCommand),
}

/// Run settings; each flag overrides the same key from `--config`.
#[derive(Debug, Args, Default)]
pub struct RunArgs {
    /// `key = value` file with any of the settings below.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub ratings: Option<PathBuf>,
    /// movielens-dat or csv; guessed from the extension when omitted.
    #[arg(long)]
    pub ratings_format: Option<String>,
    /// TSV of `item_id<TAB>description` (model C).
    #[arg(long)]
    pub descriptions: Option<PathBuf>,
    /// Whitespace-separated `item_id v1 .. vD` (model P).
    #[arg(long)]
    pub vectors: Option<PathBuf>,
    /// One word per line; replaces the bundled English list.
    #[arg(long)]
    pub stopwords: Option<PathBuf>,
    /// C, P, U or N.
    #[arg(long)]
    pub model: Option<String>,
    /// euclidean, cosine, jaccard, jensen-shannon, aitchison or npmi.
    #[arg(long)]
    pub distance: Option<String>,
    #[arg(long)]
    pub cache_dir: Option<PathBuf>,
    #[arg(long)]
    pub threads: Option<usize>,
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    #[command(flatten)]
    pub run: RunArgs,
    /// knn, msi or lsi.
    #[arg(long)]
    pub algorithm: Option<String>,
    #[arg(long)]
    pub top_n: Option<usize>,
    #[arg(long)]
    pub sample_size: Option<usize>,
    /// Neighbourhood size for knn.
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub frame_size: Option<usize>,
    #[arg(long)]
    pub min_common_users: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// sampled or exhaustive.
    #[arg(long)]
    pub mode: Option<String>,
    #[arg(long)]
    pub output_dir: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[arg(long, default_value_t = validation::DEFAULT_INSTANCES)]
    pub instances: usize,
    #[arg(long, default_value_t = *validation::DEFAULT_SIZES.start())]
    pub min_size: usize,
    #[arg(long, default_value_t = *validation::DEFAULT_SIZES.end())]
    pub max_size: usize,
    /// Comma-separated; defaults to euclidean, cosine, jaccard, jensen-shannon.
    #[arg(long, value_delimiter = ',')]
    pub distances: Vec<String>,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Also write the report as CSV.
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long)]
    pub threads: Option<usize>,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    #[arg(long, default_value_t = 100)]
    pub users: usize,
    #[arg(long, default_value_t = 400)]
    pub items: usize,
    #[arg(long, default_value_t = 6000)]
    pub events: usize,
    #[arg(long, default_value_t = 1500)]
    pub frame_size: usize,
    /// shared, disjoint or sliding:WIDTH:STRIDE.
    #[arg(long, default_value = "sliding:50:15")]
    pub overlap: String,
    /// Comma-separated 1-based frames without five-star ratings.
    #[arg(long, value_delimiter = ',')]
    pub no_five_star_frames: Vec<usize>,
    #[arg(long, default_value_t = 6)]
    pub topics: usize,
    /// Release items evenly over this many frames instead of the whole log.
    #[arg(long)]
    pub release_frames: Option<usize>,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Receives ratings.csv, descriptions.tsv and vectors.txt.
    #[arg(long)]
    pub output_dir: PathBuf,
}

#[allow(clippy::large_enum_variant)]
#[derive(Debug, Subcommand)]
pub enum MatrixCommand {
    /// Build (or reuse) the cached matrix for a model and distance.
    Build {
        #[command(flatten)]
        run: RunArgs,
        /// Copy the matrix to this path as well.
        #[arg(long)]
        output: Option<PathBuf>,
        /// Export the matrix as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Describe a matrix file.
    Inspect {
        path: PathBuf,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

impl RunArgs {
    fn into_config(self) -> Result<RunConfig> {
        let mut cfg = RunConfig::default();
        if let Some(path) = &self.config {
            cfg.apply_file(path)?;
        }
        let paths = [
            ("ratings", self.ratings),
            ("descriptions", self.descriptions),
            ("vectors", self.vectors),
            ("stopwords", self.stopwords),
            ("cache-dir", self.cache_dir),
        ];
        for (key, value) in paths {
            if let Some(v) = value {
                cfg.set(key, &v.to_string_lossy())?;
            }
        }
        for (key, value) in [
            ("ratings-format", self.ratings_format),
            ("model", self.model),
            ("distance", self.distance),
        ] {
            if let Some(v) = value {
                cfg.set(key, &v)?;
            }
        }
        if let Some(t) = self.threads {
            cfg.threads = Some(t);
        }
        Ok(cfg)
    }
}

impl EvaluateArgs {
    fn into_config(self) -> Result<RunConfig> {
        let mut cfg = self.run.into_config()?;
        if let Some(v) = self.algorithm {
            cfg.set("algorithm", &v)?;
        }
        if let Some(v) = self.mode {
            cfg.set("mode", &v)?;
        }
        for (slot, value) in [
            (&mut cfg.top_n, self.top_n),
            (&mut cfg.sample_size, self.sample_size),
            (&mut cfg.k, self.k),
            (&mut cfg.frame_size, self.frame_size),
            (&mut cfg.min_common_users, self.min_common_users),
        ] {
            if let Some(v) = value {
                *slot = v;
            }
        }
        if let Some(v) = self.seed {
            cfg.seed = v;
        }
        if let Some(v) = self.output_dir {
            cfg.output_dir = v;
        }
        Ok(cfg)
    }
}

fn parse_distance(s: &str) -> Result<DistanceKind> {
    s.parse().map_err(|e| EvalError::usage(format!("{e}")))
}

fn cmd_evaluate(args: EvaluateArgs, out: &mut dyn Write) -> Result<()> {
    let cfg = args.into_config()?;
    let outcome = pipeline::evaluate(&cfg)?;
    let io_err = |e| EvalError::io("<stdout>", e);
    writeln!(out, "{}", summary_header()).map_err(io_err)?;
    writeln!(out, "{}", summary_row(&cfg, outcome.summary.as_ref())?).map_err(io_err)?;
    writeln!(out, "series:  {}", outcome.series_path.display()).map_err(io_err)?;
    writeln!(out, "summary: {}", outcome.summary_path.display()).map_err(io_err)?;
    Ok(())
}

fn cmd_oracle(args: OracleArgs, out: &mut dyn Write) -> Result<()> {
    if args.min_size > args.max_size {
        return Err(EvalError::usage("--min-size exceeds --max-size"));
    }
    let kinds = if args.distances.is_empty() {
        validation::DEFAULT_KINDS.to_vec()
    } else {
        args.distances.iter().map(|d| parse_distance(d)).collect::<Result<Vec<_>>>()?
    };
    let run = || validation::validate_greedy(args.instances, args.min_size..=args.max_size, &kinds, args.seed);
    let report = match args.threads {
        Some(0) => return Err(EvalError::usage("--threads must be positive")),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| EvalError::usage(e.to_string()))?
            .install(run)?,
        None => run()?,
    };
    write_report_table(&report, &mut *out).map_err(|e| EvalError::io("<stdout>", e))?;
    if let Some(path) = &args.output {
        let mut buf = Vec::new();
        write_report_csv(&report, &mut buf).map_err(|e| EvalError::io(path, e))?;
        fs::write(path, buf).map_err(|e| EvalError::io(path, e))?;
    }
    Ok(())
}

fn write_with<F>(path: &Path, f: F) -> Result<()>
where
    F: FnOnce(&mut Vec<u8>) -> io::Result<()>,
{
    let mut buf = Vec::new();
    f(&mut buf).map_err(|e| EvalError::io(path, e))?;
    fs::write(path, buf).map_err(|e| EvalError::io(path, e))
}

fn cmd_synth(args: SynthArgs, out: &mut dyn Write) -> Result<()> {
    let cfg = SynthConfig {
        users: args.users,
        items: args.items,
        events: args.events,
        frame_size: args.frame_size,
        overlap: args.overlap.parse::<Overlap>()?,
        no_five_star_frames: args.no_five_star_frames.into_iter().collect(),
        topics: args.topics,
        release_frames: args.release_frames,
        seed: args.seed,
    };
    let world = synth::generate(&cfg)?;
    fs::create_dir_all(&args.output_dir).map_err(|e| EvalError::io(&args.output_dir, e))?;
    let ratings = args.output_dir.join("ratings.csv");
    write_with(&ratings, |b| write_ratings_csv(&world.events, b))?;
    write_with(&args.output_dir.join("descriptions.tsv"), |b| {
        synth::write_descriptions(&world.descriptions, b)
    })?;
    write_with(&args.output_dir.join("vectors.txt"), |b| write_dense_vectors(&world.vectors, b))?;
    writeln!(
        out,
        "wrote {} events over {} users and {} items to {}",
        world.events.len(),
        cfg.users,
        cfg.items,
        args.output_dir.display()
    )
    .map_err(|e| EvalError::io("<stdout>", e))
}

fn cmd_matrix(cmd: MatrixCommand, out: &mut dyn Write) -> Result<()> {
    let io_err = |e| EvalError::io("<stdout>", e);
    match cmd {
        MatrixCommand::Build { run, output, csv } => {
            let cfg = run.into_config()?;
            crate::representations::check_compatible(cfg.model()?, cfg.distance()?)?;
            let events = pipeline::load_events(&cfg)?;
            let matrix = pipeline::prepare_matrix(&cfg, &events)?;
            let cached = crate::matrix_io::cache_path(&cfg.cache_dir(), &cfg.matrix_key()?);
            if let Some(path) = &output {
                save_matrix(&matrix, path)?;
            }
            if let Some(path) = &csv {
                write_with(path, |b| write_matrix_csv(&matrix, b))?;
            }
            writeln!(out, "{} items, cached at {}", matrix.len(), cached.display()).map_err(io_err)
        }
        MatrixCommand::Inspect { path, csv } => {
            let matrix = load_matrix(&path)?;
            let values: Vec<f64> = matrix.upper_triangle().collect();
            writeln!(out, "items: {}", matrix.len()).map_err(io_err)?;
            if let (Some(first), Some(last)) = (matrix.ids().first(), matrix.ids().last()) {
                writeln!(out, "ids:   {first}..={last}").map_err(io_err)?;
            }
            if !values.is_empty() {
                let min = values.iter().copied().fold(f64::INFINITY, f64::min);
                let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                let mean = values.iter().sum::<f64>() / values.len() as f64;
                writeln!(out, "pairs: {}  min {min}  max {max}  mean {mean}", values.len()).map_err(io_err)?;
            }
            if let Some(p) = &csv {
                write_with(p, |b| write_matrix_csv(&matrix, b))?;
            }
            Ok(())
        }
    }
}

/// Runs a command against `out` and returns it as an exit status.
pub fn run_with_output<I, T>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    let result = match cli.command {
        Command::Evaluate(a) => cmd_evaluate(a, out),
        Command::Oracle(a) => cmd_oracle(a, out),
        Command::Synth(a) => cmd_synth(a, out),
        Command::Matrix(m) => cmd_matrix(m, out),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with_output(args, &mut io::stdout().lock())
}
