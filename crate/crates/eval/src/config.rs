//! Run configuration: defaults, `key=value` files, validation and the
//! content fingerprint that names cached matrices and tags outputs.

use std::fs;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};
use surprise_core::distance::DistanceKind;
use surprise_core::recommend::{ScorerKind, DEFAULT_NEIGHBOURS};

use crate::error::{EvalError, Result};
use crate::evaluation::{HarnessConfig, Mode};
use crate::ratings::RatingsFormat;
use crate::representations::{check_compatible, Model};

pub const DEFAULT_TOP_N: usize = 10;
pub const DEFAULT_SAMPLE_SIZE: usize = 1000;
pub const DEFAULT_FRAME_SIZE: usize = 1500;
pub const DEFAULT_MIN_COMMON_USERS: usize = 30;
pub const DEFAULT_SEED: u64 = 42;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    Knn,
    Msi,
    Lsi,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Knn => "knn",
            Algorithm::Msi => "msi",
            Algorithm::Lsi => "lsi",
        }
    }

    pub fn scorer(self, k: usize) -> ScorerKind {
        match self {
            Algorithm::Knn => ScorerKind::Knn { k },
            Algorithm::Msi => ScorerKind::Msi,
            Algorithm::Lsi => ScorerKind::Lsi,
        }
    }
}

impl std::str::FromStr for Algorithm {
    type Err = EvalError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "knn" => Ok(Algorithm::Knn),
            "msi" => Ok(Algorithm::Msi),
            "lsi" => Ok(Algorithm::Lsi),
            other => Err(EvalError::usage(format!("unknown algorithm `{other}`; expected knn, msi or lsi"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub ratings_path: Option<PathBuf>,
    pub ratings_format: Option<RatingsFormat>,
    pub descriptions_path: Option<PathBuf>,
    pub vectors_path: Option<PathBuf>,
    pub stopwords_path: Option<PathBuf>,
    pub model: Option<Model>,
    pub distance: Option<DistanceKind>,
    pub algorithm: Option<Algorithm>,
    pub top_n: usize,
    pub sample_size: usize,
    pub k: usize,
    pub frame_size: usize,
    pub min_common_users: usize,
    pub seed: u64,
    pub mode: Mode,
    pub output_dir: PathBuf,
    /// Defaults to `<output_dir>/cache`.
    pub cache_dir: Option<PathBuf>,
    pub threads: Option<usize>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            ratings_path: None,
            ratings_format: None,
            descriptions_path: None,
            vectors_path: None,
            stopwords_path: None,
            model: None,
            distance: None,
            algorithm: None,
            top_n: DEFAULT_TOP_N,
            sample_size: DEFAULT_SAMPLE_SIZE,
            k: DEFAULT_NEIGHBOURS,
            frame_size: DEFAULT_FRAME_SIZE,
            min_common_users: DEFAULT_MIN_COMMON_USERS,
            seed: DEFAULT_SEED,
            mode: Mode::Sampled,
            output_dir: PathBuf::from("."),
            cache_dir: None,
            threads: None,
        }
    }
}

fn parse_num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| EvalError::usage(format!("`{key}` expects a non-negative integer, got `{value}`")))
}

impl RunConfig {
    /// Applies one setting; keys are kebab- or snake-case field names.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let value = value.trim();
        match key.trim().replace('_', "-").as_str() {
            "ratings" | "ratings-path" => self.ratings_path = Some(value.into()),
            "ratings-format" => self.ratings_format = Some(value.parse()?),
            "descriptions" | "descriptions-path" => self.descriptions_path = Some(value.into()),
            "vectors" | "vectors-path" => self.vectors_path = Some(value.into()),
            "stopwords" | "stopwords-path" => self.stopwords_path = Some(value.into()),
            "model" => self.model = Some(value.parse()?),
            "distance" => {
                self.distance = Some(value.parse().map_err(|e| EvalError::usage(format!("{e}")))?);
            }
            "algorithm" => self.algorithm = Some(value.parse()?),
            "top-n" => self.top_n = parse_num(key, value)?,
            "sample-size" => self.sample_size = parse_num(key, value)?,
            "k" => self.k = parse_num(key, value)?,
            "frame-size" => self.frame_size = parse_num(key, value)?,
            "min-common-users" => self.min_common_users = parse_num(key, value)?,
            "seed" => self.seed = parse_num(key, value)?,
            "mode" => self.mode = value.parse()?,
            "output-dir" => self.output_dir = value.into(),
            "cache-dir" => self.cache_dir = Some(value.into()),
            "threads" => self.threads = Some(parse_num(key, value)?),
            other => return Err(EvalError::usage(format!("unknown configuration key `{other}`"))),
        }
        Ok(())
    }

    /// `key = value` lines; `#` starts a comment. Relative paths are
    /// resolved against the file's directory.
    pub fn apply_file(&mut self, path: &Path) -> Result<()> {
        let text = fs::read_to_string(path).map_err(|e| EvalError::io(path, e))?;
        let base = path.parent().unwrap_or(Path::new(""));
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                EvalError::usage(format!("{}:{}: expected `key = value`", path.display(), idx + 1))
            })?;
            self.set(key, value)
                .map_err(|e| EvalError::usage(format!("{}:{}: {e}", path.display(), idx + 1)))?;
            let key = key.trim().replace('_', "-");
            if key.ends_with("path") || matches!(key.as_str(), "ratings" | "descriptions" | "vectors" | "stopwords" | "output-dir" | "cache-dir") {
                self.resolve_relative(&key, base);
            }
        }
        Ok(())
    }

    fn resolve_relative(&mut self, key: &str, base: &Path) {
        let slot = match key {
            "ratings" | "ratings-path" => self.ratings_path.as_mut(),
            "descriptions" | "descriptions-path" => self.descriptions_path.as_mut(),
            "vectors" | "vectors-path" => self.vectors_path.as_mut(),
            "stopwords" | "stopwords-path" => self.stopwords_path.as_mut(),
            "output-dir" => Some(&mut self.output_dir),
            "cache-dir" => self.cache_dir.as_mut(),
            _ => None,
        };
        if let Some(p) = slot {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        }
    }

    pub fn model(&self) -> Result<Model> {
        self.model.ok_or_else(|| EvalError::usage("missing --model"))
    }

    pub fn distance(&self) -> Result<DistanceKind> {
        self.distance.ok_or_else(|| EvalError::usage("missing --distance"))
    }

    pub fn algorithm(&self) -> Result<Algorithm> {
        self.algorithm.ok_or_else(|| EvalError::usage("missing --algorithm"))
    }

    pub fn ratings_path(&self) -> Result<&Path> {
        self.ratings_path.as_deref().ok_or_else(|| EvalError::usage("missing --ratings"))
    }

    pub fn ratings_format(&self) -> Result<RatingsFormat> {
        Ok(self.ratings_format.unwrap_or_else(|| RatingsFormat::from_path(self.ratings_path().unwrap_or(Path::new("")))))
    }

    pub fn cache_dir(&self) -> PathBuf {
        self.cache_dir.clone().unwrap_or_else(|| self.output_dir.join("cache"))
    }

    pub fn harness(&self) -> HarnessConfig {
        HarnessConfig {
            top_n: self.top_n,
            sample_size: self.sample_size,
            seed: self.seed,
            mode: self.mode,
        }
    }

    /// Checks everything that can be checked without reading inputs.
    pub fn validate(&self) -> Result<()> {
        let model = self.model()?;
        check_compatible(model, self.distance()?)?;
        self.algorithm()?;
        self.ratings_path()?;
        match model {
            Model::CountVsm if self.descriptions_path.is_none() => {
                return Err(EvalError::usage("model C needs --descriptions"));
            }
            Model::Embedding if self.vectors_path.is_none() => {
                return Err(EvalError::usage("model P needs --vectors"));
            }
            _ => {}
        }
        for (name, v) in [
            ("top-n", self.top_n),
            ("sample-size", self.sample_size),
            ("k", self.k),
            ("frame-size", self.frame_size),
            ("min-common-users", self.min_common_users),
        ] {
            if v == 0 {
                return Err(EvalError::usage(format!("--{name} must be positive")));
            }
        }
        if self.top_n > self.sample_size {
            return Err(EvalError::usage("--top-n cannot exceed --sample-size"));
        }
        if self.threads == Some(0) {
            return Err(EvalError::usage("--threads must be positive"));
        }
        Ok(())
    }

    /// Inputs that shape the item representation, in a fixed order.
    pub fn representation_inputs(&self) -> Result<Vec<(&'static str, &Path)>> {
        let mut inputs = vec![("ratings", self.ratings_path()?)];
        match self.model()? {
            Model::CountVsm => {
                if let Some(p) = &self.descriptions_path {
                    inputs.push(("descriptions", p));
                }
                if let Some(p) = &self.stopwords_path {
                    inputs.push(("stopwords", p));
                }
            }
            Model::Embedding => {
                if let Some(p) = &self.vectors_path {
                    inputs.push(("vectors", p));
                }
            }
            Model::UserItem | Model::Npmi => {}
        }
        Ok(inputs)
    }

    fn digest_inputs(&self, h: &mut Sha256) -> Result<()> {
        for (name, path) in self.representation_inputs()? {
            h.update(format!("{name}={}\n", file_digest(path)?));
        }
        Ok(())
    }

    /// Names the distance matrix of this model, distance and input content.
    pub fn matrix_key(&self) -> Result<String> {
        let mut h = Sha256::new();
        h.update(format!("matrix\nmodel={}\ndistance={}\n", self.model()?, self.distance()?));
        h.update(format!("ratings-format={}\n", self.ratings_format()?));
        self.digest_inputs(&mut h)?;
        Ok(hex(&h.finalize()))
    }

    /// Hash of every setting that can change results plus input digests.
    /// Thread count and output locations are excluded.
    pub fn fingerprint(&self) -> Result<String> {
        let mut h = Sha256::new();
        h.update(format!(
            "run\nmodel={}\ndistance={}\nalgorithm={}\nratings-format={}\ntop-n={}\nsample-size={}\nk={}\nframe-size={}\nmin-common-users={}\nseed={}\nmode={}\n",
            self.model()?,
            self.distance()?,
            self.algorithm()?.name(),
            self.ratings_format()?,
            self.top_n,
            self.sample_size,
            self.k,
            self.frame_size,
            self.min_common_users,
            self.seed,
            self.mode
        ));
        self.digest_inputs(&mut h)?;
        Ok(hex(&h.finalize()))
    }

    /// `{model}_{distance}_{algorithm}_{mode}`.
    pub fn output_stem(&self) -> Result<String> {
        Ok(format!(
            "{}_{}_{}_{}",
            self.model()?,
            self.distance()?,
            self.algorithm()?.name(),
            self.mode
        ))
    }
}

pub fn file_digest(path: &Path) -> Result<String> {
    let bytes = fs::read(path).map_err(|e| EvalError::io(path, e))?;
    Ok(hex(&Sha256::digest(&bytes)))
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}
