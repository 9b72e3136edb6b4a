//! Distance-matrix construction across threads and the `SBDM` cache format.
//!
//! Layout (little-endian): magic `SBDM`, version `u32`, item count `u32`,
//! the sorted item ids as `u32`, then the strict upper triangle row by row
//! as `f64`. The diagonal is zero and not stored.

use std::fs;
use std::io::{self, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use surprise_core::distance::{upper_len, DistanceMatrix};
use surprise_core::{Error as CoreError, ItemDistance, ItemId};

use crate::error::{EvalError, Result};

pub const MAGIC: &[u8; 4] = b"SBDM";
pub const FORMAT_VERSION: u32 = 1;

/// Row-parallel matrix build. The value of every cell does not depend on
/// how rows are spread over workers, so the result is identical for any
/// thread count.
pub fn build_matrix<D: ItemDistance + Sync + ?Sized>(
    items: &[ItemId],
    d: &D,
    threads: Option<usize>,
) -> Result<DistanceMatrix> {
    let mut ids = items.to_vec();
    ids.sort_unstable();
    if let Some(w) = ids.windows(2).find(|w| w[0] == w[1]) {
        return Err(CoreError::DuplicateItem(w[0]).into());
    }
    let missing: Vec<ItemId> = ids.iter().copied().filter(|&i| d.distance(i, i).is_err()).collect();
    if !missing.is_empty() {
        return Err(CoreError::MissingItems(missing).into());
    }
    let run = || -> surprise_core::Result<Vec<Vec<f64>>> {
        (0..ids.len())
            .into_par_iter()
            .map(|r| {
                ids[r + 1..]
                    .iter()
                    .map(|&b| d.distance(ids[r], b))
                    .collect::<surprise_core::Result<Vec<f64>>>()
            })
            .collect()
    };
    let rows = match threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| EvalError::usage(format!("cannot start {n} worker threads: {e}")))?
            .install(run)?,
        None => run()?,
    };
    let mut upper = Vec::with_capacity(upper_len(ids.len()));
    for row in rows {
        upper.extend(row);
    }
    Ok(DistanceMatrix::from_upper_triangle(ids, upper)?)
}

pub fn write_sbdm<W: Write>(m: &DistanceMatrix, out: W) -> io::Result<()> {
    let mut out = BufWriter::new(out);
    out.write_all(MAGIC)?;
    out.write_all(&FORMAT_VERSION.to_le_bytes())?;
    let count = u32::try_from(m.len()).map_err(|_| io::Error::new(io::ErrorKind::InvalidInput, "too many items"))?;
    out.write_all(&count.to_le_bytes())?;
    for id in m.ids() {
        out.write_all(&id.0.to_le_bytes())?;
    }
    for v in m.upper_triangle() {
        out.write_all(&v.to_le_bytes())?;
    }
    out.flush()
}

pub fn read_sbdm(bytes: &[u8], path: &Path) -> Result<DistanceMatrix> {
    let bad = |msg: &str| EvalError::data(format!("{}: {msg}", path.display()));
    let mut r = bytes;
    let mut word = [0u8; 4];
    r.read_exact(&mut word).map_err(|_| bad("truncated header"))?;
    if &word != MAGIC {
        return Err(bad("not a distance matrix file (bad magic)"));
    }
    r.read_exact(&mut word).map_err(|_| bad("truncated header"))?;
    let version = u32::from_le_bytes(word);
    if version != FORMAT_VERSION {
        return Err(bad(&format!("unsupported format version {version}")));
    }
    r.read_exact(&mut word).map_err(|_| bad("truncated header"))?;
    let n = u32::from_le_bytes(word) as usize;
    let expected = n
        .checked_mul(4)
        .and_then(|ids| upper_len(n).checked_mul(8).and_then(|v| v.checked_add(ids)));
    if expected != Some(r.len()) {
        return Err(bad("file length does not match item count"));
    }
    let (id_bytes, value_bytes) = r.split_at(n * 4);
    let ids = id_bytes
        .chunks_exact(4)
        .map(|c| ItemId(u32::from_le_bytes(c.try_into().expect("chunk of 4"))))
        .collect();
    let upper = value_bytes
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().expect("chunk of 8")))
        .collect();
    DistanceMatrix::from_upper_triangle(ids, upper).map_err(|e| bad(&e.to_string()))
}

pub fn save_matrix(m: &DistanceMatrix, path: &Path) -> Result<()> {
    if let Some(dir) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| EvalError::io(dir, e))?;
    }
    let tmp = path.with_extension("sbdm.tmp");
    let file = fs::File::create(&tmp).map_err(|e| EvalError::io(&tmp, e))?;
    write_sbdm(m, file).map_err(|e| EvalError::io(&tmp, e))?;
    fs::rename(&tmp, path).map_err(|e| EvalError::io(path, e))
}

pub fn load_matrix(path: &Path) -> Result<DistanceMatrix> {
    let bytes = fs::read(path).map_err(|e| EvalError::io(path, e))?;
    read_sbdm(&bytes, path)
}

/// Full square matrix with a header row of item ids.
pub fn write_matrix_csv<W: Write>(m: &DistanceMatrix, out: W) -> io::Result<()> {
    let mut out = BufWriter::new(out);
    write!(out, "item")?;
    for id in m.ids() {
        write!(out, ",{id}")?;
    }
    writeln!(out)?;
    for (r, id) in m.ids().iter().enumerate() {
        write!(out, "{id}")?;
        for v in m.row(r) {
            write!(out, ",{v}")?;
        }
        writeln!(out)?;
    }
    out.flush()
}

pub fn cache_path(dir: &Path, key: &str) -> PathBuf {
    dir.join(format!("matrix-{key}.sbdm"))
}

/// Loads the cached matrix for `key` or builds and stores it.
pub fn cached_matrix<F>(dir: &Path, key: &str, build: F) -> Result<(DistanceMatrix, bool)>
where
    F: FnOnce() -> Result<DistanceMatrix>,
{
    let path = cache_path(dir, key);
    if path.is_file() {
        match load_matrix(&path) {
            Ok(m) => return Ok((m, true)),
            Err(e) => log::warn!("ignoring unreadable cache {}: {e}", path.display()),
        }
    }
    let m = build()?;
    save_matrix(&m, &path)?;
    Ok((m, false))
}
