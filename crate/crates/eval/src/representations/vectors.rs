//! Dense vector files: `item_id v1 v2 ... vD`, whitespace separated.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::Path;

use surprise_core::ItemId;

use crate::error::{EvalError, Result};

pub fn parse_dense_vectors(text: &str, path: &Path) -> Result<BTreeMap<ItemId, Vec<f64>>> {
    let err = |line: usize, message: String| EvalError::Parse {
        path: path.to_path_buf(),
        line,
        message,
    };
    let mut out = BTreeMap::new();
    let mut dim = None;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let mut fields = raw.split_whitespace();
        let Some(id) = fields.next() else { continue };
        let id: u32 = id
            .parse()
            .map_err(|_| err(line, format!("item id `{id}` is not an integer")))?;
        let components = fields
            .map(|f| match f.parse::<f64>() {
                Ok(v) if v.is_finite() => Ok(v),
                _ => Err(err(line, format!("component `{f}` is not a finite number"))),
            })
            .collect::<Result<Vec<f64>>>()?;
        if components.is_empty() {
            return Err(err(line, format!("item {id} has no components")));
        }
        match dim {
            None => dim = Some(components.len()),
            Some(d) if d != components.len() => {
                return Err(err(line, format!("expected {d} components, found {}", components.len())));
            }
            _ => {}
        }
        if out.insert(ItemId(id), components).is_some() {
            return Err(err(line, format!("duplicate item id {id}")));
        }
    }
    if out.is_empty() {
        return Err(EvalError::data(format!("{}: no vectors", path.display())));
    }
    Ok(out)
}

pub fn load_dense_vectors(path: &Path) -> Result<BTreeMap<ItemId, Vec<f64>>> {
    let text = fs::read_to_string(path).map_err(|e| EvalError::io(path, e))?;
    parse_dense_vectors(&text, path)
}

/// Writes vectors in the same format; `{}` on f64 round-trips exactly.
pub fn write_dense_vectors<W: Write>(vectors: &BTreeMap<ItemId, Vec<f64>>, mut out: W) -> std::io::Result<()> {
    for (id, v) in vectors {
        write!(out, "{id}")?;
        for x in v {
            write!(out, " {x}")?;
        }
        writeln!(out)?;
    }
    Ok(())
}
