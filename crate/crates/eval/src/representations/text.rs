//! Count-based vector space model over short item descriptions.
//!
//! Pipeline: lowercase, split on anything that is not a letter, drop
//! stopwords, Snowball-stem, reject short descriptions, then weight each
//! surviving term by raw count times `ln(N / df)`.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::Path;

use rust_stemmers::{Algorithm, Stemmer};
use surprise_core::ItemId;

use super::{RejectReason, Rejection};
use crate::error::{EvalError, Result};

/// Descriptions shorter than this many terms (after stopword removal) are rejected.
pub const MIN_TERMS: usize = 13;

const BUNDLED_STOPWORDS: &str = include_str!("../../data/stopwords_en.txt");

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CatalogEntry {
    pub title: String,
    pub description: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Catalog {
    pub items: BTreeMap<ItemId, CatalogEntry>,
}

impl Catalog {
    pub fn insert_description(&mut self, item: ItemId, text: impl Into<String>) {
        self.items.entry(item).or_default().description = Some(text.into());
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }
}

/// Reads `item_id<TAB>description` lines.
pub fn parse_descriptions(text: &str, path: &Path) -> Result<Catalog> {
    let mut catalog = Catalog::default();
    for (idx, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let (id, desc) = line.split_once('\t').ok_or_else(|| EvalError::Parse {
            path: path.to_path_buf(),
            line: idx + 1,
            message: "expected `item_id<TAB>description`".into(),
        })?;
        let id: u32 = id.trim().parse().map_err(|_| EvalError::Parse {
            path: path.to_path_buf(),
            line: idx + 1,
            message: format!("item id `{}` is not an integer", id.trim()),
        })?;
        if catalog.items.contains_key(&ItemId(id)) {
            return Err(EvalError::Parse {
                path: path.to_path_buf(),
                line: idx + 1,
                message: format!("duplicate item id {id}"),
            });
        }
        let desc = desc.trim();
        let entry = catalog.items.entry(ItemId(id)).or_default();
        entry.description = (!desc.is_empty()).then(|| desc.to_string());
    }
    Ok(catalog)
}

pub fn load_descriptions(path: &Path) -> Result<Catalog> {
    let text = fs::read_to_string(path).map_err(|e| EvalError::io(path, e))?;
    parse_descriptions(&text, path)
}

pub fn parse_stopwords(text: &str) -> BTreeSet<String> {
    text.lines()
        .map(|w| w.trim().to_lowercase())
        .filter(|w| !w.is_empty())
        .collect()
}

pub fn default_stopwords() -> BTreeSet<String> {
    parse_stopwords(BUNDLED_STOPWORDS)
}

pub fn load_stopwords(path: &Path) -> Result<BTreeSet<String>> {
    let text = fs::read_to_string(path).map_err(|e| EvalError::io(path, e))?;
    Ok(parse_stopwords(&text))
}

/// Stemmed terms of `text` with stopwords removed, in document order.
pub fn terms(text: &str, stopwords: &BTreeSet<String>, stemmer: &Stemmer) -> Vec<String> {
    text.to_lowercase()
        .split(|c: char| !c.is_alphabetic())
        .filter(|t| !t.is_empty() && !stopwords.contains(*t))
        .map(|t| stemmer.stem(t).into_owned())
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct CountVsm {
    /// Sorted terms; vector component `i` is the weight of `vocabulary[i]`.
    pub vocabulary: Vec<String>,
    pub vectors: BTreeMap<ItemId, Vec<f64>>,
    pub rejected: Vec<Rejection>,
}

pub fn build_count_vsm(catalog: &Catalog, stopwords: &BTreeSet<String>) -> Result<CountVsm> {
    if catalog.is_empty() {
        return Err(EvalError::data("catalog is empty"));
    }
    let stemmer = Stemmer::create(Algorithm::English);
    let mut rejected = Vec::new();
    let mut docs: BTreeMap<ItemId, BTreeMap<String, usize>> = BTreeMap::new();
    for (&item, entry) in &catalog.items {
        let Some(desc) = entry.description.as_deref() else {
            rejected.push(Rejection {
                item,
                reason: RejectReason::MissingDescription,
            });
            continue;
        };
        let doc_terms = terms(desc, stopwords, &stemmer);
        if doc_terms.len() < MIN_TERMS {
            rejected.push(Rejection {
                item,
                reason: RejectReason::TooShort { terms: doc_terms.len() },
            });
            continue;
        }
        let mut counts = BTreeMap::new();
        for t in doc_terms {
            *counts.entry(t).or_insert(0) += 1;
        }
        docs.insert(item, counts);
    }
    if docs.is_empty() {
        return Err(EvalError::data("no description survived preprocessing"));
    }

    let mut df: BTreeMap<&str, usize> = BTreeMap::new();
    for counts in docs.values() {
        for term in counts.keys() {
            *df.entry(term.as_str()).or_insert(0) += 1;
        }
    }
    let n_docs = docs.len() as f64;
    let vocabulary: Vec<String> = df.keys().map(|t| t.to_string()).collect();
    let idf: Vec<f64> = df.values().map(|&d| (n_docs / d as f64).ln()).collect();
    let column: BTreeMap<&str, usize> = vocabulary.iter().enumerate().map(|(i, t)| (t.as_str(), i)).collect();

    let mut vectors = BTreeMap::new();
    for (item, counts) in &docs {
        let mut v = vec![0.0; vocabulary.len()];
        for (term, &count) in counts {
            let c = column[term.as_str()];
            v[c] = count as f64 * idf[c];
        }
        if v.iter().all(|&w| w == 0.0) {
            rejected.push(Rejection {
                item: *item,
                reason: RejectReason::NoInformativeTerms,
            });
            continue;
        }
        vectors.insert(*item, v);
    }
    if vectors.is_empty() {
        return Err(EvalError::data("every description has only corpus-wide terms"));
    }
    rejected.sort_by_key(|r| r.item);
    Ok(CountVsm {
        vocabulary,
        vectors,
        rejected,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use surprise_core::distance::cosine_distance;

    fn words(n: usize, prefix: &str) -> String {
        (0..n).map(|i| format!("{prefix}{}", "abcdefghijklmnopqrstuvwxyz".chars().nth(i % 26).unwrap())).collect::<Vec<_>>().join(" ")
    }

    #[test]
    fn stopwords_and_stemming() {
        let stemmer = Stemmer::create(Algorithm::English);
        let t = terms("The Running dogs, and THE cats' running!", &default_stopwords(), &stemmer);
        assert_eq!(t, vec!["run", "dog", "cat", "run"]);
    }

    #[test]
    fn short_descriptions_are_rejected() {
        let mut catalog = Catalog::default();
        catalog.insert_description(ItemId(1), format!("{} the of and", words(12, "zz")));
        catalog.insert_description(ItemId(2), words(13, "yy"));
        catalog.insert_description(ItemId(3), words(20, "xx"));
        catalog.items.insert(ItemId(4), CatalogEntry::default());
        let vsm = build_count_vsm(&catalog, &default_stopwords()).unwrap();
        assert!(vsm.vectors.contains_key(&ItemId(2)));
        assert_eq!(
            vsm.rejected,
            vec![
                Rejection {
                    item: ItemId(1),
                    reason: RejectReason::TooShort { terms: 12 }
                },
                Rejection {
                    item: ItemId(4),
                    reason: RejectReason::MissingDescription
                },
            ]
        );
    }

    #[test]
    fn corpus_wide_terms_weigh_nothing() {
        let shared = "galaxy ".repeat(13);
        let mut catalog = Catalog::default();
        catalog.insert_description(ItemId(1), format!("{shared} pirate"));
        catalog.insert_description(ItemId(2), format!("{shared} wizard"));
        catalog.insert_description(ItemId(3), shared.clone());
        let vsm = build_count_vsm(&catalog, &default_stopwords()).unwrap();
        let col = vsm.vocabulary.iter().position(|t| t == "galaxi").unwrap();
        assert!(vsm.vectors.values().all(|v| v[col] == 0.0));
        // Item 3 only has the shared term left.
        assert_eq!(vsm.rejected[0].reason, RejectReason::NoInformativeTerms);
        let pirate = vsm.vocabulary.iter().position(|t| t == "pirat").unwrap();
        assert!((vsm.vectors[&ItemId(1)][pirate] - (3.0f64).ln()).abs() < 1e-15);
    }

    #[test]
    fn identical_descriptions_give_identical_vectors() {
        let mut catalog = Catalog::default();
        let text = "A lonely robot drifts across the ruined desert city looking for water, music and one friend to share stories";
        catalog.insert_description(ItemId(1), text);
        catalog.insert_description(ItemId(2), text);
        catalog.insert_description(ItemId(3), "Two rival chefs battle over a tiny restaurant kitchen in Paris while a food critic plots revenge tonight");
        let vsm = build_count_vsm(&catalog, &default_stopwords()).unwrap();
        assert_eq!(vsm.vectors[&ItemId(1)], vsm.vectors[&ItemId(2)]);
        assert_eq!(cosine_distance(&vsm.vectors[&ItemId(1)], &vsm.vectors[&ItemId(2)]).unwrap(), 0.0);
        assert!(vsm.vocabulary.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn descriptions_file_errors() {
        let p = Path::new("d.tsv");
        assert!(parse_descriptions("1\tok\nbad line\n", p).is_err());
        assert!(parse_descriptions("1\tok\n1\tagain\n", p).is_err());
        let c = parse_descriptions("7\t\n8\tsome text\n", p).unwrap();
        assert_eq!(c.items[&ItemId(7)].description, None);
    }

    #[test]
    fn empty_catalog() {
        assert!(build_count_vsm(&Catalog::default(), &default_stopwords()).is_err());
    }
}
