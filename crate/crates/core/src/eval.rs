//! Retrieval evaluation: thesaurus ground truth and precision@k.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::annotate::Scheme;
use crate::corpus::Document;
use crate::error::{Error, Result};
use crate::eurovoc::{map_codes, CategoryMapping};
use crate::index::InvertedIndex;
use crate::rng::SamplerRng;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvalConfig {
    /// Languages pooled into one collection.
    pub languages: Vec<String>,
    pub scheme: Scheme,
    pub query_count: usize,
    pub ks: BTreeSet<usize>,
    pub seed: u64,
}

impl EvalConfig {
    fn validate(&self) -> Result<()> {
        if self.ks.is_empty() || self.ks.contains(&0) {
            return Err(Error::InvalidParameter("ks must be non-empty and positive".into()));
        }
        if self.query_count == 0 {
            return Err(Error::InvalidParameter("query_count must be >= 1".into()));
        }
        if self.languages.is_empty() {
            return Err(Error::InvalidParameter("no language selected".into()));
        }
        Ok(())
    }
}

/// Outcome for one language combination under one scheme.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalResult {
    pub languages: Vec<String>,
    pub scheme: Scheme,
    /// Queries drawn: `min(query_count, pool size)`.
    pub sampled: usize,
    pub evaluated: usize,
    /// No mappable code, or no other document shares a category.
    pub skipped_no_ground_truth: usize,
    /// Not in the index (e.g. no in-vocabulary lemma).
    pub skipped_no_hash: usize,
    /// Mean precision@k over evaluated queries; absent when none was evaluated.
    pub precision: BTreeMap<usize, f64>,
}

impl EvalResult {
    /// `"en"`, `"es-en"`, `"en-es-fr-pt"`: languages joined in configured order.
    pub fn combination(&self) -> String {
        self.languages.join("-")
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct EvalReport {
    pub results: Vec<EvalResult>,
}

/// `|top-k ∩ relevant| / k`; missing slots count as misses.
pub fn precision_at_k<'a, I>(ranked: I, relevant: &BTreeSet<String>, k: usize) -> f64
where
    I: IntoIterator<Item = &'a str>,
{
    if k == 0 {
        return 0.0;
    }
    let hits = ranked.into_iter().take(k).filter(|id| relevant.contains(*id)).count();
    hits as f64 / k as f64
}

/// Documents other than `query` sharing at least one category with it.
/// `None` when the query has no mappable code.
pub fn ground_truth(
    query: &Document,
    corpus: &[Document],
    mapping: &CategoryMapping,
) -> Result<Option<BTreeSet<String>>> {
    let wanted = map_codes(&query.codes, mapping)?.categories;
    if wanted.is_empty() {
        return Ok(None);
    }
    let mut relevant = BTreeSet::new();
    for doc in corpus {
        if doc.id == query.id {
            continue;
        }
        let cats = map_codes(&doc.codes, mapping)?.categories;
        if !cats.is_disjoint(&wanted) {
            relevant.insert(doc.id.clone());
        }
    }
    Ok(Some(relevant))
}

/// Categories of a document, ignoring codes the mapping does not know.
fn categories_of(doc: &Document, mapping: &CategoryMapping) -> BTreeSet<String> {
    doc.codes
        .iter()
        .filter_map(|c| mapping.category(c).ok())
        .map(ToString::to_string)
        .collect()
}

/// Samples queries uniformly from the documents of `cfg.languages`, ranks
/// the pooled `index` for each and averages precision@k against shared
/// categories. `index` must hold the hashes of the pooled documents.
pub fn run_experiment(
    cfg: &EvalConfig,
    corpus: &[Document],
    index: &InvertedIndex,
    mapping: &CategoryMapping,
) -> Result<EvalResult> {
    cfg.validate()?;
    let mut pool: Vec<&Document> = corpus
        .iter()
        .filter(|d| cfg.languages.contains(&d.lang))
        .collect();
    if pool.is_empty() {
        return Err(Error::NoDocuments);
    }
    pool.sort_by(|a, b| a.id.cmp(&b.id));

    let categories: Vec<BTreeSet<String>> = pool.iter().map(|d| categories_of(d, mapping)).collect();
    let mut members: BTreeMap<&str, BTreeSet<usize>> = BTreeMap::new();
    for (i, cats) in categories.iter().enumerate() {
        for c in cats {
            members.entry(c.as_str()).or_default().insert(i);
        }
    }

    // partial Fisher-Yates over the id-sorted pool
    let sampled = cfg.query_count.min(pool.len());
    let mut order: Vec<usize> = (0..pool.len()).collect();
    let mut rng = SamplerRng::seed_from_u64(cfg.seed);
    for i in 0..sampled {
        let j = i + rng.below(pool.len() - i);
        order.swap(i, j);
    }
    let mut queries: Vec<usize> = order[..sampled].to_vec();
    queries.sort_unstable();

    let depth = cfg.ks.iter().copied().max().unwrap_or(1);
    let mut sums: BTreeMap<usize, f64> = cfg.ks.iter().map(|&k| (k, 0.0)).collect();
    let mut result = EvalResult {
        languages: cfg.languages.clone(),
        scheme: cfg.scheme,
        sampled,
        evaluated: 0,
        skipped_no_ground_truth: 0,
        skipped_no_hash: 0,
        precision: BTreeMap::new(),
    };
    for q in queries {
        let mut relevant_idx = BTreeSet::new();
        for c in &categories[q] {
            relevant_idx.extend(members[c.as_str()].iter().copied());
        }
        relevant_idx.remove(&q);
        if relevant_idx.is_empty() {
            result.skipped_no_ground_truth += 1;
            continue;
        }
        let Some(hash) = index.get(&pool[q].id) else {
            result.skipped_no_hash += 1;
            continue;
        };
        let relevant: BTreeSet<String> = relevant_idx.into_iter().map(|i| pool[i].id.clone()).collect();
        let ranked = index.query(hash, depth)?;
        for (&k, sum) in sums.iter_mut() {
            *sum += precision_at_k(ranked.ids(), &relevant, k);
        }
        result.evaluated += 1;
    }
    if result.evaluated > 0 {
        let n = result.evaluated as f64;
        result.precision = sums.into_iter().map(|(k, s)| (k, s / n)).collect();
    }
    Ok(result)
}
