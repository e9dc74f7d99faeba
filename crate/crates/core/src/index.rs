//! Per-level inverted index over hash-expressions.
//!
//! A document can only score above zero against a query if the two share a
//! label at the same level, so the union of the query's posting lists is an
//! exact candidate set. [`InvertedIndex::query`] scores candidates from
//! posting-list intersection counts; [`InvertedIndex::brute_force_query`]
//! scans every stored document and is kept as the reference.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::hashing::{similarity, HashExpression};

/// Ranked `(doc id, score)` pairs: score descending, then doc id ascending.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct QueryResult {
    pub ranked: Vec<(String, f64)>,
}

impl QueryResult {
    pub fn ids(&self) -> impl Iterator<Item = &str> {
        self.ranked.iter().map(|(id, _)| id.as_str())
    }

    pub fn len(&self) -> usize {
        self.ranked.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ranked.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct InvertedIndex {
    levels: usize,
    /// `postings[level][label]` = ids of the documents holding `label` at `level`.
    postings: Vec<BTreeMap<String, BTreeSet<Arc<str>>>>,
    store: BTreeMap<Arc<str>, HashExpression>,
}

impl InvertedIndex {
    pub fn new(levels: usize) -> Self {
        InvertedIndex {
            levels,
            postings: vec![BTreeMap::new(); levels],
            store: BTreeMap::new(),
        }
    }

    /// Builds an index by adding every hash in order.
    pub fn from_hashes<I>(levels: usize, hashes: I) -> Result<Self>
    where
        I: IntoIterator<Item = HashExpression>,
    {
        let mut index = InvertedIndex::new(levels);
        for hash in hashes {
            index.add_document(hash)?;
        }
        Ok(index)
    }

    pub fn num_levels(&self) -> usize {
        self.levels
    }

    pub fn len(&self) -> usize {
        self.store.len()
    }

    pub fn is_empty(&self) -> bool {
        self.store.is_empty()
    }

    pub fn get(&self, doc_id: &str) -> Option<&HashExpression> {
        self.store.get(doc_id)
    }

    /// Stored hashes in doc id order.
    pub fn hashes(&self) -> impl Iterator<Item = &HashExpression> {
        self.store.values()
    }

    /// Posting list of `label` at `level`, ascending by doc id.
    pub fn postings(&self, level: usize, label: &str) -> Vec<&str> {
        self.postings
            .get(level)
            .and_then(|p| p.get(label))
            .map(|ids| ids.iter().map(|id| &**id).collect())
            .unwrap_or_default()
    }

    /// Every non-empty `(level, label)` key, in order.
    pub fn posting_keys(&self) -> impl Iterator<Item = (usize, &str)> {
        self.postings
            .iter()
            .enumerate()
            .flat_map(|(level, p)| p.keys().map(move |label| (level, label.as_str())))
    }

    fn check_levels(&self, hash: &HashExpression) -> Result<()> {
        if hash.num_levels() != self.levels {
            return Err(Error::LevelMismatch {
                expected: self.levels,
                found: hash.num_levels(),
            });
        }
        Ok(())
    }

    pub fn add_document(&mut self, hash: HashExpression) -> Result<()> {
        self.check_levels(&hash)?;
        if self.store.contains_key(hash.doc_id.as_str()) {
            return Err(Error::DuplicateDocument(hash.doc_id));
        }
        let id: Arc<str> = Arc::from(hash.doc_id.as_str());
        for (level, labels) in hash.levels.iter().enumerate() {
            for label in labels {
                self.postings[level]
                    .entry(label.clone())
                    .or_default()
                    .insert(Arc::clone(&id));
            }
        }
        self.store.insert(id, hash);
        Ok(())
    }

    /// Documents sharing at least one `(level, label)` pair with `hash`,
    /// excluding `hash.doc_id` itself.
    pub fn candidates(&self, hash: &HashExpression) -> Result<BTreeSet<&str>> {
        self.check_levels(hash)?;
        let mut out = BTreeSet::new();
        for (level, labels) in hash.levels.iter().enumerate() {
            for label in labels {
                if let Some(ids) = self.postings[level].get(label) {
                    out.extend(ids.iter().map(|id| &**id).filter(|&id| id != hash.doc_id));
                }
            }
        }
        Ok(out)
    }

    /// Top-`k` documents by similarity to `hash`, scores > 0 only.
    pub fn query(&self, hash: &HashExpression, k: usize) -> Result<QueryResult> {
        self.check_levels(hash)?;
        check_k(k)?;
        // shared-label counts per candidate and level
        let mut shared: BTreeMap<&Arc<str>, Vec<usize>> = BTreeMap::new();
        for (level, labels) in hash.levels.iter().enumerate() {
            for label in labels {
                let Some(ids) = self.postings[level].get(label) else {
                    continue;
                };
                for id in ids {
                    if **id == *hash.doc_id {
                        continue;
                    }
                    shared.entry(id).or_insert_with(|| vec![0; self.levels])[level] += 1;
                }
            }
        }
        let scored = shared.into_iter().map(|(id, counts)| {
            let stored = &self.store[id];
            let score = counts
                .iter()
                .enumerate()
                .map(|(level, &inter)| {
                    let union = hash.levels[level].len() + stored.levels[level].len() - inter;
                    if inter == 0 {
                        0.0
                    } else {
                        inter as f64 / union as f64
                    }
                })
                .fold(0.0, |acc, j| acc + j);
            (id.to_string(), score)
        });
        Ok(rank(scored, k))
    }

    /// Linear scan over every stored document; same scoring and ordering
    /// rules as [`InvertedIndex::query`].
    pub fn brute_force_query(&self, hash: &HashExpression, k: usize) -> Result<QueryResult> {
        self.check_levels(hash)?;
        check_k(k)?;
        let mut scored = Vec::new();
        for (id, stored) in &self.store {
            if **id == *hash.doc_id {
                continue;
            }
            scored.push((id.to_string(), similarity(hash, stored)?));
        }
        Ok(rank(scored, k))
    }

    /// Rebuilds postings from the stored hashes alone.
    pub fn rebuild(&self) -> Result<Self> {
        InvertedIndex::from_hashes(self.levels, self.store.values().cloned())
    }
}

fn check_k(k: usize) -> Result<()> {
    if k == 0 {
        return Err(Error::InvalidParameter("k must be >= 1".into()));
    }
    Ok(())
}

fn rank<I: IntoIterator<Item = (String, f64)>>(scored: I, k: usize) -> QueryResult {
    let mut ranked: Vec<(String, f64)> = scored.into_iter().filter(|&(_, s)| s > 0.0).collect();
    ranked.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    ranked.truncate(k);
    QueryResult { ranked }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synthetic;

    fn hash(id: &str, levels: &[&[&str]]) -> HashExpression {
        HashExpression::new(
            id,
            levels
                .iter()
                .map(|l| l.iter().map(|s| s.to_string()).collect())
                .collect(),
        )
    }

    #[test]
    fn add_builds_postings() {
        let mut index = InvertedIndex::new(3);
        index.add_document(hash("d1", &[&["a"], &["b"], &[]])).unwrap();
        assert_eq!(index.postings(0, "a"), vec!["d1"]);
        assert_eq!(index.postings(1, "b"), vec!["d1"]);
        assert_eq!(index.posting_keys().count(), 2);
        assert_eq!(
            index.add_document(hash("d1", &[&["c"], &[], &[]])),
            Err(Error::DuplicateDocument("d1".into()))
        );
        index.add_document(hash("d0", &[&[], &[], &[]])).unwrap();
        assert_eq!(index.len(), 2);
        assert_eq!(index.posting_keys().count(), 2);
        index.add_document(hash("c9", &[&["a"], &[], &[]])).unwrap();
        assert_eq!(index.postings(0, "a"), vec!["c9", "d1"]);
        assert!(matches!(
            index.add_document(hash("x", &[&["a"]])),
            Err(Error::LevelMismatch { .. })
        ));
    }

    #[test]
    fn query_scores_shared_labels_only() {
        let mut index = InvertedIndex::new(2);
        index.add_document(hash("d1", &[&["a"], &[]])).unwrap();
        index.add_document(hash("d2", &[&["b"], &[]])).unwrap();
        let q = hash("q", &[&["a"], &[]]);
        let expected = QueryResult {
            ranked: vec![("d1".into(), 1.0)],
        };
        assert_eq!(index.query(&q, 5).unwrap(), expected);
        assert_eq!(index.brute_force_query(&q, 5).unwrap(), expected);
        let empty = InvertedIndex::new(2);
        assert!(empty.query(&q, 5).unwrap().is_empty());
        assert!(empty.brute_force_query(&q, 5).unwrap().is_empty());
        assert!(index.query(&q, 0).is_err());
    }

    #[test]
    fn query_excludes_itself_and_breaks_ties_by_id() {
        let mut index = InvertedIndex::new(1);
        for id in ["d3", "d1", "d2"] {
            index.add_document(hash(id, &[&["a", "b"]])).unwrap();
        }
        index.add_document(hash("d4", &[&["a"]])).unwrap();
        let q = index.get("d2").unwrap().clone();
        let got = index.query(&q, 10).unwrap();
        assert_eq!(got.ids().collect::<Vec<_>>(), vec!["d1", "d3", "d4"]);
        assert_eq!(got.ranked[2].1, 0.5);
        assert_eq!(got, index.brute_force_query(&q, 10).unwrap());
        assert_eq!(index.query(&q, 1).unwrap().len(), 1);
    }

    #[test]
    fn randomized_oracle_equivalence() {
        for seed in 0..20 {
            let hashes = synthetic::random_hashes(300, 3, 12, 4, seed);
            let index = InvertedIndex::from_hashes(3, hashes.clone()).unwrap();
            for q in synthetic::random_hashes(20, 3, 12, 4, seed + 1000) {
                assert_eq!(index.query(&q, 10).unwrap(), index.brute_force_query(&q, 10).unwrap());
            }
            for q in hashes.iter().take(10) {
                assert_eq!(index.query(q, 7).unwrap(), index.brute_force_query(q, 7).unwrap());
            }
        }
    }

    #[test]
    fn rebuild_is_identical() {
        let hashes = synthetic::random_hashes(200, 3, 10, 3, 7);
        let index = InvertedIndex::from_hashes(3, hashes).unwrap();
        assert_eq!(index.rebuild().unwrap(), index);
    }

    #[test]
    fn candidate_count_bounded_by_postings() {
        let hashes = synthetic::random_hashes(200, 3, 10, 3, 8);
        let index = InvertedIndex::from_hashes(3, hashes).unwrap();
        for q in synthetic::random_hashes(30, 3, 10, 3, 9) {
            let bound: usize = q
                .levels
                .iter()
                .enumerate()
                .flat_map(|(level, labels)| labels.iter().map(move |l| (level, l)))
                .map(|(level, l)| index.postings(level, l).len())
                .sum();
            assert!(index.candidates(&q).unwrap().len() <= bound);
        }
    }
}
