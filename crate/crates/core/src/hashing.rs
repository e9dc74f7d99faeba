//! Hierarchical hash-expressions and the level-wise Jaccard similarity.
//!
//! A document's topics with at least uniform mass (`theta_k >= 1/K`) are
//! clustered by value into at most `L` groups; the group with the highest
//! mean becomes level 0. Each level of the hash holds the union of the labels
//! of its topics.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::annotate::TopicLabelSet;
use crate::error::{Error, Result};
use crate::topicmodel::DocTopicDist;

pub const DEFAULT_LEVELS: usize = 3;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HashExpression {
    pub doc_id: String,
    pub levels: Vec<BTreeSet<String>>,
}

impl HashExpression {
    pub fn new(doc_id: impl Into<String>, levels: Vec<BTreeSet<String>>) -> Self {
        HashExpression {
            doc_id: doc_id.into(),
            levels,
        }
    }

    pub fn num_levels(&self) -> usize {
        self.levels.len()
    }

    pub fn non_empty_levels(&self) -> usize {
        self.levels.iter().filter(|l| !l.is_empty()).count()
    }
}

/// Splits the above-uniform topics of `theta` into `levels` disjoint sets,
/// most important first. Trailing levels stay empty when there are fewer
/// distinct values than levels.
pub fn assign_levels(theta: &DocTopicDist, levels: usize) -> Result<Vec<BTreeSet<usize>>> {
    if levels == 0 {
        return Err(Error::InvalidParameter("level count must be >= 1".into()));
    }
    let values = theta.as_slice();
    let threshold = 1.0 / values.len() as f64;
    let mut survivors: Vec<(usize, f64)> = values
        .iter()
        .copied()
        .enumerate()
        .filter(|&(_, t)| t >= threshold)
        .collect();
    let mut out = vec![BTreeSet::new(); levels];
    if survivors.is_empty() {
        log::warn!("no topic reaches uniform mass; all levels empty");
        return Ok(out);
    }
    survivors.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));

    // distinct values, descending, with multiplicities
    let mut distinct: Vec<(f64, usize)> = Vec::new();
    for &(_, t) in &survivors {
        match distinct.last_mut() {
            Some((v, n)) if *v == t => *n += 1,
            _ => distinct.push((t, 1)),
        }
    }
    let groups = levels.min(distinct.len());
    let bounds = kmeans_1d(&distinct, groups);

    let mut cursor = survivors.iter();
    for (level, range) in bounds.iter().enumerate() {
        let members: usize = distinct[range.clone()].iter().map(|&(_, n)| n).sum();
        for &(topic, _) in cursor.by_ref().take(members) {
            out[level].insert(topic);
        }
    }
    Ok(out)
}

/// Optimal 1-D k-means on sorted weighted points, by dynamic programming.
/// Returns `groups` contiguous, non-empty index ranges covering `points`.
/// Among equal-cost splits the earliest one wins.
fn kmeans_1d(points: &[(f64, usize)], groups: usize) -> Vec<core::ops::Range<usize>> {
    let n = points.len();
    debug_assert!(groups >= 1 && groups <= n);
    let mut w = vec![0.0; n + 1];
    let mut s1 = vec![0.0; n + 1];
    let mut s2 = vec![0.0; n + 1];
    for (i, &(x, m)) in points.iter().enumerate() {
        let m = m as f64;
        w[i + 1] = w[i] + m;
        s1[i + 1] = s1[i] + m * x;
        s2[i + 1] = s2[i] + m * x * x;
    }
    // within-cluster sum of squares of points[i..j]
    let cost = |i: usize, j: usize| {
        let weight = w[j] - w[i];
        let sum = s1[j] - s1[i];
        let sq = s2[j] - s2[i];
        (sq - sum * sum / weight).max(0.0)
    };

    // best[c][j]: cheapest split of points[..j] into c + 1 clusters
    let mut best = vec![vec![f64::INFINITY; n + 1]; groups];
    let mut split = vec![vec![0usize; n + 1]; groups];
    for (j, slot) in best[0].iter_mut().enumerate().skip(1) {
        *slot = cost(0, j);
    }
    for c in 1..groups {
        for j in (c + 1)..=n {
            for i in c..j {
                let candidate = best[c - 1][i] + cost(i, j);
                if candidate < best[c][j] {
                    best[c][j] = candidate;
                    split[c][j] = i;
                }
            }
        }
    }

    let mut ranges = vec![0..0; groups];
    let mut end = n;
    for c in (0..groups).rev() {
        let start = if c == 0 { 0 } else { split[c][end] };
        ranges[c] = start..end;
        end = start;
    }
    ranges
}

/// Level `i` of the hash is the union of the labels of the topics assigned
/// to level `i`.
pub fn build_hash(
    doc_id: impl Into<String>,
    theta: &DocTopicDist,
    labels: &TopicLabelSet,
    levels: usize,
) -> Result<HashExpression> {
    if labels.num_topics() != theta.num_topics() {
        return Err(Error::LabelMismatch {
            topics: theta.num_topics(),
            labels: labels.num_topics(),
        });
    }
    let hash_levels = assign_levels(theta, levels)?
        .into_iter()
        .map(|topics| {
            topics
                .into_iter()
                .flat_map(|k| labels.labels(k).iter().cloned())
                .collect()
        })
        .collect();
    Ok(HashExpression::new(doc_id, hash_levels))
}

/// `|A ∩ B| / |A ∪ B|`, with two empty sets scoring 0.
pub fn jaccard(a: &BTreeSet<String>, b: &BTreeSet<String>) -> f64 {
    let inter = a.intersection(b).count();
    let union = a.len() + b.len() - inter;
    if union == 0 {
        0.0
    } else {
        inter as f64 / union as f64
    }
}

/// Sum of same-level Jaccard indices, in `[0, L]`.
pub fn similarity(h1: &HashExpression, h2: &HashExpression) -> Result<f64> {
    if h1.num_levels() != h2.num_levels() {
        return Err(Error::LevelMismatch {
            expected: h1.num_levels(),
            found: h2.num_levels(),
        });
    }
    Ok(h1
        .levels
        .iter()
        .zip(&h2.levels)
        .map(|(a, b)| jaccard(a, b))
        .fold(0.0, |acc, j| acc + j))
}

/// `L - similarity`.
pub fn distance(h1: &HashExpression, h2: &HashExpression) -> Result<f64> {
    Ok(h1.num_levels() as f64 - similarity(h1, h2)?)
}
