//! LDA and Labeled LDA trained by collapsed Gibbs sampling.
//!
//! Both models share one sampler. Each token's topic is resampled from
//!
//! ```text
//! p(z = k) ∝ (n_dk + α) · (n_kw + β) / (n_k + Vβ)
//! ```
//!
//! and Labeled LDA only restricts the candidate topics of a document to the
//! topics bound to its labels. Topic-word distributions are point estimates
//! from the final sampler state.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt::Write;

use sha2::{Digest, Sha256};

use crate::corpus::{Document, Vocabulary};
use crate::error::{Error, Result};
use crate::rng::SamplerRng;

/// Row sums of `phi` and `theta` must be within this of one.
pub const SIMPLEX_TOLERANCE: f64 = 1e-9;

/// Hyperparameters shared by every sampler run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SamplerParams {
    pub alpha: f64,
    pub beta: f64,
    pub sweeps: usize,
    pub seed: u64,
}

impl SamplerParams {
    /// `alpha = 50/K`, `beta = 0.01`, 1000 sweeps.
    pub fn defaults_for(topics: usize, seed: u64) -> Self {
        SamplerParams {
            alpha: 50.0 / topics.max(1) as f64,
            beta: 0.01,
            sweeps: 1000,
            seed,
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha.is_finite()) {
            return Err(Error::InvalidParameter(alloc::format!("alpha must be > 0, got {}", self.alpha)));
        }
        if !(self.beta > 0.0 && self.beta.is_finite()) {
            return Err(Error::InvalidParameter(alloc::format!("beta must be > 0, got {}", self.beta)));
        }
        if self.sweeps == 0 {
            return Err(Error::InvalidParameter("sweeps must be >= 1".into()));
        }
        Ok(())
    }
}

/// A trained per-language topic model.
#[derive(Debug, Clone, PartialEq)]
pub struct TopicModel {
    lang: String,
    alpha: f64,
    beta: f64,
    topics: usize,
    /// Row-major `topics × vocab.len()`.
    phi: Vec<f64>,
    vocab: Vocabulary,
    category_of: Option<Vec<String>>,
    seed: u64,
}

impl TopicModel {
    /// Assembles a model from stored parts, checking every invariant.
    pub fn from_parts(
        lang: impl Into<String>,
        alpha: f64,
        beta: f64,
        phi: Vec<Vec<f64>>,
        vocab: Vocabulary,
        category_of: Option<Vec<String>>,
        seed: u64,
    ) -> Result<Self> {
        let lang = lang.into();
        crate::corpus::validate_language(&lang)?;
        let topics = phi.len();
        if topics == 0 {
            return Err(Error::InvalidModel("model has no topics".into()));
        }
        SamplerParams { alpha, beta, sweeps: 1, seed }.validate()?;
        let v = vocab.len();
        let mut flat = Vec::with_capacity(topics * v);
        for (k, row) in phi.iter().enumerate() {
            if row.len() != v {
                return Err(Error::InvalidModel(alloc::format!(
                    "phi row {k} has {} entries, vocabulary has {v}",
                    row.len()
                )));
            }
            if row.iter().any(|&p| !(p > 0.0 && p.is_finite())) {
                return Err(Error::InvalidModel(alloc::format!("phi row {k} has a non-positive entry")));
            }
            let sum: f64 = row.iter().sum();
            if (sum - 1.0).abs() > SIMPLEX_TOLERANCE {
                return Err(Error::InvalidModel(alloc::format!("phi row {k} sums to {sum}")));
            }
            flat.extend_from_slice(row);
        }
        if let Some(categories) = &category_of {
            check_categories(categories)?;
            if categories.len() != topics {
                return Err(Error::InvalidModel(alloc::format!(
                    "{} categories bound to {topics} topics",
                    categories.len()
                )));
            }
        }
        Ok(TopicModel {
            lang,
            alpha,
            beta,
            topics,
            phi: flat,
            vocab,
            category_of,
            seed,
        })
    }

    pub fn lang(&self) -> &str {
        &self.lang
    }

    pub fn num_topics(&self) -> usize {
        self.topics
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn vocab(&self) -> &Vocabulary {
        &self.vocab
    }

    pub fn phi_row(&self, topic: usize) -> &[f64] {
        let v = self.vocab.len();
        &self.phi[topic * v..(topic + 1) * v]
    }

    pub fn phi_rows(&self) -> impl Iterator<Item = &[f64]> {
        self.phi.chunks_exact(self.vocab.len())
    }

    /// Topic → category binding, present only for labeled models.
    pub fn category_of(&self) -> Option<&[String]> {
        self.category_of.as_deref()
    }

    /// SHA-256 over every field, hex encoded. Identifies the model in label
    /// and index manifests.
    pub fn fingerprint(&self) -> String {
        let mut h = Sha256::new();
        let put_str = |h: &mut Sha256, s: &str| {
            h.update((s.len() as u64).to_le_bytes());
            h.update(s.as_bytes());
        };
        put_str(&mut h, &self.lang);
        h.update(self.alpha.to_bits().to_le_bytes());
        h.update(self.beta.to_bits().to_le_bytes());
        h.update(self.seed.to_le_bytes());
        h.update((self.topics as u64).to_le_bytes());
        h.update((self.vocab.len() as u64).to_le_bytes());
        for term in self.vocab.terms() {
            put_str(&mut h, term);
        }
        for p in &self.phi {
            h.update(p.to_bits().to_le_bytes());
        }
        if let Some(categories) = &self.category_of {
            for c in categories {
                put_str(&mut h, c);
            }
        }
        let mut out = String::with_capacity(64);
        for byte in h.finalize() {
            let _ = write!(out, "{byte:02x}");
        }
        out
    }
}

fn check_categories(categories: &[String]) -> Result<()> {
    if categories.is_empty() {
        return Err(Error::InvalidParameter("category list is empty".into()));
    }
    let mut seen = alloc::collections::BTreeSet::new();
    for c in categories {
        if c.is_empty() || !seen.insert(c.as_str()) {
            return Err(Error::InvalidParameter(alloc::format!(
                "category `{c}` is empty or repeated"
            )));
        }
    }
    Ok(())
}

/// A document's mixture over the topics of one model.
#[derive(Debug, Clone, PartialEq)]
pub struct DocTopicDist {
    theta: Vec<f64>,
}

impl DocTopicDist {
    pub fn new(theta: Vec<f64>) -> Result<Self> {
        if theta.is_empty() {
            return Err(Error::InvalidParameter("theta is empty".into()));
        }
        if theta.iter().any(|&t| !(t >= 0.0 && t.is_finite())) {
            return Err(Error::InvalidParameter("theta has a negative entry".into()));
        }
        let sum: f64 = theta.iter().sum();
        if (sum - 1.0).abs() > SIMPLEX_TOLERANCE {
            return Err(Error::InvalidParameter(alloc::format!("theta sums to {sum}")));
        }
        Ok(DocTopicDist { theta })
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.theta
    }

    pub fn num_topics(&self) -> usize {
        self.theta.len()
    }
}

/// Collapsed Gibbs sampler state. Exposed so callers can audit the counts
/// between sweeps; [`train_lda`] and [`train_labeled_lda`] drive it to the end.
#[derive(Debug, Clone)]
pub struct GibbsSampler {
    lang: String,
    vocab: Vocabulary,
    params: SamplerParams,
    topics: usize,
    docs: Vec<Vec<usize>>,
    /// Candidate topics per document; `None` for unrestricted LDA.
    allowed: Option<Vec<Vec<usize>>>,
    categories: Option<Vec<String>>,
    z: Vec<Vec<usize>>,
    doc_topic: Vec<u32>,
    topic_word: Vec<u32>,
    topic_total: Vec<u32>,
    rng: SamplerRng,
    sweeps_done: usize,
    weights: Vec<f64>,
}

impl GibbsSampler {
    /// Unsupervised LDA with `topics` latent topics.
    pub fn lda(docs: &[Document], vocab: &Vocabulary, topics: usize, params: SamplerParams) -> Result<Self> {
        if topics == 0 {
            return Err(Error::InvalidParameter("topic count must be >= 1".into()));
        }
        Self::build(docs, vocab, topics, None, None, params)
    }

    /// Labeled LDA: one topic per entry of `categories`, and each document
    /// samples only among the topics of its `codes`, which must already be
    /// category ids.
    pub fn labeled(
        docs: &[Document],
        vocab: &Vocabulary,
        categories: &[String],
        params: SamplerParams,
    ) -> Result<Self> {
        check_categories(categories)?;
        let position: BTreeMap<&str, usize> =
            categories.iter().enumerate().map(|(i, c)| (c.as_str(), i)).collect();
        let mut allowed = Vec::with_capacity(docs.len());
        for doc in docs {
            if doc.codes.is_empty() {
                return Err(Error::EmptyLabelSet(doc.id.clone()));
            }
            let mut topics = Vec::with_capacity(doc.codes.len());
            for code in &doc.codes {
                match position.get(code.as_str()) {
                    Some(&k) => topics.push(k),
                    None => {
                        return Err(Error::UnknownCategory {
                            doc: doc.id.clone(),
                            category: code.clone(),
                        })
                    }
                }
            }
            topics.sort_unstable();
            allowed.push(topics);
        }
        Self::build(docs, vocab, categories.len(), Some(allowed), Some(categories.to_vec()), params)
    }

    fn build(
        docs: &[Document],
        vocab: &Vocabulary,
        topics: usize,
        allowed: Option<Vec<Vec<usize>>>,
        categories: Option<Vec<String>>,
        params: SamplerParams,
    ) -> Result<Self> {
        params.validate()?;
        let first = docs.first().ok_or(Error::NoDocuments)?;
        let lang = first.lang.clone();
        let mut encoded = Vec::with_capacity(docs.len());
        for doc in docs {
            if doc.lang != lang {
                return Err(Error::LanguageMismatch {
                    expected: lang,
                    found: doc.lang.clone(),
                });
            }
            let words = vocab.encode(&doc.lemmas);
            if words.is_empty() {
                return Err(Error::DocumentOutOfVocabulary(doc.id.clone()));
            }
            encoded.push(words);
        }
        if let Some(pos) = crate::corpus::find_duplicate_id(docs) {
            return Err(Error::DuplicateDocument(docs[pos].id.clone()));
        }

        let v = vocab.len();
        let mut rng = SamplerRng::seed_from_u64(params.seed);
        let mut z = Vec::with_capacity(encoded.len());
        let mut doc_topic = vec![0u32; encoded.len() * topics];
        let mut topic_word = vec![0u32; topics * v];
        let mut topic_total = vec![0u32; topics];
        for (d, words) in encoded.iter().enumerate() {
            let mut zd = Vec::with_capacity(words.len());
            for &w in words {
                let k = match &allowed {
                    Some(allowed) => allowed[d][rng.below(allowed[d].len())],
                    None => rng.below(topics),
                };
                doc_topic[d * topics + k] += 1;
                topic_word[k * v + w] += 1;
                topic_total[k] += 1;
                zd.push(k);
            }
            z.push(zd);
        }

        Ok(GibbsSampler {
            lang,
            vocab: vocab.clone(),
            params,
            topics,
            docs: encoded,
            allowed,
            categories,
            z,
            doc_topic,
            topic_word,
            topic_total,
            rng,
            sweeps_done: 0,
            weights: vec![0.0; topics],
        })
    }

    /// Resamples every token once, documents and tokens in order.
    pub fn sweep(&mut self) {
        let k_count = self.topics;
        let v = self.vocab.len();
        let alpha = self.params.alpha;
        let beta = self.params.beta;
        let v_beta = v as f64 * beta;
        for d in 0..self.docs.len() {
            let row = d * k_count;
            for i in 0..self.docs[d].len() {
                let w = self.docs[d][i];
                let old = self.z[d][i];
                self.doc_topic[row + old] -= 1;
                self.topic_word[old * v + w] -= 1;
                self.topic_total[old] -= 1;

                let new = match &self.allowed {
                    None => {
                        let mut total = 0.0;
                        for k in 0..k_count {
                            let p = (f64::from(self.doc_topic[row + k]) + alpha)
                                * (f64::from(self.topic_word[k * v + w]) + beta)
                                / (f64::from(self.topic_total[k]) + v_beta);
                            self.weights[k] = p;
                            total += p;
                        }
                        self.rng.weighted(&self.weights, total)
                    }
                    Some(allowed) => {
                        let candidates = &allowed[d];
                        let mut total = 0.0;
                        for (j, &k) in candidates.iter().enumerate() {
                            let p = (f64::from(self.doc_topic[row + k]) + alpha)
                                * (f64::from(self.topic_word[k * v + w]) + beta)
                                / (f64::from(self.topic_total[k]) + v_beta);
                            self.weights[j] = p;
                            total += p;
                        }
                        candidates[self.rng.weighted(&self.weights[..candidates.len()], total)]
                    }
                };

                self.z[d][i] = new;
                self.doc_topic[row + new] += 1;
                self.topic_word[new * v + w] += 1;
                self.topic_total[new] += 1;
            }
        }
        self.sweeps_done += 1;
    }

    pub fn sweeps_done(&self) -> usize {
        self.sweeps_done
    }

    pub fn num_topics(&self) -> usize {
        self.topics
    }

    /// Current topic assignment of every token, per document.
    pub fn assignments(&self) -> &[Vec<usize>] {
        &self.z
    }

    /// Candidate topics of document `d` for labeled models.
    pub fn allowed_topics(&self, d: usize) -> Option<&[usize]> {
        self.allowed.as_ref().map(|a| a[d].as_slice())
    }

    /// Recounts the assignments from scratch and compares them with the
    /// incremental counts: `Σ_k n_dk = |d|`, `Σ_w n_kw = n_k`, and every
    /// labeled token sits inside its document's label set.
    pub fn audit(&self) -> Result<()> {
        let k_count = self.topics;
        let v = self.vocab.len();
        let mut doc_topic = vec![0u32; self.doc_topic.len()];
        let mut topic_word = vec![0u32; self.topic_word.len()];
        for (d, (words, zd)) in self.docs.iter().zip(&self.z).enumerate() {
            for (&w, &k) in words.iter().zip(zd) {
                if let Some(allowed) = &self.allowed {
                    if allowed[d].binary_search(&k).is_err() {
                        return Err(Error::InvalidModel(alloc::format!(
                            "document {d} has a token outside its label set"
                        )));
                    }
                }
                doc_topic[d * k_count + k] += 1;
                topic_word[k * v + w] += 1;
            }
            let row_sum: u32 = self.doc_topic[d * k_count..(d + 1) * k_count].iter().sum();
            if row_sum as usize != words.len() {
                return Err(Error::InvalidModel(alloc::format!("document {d} topic counts drifted")));
            }
        }
        if doc_topic != self.doc_topic || topic_word != self.topic_word {
            return Err(Error::InvalidModel("count matrices disagree with assignments".into()));
        }
        for k in 0..k_count {
            let sum: u32 = self.topic_word[k * v..(k + 1) * v].iter().sum();
            if sum != self.topic_total[k] {
                return Err(Error::InvalidModel(alloc::format!("topic {k} total drifted")));
            }
        }
        Ok(())
    }

    /// Runs the remaining sweeps and returns the model.
    pub fn run(mut self) -> TopicModel {
        while self.sweeps_done < self.params.sweeps {
            self.sweep();
        }
        self.into_model()
    }

    /// Estimates `phi = (n_kw + β) / (n_k + Vβ)` from the current state.
    pub fn into_model(self) -> TopicModel {
        let v = self.vocab.len();
        let beta = self.params.beta;
        let v_beta = v as f64 * beta;
        let mut phi = Vec::with_capacity(self.topics * v);
        for k in 0..self.topics {
            let denom = f64::from(self.topic_total[k]) + v_beta;
            phi.extend(
                self.topic_word[k * v..(k + 1) * v]
                    .iter()
                    .map(|&n| (f64::from(n) + beta) / denom),
            );
        }
        TopicModel {
            lang: self.lang,
            alpha: self.params.alpha,
            beta,
            topics: self.topics,
            phi,
            vocab: self.vocab,
            category_of: self.categories,
            seed: self.params.seed,
        }
    }
}

pub fn train_lda(docs: &[Document], vocab: &Vocabulary, topics: usize, params: SamplerParams) -> Result<TopicModel> {
    Ok(GibbsSampler::lda(docs, vocab, topics, params)?.run())
}

/// `docs[i].codes` holds the category ids of document `i`.
pub fn train_labeled_lda(
    docs: &[Document],
    vocab: &Vocabulary,
    categories: &[String],
    params: SamplerParams,
) -> Result<TopicModel> {
    Ok(GibbsSampler::labeled(docs, vocab, categories, params)?.run())
}

/// Folds a new document into a trained model with `phi` held fixed and
/// returns `theta = (n_dk + α) / (len + Kα)` from the final state.
///
/// Out-of-vocabulary lemmas are dropped; a document with none left yields
/// [`Error::NoInVocabularyLemma`].
pub fn infer_theta(model: &TopicModel, lemmas: &[String], sweeps: usize, seed: u64) -> Result<DocTopicDist> {
    if sweeps == 0 {
        return Err(Error::InvalidParameter("sweeps must be >= 1".into()));
    }
    let words = model.vocab.encode(lemmas);
    if words.is_empty() {
        return Err(Error::NoInVocabularyLemma);
    }
    let k_count = model.topics;
    let v = model.vocab.len();
    let mut rng = SamplerRng::seed_from_u64(seed);
    let mut counts = vec![0u32; k_count];
    let mut z: Vec<usize> = words
        .iter()
        .map(|_| {
            let k = rng.below(k_count);
            counts[k] += 1;
            k
        })
        .collect();
    let mut weights = vec![0.0; k_count];
    for _ in 0..sweeps {
        for (i, &w) in words.iter().enumerate() {
            counts[z[i]] -= 1;
            let mut total = 0.0;
            for k in 0..k_count {
                let p = (f64::from(counts[k]) + model.alpha) * model.phi[k * v + w];
                weights[k] = p;
                total += p;
            }
            let k = rng.weighted(&weights, total);
            z[i] = k;
            counts[k] += 1;
        }
    }
    let denom = words.len() as f64 + k_count as f64 * model.alpha;
    let theta = counts.iter().map(|&n| (f64::from(n) + model.alpha) / denom).collect();
    DocTopicDist::new(theta)
}

/// The `n` most probable lemmas of `topic`, ties broken lexicographically.
pub fn top_words(model: &TopicModel, topic: usize, n: usize) -> Result<Vec<(String, f64)>> {
    if topic >= model.topics {
        return Err(Error::TopicOutOfRange {
            topic,
            topics: model.topics,
        });
    }
    let v = model.vocab.len();
    if n == 0 || n > v {
        return Err(Error::InvalidParameter(alloc::format!(
            "top-word count must be in 1..={v}, got {n}"
        )));
    }
    let row = model.phi_row(topic);
    let terms = model.vocab.terms();
    let mut order: Vec<usize> = (0..v).collect();
    order.sort_by(|&a, &b| row[b].total_cmp(&row[a]).then_with(|| terms[a].cmp(&terms[b])));
    Ok(order
        .into_iter()
        .take(n)
        .map(|w| (terms[w].to_string(), row[w]))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synthetic;

    fn doc(id: &str, lemmas: &[&str], codes: &[&str]) -> Document {
        Document::new(
            id,
            "en",
            lemmas.iter().map(|s| s.to_string()).collect(),
            codes.iter().map(|s| s.to_string()).collect(),
        )
        .unwrap()
    }

    fn vocab(terms: &[&str]) -> Vocabulary {
        Vocabulary::from_terms(terms.iter().map(|s| s.to_string()).collect()).unwrap()
    }

    fn params(seed: u64) -> SamplerParams {
        SamplerParams {
            alpha: 0.1,
            beta: 0.01,
            sweeps: 200,
            seed,
        }
    }

    fn row_sums_ok(model: &TopicModel) {
        for row in model.phi_rows() {
            let sum: f64 = row.iter().sum();
            assert!((sum - 1.0).abs() <= SIMPLEX_TOLERANCE);
            assert!(row.iter().all(|&p| p > 0.0));
        }
    }

    #[test]
    fn single_term_single_topic() {
        let docs = [doc("d", &["a", "a"], &[])];
        let model = train_lda(&docs, &vocab(&["a"]), 1, params(1)).unwrap();
        assert_eq!(model.phi_row(0), &[1.0]);
    }

    #[test]
    fn planted_topics_recovered() {
        let (docs, vocab) = synthetic::planted_two_topic_corpus(200, 20, 11);
        let model = train_lda(
            &docs,
            &vocab,
            2,
            SamplerParams {
                alpha: 0.1,
                beta: 0.01,
                sweeps: 500,
                seed: 5,
            },
        )
        .unwrap();
        row_sums_ok(&model);
        assert!(synthetic::planted_recovery_mass(&model) >= 0.9);
    }

    #[test]
    fn counts_consistent_after_every_sweep() {
        let (docs, vocab) = synthetic::planted_two_topic_corpus(50, 15, 3);
        let mut sampler = GibbsSampler::lda(&docs, &vocab, 3, params(9)).unwrap();
        sampler.audit().unwrap();
        for _ in 0..20 {
            sampler.sweep();
            sampler.audit().unwrap();
        }
        assert_eq!(sampler.sweeps_done(), 20);
    }

    #[test]
    fn training_is_deterministic() {
        let (docs, vocab) = synthetic::planted_two_topic_corpus(40, 10, 3);
        let a = train_lda(&docs, &vocab, 3, params(4)).unwrap();
        let b = train_lda(&docs, &vocab, 3, params(4)).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.fingerprint(), b.fingerprint());
        let c = train_lda(&docs, &vocab, 3, params(5)).unwrap();
        assert_ne!(a.fingerprint(), c.fingerprint());
    }

    #[test]
    fn labeled_topics_follow_labels() {
        let mut docs = Vec::new();
        for i in 0..10 {
            docs.push(doc(&alloc::format!("x{i}"), &["a", "a", "c"], &["X"]));
            docs.push(doc(&alloc::format!("y{i}"), &["b", "b", "c"], &["Y"]));
        }
        let categories = ["X".to_string(), "Y".to_string()];
        let model = train_labeled_lda(&docs, &vocab(&["a", "b", "c"]), &categories, params(2)).unwrap();
        assert_eq!(top_words(&model, 0, 1).unwrap()[0].0, "a");
        assert_eq!(top_words(&model, 1, 1).unwrap()[0].0, "b");
        assert_eq!(model.category_of(), Some(&categories[..]));
        row_sums_ok(&model);
    }

    #[test]
    fn labeled_single_category_is_smoothed_frequency() {
        let docs = [doc("1", &["a", "b", "a"], &["X"]), doc("2", &["c", "a"], &["X"])];
        let v = vocab(&["a", "b", "c"]);
        let model = train_labeled_lda(&docs, &v, &["X".to_string()], params(3)).unwrap();
        let beta = 0.01;
        let denom = 5.0 + 3.0 * beta;
        let expected = [(3.0 + beta) / denom, (1.0 + beta) / denom, (1.0 + beta) / denom];
        assert_eq!(model.phi_row(0), &expected);
    }

    #[test]
    fn labeled_restriction_holds_every_sweep() {
        let docs = [
            doc("1", &["a", "b", "c", "a"], &["X", "Y"]),
            doc("2", &["c", "c", "b"], &["Z"]),
            doc("3", &["a", "c"], &["Y", "Z"]),
        ];
        let categories: Vec<String> = ["X", "Y", "Z"].iter().map(|s| s.to_string()).collect();
        let mut sampler = GibbsSampler::labeled(&docs, &vocab(&["a", "b", "c"]), &categories, params(1)).unwrap();
        for _ in 0..50 {
            sampler.sweep();
            sampler.audit().unwrap();
            for (d, zd) in sampler.assignments().iter().enumerate() {
                let allowed = sampler.allowed_topics(d).unwrap();
                assert!(zd.iter().all(|k| allowed.contains(k)));
            }
        }
        assert!(sampler.assignments()[0].iter().all(|&k| k == 0 || k == 1));
    }

    #[test]
    fn labeled_errors() {
        let v = vocab(&["a"]);
        let cats = ["X".to_string()];
        let unlabeled = [doc("1", &["a"], &[])];
        assert_eq!(
            train_labeled_lda(&unlabeled, &v, &cats, params(1)).unwrap_err(),
            Error::EmptyLabelSet("1".into())
        );
        let unknown = [doc("1", &["a"], &["Q"])];
        assert!(matches!(
            train_labeled_lda(&unknown, &v, &cats, params(1)),
            Err(Error::UnknownCategory { .. })
        ));
        assert!(train_labeled_lda(&unknown, &v, &[], params(1)).is_err());
    }

    #[test]
    fn training_errors() {
        let v = vocab(&["a"]);
        assert_eq!(train_lda(&[], &v, 2, params(1)).unwrap_err(), Error::NoDocuments);
        let oov = [doc("1", &["zzz"], &[])];
        assert_eq!(
            train_lda(&oov, &v, 2, params(1)).unwrap_err(),
            Error::DocumentOutOfVocabulary("1".into())
        );
        let ok = [doc("1", &["a"], &[])];
        assert!(train_lda(&ok, &v, 0, params(1)).is_err());
        let mut bad = params(1);
        bad.sweeps = 0;
        assert!(train_lda(&ok, &v, 1, bad).is_err());
        bad = params(1);
        bad.alpha = 0.0;
        assert!(train_lda(&ok, &v, 1, bad).is_err());
    }

    #[test]
    fn inference_single_topic() {
        let docs = [doc("d", &["a", "b"], &[])];
        let model = train_lda(&docs, &vocab(&["a", "b"]), 1, params(1)).unwrap();
        let theta = infer_theta(&model, &["b".into(), "q".into()], 10, 3).unwrap();
        assert_eq!(theta.as_slice(), &[1.0]);
        assert_eq!(infer_theta(&model, &["q".into()], 10, 3), Err(Error::NoInVocabularyLemma));
    }

    #[test]
    fn inference_on_planted_model() {
        let model = synthetic::planted_two_topic_model();
        let mut rng = SamplerRng::seed_from_u64(42);
        let lemmas: Vec<String> = (0..50).map(|_| if rng.below(2) == 0 { "a" } else { "b" }.into()).collect();
        let theta = infer_theta(&model, &lemmas, 50, 8).unwrap();
        assert!(theta.as_slice()[0] >= 0.9, "{:?}", theta);
        let again = infer_theta(&model, &lemmas, 50, 8).unwrap();
        assert_eq!(
            theta.as_slice().iter().map(|t| t.to_bits()).collect::<Vec<_>>(),
            again.as_slice().iter().map(|t| t.to_bits()).collect::<Vec<_>>()
        );
    }

    #[test]
    fn top_words_order_and_ties() {
        let v = vocab(&["a", "b", "c"]);
        let m = TopicModel::from_parts("en", 0.1, 0.01, vec![vec![0.5, 0.3, 0.2]], v.clone(), None, 0).unwrap();
        assert_eq!(top_words(&m, 0, 2).unwrap(), vec![("a".into(), 0.5), ("b".into(), 0.3)]);
        let m = TopicModel::from_parts("en", 0.1, 0.01, vec![vec![0.25, 0.25, 0.5]], v.clone(), None, 0).unwrap();
        let m2 = TopicModel::from_parts("en", 0.1, 0.01, vec![vec![0.5, 0.25, 0.25]], v, None, 0).unwrap();
        assert_eq!(top_words(&m2, 0, 2).unwrap(), vec![("a".into(), 0.5), ("b".into(), 0.25)]);
        assert_eq!(top_words(&m, 0, 2).unwrap(), vec![("c".into(), 0.5), ("a".into(), 0.25)]);
        assert_eq!(
            top_words(&m, 1, 1).unwrap_err(),
            Error::TopicOutOfRange { topic: 1, topics: 1 }
        );
        assert!(top_words(&m, 0, 0).is_err());
        assert!(top_words(&m, 0, 4).is_err());
    }

    #[test]
    fn model_parts_are_validated() {
        let v = vocab(&["a", "b"]);
        assert!(TopicModel::from_parts("en", 0.1, 0.01, vec![], v.clone(), None, 0).is_err());
        assert!(TopicModel::from_parts("en", 0.1, 0.01, vec![vec![0.6, 0.6]], v.clone(), None, 0).is_err());
        assert!(TopicModel::from_parts("en", 0.1, 0.01, vec![vec![1.0, 0.0]], v.clone(), None, 0).is_err());
        assert!(TopicModel::from_parts("en", 0.1, 0.01, vec![vec![1.0]], v.clone(), None, 0).is_err());
        let cats = Some(vec!["X".to_string(), "X".to_string()]);
        let rows = vec![vec![0.5, 0.5], vec![0.5, 0.5]];
        assert!(TopicModel::from_parts("en", 0.1, 0.01, rows, v, cats, 0).is_err());
    }
}
