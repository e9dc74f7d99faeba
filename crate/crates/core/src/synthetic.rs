//! Seeded synthetic data with known structure, for tests and the bundled
//! fixture corpus.

use alloc::collections::BTreeSet;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::corpus::{Document, Vocabulary};
use crate::hashing::HashExpression;
use crate::lexicon::{SynsetId, SynsetLexicon};
use crate::rng::SamplerRng;
use crate::topicmodel::TopicModel;

/// Two planted topics over `{a, b}` and `{c, d}`. Document `i` is drawn
/// purely from topic `i % 2`.
pub fn planted_two_topic_corpus(docs: usize, len: usize, seed: u64) -> (Vec<Document>, Vocabulary) {
    let mut rng = SamplerRng::seed_from_u64(seed);
    let pairs = [["a", "b"], ["c", "d"]];
    let out = (0..docs)
        .map(|i| {
            let pair = pairs[i % 2];
            let lemmas = (0..len).map(|_| pair[rng.below(2)].to_string()).collect();
            Document {
                id: alloc::format!("p{i:04}"),
                lang: "en".into(),
                lemmas,
                codes: BTreeSet::new(),
            }
        })
        .collect();
    let vocab = Vocabulary::from_terms(["a", "b", "c", "d"].iter().map(|s| s.to_string()).collect())
        .expect("static vocabulary");
    (out, vocab)
}

/// The generating model of [`planted_two_topic_corpus`], lightly smoothed.
pub fn planted_two_topic_model() -> TopicModel {
    let vocab = Vocabulary::from_terms(["a", "b", "c", "d"].iter().map(|s| s.to_string()).collect())
        .expect("static vocabulary");
    TopicModel::from_parts(
        "en",
        0.1,
        0.01,
        vec![vec![0.49, 0.49, 0.01, 0.01], vec![0.01, 0.01, 0.49, 0.49]],
        vocab,
        None,
        0,
    )
    .expect("static model")
}

/// Smallest planted-pair mass over the two rows of a two-topic model over
/// `a, b, c, d`, under the better of the two topic alignments.
pub fn planted_recovery_mass(model: &TopicModel) -> f64 {
    let pair_mass = |topic: usize, pair: [&str; 2]| -> f64 {
        pair.iter()
            .filter_map(|w| model.vocab().id(w))
            .map(|w| model.phi_row(topic)[w])
            .sum()
    };
    let ab = ["a", "b"];
    let cd = ["c", "d"];
    let straight = pair_mass(0, ab).min(pair_mass(1, cd));
    let swapped = pair_mass(0, cd).min(pair_mass(1, ab));
    straight.max(swapped)
}

/// `n` random hashes with `levels` levels; each level holds up to
/// `max_per_level` labels drawn from `l0 .. l{universe-1}`.
pub fn random_hashes(n: usize, levels: usize, universe: usize, max_per_level: usize, seed: u64) -> Vec<HashExpression> {
    let mut rng = SamplerRng::seed_from_u64(seed);
    (0..n)
        .map(|i| {
            let levels = (0..levels)
                .map(|_| {
                    let size = rng.below(max_per_level + 1);
                    (0..size).map(|_| alloc::format!("l{}", rng.below(universe))).collect()
                })
                .collect();
            HashExpression::new(alloc::format!("h{seed}-{i:05}"), levels)
        })
        .collect()
}

/// Shape of a [`ThemedCorpus`].
#[derive(Debug, Clone, PartialEq)]
pub struct ThemedSpec {
    pub languages: Vec<String>,
    pub themes: usize,
    pub docs_per_theme: usize,
    /// Shared pseudo-synsets, split evenly across themes.
    pub synsets: usize,
    /// Surface words per synset in each language.
    pub words_per_synset: usize,
    pub doc_len: usize,
    /// Probability that a token comes from the document's theme.
    pub purity: f64,
    pub seed: u64,
}

impl Default for ThemedSpec {
    fn default() -> Self {
        ThemedSpec {
            languages: vec!["en".into(), "es".into()],
            themes: 5,
            docs_per_theme: 40,
            synsets: 50,
            words_per_synset: 2,
            doc_len: 60,
            purity: 0.85,
            seed: 1,
        }
    }
}

/// Per-language corpora with disjoint vocabularies tied together only by a
/// lexicon onto shared pseudo-synsets. Each document carries its theme
/// (`t0`, `t1`, …) as its single code.
#[derive(Debug, Clone)]
pub struct ThemedCorpus {
    pub docs: Vec<(String, Vec<Document>)>,
    /// `(lang, synset, lemma)` rows.
    pub lexicon_rows: Vec<(String, SynsetId, String)>,
    /// `(concept, parent)` rows: a single root `themes` over every theme code.
    pub taxonomy: Vec<(String, Option<String>)>,
}

fn letters(mut n: usize) -> String {
    let mut out = Vec::new();
    loop {
        out.push(b'a' + (n % 26) as u8);
        n /= 26;
        if n == 0 {
            break;
        }
    }
    out.reverse();
    String::from_utf8(out).unwrap_or_default()
}

/// Surface word for `synset` in `lang`; alphabetic so it survives `normalize`.
pub fn themed_word(lang: &str, synset: usize, variant: usize) -> String {
    alloc::format!("{lang}q{}{}", letters(synset), letters(variant))
}

pub fn themed_synset(synset: usize) -> SynsetId {
    SynsetId::parse(&alloc::format!("{:08}-n", 10_000 + synset)).expect("well-formed synset id")
}

pub fn themed_corpus(spec: &ThemedSpec) -> ThemedCorpus {
    let per_theme = (spec.synsets / spec.themes.max(1)).max(1);
    let mut docs = Vec::new();
    let mut lexicon_rows = Vec::new();
    for (li, lang) in spec.languages.iter().enumerate() {
        for s in 0..spec.synsets {
            for v in 0..spec.words_per_synset {
                lexicon_rows.push((lang.clone(), themed_synset(s), themed_word(lang, s, v)));
            }
        }
        let mut rng = SamplerRng::seed_from_u64(crate::rng::derive_seed(spec.seed, lang));
        let mut lang_docs = Vec::new();
        for t in 0..spec.themes {
            for i in 0..spec.docs_per_theme {
                let lemmas = (0..spec.doc_len)
                    .map(|_| {
                        let synset = if rng.next_f64() < spec.purity {
                            (t * per_theme + rng.below(per_theme)) % spec.synsets
                        } else {
                            rng.below(spec.synsets)
                        };
                        themed_word(lang, synset, rng.below(spec.words_per_synset))
                    })
                    .collect();
                lang_docs.push(Document {
                    id: alloc::format!("{lang}-t{t}-{i:03}"),
                    lang: lang.clone(),
                    lemmas,
                    codes: core::iter::once(alloc::format!("t{t}")).collect(),
                });
            }
        }
        // interleave themes so corpus order carries no signal
        let mut order: Vec<usize> = (0..lang_docs.len()).collect();
        let mut shuffle = SamplerRng::seed_from_u64(crate::rng::derive_seed(spec.seed, &alloc::format!("order/{li}")));
        for i in (1..order.len()).rev() {
            order.swap(i, shuffle.below(i + 1));
        }
        docs.push((lang.clone(), order.into_iter().map(|i| lang_docs[i].clone()).collect()));
    }
    let mut taxonomy = vec![("themes".to_string(), None)];
    taxonomy.extend((0..spec.themes).map(|t| (alloc::format!("t{t}"), Some("themes".to_string()))));
    ThemedCorpus {
        docs,
        lexicon_rows,
        taxonomy,
    }
}

impl ThemedCorpus {
    pub fn lexicon(&self) -> SynsetLexicon {
        let mut lex = SynsetLexicon::new();
        for (lang, synset, lemma) in &self.lexicon_rows {
            lex.insert(lang, lemma, synset.clone());
        }
        lex
    }

    pub fn all_docs(&self) -> Vec<Document> {
        self.docs.iter().flat_map(|(_, d)| d.iter().cloned()).collect()
    }
}
