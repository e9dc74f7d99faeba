//! Cross-lingual topic labels.

use alloc::collections::BTreeSet;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::error::{Error, Result};
use crate::lexicon::SynsetLexicon;
use crate::topicmodel::{top_words, TopicModel};

/// Default number of top words whose synsets label a topic.
pub const DEFAULT_TOP_N: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Scheme {
    /// Union of WordNet synsets of each topic's top words.
    Synset,
    /// The category a labeled model binds to each topic.
    Category,
}

impl Scheme {
    pub fn as_str(self) -> &'static str {
        match self {
            Scheme::Synset => "synset",
            Scheme::Category => "category",
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "synset" => Ok(Scheme::Synset),
            "category" => Ok(Scheme::Category),
            other => Err(Error::InvalidParameter(alloc::format!(
                "scheme must be `synset` or `category`, got `{other}`"
            ))),
        }
    }
}

/// One label set per topic of a model.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TopicLabelSet {
    pub lang: String,
    /// [`TopicModel::fingerprint`] of the annotated model.
    pub model_fingerprint: String,
    pub scheme: Scheme,
    /// Top-word count for synset labels; `None` for category labels.
    pub top_n: Option<usize>,
    labels: Vec<BTreeSet<String>>,
}

impl TopicLabelSet {
    pub fn from_parts(
        lang: impl Into<String>,
        model_fingerprint: impl Into<String>,
        scheme: Scheme,
        top_n: Option<usize>,
        labels: Vec<BTreeSet<String>>,
    ) -> Result<Self> {
        if labels.is_empty() {
            return Err(Error::InvalidParameter("label set covers no topic".into()));
        }
        for (k, set) in labels.iter().enumerate() {
            match scheme {
                Scheme::Category if set.len() != 1 => {
                    return Err(Error::InvalidParameter(alloc::format!(
                        "category label of topic {k} is not a singleton"
                    )))
                }
                Scheme::Synset => {
                    for label in set {
                        crate::lexicon::SynsetId::parse(label)?;
                    }
                }
                _ => {}
            }
        }
        Ok(TopicLabelSet {
            lang: lang.into(),
            model_fingerprint: model_fingerprint.into(),
            scheme,
            top_n,
            labels,
        })
    }

    pub fn num_topics(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self, topic: usize) -> &BTreeSet<String> {
        &self.labels[topic]
    }

    pub fn iter(&self) -> impl Iterator<Item = &BTreeSet<String>> {
        self.labels.iter()
    }
}

/// Labels each topic with the union of the synsets of its `n` top words.
/// Words missing from the lexicon contribute nothing; a topic whose words
/// all miss gets an empty set and a warning.
pub fn annotate_topics_synset(model: &TopicModel, lexicon: &SynsetLexicon, n: usize) -> Result<TopicLabelSet> {
    if !lexicon.langs().contains(model.lang()) {
        return Err(Error::UnloadedLanguage(model.lang().to_string()));
    }
    let mut labels = Vec::with_capacity(model.num_topics());
    for topic in 0..model.num_topics() {
        let mut set = BTreeSet::new();
        for (word, _) in top_words(model, topic, n)? {
            for id in lexicon.synsets_of(&word, model.lang())? {
                set.insert(id.as_str().to_string());
            }
        }
        if set.is_empty() {
            log::warn!("{} topic {topic}: no top-{n} word has a synset", model.lang());
        }
        labels.push(set);
    }
    Ok(TopicLabelSet {
        lang: model.lang().to_string(),
        model_fingerprint: model.fingerprint(),
        scheme: Scheme::Synset,
        top_n: Some(n),
        labels,
    })
}

/// Labels topic `k` with `{ category_of(k) }`.
pub fn annotate_topics_category(model: &TopicModel) -> Result<TopicLabelSet> {
    let categories = model.category_of().ok_or(Error::MissingCategoryBinding)?;
    Ok(TopicLabelSet {
        lang: model.lang().to_string(),
        model_fingerprint: model.fingerprint(),
        scheme: Scheme::Category,
        top_n: None,
        labels: categories
            .iter()
            .map(|c| core::iter::once(c.clone()).collect())
            .collect(),
    })
}
