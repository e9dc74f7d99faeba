//! Documents, text normalization and vocabulary construction.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// A lemmatized document with its (possibly empty) set of thesaurus codes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Document {
    pub id: String,
    pub lang: String,
    pub lemmas: Vec<String>,
    pub codes: BTreeSet<String>,
}

impl Document {
    pub fn new(
        id: impl Into<String>,
        lang: impl Into<String>,
        lemmas: Vec<String>,
        codes: BTreeSet<String>,
    ) -> Result<Self> {
        let doc = Document {
            id: id.into(),
            lang: lang.into(),
            lemmas,
            codes,
        };
        doc.validate()?;
        Ok(doc)
    }

    pub fn validate(&self) -> Result<()> {
        if self.id.is_empty() {
            return Err(Error::EmptyDocumentId);
        }
        validate_language(&self.lang)?;
        if let Some(bad) = self
            .lemmas
            .iter()
            .find(|l| l.is_empty() || l.chars().any(char::is_whitespace))
        {
            return Err(Error::InvalidLemma {
                doc: self.id.clone(),
                lemma: bad.clone(),
            });
        }
        Ok(())
    }
}

/// Language codes are ISO-639-1 style: two lowercase ASCII letters.
pub fn validate_language(lang: &str) -> Result<()> {
    if lang.len() == 2 && lang.bytes().all(|b| b.is_ascii_lowercase()) {
        Ok(())
    } else {
        Err(Error::InvalidLanguage(lang.to_string()))
    }
}

/// Returns the position of the first document whose id repeats an earlier one.
pub fn find_duplicate_id(docs: &[Document]) -> Option<usize> {
    let mut seen = BTreeSet::new();
    docs.iter().position(|d| !seen.insert(d.id.as_str()))
}

/// Rule-based fallback for text that did not come pre-lemmatized.
///
/// Lowercases, turns every non-alphabetic character into a separator, splits
/// on whitespace, then drops stopwords and tokens shorter than `min_len`
/// characters.
pub fn normalize(raw_text: &str, stopwords: &BTreeSet<String>, min_len: usize) -> Vec<String> {
    let min_len = min_len.max(1);
    let cleaned: String = raw_text
        .to_lowercase()
        .chars()
        .map(|c| if c.is_alphabetic() { c } else { ' ' })
        .collect();
    cleaned
        .split_whitespace()
        .filter(|t| t.chars().count() >= min_len && !stopwords.contains(*t))
        .map(ToString::to_string)
        .collect()
}

/// Parses a stopword list: one lemma per line, `#` starts a comment.
pub fn parse_stopwords(text: &str) -> BTreeSet<String> {
    text.lines()
        .map(|line| line.split('#').next().unwrap_or("").trim())
        .filter(|w| !w.is_empty())
        .map(|w| w.to_lowercase())
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vocabulary {
    terms: Vec<String>,
    index: BTreeMap<String, usize>,
}

impl Vocabulary {
    /// Builds a vocabulary from terms in id order. Duplicates are rejected.
    pub fn from_terms(terms: Vec<String>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::EmptyVocabulary);
        }
        let mut index = BTreeMap::new();
        for (i, term) in terms.iter().enumerate() {
            if term.is_empty() || term.chars().any(char::is_whitespace) {
                return Err(Error::InvalidParameter(alloc::format!(
                    "vocabulary term {term:?} is not a lemma"
                )));
            }
            if index.insert(term.clone(), i).is_some() {
                return Err(Error::InvalidParameter(alloc::format!(
                    "vocabulary term `{term}` appears twice"
                )));
            }
        }
        Ok(Vocabulary { terms, index })
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn id(&self, term: &str) -> Option<usize> {
        self.index.get(term).copied()
    }

    pub fn term(&self, id: usize) -> Option<&str> {
        self.terms.get(id).map(String::as_str)
    }

    pub fn terms(&self) -> &[String] {
        &self.terms
    }

    /// Maps lemmas to term ids, dropping out-of-vocabulary ones.
    pub fn encode<'a, I>(&self, lemmas: I) -> Vec<usize>
    where
        I: IntoIterator<Item = &'a String>,
    {
        lemmas.into_iter().filter_map(|l| self.id(l)).collect()
    }
}

/// Keeps lemmas with `df >= min_df` and `df / |docs| <= max_df_ratio`,
/// ordered lexicographically.
pub fn build_vocabulary(docs: &[Document], min_df: usize, max_df_ratio: f64) -> Result<Vocabulary> {
    if docs.is_empty() {
        return Err(Error::NoDocuments);
    }
    if !(max_df_ratio > 0.0 && max_df_ratio <= 1.0) {
        return Err(Error::InvalidParameter(alloc::format!(
            "max_df_ratio must be in (0, 1], got {max_df_ratio}"
        )));
    }
    let mut df: BTreeMap<&str, usize> = BTreeMap::new();
    for doc in docs {
        let unique: BTreeSet<&str> = doc.lemmas.iter().map(String::as_str).collect();
        for lemma in unique {
            *df.entry(lemma).or_default() += 1;
        }
    }
    let n = docs.len() as f64;
    let terms: Vec<String> = df
        .into_iter()
        .filter(|&(_, count)| count >= min_df && count as f64 / n <= max_df_ratio)
        .map(|(term, _)| term.to_string())
        .collect();
    Vocabulary::from_terms(terms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use proptest::prelude::*;

    fn doc(id: &str, lemmas: &[&str]) -> Document {
        Document::new(
            id,
            "en",
            lemmas.iter().map(|s| s.to_string()).collect(),
            BTreeSet::new(),
        )
        .unwrap()
    }

    fn set(words: &[&str]) -> BTreeSet<String> {
        words.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn normalize_examples() {
        assert_eq!(normalize("The tax, the LAW.", &set(&["the"]), 2), vec!["tax", "law"]);
        assert!(normalize("", &set(&[]), 1).is_empty());
        assert!(normalize("a b c", &set(&[]), 2).is_empty());
        assert_eq!(normalize("Règlement (CE) n° 1234/2007", &set(&[]), 2), vec!["règlement", "ce"]);
    }

    #[test]
    fn stopword_file_comments() {
        let words = parse_stopwords("# english\nthe\n  and # conjunction\n\nOF\n");
        assert_eq!(words, set(&["the", "and", "of"]));
    }

    #[test]
    fn document_invariants() {
        assert_eq!(
            Document::new("", "en", vec![], BTreeSet::new()),
            Err(Error::EmptyDocumentId)
        );
        assert!(matches!(
            Document::new("d", "en", vec!["two words".into()], BTreeSet::new()),
            Err(Error::InvalidLemma { .. })
        ));
        assert!(matches!(
            Document::new("d", "en", vec!["".into()], BTreeSet::new()),
            Err(Error::InvalidLemma { .. })
        ));
        assert!(matches!(
            Document::new("d", "eng", vec![], BTreeSet::new()),
            Err(Error::InvalidLanguage(_))
        ));
        let docs = [doc("d1", &[]), doc("d2", &[]), doc("d1", &[])];
        assert_eq!(find_duplicate_id(&docs), Some(2));
    }

    #[test]
    fn vocabulary_thresholds() {
        let docs = [doc("1", &["tax"]), doc("2", &["tax", "law"]), doc("3", &["tax"])];
        let v = build_vocabulary(&docs, 1, 0.5).unwrap();
        assert_eq!(v.id("tax"), None);
        assert_eq!(v.terms(), &["law"]);

        let docs = [doc("1", &["law", "x"]), doc("2", &["x"]), doc("3", &["y", "x"])];
        let v = build_vocabulary(&docs, 2, 1.0).unwrap();
        assert_eq!(v.terms(), &["x"]);
    }

    #[test]
    fn vocabulary_fixture_df_counts() {
        // df(a)=2, df(b)=4, df(c)=1
        let docs = [
            doc("1", &["a", "b", "a"]),
            doc("2", &["a", "b"]),
            doc("3", &["b", "c"]),
            doc("4", &["b"]),
        ];
        let v = build_vocabulary(&docs, 2, 0.75).unwrap();
        assert_eq!(v.terms(), &["a"]);
        assert_eq!(v.id("a"), Some(0));
    }

    #[test]
    fn vocabulary_errors() {
        assert_eq!(build_vocabulary(&[], 1, 1.0), Err(Error::NoDocuments));
        let docs = [doc("1", &["a"])];
        assert_eq!(build_vocabulary(&docs, 2, 1.0), Err(Error::EmptyVocabulary));
        assert!(build_vocabulary(&docs, 1, 0.0).is_err());
        assert!(Vocabulary::from_terms(vec!["a".into(), "a".into()]).is_err());
    }

    proptest! {
        #[test]
        fn normalize_is_idempotent(text in "\\PC{0,60}", min_len in 1usize..4) {
            let stop = set(&["the", "de", "la"]);
            let once = normalize(&text, &stop, min_len);
            let twice = normalize(&once.join(" "), &stop, min_len);
            prop_assert_eq!(once, twice);
        }

        #[test]
        fn vocabulary_is_order_independent_and_respects_min_df(
            raw in proptest::collection::vec(proptest::collection::vec(0u8..8, 0..6), 1..12),
            min_df in 1usize..4,
            ratio_pct in 10u32..=100,
        ) {
            let ratio = f64::from(ratio_pct) / 100.0;
            let docs: Vec<Document> = raw
                .iter()
                .enumerate()
                .map(|(i, ws)| {
                    let lemmas = ws.iter().map(|w| alloc::format!("w{w}")).collect();
                    Document::new(alloc::format!("d{i}"), "en", lemmas, BTreeSet::new()).unwrap()
                })
                .collect();
            let mut reversed = docs.clone();
            reversed.reverse();
            let forward = build_vocabulary(&docs, min_df, ratio);
            let backward = build_vocabulary(&reversed, min_df, ratio);
            prop_assert_eq!(&forward, &backward);
            if let Ok(vocab) = forward {
                for term in vocab.terms() {
                    let df = docs.iter().filter(|d| d.lemmas.contains(term)).count();
                    prop_assert!(df >= min_df);
                    prop_assert!(df as f64 / docs.len() as f64 <= ratio);
                }
                for (i, term) in vocab.terms().iter().enumerate() {
                    prop_assert_eq!(vocab.id(term), Some(i));
                }
            }
        }
    }
}
