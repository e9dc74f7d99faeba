//! Open Multilingual WordNet lookups: `(lemma, language) → synsets`.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use core::fmt;

use crate::error::{Error, Result};

/// A language-independent synset key of the form `offset-pos`, e.g. `06254669-n`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SynsetId(String);

impl SynsetId {
    pub fn parse(value: &str) -> Result<Self> {
        let valid = match value.split_once('-') {
            Some((offset, pos)) => {
                !offset.is_empty()
                    && offset.bytes().all(|b| b.is_ascii_digit())
                    && matches!(pos, "n" | "v" | "a" | "r" | "s")
            }
            None => false,
        };
        if valid {
            Ok(SynsetId(value.to_string()))
        } else {
            Err(Error::InvalidSynsetId(value.to_string()))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for SynsetId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

static EMPTY: BTreeSet<SynsetId> = BTreeSet::new();

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SynsetLexicon {
    entries: BTreeMap<(String, String), BTreeSet<SynsetId>>,
    langs: BTreeSet<String>,
}

/// Lowercases and turns OMW multiword underscores into spaces.
pub fn normalize_lemma(lemma: &str) -> String {
    lemma.trim().replace('_', " ").to_lowercase()
}

impl SynsetLexicon {
    pub fn new() -> Self {
        Self::default()
    }

    /// Marks `lang` as loaded even if it has no entries yet.
    pub fn declare_language(&mut self, lang: &str) {
        self.langs.insert(lang.to_string());
    }

    pub fn insert(&mut self, lang: &str, lemma: &str, synset: SynsetId) {
        self.langs.insert(lang.to_string());
        self.entries
            .entry((lang.to_string(), normalize_lemma(lemma)))
            .or_default()
            .insert(synset);
    }

    /// Ingests one OMW tab file for `lang` and returns the number of lemma
    /// rows read.
    ///
    /// Rows are `synset TAB lang:lemma TAB lemma`; `#` lines and blank lines
    /// are skipped. Rows whose relation is not `*:lemma` (definitions,
    /// examples) carry other payloads and are ignored.
    pub fn add_omw_tab(&mut self, lang: &str, text: &str) -> Result<usize> {
        let mut rows = 0;
        for (i, line) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = line.strip_suffix('\r').unwrap_or(line);
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let cols: alloc::vec::Vec<&str> = line.split('\t').collect();
            let parse_err = |message: String| Error::Parse { line: line_no, message };
            if cols.len() < 2 {
                return Err(parse_err(alloc::format!("expected 3 tab-separated columns, found {}", cols.len())));
            }
            let synset = SynsetId::parse(cols[0]).map_err(|e| parse_err(e.to_string()))?;
            if !cols[1].contains(':') {
                return Err(parse_err(alloc::format!("relation key `{}` is not `lang:relation`", cols[1])));
            }
            if !cols[1].ends_with(":lemma") {
                continue;
            }
            if cols.len() != 3 {
                return Err(parse_err(alloc::format!("expected 3 tab-separated columns, found {}", cols.len())));
            }
            let lemma = normalize_lemma(cols[2]);
            if lemma.is_empty() {
                return Err(parse_err("empty lemma".to_string()));
            }
            self.insert(lang, &lemma, synset);
            rows += 1;
        }
        if rows == 0 {
            return Err(Error::NoValidRows);
        }
        Ok(rows)
    }

    /// Synsets of `lemma` in `lang`; the empty set when the lemma is unknown.
    pub fn synsets_of(&self, lemma: &str, lang: &str) -> Result<&BTreeSet<SynsetId>> {
        if !self.langs.contains(lang) {
            return Err(Error::UnloadedLanguage(lang.to_string()));
        }
        Ok(self
            .entries
            .get(&(lang.to_string(), normalize_lemma(lemma)))
            .unwrap_or(&EMPTY))
    }

    pub fn langs(&self) -> &BTreeSet<String> {
        &self.langs
    }

    /// Number of distinct `(lang, lemma)` keys.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &str, &BTreeSet<SynsetId>)> {
        self.entries
            .iter()
            .map(|((lang, lemma), ids)| (lang.as_str(), lemma.as_str(), ids))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec::Vec;
    use proptest::prelude::*;

    const FIXTURE: &str = "# omw xx fixture\n\
        00000001-n\txx:lemma\tnetwork\n\
        00000002-n\txx:lemma\tnetwork\n\
        00000003-v\txx:lemma\tTo_Tax\n\
        00000003-v\txx:def\t0\tto levy a tax\n";

    fn ids(values: &[&str]) -> BTreeSet<SynsetId> {
        values.iter().map(|v| SynsetId::parse(v).unwrap()).collect()
    }

    #[test]
    fn synset_id_pattern() {
        assert!(SynsetId::parse("06254669-n").is_ok());
        assert!(SynsetId::parse("1-s").is_ok());
        for bad in ["badid", "-n", "0625x669-n", "06254669-x", "06254669n", "06254669-nn"] {
            assert!(SynsetId::parse(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn load_and_lookup() {
        let mut lex = SynsetLexicon::new();
        assert_eq!(lex.add_omw_tab("xx", FIXTURE).unwrap(), 3);
        let both = ids(&["00000001-n", "00000002-n"]);
        assert_eq!(lex.synsets_of("network", "xx").unwrap(), &both);
        assert_eq!(lex.synsets_of("NETWORK", "xx").unwrap(), &both);
        assert!(lex.synsets_of("zzz-unknown", "xx").unwrap().is_empty());
        assert_eq!(lex.synsets_of("to tax", "xx").unwrap(), &ids(&["00000003-v"]));
        assert_eq!(lex.synsets_of("network", "yy"), Err(Error::UnloadedLanguage("yy".into())));
        assert_eq!(lex.len(), 2);
    }

    #[test]
    fn malformed_rows() {
        let mut lex = SynsetLexicon::new();
        let err = lex.add_omw_tab("xx", "# header\nbadid\txx:lemma\tnetwork\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err:?}");
        let err = lex.add_omw_tab("xx", "00000001-n\txx:lemma\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
        let err = lex.add_omw_tab("xx", "00000001-n\txx:lemma\ta\tb\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
        assert_eq!(lex.add_omw_tab("xx", "# only comments\n\n"), Err(Error::NoValidRows));
    }

    proptest! {
        #[test]
        fn lookup_reproduces_rows(rows in proptest::collection::vec((0u32..30, 0u8..6, any::<bool>()), 1..60)) {
            let mut text = alloc::string::String::from("# generated\n");
            for (offset, word, upper) in &rows {
                let lemma = if *upper { alloc::format!("Word{word}") } else { alloc::format!("word{word}") };
                text.push_str(&alloc::format!("{offset:08}-n\txx:lemma\t{lemma}\n"));
            }
            let mut lex = SynsetLexicon::new();
            lex.add_omw_tab("xx", &text).unwrap();
            let mut expected: BTreeMap<String, BTreeSet<SynsetId>> = BTreeMap::new();
            for line in text.lines().skip(1) {
                let cols: Vec<&str> = line.split('\t').collect();
                expected.entry(cols[2].to_lowercase()).or_default().insert(SynsetId::parse(cols[0]).unwrap());
            }
            prop_assert_eq!(lex.len(), expected.len());
            for (lemma, want) in &expected {
                prop_assert_eq!(lex.synsets_of(lemma, "xx").unwrap(), want);
            }
        }
    }
}
