//! On-disk formats.
//!
//! | artifact | format |
//! |---|---|
//! | corpus | JSON lines `{id, lang, lemmas, codes?}` |
//! | stopwords | one lemma per line, `#` comments |
//! | OMW lexicon | `synset TAB lang:lemma TAB lemma`, `#` comments |
//! | taxonomy | `concept TAB parent`, empty parent for roots |
//! | model | JSON `{format_version, lang, K, alpha, beta, seed, rng, vocab, phi, category_of}` |
//! | labels | JSON `{scheme, lang, n, model, labels: {topic: [label]}}` |
//! | hashes | JSON lines `{doc_id, levels}` plus a JSON manifest |
//! | mapping | JSON `{depth, categories, to_category, unmapped, report}` |

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize, Serializer};
use serde_json::value::RawValue;

use synhash_core::corpus::{parse_stopwords, validate_language};
use synhash_core::eurovoc::FlattenReport;
use synhash_core::rng::RNG_ALGORITHM;
use synhash_core::{
    CategoryMapping, Document, HashExpression, Scheme, SynsetLexicon, Taxonomy, TopicLabelSet, TopicModel,
    Vocabulary,
};

use crate::error::{Error, Result};
use crate::fsio::{read_to_string, write_atomic};

pub const MODEL_FORMAT_VERSION: u32 = 1;

/// An `f64` written with 17 significant digits.
#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(transparent)]
pub struct Sig17(pub f64);

impl Serialize for Sig17 {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::Error as _;
        if !self.0.is_finite() {
            return Err(S::Error::custom("non-finite number"));
        }
        let raw = RawValue::from_string(format!("{:.16e}", self.0)).map_err(S::Error::custom)?;
        raw.serialize(serializer)
    }
}

fn to_json<T: Serialize>(value: &T, pretty: bool) -> Vec<u8> {
    let mut out = if pretty {
        serde_json::to_vec_pretty(value)
    } else {
        serde_json::to_vec(value)
    }
    .expect("in-memory serialization");
    out.push(b'\n');
    out
}

fn from_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = read_to_string(path)?;
    serde_json::from_str(&text).map_err(|e| Error::data(path, Some(e.line()), e))
}

// ---- corpus -------------------------------------------------------------

#[derive(Debug, Serialize, Deserialize)]
struct CorpusRecord {
    id: String,
    lang: String,
    lemmas: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    codes: Vec<String>,
}

/// Parses a JSONL corpus whose documents must all be in `lang`.
pub fn parse_corpus(text: &str, lang: &str, path: &Path) -> Result<Vec<Document>> {
    validate_language(lang).map_err(|e| Error::data(path, None, e))?;
    let mut docs = Vec::new();
    let mut seen = BTreeSet::new();
    for (i, line) in text.lines().enumerate() {
        let line_no = Some(i + 1);
        if line.trim().is_empty() {
            continue;
        }
        let record: CorpusRecord = serde_json::from_str(line).map_err(|e| Error::data(path, line_no, e))?;
        if record.lang != lang {
            return Err(Error::data(
                path,
                line_no,
                format!("document `{}` is in `{}`, expected `{lang}`", record.id, record.lang),
            ));
        }
        let doc = Document::new(record.id, record.lang, record.lemmas, record.codes.into_iter().collect())
            .map_err(|e| Error::data(path, line_no, e))?;
        if !seen.insert(doc.id.clone()) {
            return Err(Error::data(path, line_no, format!("duplicate document id `{}`", doc.id)));
        }
        docs.push(doc);
    }
    Ok(docs)
}

pub fn load_corpus(path: &Path, lang: &str) -> Result<Vec<Document>> {
    parse_corpus(&read_to_string(path)?, lang, path)
}

pub fn corpus_to_jsonl(docs: &[Document]) -> Vec<u8> {
    let mut out = Vec::new();
    for doc in docs {
        let record = CorpusRecord {
            id: doc.id.clone(),
            lang: doc.lang.clone(),
            lemmas: doc.lemmas.clone(),
            codes: doc.codes.iter().cloned().collect(),
        };
        out.extend(to_json(&record, false));
    }
    out
}

pub fn load_stopwords(path: &Path) -> Result<BTreeSet<String>> {
    Ok(parse_stopwords(&read_to_string(path)?))
}

// ---- lexicon and taxonomy -----------------------------------------------

fn core_to_data(path: &Path, err: synhash_core::Error) -> Error {
    match err {
        synhash_core::Error::Parse { line, message } => Error::data(path, Some(line), message),
        other => Error::data(path, None, other),
    }
}

/// Loads one OMW tab file per language.
pub fn load_omw(paths: &BTreeMap<String, PathBuf>) -> Result<SynsetLexicon> {
    let mut lexicon = SynsetLexicon::new();
    for (lang, path) in paths {
        let text = read_to_string(path)?;
        let rows = lexicon.add_omw_tab(lang, &text).map_err(|e| core_to_data(path, e))?;
        log::info!("{}: {rows} lemma rows for `{lang}`", path.display());
    }
    Ok(lexicon)
}

pub fn omw_to_tab(lang: &str, rows: &[(String, synhash_core::SynsetId, String)]) -> Vec<u8> {
    let mut out = format!("# Open Multilingual Wordnet style lemma table for `{lang}`\n");
    for (row_lang, synset, lemma) in rows.iter().filter(|r| r.0 == lang) {
        out.push_str(&format!("{synset}\t{row_lang}:lemma\t{lemma}\n"));
    }
    out.into_bytes()
}

pub fn load_taxonomy(path: &Path) -> Result<Taxonomy> {
    Taxonomy::parse_tsv(&read_to_string(path)?).map_err(|e| core_to_data(path, e))
}

pub fn taxonomy_to_tsv(edges: &[(String, Option<String>)]) -> Vec<u8> {
    let mut out = String::new();
    for (concept, parent) in edges {
        out.push_str(&format!("{concept}\t{}\n", parent.as_deref().unwrap_or("")));
    }
    out.into_bytes()
}

// ---- models ---------------------------------------------------------------

#[derive(Debug, Serialize, Deserialize)]
struct ModelFile {
    format_version: u32,
    lang: String,
    #[serde(rename = "K")]
    topics: usize,
    alpha: Sig17,
    beta: Sig17,
    seed: u64,
    rng: String,
    vocab: Vec<String>,
    phi: Vec<Vec<Sig17>>,
    category_of: Option<Vec<String>>,
}

pub fn model_to_json(model: &TopicModel) -> Vec<u8> {
    let file = ModelFile {
        format_version: MODEL_FORMAT_VERSION,
        lang: model.lang().to_string(),
        topics: model.num_topics(),
        alpha: Sig17(model.alpha()),
        beta: Sig17(model.beta()),
        seed: model.seed(),
        rng: RNG_ALGORITHM.to_string(),
        vocab: model.vocab().terms().to_vec(),
        phi: model.phi_rows().map(|row| row.iter().copied().map(Sig17).collect()).collect(),
        category_of: model.category_of().map(<[String]>::to_vec),
    };
    to_json(&file, false)
}

pub fn write_model(path: &Path, model: &TopicModel) -> Result<()> {
    write_atomic(path, &model_to_json(model))
}

pub fn read_model(path: &Path) -> Result<TopicModel> {
    let file: ModelFile = from_json(path)?;
    if file.format_version != MODEL_FORMAT_VERSION {
        return Err(Error::data(path, None, format!("unsupported format_version {}", file.format_version)));
    }
    if file.rng != RNG_ALGORITHM {
        log::warn!("{}: trained with rng `{}`", path.display(), file.rng);
    }
    if file.phi.len() != file.topics {
        return Err(Error::data(path, None, format!("K = {} but phi has {} rows", file.topics, file.phi.len())));
    }
    let vocab = Vocabulary::from_terms(file.vocab).map_err(|e| Error::data(path, None, e))?;
    let phi = file.phi.into_iter().map(|row| row.into_iter().map(|p| p.0).collect()).collect();
    TopicModel::from_parts(file.lang, file.alpha.0, file.beta.0, phi, vocab, file.category_of, file.seed)
        .map_err(|e| Error::data(path, None, e))
}

// ---- labels ---------------------------------------------------------------

#[derive(Debug, Serialize, Deserialize)]
struct LabelFile {
    scheme: String,
    lang: String,
    n: Option<usize>,
    model: String,
    labels: BTreeMap<usize, Vec<String>>,
}

pub fn write_labels(path: &Path, labels: &TopicLabelSet) -> Result<()> {
    let file = LabelFile {
        scheme: labels.scheme.to_string(),
        lang: labels.lang.clone(),
        n: labels.top_n,
        model: labels.model_fingerprint.clone(),
        labels: labels.iter().map(|set| set.iter().cloned().collect()).enumerate().collect(),
    };
    write_atomic(path, &to_json(&file, true))
}

pub fn read_labels(path: &Path) -> Result<TopicLabelSet> {
    let file: LabelFile = from_json(path)?;
    let scheme: Scheme = file.scheme.parse().map_err(|e| Error::data(path, None, e))?;
    let topics = file.labels.len();
    if file.labels.keys().copied().ne(0..topics) {
        return Err(Error::data(path, None, "topic keys must be 0..K"));
    }
    let sets = file.labels.into_values().map(|v| v.into_iter().collect()).collect();
    TopicLabelSet::from_parts(file.lang, file.model, scheme, file.n, sets).map_err(|e| Error::data(path, None, e))
}

// ---- hashes and index manifest -----------------------------------------

#[derive(Debug, Serialize, Deserialize)]
struct HashRecord {
    doc_id: String,
    levels: Vec<Vec<String>>,
}

pub fn hashes_to_jsonl(hashes: &[HashExpression]) -> Vec<u8> {
    let mut out = Vec::new();
    for hash in hashes {
        let record = HashRecord {
            doc_id: hash.doc_id.clone(),
            levels: hash.levels.iter().map(|l| l.iter().cloned().collect()).collect(),
        };
        out.extend(to_json(&record, false));
    }
    out
}

pub fn parse_hashes(text: &str, path: &Path) -> Result<Vec<HashExpression>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let record: HashRecord = serde_json::from_str(line).map_err(|e| Error::data(path, Some(i + 1), e))?;
        if record.doc_id.is_empty() {
            return Err(Error::data(path, Some(i + 1), "empty doc_id"));
        }
        let levels = record.levels.into_iter().map(|l| l.into_iter().collect()).collect();
        out.push(HashExpression::new(record.doc_id, levels));
    }
    Ok(out)
}

pub fn read_hashes(path: &Path) -> Result<Vec<HashExpression>> {
    parse_hashes(&read_to_string(path)?, path)
}

/// Sidecar of a hash file: everything needed to rebuild the index.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexManifest {
    #[serde(rename = "L")]
    pub levels: usize,
    pub scheme: String,
    /// Language → fingerprint of the model that produced its hashes.
    pub models: BTreeMap<String, String>,
    pub hashes: String,
    pub documents: usize,
    /// Documents left out because no lemma was in the model vocabulary.
    pub skipped: Vec<String>,
}

pub fn write_manifest(path: &Path, manifest: &IndexManifest) -> Result<()> {
    write_atomic(path, &to_json(manifest, true))
}

pub fn read_manifest(path: &Path) -> Result<IndexManifest> {
    from_json(path)
}

// ---- category mapping -------------------------------------------------------

#[derive(Debug, Serialize, Deserialize)]
struct MappingReport {
    promoted: Vec<String>,
    conflicts: BTreeMap<String, Vec<String>>,
    unmappable: Vec<String>,
    unknown: Vec<String>,
}

#[derive(Debug, Serialize, Deserialize)]
struct MappingFile {
    depth: usize,
    categories: Vec<String>,
    to_category: BTreeMap<String, String>,
    unmapped: Vec<String>,
    report: Option<MappingReport>,
}

pub fn write_mapping(path: &Path, mapping: &CategoryMapping, report: Option<&FlattenReport>) -> Result<()> {
    let file = MappingFile {
        depth: mapping.depth,
        categories: mapping.categories.iter().cloned().collect(),
        to_category: mapping.to_category.clone(),
        unmapped: mapping.unmapped.iter().cloned().collect(),
        report: report.map(|r| MappingReport {
            promoted: r.promoted.iter().cloned().collect(),
            conflicts: r
                .conflicts
                .iter()
                .map(|(k, v)| (k.clone(), v.iter().cloned().collect()))
                .collect(),
            unmappable: r.unmappable.iter().cloned().collect(),
            unknown: r.unknown.iter().cloned().collect(),
        }),
    };
    write_atomic(path, &to_json(&file, true))
}

pub fn read_mapping(path: &Path) -> Result<CategoryMapping> {
    let file: MappingFile = from_json(path)?;
    let categories: BTreeSet<String> = file.categories.into_iter().collect();
    if let Some((c, cat)) = file.to_category.iter().find(|(_, cat)| !categories.contains(*cat)) {
        return Err(Error::data(path, None, format!("`{c}` maps to unknown category `{cat}`")));
    }
    Ok(CategoryMapping {
        depth: file.depth,
        categories,
        to_category: file.to_category,
        unmapped: file.unmapped.into_iter().collect(),
    })
}
