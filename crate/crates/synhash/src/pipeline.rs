//! The pipeline stages behind each CLI command.
//!
//! Every stage reads its inputs from the configuration and the output
//! directory, and writes its artifacts atomically into the output directory:
//!
//! ```text
//! train     model-{scheme}-{lang}.json
//! annotate  labels-{scheme}-{lang}.json
//! flatten   mapping.json
//! index     hashes-{scheme}.jsonl, manifest-{scheme}.json
//! eval      results.tsv, results.json, run-manifest.json
//! ```
//!
//! Randomness comes only from `config.seed`, split per stage with
//! [`derive_seed`]: `train/{scheme}/{lang}`, `infer/{scheme}/{doc_id}`,
//! `eval/{combination}` and `query/{scheme}`.

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;

use synhash_core::eurovoc::{flatten_with_codes, FlattenReport};
use synhash_core::rng::derive_seed;
use synhash_core::{
    annotate_topics_category, annotate_topics_synset, build_hash, build_vocabulary, infer_theta, normalize,
    run_experiment, train_labeled_lda, train_lda, CategoryMapping, Document, EvalConfig, EvalReport,
    HashExpression, InvertedIndex, QueryResult, Scheme, TopicModel,
};

use crate::config::RunConfig;
use crate::error::{Error, Result};
use crate::formats::{self, IndexManifest};
use crate::fsio::{sha256_file, write_atomic};
use crate::report;

pub fn model_path(cfg: &RunConfig, scheme: Scheme, lang: &str) -> PathBuf {
    cfg.out_dir.join(format!("model-{scheme}-{lang}.json"))
}

pub fn labels_path(cfg: &RunConfig, scheme: Scheme, lang: &str) -> PathBuf {
    cfg.out_dir.join(format!("labels-{scheme}-{lang}.json"))
}

pub fn hashes_path(cfg: &RunConfig, scheme: Scheme) -> PathBuf {
    cfg.out_dir.join(format!("hashes-{scheme}.jsonl"))
}

pub fn manifest_path(cfg: &RunConfig, scheme: Scheme) -> PathBuf {
    cfg.out_dir.join(format!("manifest-{scheme}.json"))
}

pub fn mapping_path(cfg: &RunConfig) -> PathBuf {
    cfg.out_dir.join("mapping.json")
}

/// Corpora in configured language order, stopwords removed from the lemmas.
pub fn load_corpora(cfg: &RunConfig) -> Result<Vec<(String, Vec<Document>)>> {
    let mut out = Vec::new();
    let mut owner: BTreeMap<String, String> = BTreeMap::new();
    for lang in &cfg.languages {
        let inputs = cfg.inputs(lang)?;
        let mut docs = formats::load_corpus(&inputs.corpus, lang)?;
        if let Some(path) = &inputs.stopwords {
            let stop = formats::load_stopwords(path)?;
            for doc in &mut docs {
                doc.lemmas.retain(|l| !stop.contains(l));
            }
        }
        for doc in &docs {
            if let Some(other) = owner.insert(doc.id.clone(), lang.clone()) {
                return Err(Error::data(
                    &inputs.corpus,
                    None,
                    format!("document id `{}` also appears in the `{other}` corpus", doc.id),
                ));
            }
        }
        log::info!("{lang}: {} documents", docs.len());
        out.push((lang.clone(), docs));
    }
    Ok(out)
}

fn taxonomy_path(cfg: &RunConfig) -> Result<&Path> {
    cfg.taxonomy
        .as_deref()
        .ok_or_else(|| Error::Config("`taxonomy` is not set".into()))
}

/// Flattens the taxonomy using every code found in the corpora.
pub fn category_mapping(
    cfg: &RunConfig,
    corpora: &[(String, Vec<Document>)],
) -> Result<(CategoryMapping, FlattenReport)> {
    let taxonomy = formats::load_taxonomy(taxonomy_path(cfg)?)?;
    let codes: BTreeSet<String> = corpora
        .iter()
        .flat_map(|(_, docs)| docs.iter().flat_map(|d| d.codes.iter().cloned()))
        .collect();
    let (mapping, report) = flatten_with_codes(&taxonomy, cfg.depth, &codes)?;
    log::info!(
        "depth {}: {} categories, {} unmappable codes, {} unknown codes",
        cfg.depth,
        mapping.categories.len(),
        report.unmappable.len(),
        report.unknown.len()
    );
    Ok((mapping, report))
}

/// Replaces each document's codes by its categories; unknown codes are ignored.
fn with_categories(docs: &[Document], mapping: &CategoryMapping) -> Vec<Document> {
    docs.iter()
        .map(|d| Document {
            codes: d
                .codes
                .iter()
                .filter_map(|c| mapping.category(c).ok().map(str::to_string))
                .collect(),
            ..d.clone()
        })
        .collect()
}

pub fn cmd_flatten(cfg: &RunConfig) -> Result<PathBuf> {
    let corpora = load_corpora(cfg)?;
    let (mapping, report) = category_mapping(cfg, &corpora)?;
    let path = mapping_path(cfg);
    formats::write_mapping(&path, &mapping, Some(&report))?;
    Ok(path)
}

pub fn cmd_train(cfg: &RunConfig) -> Result<Vec<PathBuf>> {
    let corpora = load_corpora(cfg)?;
    let schemes = cfg.schemes()?;
    let mapping = if schemes.contains(&Scheme::Category) {
        Some(category_mapping(cfg, &corpora)?.0)
    } else {
        None
    };
    let mut written = Vec::new();
    for &scheme in &schemes {
        // labeled models of every language share one category ordering
        let categories: Vec<String> = match &mapping {
            Some(m) if scheme == Scheme::Category => corpora
                .iter()
                .flat_map(|(_, docs)| with_categories(docs, m))
                .flat_map(|d| d.codes)
                .collect::<BTreeSet<_>>()
                .into_iter()
                .collect(),
            _ => Vec::new(),
        };
        for (lang, docs) in &corpora {
            let corpus_path = &cfg.inputs(lang)?.corpus;
            let vocab = build_vocabulary(docs, cfg.model.min_df, cfg.model.max_df_ratio)
                .map_err(|e| Error::data(corpus_path, None, e))?;
            let params = cfg.sampler_params(derive_seed(cfg.seed, &format!("train/{scheme}/{lang}")));
            let model = match scheme {
                Scheme::Synset => {
                    let train: Vec<Document> = docs
                        .iter()
                        .filter(|d| d.lemmas.iter().any(|l| vocab.id(l).is_some()))
                        .cloned()
                        .collect();
                    log::info!("{lang}: training LDA on {} documents, V = {}", train.len(), vocab.len());
                    train_lda(&train, &vocab, cfg.model.topics, params)?
                }
                Scheme::Category => {
                    let mapping = mapping.as_ref().expect("mapping computed for category scheme");
                    let train: Vec<Document> = with_categories(docs, mapping)
                        .into_iter()
                        .filter(|d| !d.codes.is_empty() && d.lemmas.iter().any(|l| vocab.id(l).is_some()))
                        .collect();
                    log::info!(
                        "{lang}: training Labeled LDA on {} documents, {} categories",
                        train.len(),
                        categories.len()
                    );
                    train_labeled_lda(&train, &vocab, &categories, params)?
                }
            };
            let path = model_path(cfg, scheme, lang);
            formats::write_model(&path, &model)?;
            written.push(path);
        }
    }
    Ok(written)
}

pub fn cmd_annotate(cfg: &RunConfig) -> Result<Vec<PathBuf>> {
    let mut written = Vec::new();
    for scheme in cfg.schemes()? {
        let lexicon = if scheme == Scheme::Synset {
            let mut paths = BTreeMap::new();
            for lang in &cfg.languages {
                let omw = cfg.inputs(lang)?.omw.clone();
                let omw = omw.ok_or_else(|| Error::Config(format!("synset scheme needs [corpus.{lang}].omw")))?;
                paths.insert(lang.clone(), omw);
            }
            Some(formats::load_omw(&paths)?)
        } else {
            None
        };
        for lang in &cfg.languages {
            let model = formats::read_model(&model_path(cfg, scheme, lang))?;
            let labels = match &lexicon {
                Some(lex) => annotate_topics_synset(&model, lex, cfg.top_n)?,
                None => annotate_topics_category(&model)?,
            };
            let empty = labels.iter().filter(|l| l.is_empty()).count();
            if empty > 0 {
                log::warn!("{lang}: {empty} of {} topics have no label", labels.num_topics());
            }
            let path = labels_path(cfg, scheme, lang);
            formats::write_labels(&path, &labels)?;
            written.push(path);
        }
    }
    Ok(written)
}

fn load_model_and_labels(cfg: &RunConfig, scheme: Scheme, lang: &str) -> Result<(TopicModel, synhash_core::TopicLabelSet)> {
    let model = formats::read_model(&model_path(cfg, scheme, lang))?;
    let path = labels_path(cfg, scheme, lang);
    let labels = formats::read_labels(&path)?;
    if labels.model_fingerprint != model.fingerprint() || labels.scheme != scheme {
        return Err(Error::data(&path, None, "labels were produced for a different model; rerun annotate"));
    }
    Ok((model, labels))
}

fn hash_documents(
    cfg: &RunConfig,
    scheme: Scheme,
    model: &TopicModel,
    labels: &synhash_core::TopicLabelSet,
    docs: &[Document],
) -> Result<Vec<std::result::Result<HashExpression, String>>> {
    docs.par_iter()
        .map(|doc| {
            let seed = derive_seed(cfg.seed, &format!("infer/{scheme}/{}", doc.id));
            match infer_theta(model, &doc.lemmas, cfg.model.infer_sweeps, seed) {
                Ok(theta) => Ok(Ok(build_hash(doc.id.clone(), &theta, labels, cfg.levels)?)),
                Err(synhash_core::Error::NoInVocabularyLemma) => Ok(Err(doc.id.clone())),
                Err(e) => Err(e.into()),
            }
        })
        .collect()
}

pub fn cmd_index(cfg: &RunConfig) -> Result<Vec<PathBuf>> {
    let corpora = load_corpora(cfg)?;
    let mut written = Vec::new();
    for scheme in cfg.schemes()? {
        let mut hashes = Vec::new();
        let mut skipped = Vec::new();
        let mut models = BTreeMap::new();
        for (lang, docs) in &corpora {
            let (model, labels) = load_model_and_labels(cfg, scheme, lang)?;
            for outcome in hash_documents(cfg, scheme, &model, &labels, docs)? {
                match outcome {
                    Ok(hash) => hashes.push(hash),
                    Err(id) => skipped.push(id),
                }
            }
            models.insert(lang.clone(), model.fingerprint());
        }
        if !skipped.is_empty() {
            log::warn!("{scheme}: {} documents without in-vocabulary lemmas", skipped.len());
        }
        let hash_path = hashes_path(cfg, scheme);
        write_atomic(&hash_path, &formats::hashes_to_jsonl(&hashes))?;
        let manifest = IndexManifest {
            levels: cfg.levels,
            scheme: scheme.to_string(),
            models,
            hashes: hash_path.file_name().unwrap_or_default().to_string_lossy().into_owned(),
            documents: hashes.len(),
            skipped,
        };
        let path = manifest_path(cfg, scheme);
        formats::write_manifest(&path, &manifest)?;
        written.push(hash_path);
        written.push(path);
    }
    Ok(written)
}

/// Rebuilds the index of `scheme` from its hash file and manifest.
pub fn load_index(cfg: &RunConfig, scheme: Scheme) -> Result<(IndexManifest, InvertedIndex)> {
    let path = manifest_path(cfg, scheme);
    let manifest = formats::read_manifest(&path)?;
    if manifest.scheme != scheme.as_str() {
        return Err(Error::data(&path, None, format!("manifest is for scheme `{}`", manifest.scheme)));
    }
    let hash_path = cfg.out_dir.join(&manifest.hashes);
    let hashes = formats::read_hashes(&hash_path)?;
    let index = InvertedIndex::from_hashes(manifest.levels, hashes).map_err(|e| Error::data(&hash_path, None, e))?;
    Ok((manifest, index))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum QueryTarget {
    /// An indexed document, looked up by id.
    Doc(String),
    /// Raw text, normalized and folded into the `lang` model.
    Text { lang: String, text: String },
}

pub fn cmd_query(cfg: &RunConfig, scheme: Scheme, target: &QueryTarget, k: usize) -> Result<QueryResult> {
    let (_, index) = load_index(cfg, scheme)?;
    let hash = match target {
        QueryTarget::Doc(id) => index
            .get(id)
            .cloned()
            .ok_or_else(|| Error::Usage(format!("document `{id}` is not indexed")))?,
        QueryTarget::Text { lang, text } => {
            if !cfg.languages.contains(lang) {
                return Err(Error::Usage(format!("language `{lang}` is not configured")));
            }
            let stop = match &cfg.inputs(lang)?.stopwords {
                Some(path) => formats::load_stopwords(path)?,
                None => BTreeSet::new(),
            };
            let lemmas = normalize(text, &stop, cfg.model.min_len);
            let (model, labels) = load_model_and_labels(cfg, scheme, lang)?;
            let seed = derive_seed(cfg.seed, &format!("query/{scheme}"));
            let theta = infer_theta(&model, &lemmas, cfg.model.infer_sweeps, seed)?;
            build_hash("", &theta, &labels, index.num_levels())?
        }
    };
    Ok(index.query(&hash, k)?)
}

#[derive(Serialize)]
struct RunManifest<'a> {
    config: &'a RunConfig,
    inputs: BTreeMap<String, String>,
    artifacts: BTreeMap<String, String>,
}

pub fn cmd_eval(cfg: &RunConfig) -> Result<EvalReport> {
    let corpora = load_corpora(cfg)?;
    let (mapping, _) = category_mapping(cfg, &corpora)?;
    let all_docs: Vec<Document> = corpora.iter().flat_map(|(_, d)| d.iter().cloned()).collect();
    let lang_of: BTreeMap<&str, &str> = all_docs.iter().map(|d| (d.id.as_str(), d.lang.as_str())).collect();
    let ks: BTreeSet<usize> = cfg.ks.iter().copied().collect();

    let mut report = EvalReport::default();
    let mut artifacts = BTreeMap::new();
    for scheme in cfg.schemes()? {
        let (manifest, full) = load_index(cfg, scheme)?;
        artifacts.insert(manifest.hashes.clone(), sha256_file(&cfg.out_dir.join(&manifest.hashes))?);
        for combo in cfg.combinations() {
            let pooled = full
                .hashes()
                .filter(|h| lang_of.get(h.doc_id.as_str()).is_some_and(|l| combo.iter().any(|c| c == l)))
                .cloned();
            let index = InvertedIndex::from_hashes(manifest.levels, pooled)?;
            let eval_cfg = EvalConfig {
                languages: combo.clone(),
                scheme,
                query_count: cfg.query_count,
                ks: ks.clone(),
                seed: derive_seed(cfg.seed, &format!("eval/{}", combo.join("-"))),
            };
            let result = run_experiment(&eval_cfg, &all_docs, &index, &mapping)?;
            log::info!(
                "{} {scheme}: {} evaluated, {} without ground truth, {} without hash",
                result.combination(),
                result.evaluated,
                result.skipped_no_ground_truth,
                result.skipped_no_hash
            );
            report.results.push(result);
        }
    }

    write_atomic(&cfg.out_dir.join("results.tsv"), report::to_tsv(&report, &cfg.ks).as_bytes())?;
    write_atomic(&cfg.out_dir.join("results.json"), &report::to_json(&report))?;
    let mut inputs = BTreeMap::new();
    for path in cfg.input_files() {
        inputs.insert(path.display().to_string(), sha256_file(&path)?);
    }
    let mut recorded = cfg.clone();
    recorded.out_dir = PathBuf::from(".");
    let manifest = RunManifest {
        config: &recorded,
        inputs,
        artifacts,
    };
    let mut bytes = serde_json::to_vec_pretty(&manifest).expect("in-memory serialization");
    bytes.push(b'\n');
    write_atomic(&cfg.out_dir.join("run-manifest.json"), &bytes)?;
    Ok(report)
}
