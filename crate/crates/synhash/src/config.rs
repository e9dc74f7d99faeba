//! Run configuration: one TOML file, relative paths resolved against the
//! file's directory, command-line flags applied on top.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use synhash_core::topicmodel::SamplerParams;
use synhash_core::Scheme;

use crate::error::{Error, Result};
use crate::fsio::read_to_string;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LanguageInputs {
    /// JSONL corpus.
    pub corpus: PathBuf,
    pub stopwords: Option<PathBuf>,
    /// OMW tab file; required by the synset scheme.
    pub omw: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ModelConfig {
    pub topics: usize,
    /// Defaults to `50 / topics`.
    pub alpha: Option<f64>,
    pub beta: f64,
    pub sweeps: usize,
    pub infer_sweeps: usize,
    pub min_df: usize,
    pub max_df_ratio: f64,
    /// Minimum token length for raw-text queries.
    pub min_len: usize,
}

impl Default for ModelConfig {
    fn default() -> Self {
        ModelConfig {
            topics: 100,
            alpha: None,
            beta: 0.01,
            sweeps: 1000,
            infer_sweeps: 100,
            min_df: 2,
            max_df_ratio: 0.5,
            min_len: 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub languages: Vec<String>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_out_dir")]
    pub out_dir: PathBuf,
    #[serde(default = "default_schemes")]
    pub schemes: Vec<String>,
    #[serde(default = "default_top_n")]
    pub top_n: usize,
    #[serde(default = "default_levels")]
    pub levels: usize,
    #[serde(default = "default_depth")]
    pub depth: usize,
    #[serde(default = "default_ks")]
    pub ks: Vec<usize>,
    #[serde(default = "default_query_count")]
    pub query_count: usize,
    /// Language combinations to evaluate; defaults to each language alone
    /// plus all of them together.
    #[serde(default)]
    pub combinations: Vec<Vec<String>>,
    pub taxonomy: Option<PathBuf>,
    #[serde(default)]
    pub model: ModelConfig,
    pub corpus: BTreeMap<String, LanguageInputs>,
}

fn default_out_dir() -> PathBuf {
    PathBuf::from("out")
}
fn default_schemes() -> Vec<String> {
    vec!["synset".into()]
}
fn default_top_n() -> usize {
    synhash_core::annotate::DEFAULT_TOP_N
}
fn default_levels() -> usize {
    synhash_core::hashing::DEFAULT_LEVELS
}
fn default_depth() -> usize {
    1
}
fn default_ks() -> Vec<usize> {
    vec![3, 5, 10]
}
fn default_query_count() -> usize {
    1000
}

/// Flag values that win over the file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub out_dir: Option<PathBuf>,
    pub depth: Option<usize>,
    pub query_count: Option<usize>,
}

impl RunConfig {
    pub fn parse(text: &str, base_dir: &Path) -> Result<Self> {
        let mut cfg: RunConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.resolve_paths(base_dir);
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = read_to_string(path).map_err(|e| Error::Config(e.to_string()))?;
        let base = path.parent().unwrap_or(Path::new("."));
        RunConfig::parse(&text, base)
    }

    fn resolve_paths(&mut self, base: &Path) {
        let join = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        join(&mut self.out_dir);
        if let Some(t) = self.taxonomy.as_mut() {
            join(t);
        }
        for inputs in self.corpus.values_mut() {
            join(&mut inputs.corpus);
            if let Some(s) = inputs.stopwords.as_mut() {
                join(s);
            }
            if let Some(o) = inputs.omw.as_mut() {
                join(o);
            }
        }
    }

    pub fn apply(&mut self, overrides: &Overrides) {
        if let Some(seed) = overrides.seed {
            self.seed = seed;
        }
        if let Some(dir) = &overrides.out_dir {
            self.out_dir = dir.clone();
        }
        if let Some(depth) = overrides.depth {
            self.depth = depth;
        }
        if let Some(n) = overrides.query_count {
            self.query_count = n;
        }
    }

    pub fn schemes(&self) -> Result<Vec<Scheme>> {
        self.schemes
            .iter()
            .map(|s| s.parse().map_err(|e: synhash_core::Error| Error::Config(e.to_string())))
            .collect()
    }

    pub fn inputs(&self, lang: &str) -> Result<&LanguageInputs> {
        self.corpus
            .get(lang)
            .ok_or_else(|| Error::Config(format!("no [corpus.{lang}] section")))
    }

    pub fn sampler_params(&self, seed: u64) -> SamplerParams {
        let mut params = SamplerParams::defaults_for(self.model.topics, seed);
        if let Some(alpha) = self.model.alpha {
            params.alpha = alpha;
        }
        params.beta = self.model.beta;
        params.sweeps = self.model.sweeps;
        params
    }

    pub fn combinations(&self) -> Vec<Vec<String>> {
        if !self.combinations.is_empty() {
            return self.combinations.clone();
        }
        let mut out: Vec<Vec<String>> = self.languages.iter().map(|l| vec![l.clone()]).collect();
        if self.languages.len() > 1 {
            out.push(self.languages.clone());
        }
        out
    }

    /// Checks parameter ranges and that every referenced file exists.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        if self.languages.is_empty() {
            return bad("`languages` is empty".into());
        }
        for lang in &self.languages {
            synhash_core::corpus::validate_language(lang).map_err(|e| Error::Config(e.to_string()))?;
            self.inputs(lang)?;
        }
        if let Some(extra) = self.corpus.keys().find(|l| !self.languages.contains(l)) {
            return bad(format!("[corpus.{extra}] is not in `languages`"));
        }
        let schemes = self.schemes()?;
        if schemes.is_empty() {
            return bad("`schemes` is empty".into());
        }
        let m = &self.model;
        if m.topics == 0 {
            return bad("model.topics must be >= 1".into());
        }
        if m.alpha.is_some_and(|a| a.is_nan() || a <= 0.0) || m.beta.is_nan() || m.beta <= 0.0 {
            return bad("model.alpha and model.beta must be > 0".into());
        }
        if m.sweeps == 0 || m.infer_sweeps == 0 {
            return bad("model.sweeps and model.infer_sweeps must be >= 1".into());
        }
        if m.min_len == 0 || !(m.max_df_ratio > 0.0 && m.max_df_ratio <= 1.0) {
            return bad("model.min_len must be >= 1 and model.max_df_ratio in (0, 1]".into());
        }
        if self.top_n == 0 || self.levels == 0 || self.depth == 0 || self.query_count == 0 {
            return bad("top_n, levels, depth and query_count must be >= 1".into());
        }
        if self.ks.is_empty() || self.ks.contains(&0) {
            return bad("ks must be non-empty and positive".into());
        }
        for combo in self.combinations() {
            if combo.is_empty() || combo.iter().any(|l| !self.languages.contains(l)) {
                return bad(format!("invalid language combination {combo:?}"));
            }
        }

        let mut required: Vec<(&str, &Path)> = Vec::new();
        for (lang, inputs) in &self.corpus {
            required.push(("corpus", &inputs.corpus));
            if let Some(s) = &inputs.stopwords {
                required.push(("stopwords", s));
            }
            match &inputs.omw {
                Some(o) => required.push(("omw", o)),
                None if schemes.contains(&Scheme::Synset) => {
                    return bad(format!("synset scheme needs [corpus.{lang}].omw"));
                }
                None => {}
            }
        }
        match &self.taxonomy {
            Some(t) => required.push(("taxonomy", t)),
            None => return bad("`taxonomy` is required for ground truth and categories".into()),
        }
        for (what, path) in required {
            if !path.is_file() {
                return bad(format!("{what} file {} does not exist", path.display()));
            }
        }
        Ok(())
    }

    /// Every input file, for run manifests.
    pub fn input_files(&self) -> Vec<PathBuf> {
        let mut out = Vec::new();
        for inputs in self.corpus.values() {
            out.push(inputs.corpus.clone());
            out.extend(inputs.stopwords.clone());
            out.extend(inputs.omw.clone());
        }
        out.extend(self.taxonomy.clone());
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"
languages = ["en", "es"]
seed = 3
taxonomy = "tax.tsv"

[model]
topics = 10

[corpus.en]
corpus = "en.jsonl"
omw = "en.tab"

[corpus.es]
corpus = "/abs/es.jsonl"
omw = "es.tab"
"#;

    #[test]
    fn defaults_and_paths() {
        let cfg = RunConfig::parse(MINIMAL, Path::new("/data")).unwrap();
        assert_eq!(cfg.levels, 3);
        assert_eq!(cfg.top_n, 5);
        assert_eq!(cfg.ks, vec![3, 5, 10]);
        assert_eq!(cfg.out_dir, PathBuf::from("/data/out"));
        assert_eq!(cfg.corpus["en"].corpus, PathBuf::from("/data/en.jsonl"));
        assert_eq!(cfg.corpus["es"].corpus, PathBuf::from("/abs/es.jsonl"));
        assert_eq!(cfg.sampler_params(1).alpha, 5.0);
        assert_eq!(cfg.model.sweeps, 1000);
        assert_eq!(
            cfg.combinations(),
            vec![vec!["en".to_string()], vec!["es".to_string()], vec!["en".to_string(), "es".to_string()]]
        );
    }

    #[test]
    fn overrides_win() {
        let mut cfg = RunConfig::parse(MINIMAL, Path::new("/data")).unwrap();
        cfg.apply(&Overrides {
            seed: Some(99),
            out_dir: Some("/tmp/x".into()),
            ..Default::default()
        });
        assert_eq!(cfg.seed, 99);
        assert_eq!(cfg.out_dir, PathBuf::from("/tmp/x"));
    }

    #[test]
    fn validation_errors() {
        let cfg = RunConfig::parse(MINIMAL, Path::new("/nonexistent")).unwrap();
        let err = cfg.validate().unwrap_err();
        assert!(err.to_string().contains("does not exist"), "{err}");
        assert_eq!(err.exit_code(), 1);

        let bad = MINIMAL.replace("topics = 10", "topics = 0");
        assert!(RunConfig::parse(&bad, Path::new("/")).unwrap().validate().is_err());
        let unknown = MINIMAL.replace("seed = 3", "seed = 3\nbogus = 1");
        assert!(RunConfig::parse(&unknown, Path::new("/")).is_err());
        let scheme = MINIMAL.replace("seed = 3", "seed = 3\nschemes = [\"words\"]");
        assert!(RunConfig::parse(&scheme, Path::new("/")).unwrap().validate().is_err());
    }
}
