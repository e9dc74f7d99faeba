//! Writes a complete run directory (corpora, lexicons, taxonomy, config)
//! from a [`ThemedSpec`], so the whole pipeline can run without external data.

use std::path::{Path, PathBuf};

use synhash_core::synthetic::{themed_corpus, ThemedSpec};

use crate::formats::{corpus_to_jsonl, omw_to_tab, taxonomy_to_tsv};
use crate::fsio::write_atomic;
use crate::Result;

/// Model settings sized for the synthetic corpus rather than a real one.
pub const FIXTURE_MODEL: &str = "\
[model]
topics = 10
alpha = 0.5
beta = 0.01
sweeps = 200
infer_sweeps = 50
min_df = 2
max_df_ratio = 0.5
";

fn config_text(spec: &ThemedSpec) -> String {
    let langs: Vec<String> = spec.languages.iter().map(|l| format!("\"{l}\"")).collect();
    let mut out = format!(
        "languages = [{}]\nseed = 42\nout_dir = \"out\"\nschemes = [\"category\", \"synset\"]\n\
         taxonomy = \"taxonomy.tsv\"\ndepth = 1\nlevels = 3\ntop_n = 5\nks = [3, 5, 10]\nquery_count = 100\n\n",
        langs.join(", ")
    );
    out.push_str(FIXTURE_MODEL);
    for lang in &spec.languages {
        out.push_str(&format!("\n[corpus.{lang}]\ncorpus = \"{lang}.jsonl\"\nomw = \"{lang}.tab\"\n"));
    }
    out
}

/// Writes the fixture into `dir` and returns the path of its `config.toml`.
pub fn write_themed_fixture(dir: &Path, spec: &ThemedSpec) -> Result<PathBuf> {
    let corpus = themed_corpus(spec);
    for (lang, docs) in &corpus.docs {
        write_atomic(&dir.join(format!("{lang}.jsonl")), &corpus_to_jsonl(docs))?;
        write_atomic(&dir.join(format!("{lang}.tab")), &omw_to_tab(lang, &corpus.lexicon_rows))?;
    }
    write_atomic(&dir.join("taxonomy.tsv"), &taxonomy_to_tsv(&corpus.taxonomy))?;
    let config = dir.join("config.toml");
    write_atomic(&config, config_text(spec).as_bytes())?;
    Ok(config)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::RunConfig;

    #[test]
    fn fixture_config_validates() {
        let dir = tempfile::tempdir().unwrap();
        let config = write_themed_fixture(dir.path(), &ThemedSpec::default()).unwrap();
        let cfg = RunConfig::load(&config).unwrap();
        cfg.validate().unwrap();
        assert_eq!(cfg.model.topics, 10);
        assert_eq!(cfg.corpus.len(), 2);
    }
}
