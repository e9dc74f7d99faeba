//! Topic-hierarchy hashing for cross-lingual document retrieval.
//!
//! Documents are described by per-language topic models whose topics carry
//! language-independent labels (WordNet synsets, or shared category ids for
//! labeled models). A document's topic distribution is cut into a small
//! number of importance levels; the union of labels at each level forms a
//! [`hashing::HashExpression`], and two expressions are compared by summing
//! the Jaccard index of their label sets level by level.
//!
//! This crate is `no_std` and only needs `alloc`. File formats, configuration
//! and the command line live in the `synhash` crate.

#![no_std]

extern crate alloc;

pub mod annotate;
pub mod corpus;
pub mod error;
pub mod eurovoc;
pub mod eval;
pub mod hashing;
pub mod index;
pub mod lexicon;
pub mod rng;
pub mod synthetic;
pub mod topicmodel;

pub use annotate::{annotate_topics_category, annotate_topics_synset, Scheme, TopicLabelSet};
pub use corpus::{build_vocabulary, normalize, Document, Vocabulary};
pub use error::{Error, Result};
pub use eurovoc::{flatten, flatten_with_codes, map_codes, CategoryMapping, Taxonomy};
pub use eval::{ground_truth, precision_at_k, run_experiment, EvalConfig, EvalReport};
pub use hashing::{assign_levels, build_hash, similarity, HashExpression};
pub use index::{InvertedIndex, QueryResult};
pub use lexicon::{SynsetId, SynsetLexicon};
pub use topicmodel::{infer_theta, top_words, train_labeled_lda, train_lda, DocTopicDist, SamplerParams, TopicModel};
