use alloc::string::String;
use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A numeric or size argument outside its documented range.
    InvalidParameter(String),
    EmptyDocumentId,
    DuplicateDocument(String),
    InvalidLemma { doc: String, lemma: String },
    InvalidLanguage(String),
    LanguageMismatch { expected: String, found: String },
    NoDocuments,
    EmptyVocabulary,
    /// A training document with no token left after vocabulary filtering.
    DocumentOutOfVocabulary(String),
    /// Inference input with no in-vocabulary lemma. Callers usually skip the document.
    NoInVocabularyLemma,
    TopicOutOfRange { topic: usize, topics: usize },
    UnknownCategory { doc: String, category: String },
    EmptyLabelSet(String),
    InvalidModel(String),
    InvalidSynsetId(String),
    /// A malformed input row; `line` is 1-based.
    Parse { line: usize, message: String },
    NoValidRows,
    UnloadedLanguage(String),
    MissingCategoryBinding,
    LabelMismatch { topics: usize, labels: usize },
    LevelMismatch { expected: usize, found: usize },
    MalformedTaxonomy(String),
    UnknownConcept(String),
    UnmappedConcept(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidParameter(msg) => write!(f, "invalid parameter: {msg}"),
            Error::EmptyDocumentId => write!(f, "document id is empty"),
            Error::DuplicateDocument(id) => write!(f, "duplicate document id `{id}`"),
            Error::InvalidLemma { doc, lemma } => {
                write!(f, "document `{doc}` has invalid lemma {lemma:?}")
            }
            Error::InvalidLanguage(lang) => write!(f, "unknown language code `{lang}`"),
            Error::LanguageMismatch { expected, found } => {
                write!(f, "expected language `{expected}`, found `{found}`")
            }
            Error::NoDocuments => write!(f, "no documents"),
            Error::EmptyVocabulary => write!(f, "vocabulary is empty after filtering"),
            Error::DocumentOutOfVocabulary(id) => {
                write!(f, "document `{id}` has no in-vocabulary lemma")
            }
            Error::NoInVocabularyLemma => write!(f, "no in-vocabulary lemma"),
            Error::TopicOutOfRange { topic, topics } => {
                write!(f, "topic {topic} out of range for a model with {topics} topics")
            }
            Error::UnknownCategory { doc, category } => {
                write!(f, "document `{doc}` has unknown category `{category}`")
            }
            Error::EmptyLabelSet(id) => write!(f, "document `{id}` has no category"),
            Error::InvalidModel(msg) => write!(f, "invalid topic model: {msg}"),
            Error::InvalidSynsetId(id) => write!(f, "invalid synset id `{id}`"),
            Error::Parse { line, message } => write!(f, "line {line}: {message}"),
            Error::NoValidRows => write!(f, "no valid rows"),
            Error::UnloadedLanguage(lang) => write!(f, "language `{lang}` is not loaded"),
            Error::MissingCategoryBinding => write!(f, "model has no topic-category binding"),
            Error::LabelMismatch { topics, labels } => {
                write!(f, "label sets cover {labels} topics, model has {topics}")
            }
            Error::LevelMismatch { expected, found } => {
                write!(f, "expected {expected} hash levels, found {found}")
            }
            Error::MalformedTaxonomy(msg) => write!(f, "malformed taxonomy: {msg}"),
            Error::UnknownConcept(id) => write!(f, "unknown concept `{id}`"),
            Error::UnmappedConcept(id) => write!(f, "concept `{id}` has no category"),
        }
    }
}

impl core::error::Error for Error {}
