use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors produced by corpus ingestion, lexicon loading, mining and evaluation.
#[derive(Debug, Error)]
pub enum Error {
    /// A line of an input file could not be parsed.
    #[error("{path}:{line}: {message}")]
    Parse {
        path: String,
        line: usize,
        message: String,
    },

    /// Structurally valid input that violates a document-level requirement.
    #[error("schema error: {0}")]
    Schema(String),

    /// Head indices of a sentence do not form a tree.
    #[error("sentence {sentence_id}: {message}")]
    Tree {
        sentence_id: String,
        message: String,
    },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("unresolvable synset reference: {0}")]
    UnknownSynset(String),

    #[error("hypernym cycle through synset {0}")]
    HypernymCycle(String),

    /// Precondition violation on an otherwise total operation.
    #[error("{0}")]
    Domain(String),

    #[error("confidence undefined: no transaction contains the itemset")]
    UndefinedConfidence,

    #[error("hyperonymization order {0} requires a lexicon")]
    MissingLexicon(usize),

    #[error("configuration error: {0}")]
    Config(String),

    /// A rule file header disagrees with the active configuration.
    #[error("rule file mismatch: {0}")]
    ModelMismatch(String),

    #[error("threshold search ran {0} probes without a successful evaluation")]
    SearchExhausted(usize),
}
