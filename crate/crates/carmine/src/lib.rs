//! Class-association-rule mining and text classification over
//! dependency-parsed corpora.
//!
//! The pipeline: parse a class-annotated, dependency-parsed corpus; reduce
//! each sentence to a small itemset, either by tf-idf rank or by a
//! morphosyntactic constraint on the dependency tree; optionally replace
//! items by WordNet hyperonyms of a chosen order; mine class association
//! rules with apriori; classify documents by confidence-weighted rule
//! voting; and evaluate with tenfold cross-validation under a rule-budget
//! threshold search.
//!
//! Start with the runnable walkthroughs in `examples/`:
//!
//! ```bash
//! cargo run --example mine_rules
//! cargo run --example classify_document
//! cargo run --example hyperonymize
//! ```
//!
//! The same functionality is exposed by the `carmine` binary with the
//! `validate`, `mine`, `classify`, `evaluate` and `sweep` subcommands.

pub mod classifier;
pub mod cli;
pub mod config;
pub mod corpus;
mod error;
pub mod evaluation;
pub mod mining;
pub mod model;
pub mod pruning;
pub mod synth;
pub mod wordnet;

pub use classifier::{ClassificationResult, SentenceVerdict};
pub use corpus::{Corpus, Document, Sentence, Token};
pub use error::{Error, Result};
pub use evaluation::{EvalReport, SearchConfig};
pub use mining::{Itemset, MiningParams, Ratio, Transaction, CAR};
pub use model::TrainedModel;
pub use pruning::{ConstraintId, PruneStrategy};
pub use wordnet::{Lexicon, Pos, SynsetId};
