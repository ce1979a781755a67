//! Declarative run configuration: a single TOML file, overridable by CLI
//! flags, holding every pipeline and experiment parameter by name.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evaluation::SearchConfig;
use crate::mining::MiningParams;
use crate::pruning::PruneStrategy;
use crate::wordnet::{DisambiguationPolicy, Lexicon, PosSelection};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub corpus: Option<PathBuf>,
    pub wordnet_dir: Option<PathBuf>,
    pub freq_file: Option<PathBuf>,
    /// Pruning strategy string, e.g. `dep:I1` or `tfidf:N=10`.
    pub strategy: String,
    /// Hyperonymization order; 0 disables the stage.
    pub hyper_n: usize,
    /// Which POS hyperonymization touches: `nv`, `n` or `v`.
    pub hyper_pos: String,
    /// `most-frequent` or `context-overlap`.
    pub disambiguation: String,
    pub output_dir: PathBuf,
    /// Report format preference for stdout: `tsv` or `json`.
    pub format: String,
    pub mining: MiningSection,
    pub search: SearchSection,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MiningSection {
    pub min_support: f64,
    pub min_confidence: f64,
    pub max_itemset_size: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SearchSection {
    pub initial_support: f64,
    pub initial_confidence: f64,
    pub target_rules: usize,
    pub tolerance: usize,
    pub seed: u64,
    pub max_probes: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            corpus: None,
            wordnet_dir: None,
            freq_file: None,
            strategy: "dep:I1".to_string(),
            hyper_n: 0,
            hyper_pos: "nv".to_string(),
            disambiguation: "most-frequent".to_string(),
            output_dir: PathBuf::from("out"),
            format: "tsv".to_string(),
            mining: MiningSection::default(),
            search: SearchSection::default(),
        }
    }
}

impl Default for MiningSection {
    fn default() -> Self {
        let params = MiningParams::default();
        MiningSection {
            min_support: params.min_support,
            min_confidence: params.min_confidence,
            max_itemset_size: params.max_itemset_size,
        }
    }
}

impl Default for SearchSection {
    fn default() -> Self {
        let config = SearchConfig::default();
        SearchSection {
            initial_support: config.initial_support,
            initial_confidence: config.initial_confidence,
            target_rules: config.target_rules,
            tolerance: config.tolerance,
            seed: config.seed,
            max_probes: config.max_probes,
        }
    }
}

/// Environment variable overriding the WordNet directory.
pub const WORDNET_DIR_ENV: &str = "CARMINE_WORDNET_DIR";

impl RunConfig {
    pub fn load(path: &Path) -> Result<RunConfig> {
        let text = fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        toml::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }

    /// Applies the `CARMINE_WORDNET_DIR` override when set and non-empty.
    pub fn apply_env(&mut self) {
        if let Ok(dir) = std::env::var(WORDNET_DIR_ENV) {
            if !dir.is_empty() {
                self.wordnet_dir = Some(PathBuf::from(dir));
            }
        }
    }

    /// Checks invariants that every command relies on: parsable strategy
    /// and policies, resolvable paths, and a lexicon wherever hyper_n > 0.
    pub fn validate(&self) -> Result<()> {
        self.strategy()?;
        self.hyper_pos()?;
        self.policy()?;
        self.mining_params().validate()?;
        self.search_config().validate()?;
        if self.format != "tsv" && self.format != "json" {
            return Err(Error::Config(format!(
                "unknown output format {:?} (use tsv or json)",
                self.format
            )));
        }
        if self.hyper_n > 0 && (self.wordnet_dir.is_none() || self.freq_file.is_none()) {
            return Err(Error::Config(
                "hyper_n > 0 requires wordnet_dir and freq_file".into(),
            ));
        }
        for (name, path) in [
            ("corpus", &self.corpus),
            ("wordnet_dir", &self.wordnet_dir),
            ("freq_file", &self.freq_file),
        ] {
            if let Some(path) = path {
                if !path.exists() {
                    return Err(Error::Config(format!(
                        "{name} path {} does not exist",
                        path.display()
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn corpus_path(&self) -> Result<&Path> {
        self.corpus
            .as_deref()
            .ok_or_else(|| Error::Config("no corpus path configured".into()))
    }

    pub fn strategy(&self) -> Result<PruneStrategy> {
        self.strategy.parse()
    }

    pub fn hyper_pos(&self) -> Result<PosSelection> {
        self.hyper_pos.parse()
    }

    pub fn policy(&self) -> Result<DisambiguationPolicy> {
        self.disambiguation.parse()
    }

    pub fn mining_params(&self) -> MiningParams {
        MiningParams {
            min_support: self.mining.min_support,
            min_confidence: self.mining.min_confidence,
            max_itemset_size: self.mining.max_itemset_size,
        }
    }

    pub fn search_config(&self) -> SearchConfig {
        SearchConfig {
            initial_support: self.search.initial_support,
            initial_confidence: self.search.initial_confidence,
            target_rules: self.search.target_rules,
            tolerance: self.search.tolerance,
            seed: self.search.seed,
            max_probes: self.search.max_probes,
        }
    }

    /// Loads the configured lexicon, if any, with the configured policy.
    pub fn load_lexicon(&self) -> Result<Option<Lexicon>> {
        match (&self.wordnet_dir, &self.freq_file) {
            (Some(dir), Some(freq)) => {
                let mut lexicon = Lexicon::load(dir, freq)?;
                lexicon.set_policy(self.policy()?);
                Ok(Some(lexicon))
            }
            (Some(_), None) | (None, Some(_)) => Err(Error::Config(
                "wordnet_dir and freq_file must be configured together".into(),
            )),
            (None, None) => Ok(None),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate_without_paths() {
        let config = RunConfig::default();
        config.validate().unwrap();
        assert!(config.corpus_path().is_err());
    }

    #[test]
    fn toml_round_trip() {
        let text = r#"
corpus = "data/tiny.conllu"
strategy = "tfidf:N=3"
hyper_n = 0

[mining]
min_support = 0.02
min_confidence = 0.4

[search]
target_rules = 50
seed = 7
"#;
        let config: RunConfig = toml::from_str(text).unwrap();
        assert_eq!(config.strategy, "tfidf:N=3");
        assert_eq!(config.mining.min_support, 0.02);
        assert_eq!(config.mining.max_itemset_size, 5); // default fills in
        assert_eq!(config.search.target_rules, 50);
        assert_eq!(config.search.tolerance, 2);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let err = toml::from_str::<RunConfig>("corpuss = \"x\"\n").unwrap_err();
        let _ = err.to_string();
    }

    #[test]
    fn hyper_requires_wordnet() {
        let config = RunConfig {
            hyper_n: 2,
            ..RunConfig::default()
        };
        assert!(matches!(config.validate(), Err(Error::Config(_))));
    }
}
