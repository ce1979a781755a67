//! The trained rule artifact: mined rules plus everything needed to replay
//! the sentence-to-itemset mapping on new documents.
//!
//! Two on-disk forms exist. The JSON form is complete, including exact
//! rational counts and, for tfidf strategies, the frozen sentence-frequency
//! table. The TSV form is a readable interchange format: `# key = value`
//! header lines followed by one `ITEMS CLASS SUPPORT CONFIDENCE` row per
//! rule, with supports and confidences written as reduced fractions so the
//! file round-trips exactly. A tfidf model loaded from TSV has no frequency
//! table and therefore cannot classify; use the JSON form for that.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::classifier::{self, ClassificationResult, PruneContext};
use crate::corpus::{Corpus, Document};
use crate::error::{Error, Result};
use crate::mining::{self, MiningParams, Ratio, CAR};
use crate::pruning::{PruneStrategy, TfidfTable};
use crate::wordnet::{Lexicon, PosSelection};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainedModel {
    pub strategy: PruneStrategy,
    pub hyper_n: usize,
    pub hyper_pos: PosSelection,
    pub min_support: f64,
    pub min_confidence: f64,
    pub max_itemset_size: usize,
    /// Digest of the training corpus; ties rules to their provenance.
    pub corpus_hash: String,
    pub classes: BTreeSet<String>,
    pub transaction_count: usize,
    pub avg_transaction_size: Option<f64>,
    pub rules: Vec<CAR>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tfidf: Option<TfidfTable>,
}

/// Trains a model on the corpus, capturing the full classification context.
pub fn train_model(
    corpus: &Corpus,
    params: &MiningParams,
    strategy: &PruneStrategy,
    hyper_n: usize,
    lexicon: Option<&Lexicon>,
    hyper_pos: PosSelection,
) -> Result<TrainedModel> {
    let run = mining::train_run(corpus, params, strategy, hyper_n, lexicon, hyper_pos)?;
    Ok(TrainedModel {
        strategy: strategy.clone(),
        hyper_n,
        hyper_pos,
        min_support: params.min_support,
        min_confidence: params.min_confidence,
        max_itemset_size: params.max_itemset_size,
        corpus_hash: corpus.content_hash(),
        classes: corpus.classes().clone(),
        transaction_count: run.transaction_count,
        avg_transaction_size: run.avg_transaction_size,
        rules: run.rules,
        tfidf: run.tfidf,
    })
}

impl TrainedModel {
    pub fn rule_count(&self) -> usize {
        self.rules.len()
    }

    pub fn prune_context<'a>(&'a self, lexicon: Option<&'a Lexicon>) -> PruneContext<'a> {
        PruneContext {
            strategy: &self.strategy,
            hyper_n: self.hyper_n,
            hyper_pos: self.hyper_pos,
            lexicon,
            tfidf: self.tfidf.as_ref(),
        }
    }

    pub fn classify(
        &self,
        document: &Document,
        lexicon: Option<&Lexicon>,
    ) -> Result<ClassificationResult> {
        classifier::classify(
            &self.rules,
            &self.classes,
            document,
            &self.prune_context(lexicon),
        )
    }

    /// Refuses to classify when the active configuration disagrees with
    /// what the rule file records.
    pub fn check_compatible(
        &self,
        strategy: &PruneStrategy,
        hyper_n: usize,
        hyper_pos: PosSelection,
    ) -> Result<()> {
        let mut mismatches = Vec::new();
        if *strategy != self.strategy {
            mismatches.push(format!(
                "strategy {} (rule file) vs {} (config)",
                self.strategy, strategy
            ));
        }
        if hyper_n != self.hyper_n {
            mismatches.push(format!(
                "hyper_n {} (rule file) vs {} (config)",
                self.hyper_n, hyper_n
            ));
        }
        if hyper_pos != self.hyper_pos {
            mismatches.push(format!(
                "hyper_pos {} (rule file) vs {} (config)",
                self.hyper_pos, hyper_pos
            ));
        }
        if mismatches.is_empty() {
            Ok(())
        } else {
            Err(Error::ModelMismatch(mismatches.join("; ")))
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("model serializes")
    }

    pub fn from_json(text: &str) -> Result<TrainedModel> {
        let mut model: TrainedModel = serde_json::from_str(text)
            .map_err(|e| Error::Schema(format!("invalid rule file: {e}")))?;
        mining::sort_rules(&mut model.rules);
        Ok(model)
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        writeln!(out, "# strategy = {}", self.strategy).unwrap();
        writeln!(out, "# hyper_n = {}", self.hyper_n).unwrap();
        writeln!(out, "# hyper_pos = {}", self.hyper_pos).unwrap();
        writeln!(out, "# min_support = {}", self.min_support).unwrap();
        writeln!(out, "# min_confidence = {}", self.min_confidence).unwrap();
        writeln!(out, "# max_itemset_size = {}", self.max_itemset_size).unwrap();
        writeln!(out, "# corpus_hash = {}", self.corpus_hash).unwrap();
        let classes: Vec<&str> = self.classes.iter().map(String::as_str).collect();
        writeln!(out, "# classes = {}", classes.join(",")).unwrap();
        writeln!(out, "# transaction_count = {}", self.transaction_count).unwrap();
        match self.avg_transaction_size {
            Some(avg) => writeln!(out, "# avg_transaction_size = {avg}").unwrap(),
            None => writeln!(out, "# avg_transaction_size = n/a").unwrap(),
        }
        writeln!(out, "ITEMS\tCLASS\tSUPPORT\tCONFIDENCE").unwrap();
        for rule in &self.rules {
            writeln!(
                out,
                "{}\t{}\t{}\t{}",
                rule.itemset.items().join(","),
                rule.class_label,
                rule.support,
                rule.confidence
            )
            .unwrap();
        }
        out
    }

    pub fn from_tsv(text: &str) -> Result<TrainedModel> {
        let mut strategy = None;
        let mut hyper_n = None;
        let mut hyper_pos = PosSelection::default();
        let mut min_support = None;
        let mut min_confidence = None;
        let mut max_itemset_size = None;
        let mut corpus_hash = None;
        let mut classes = BTreeSet::new();
        let mut transaction_count = 0usize;
        let mut avg_transaction_size = None;
        let mut rules = Vec::new();
        let mut seen_columns = false;

        let field_err =
            |line: usize, message: String| Error::Parse {
                path: "<rules.tsv>".to_string(),
                line,
                message,
            };

        for (idx, line) in text.lines().enumerate() {
            let ln = idx + 1;
            if line.is_empty() {
                continue;
            }
            if let Some(header) = line.strip_prefix('#') {
                let Some((key, value)) = header.split_once('=') else {
                    continue;
                };
                let (key, value) = (key.trim(), value.trim());
                match key {
                    "strategy" => strategy = Some(value.parse::<PruneStrategy>()?),
                    "hyper_n" => {
                        hyper_n = Some(value.parse::<usize>().map_err(|_| {
                            field_err(ln, format!("invalid hyper_n {value:?}"))
                        })?)
                    }
                    "hyper_pos" => hyper_pos = value.parse()?,
                    "min_support" => {
                        min_support = Some(value.parse::<f64>().map_err(|_| {
                            field_err(ln, format!("invalid min_support {value:?}"))
                        })?)
                    }
                    "min_confidence" => {
                        min_confidence = Some(value.parse::<f64>().map_err(|_| {
                            field_err(ln, format!("invalid min_confidence {value:?}"))
                        })?)
                    }
                    "max_itemset_size" => {
                        max_itemset_size = Some(value.parse::<usize>().map_err(|_| {
                            field_err(ln, format!("invalid max_itemset_size {value:?}"))
                        })?)
                    }
                    "corpus_hash" => corpus_hash = Some(value.to_string()),
                    "classes" => {
                        classes = value
                            .split(',')
                            .filter(|c| !c.is_empty())
                            .map(str::to_string)
                            .collect();
                    }
                    "transaction_count" => {
                        transaction_count = value.parse().map_err(|_| {
                            field_err(ln, format!("invalid transaction_count {value:?}"))
                        })?
                    }
                    "avg_transaction_size" => {
                        avg_transaction_size = if value == "n/a" {
                            None
                        } else {
                            Some(value.parse::<f64>().map_err(|_| {
                                field_err(ln, format!("invalid avg_transaction_size {value:?}"))
                            })?)
                        }
                    }
                    _ => {}
                }
                continue;
            }
            if !seen_columns {
                if line != "ITEMS\tCLASS\tSUPPORT\tCONFIDENCE" {
                    return Err(field_err(ln, "missing column header".into()));
                }
                seen_columns = true;
                continue;
            }
            let cols: Vec<&str> = line.split('\t').collect();
            if cols.len() != 4 {
                return Err(field_err(
                    ln,
                    format!("expected 4 tab-separated columns, found {}", cols.len()),
                ));
            }
            rules.push(CAR {
                itemset: mining::Itemset::from_items(
                    cols[0].split(',').filter(|i| !i.is_empty()),
                ),
                class_label: cols[1].to_string(),
                support: cols[2].parse::<Ratio>()?,
                confidence: cols[3].parse::<Ratio>()?,
            });
        }

        let missing = |what: &str| Error::Schema(format!("rule file is missing {what}"));
        let mut model = TrainedModel {
            strategy: strategy.ok_or_else(|| missing("the strategy header"))?,
            hyper_n: hyper_n.ok_or_else(|| missing("the hyper_n header"))?,
            hyper_pos,
            min_support: min_support.ok_or_else(|| missing("the min_support header"))?,
            min_confidence: min_confidence
                .ok_or_else(|| missing("the min_confidence header"))?,
            max_itemset_size: max_itemset_size
                .ok_or_else(|| missing("the max_itemset_size header"))?,
            corpus_hash: corpus_hash.ok_or_else(|| missing("the corpus_hash header"))?,
            classes,
            transaction_count,
            avg_transaction_size,
            rules,
            tfidf: None,
        };
        mining::sort_rules(&mut model.rules);
        Ok(model)
    }

    pub fn write_json(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_json()).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })
    }

    pub fn write_tsv(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_tsv()).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })
    }

    /// Reads a model by extension: `.json` is complete, `.tsv` carries the
    /// rules and header only.
    pub fn read(path: &Path) -> Result<TrainedModel> {
        let text = fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        match path.extension().and_then(|e| e.to_str()) {
            Some("json") => TrainedModel::from_json(&text),
            Some("tsv") => TrainedModel::from_tsv(&text),
            _ => Err(Error::Config(format!(
                "cannot tell the rule file format of {} (use .json or .tsv)",
                path.display()
            ))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::Corpus;
    use crate::pruning::ConstraintId;

    fn small_corpus() -> Corpus {
        let text = "\
# newdoc id = d1
# class = sports
# sent_id = s1
1\tteam\tteam\tNN\t2\tnsubj
2\tscores\tscore\tVVZ\t0\troot

# sent_id = s2
1\tstriker\tstriker\tNN\t2\tnsubj
2\tscores\tscore\tVVZ\t0\troot

# newdoc id = d2
# class = economy
# sent_id = s3
1\tbank\tbank\tNN\t2\tnsubj
2\ttrades\ttrade\tVVZ\t0\troot
";
        Corpus::parse(text, "test").unwrap()
    }

    fn params() -> MiningParams {
        MiningParams {
            min_support: 0.2,
            min_confidence: 0.5,
            max_itemset_size: 5,
        }
    }

    #[test]
    fn trains_and_classifies() {
        let corpus = small_corpus();
        let strategy = PruneStrategy::Dependency(ConstraintId::HeadOnly);
        let model = train_model(
            &corpus,
            &params(),
            &strategy,
            0,
            None,
            PosSelection::default(),
        )
        .unwrap();
        assert_eq!(model.rule_count(), 2);
        assert_eq!(model.transaction_count, 3);
        assert_eq!(model.avg_transaction_size, Some(1.0));
        let result = model.classify(&corpus.documents()[0], None).unwrap();
        assert_eq!(result.predicted_class.as_deref(), Some("sports"));
    }

    #[test]
    fn json_round_trip_is_exact() {
        let corpus = small_corpus();
        let strategy = PruneStrategy::Tfidf { n: 2 };
        let model = train_model(
            &corpus,
            &params(),
            &strategy,
            0,
            None,
            PosSelection::default(),
        )
        .unwrap();
        assert!(model.tfidf.is_some());
        let round = TrainedModel::from_json(&model.to_json()).unwrap();
        assert_eq!(model, round);
        // serialization itself is deterministic
        assert_eq!(model.to_json(), round.to_json());
    }

    #[test]
    fn tsv_round_trip_is_exact_for_dependency_models() {
        let corpus = small_corpus();
        let strategy = PruneStrategy::Dependency(ConstraintId::NsubjOfHead);
        let model = train_model(
            &corpus,
            &params(),
            &strategy,
            0,
            None,
            PosSelection::default(),
        )
        .unwrap();
        let round = TrainedModel::from_tsv(&model.to_tsv()).unwrap();
        assert_eq!(model, round);
        assert_eq!(model.to_tsv(), round.to_tsv());
    }

    #[test]
    fn mismatched_configuration_is_refused() {
        let corpus = small_corpus();
        let strategy = PruneStrategy::Dependency(ConstraintId::HeadOnly);
        let model = train_model(
            &corpus,
            &params(),
            &strategy,
            0,
            None,
            PosSelection::default(),
        )
        .unwrap();
        assert!(model
            .check_compatible(&strategy, 0, PosSelection::default())
            .is_ok());
        let other = PruneStrategy::Dependency(ConstraintId::NsubjOfHead);
        let err = model
            .check_compatible(&other, 0, PosSelection::default())
            .unwrap_err();
        assert!(matches!(err, Error::ModelMismatch(_)), "{err}");
        let err = model
            .check_compatible(&strategy, 3, PosSelection::default())
            .unwrap_err();
        assert!(matches!(err, Error::ModelMismatch(_)), "{err}");
    }

    #[test]
    fn tfidf_tsv_model_refuses_to_classify() {
        let corpus = small_corpus();
        let strategy = PruneStrategy::Tfidf { n: 1 };
        let model = train_model(
            &corpus,
            &params(),
            &strategy,
            0,
            None,
            PosSelection::default(),
        )
        .unwrap();
        let stripped = TrainedModel::from_tsv(&model.to_tsv()).unwrap();
        assert!(stripped.tfidf.is_none());
        let err = stripped
            .classify(&corpus.documents()[0], None)
            .unwrap_err();
        assert!(matches!(err, Error::Config(_)), "{err}");
    }
}
