//! Document classification by confidence-weighted rule voting.
//!
//! Each sentence of the document is reduced to an itemset with the same
//! pruning and hyperonymization pipeline used at training time, then the
//! most confident applicable rule is selected per sentence. Per-class sums
//! of those confidences decide the document class; variety and dispersion
//! describe how contested the decision was.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::corpus::{Document, Sentence};
use crate::error::{Error, Result};
use crate::mining::{Itemset, CAR};
use crate::pruning::{self, PruneStrategy, TfidfTable};
use crate::wordnet::{self, Lexicon, PosSelection};

/// The best rule found for one sentence, if any.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SentenceVerdict {
    pub sentence_id: String,
    pub matched: bool,
    pub rule: Option<CAR>,
}

/// Outcome of classifying one document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassificationResult {
    /// Arg max of the class scores; `None` when no rule fired (abstention).
    pub predicted_class: Option<String>,
    /// Number of classes with a positive confidence sum.
    pub variety: usize,
    /// Gap between the highest and lowest class score; classes without any
    /// matched sentence score 0.
    pub dispersion: f64,
    /// Confidence sum per class, over the full class set.
    pub class_scores: BTreeMap<String, f64>,
    pub verdicts: Vec<SentenceVerdict>,
}

/// The maximal-confidence rule whose itemset is contained in `itemset`.
/// Expects `rules` in the mining total order, so the first applicable rule
/// is the answer and ties resolve the documented way.
pub fn match_sentence<'r>(rules: &'r [CAR], itemset: &Itemset) -> Option<&'r CAR> {
    rules.iter().find(|r| r.itemset.is_subset_of(itemset))
}

/// Classifies a document given as (sentence id, itemset) pairs — the core
/// of the aggregation, independent of any pruning pipeline.
pub fn classify_itemsets(
    rules: &[CAR],
    classes: &BTreeSet<String>,
    sentences: &[(String, Itemset)],
) -> ClassificationResult {
    // compensated per-class summation keeps the fold order irrelevant
    let mut sums: BTreeMap<&str, (f64, f64)> = BTreeMap::new();
    let mut verdicts = Vec::with_capacity(sentences.len());
    for (sentence_id, itemset) in sentences {
        let best = match_sentence(rules, itemset);
        if let Some(rule) = best {
            let (sum, comp) = sums.entry(rule.class_label.as_str()).or_insert((0.0, 0.0));
            kahan_add(sum, comp, rule.confidence_value());
        }
        verdicts.push(SentenceVerdict {
            sentence_id: sentence_id.clone(),
            matched: best.is_some(),
            rule: best.cloned(),
        });
    }

    let mut class_scores: BTreeMap<String, f64> = classes
        .iter()
        .map(|c| (c.clone(), sums.get(c.as_str()).map_or(0.0, |(s, _)| *s)))
        .collect();
    // a rule class outside the provided set still counts toward its own class
    for (class, (sum, _)) in &sums {
        class_scores.entry((*class).to_string()).or_insert(*sum);
    }

    let mut predicted: Option<(&String, f64)> = None;
    for (class, score) in &class_scores {
        match predicted {
            Some((_, best)) if *score <= best => {}
            _ => predicted = Some((class, *score)),
        }
    }
    let predicted_class = match predicted {
        Some((class, score)) if score > 0.0 => Some(class.clone()),
        _ => None,
    };
    let variety = class_scores.values().filter(|s| **s > 0.0).count();
    let dispersion = match (
        class_scores.values().copied().reduce(f64::max),
        class_scores.values().copied().reduce(f64::min),
    ) {
        (Some(max), Some(min)) => max - min,
        _ => 0.0,
    };
    ClassificationResult {
        predicted_class,
        variety,
        dispersion,
        class_scores,
        verdicts,
    }
}

fn kahan_add(sum: &mut f64, compensation: &mut f64, value: f64) {
    let y = value - *compensation;
    let t = *sum + y;
    *compensation = (t - *sum) - y;
    *sum = t;
}

/// Everything needed to rebuild sentence itemsets the way training did.
#[derive(Debug, Clone, Copy)]
pub struct PruneContext<'a> {
    pub strategy: &'a PruneStrategy,
    pub hyper_n: usize,
    pub hyper_pos: PosSelection,
    pub lexicon: Option<&'a Lexicon>,
    /// Sentence frequencies frozen at train time; required for tfidf.
    pub tfidf: Option<&'a TfidfTable>,
}

/// Prunes and hyperonymizes one sentence exactly as the training run did.
pub fn sentence_itemset(sentence: &Sentence, ctx: &PruneContext) -> Result<Itemset> {
    let pruned = match ctx.strategy {
        PruneStrategy::Tfidf { n } => {
            let table = ctx.tfidf.ok_or_else(|| {
                Error::Config(
                    "tfidf classification needs the frequency table frozen at train time".into(),
                )
            })?;
            pruning::prune_sentence_tfidf(sentence, *n, table)
        }
        PruneStrategy::Dependency(constraint) => {
            pruning::prune_sentence_dependency(sentence, constraint)
        }
    };
    let extended = if ctx.hyper_n > 0 {
        let lexicon = ctx.lexicon.ok_or(Error::MissingLexicon(ctx.hyper_n))?;
        wordnet::hyperonymize_itemset(lexicon, &pruned, ctx.hyper_n, ctx.hyper_pos)
    } else {
        pruned
    };
    Ok(Itemset::from_items(extended.lemmas()))
}

/// Classifies a document against a rule set. The context must replay the
/// training strategy and hyperonymization order.
pub fn classify(
    rules: &[CAR],
    classes: &BTreeSet<String>,
    document: &Document,
    ctx: &PruneContext,
) -> Result<ClassificationResult> {
    let sentences = document
        .sentences
        .iter()
        .map(|s| Ok((s.id.clone(), sentence_itemset(s, ctx)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(classify_itemsets(rules, classes, &sentences))
}
