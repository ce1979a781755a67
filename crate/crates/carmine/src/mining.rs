//! Class association rules: support, confidence, apriori with a class
//! consequent, and the end-to-end training pipeline.
//!
//! Supports and confidences are exact transaction-count fractions. Rule
//! lists always come out in one total order — confidence descending, then
//! support descending, then itemset, then class — so every downstream
//! argmax has a reproducible tiebreak.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::corpus::Corpus;
use crate::error::{Error, Result};
use crate::pruning::{self, PruneStrategy, PrunedItemset, TfidfTable};
use crate::wordnet::{self, Lexicon, PosSelection};

/// Exact fraction of transaction counts, kept reduced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "RawRatio", try_from = "RawRatio")]
pub struct Ratio {
    num: u64,
    den: u64,
}

#[derive(Serialize, Deserialize)]
struct RawRatio {
    num: u64,
    den: u64,
}

impl From<Ratio> for RawRatio {
    fn from(r: Ratio) -> RawRatio {
        RawRatio {
            num: r.num,
            den: r.den,
        }
    }
}

impl TryFrom<RawRatio> for Ratio {
    type Error = Error;

    fn try_from(raw: RawRatio) -> Result<Ratio> {
        if raw.den == 0 {
            return Err(Error::Domain("ratio with zero denominator".into()));
        }
        Ok(Ratio::new(raw.num, raw.den))
    }
}

impl Ratio {
    /// Reduced fraction `num / den`. Panics when `den` is zero.
    pub fn new(num: u64, den: u64) -> Ratio {
        assert!(den != 0, "ratio denominator must be nonzero");
        let g = gcd(num, den);
        Ratio {
            num: num / g,
            den: den / g,
        }
    }

    pub fn num(self) -> u64 {
        self.num
    }

    pub fn den(self) -> u64 {
        self.den
    }

    pub fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl PartialOrd for Ratio {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Ratio {
    fn cmp(&self, other: &Self) -> Ordering {
        let left = u128::from(self.num) * u128::from(other.den);
        let right = u128::from(other.num) * u128::from(self.den);
        left.cmp(&right)
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl FromStr for Ratio {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let err = || Error::Domain(format!("invalid ratio {s:?}"));
        let (num, den) = s.split_once('/').ok_or_else(err)?;
        let num: u64 = num.parse().map_err(|_| err())?;
        let den: u64 = den.parse().map_err(|_| err())?;
        if den == 0 {
            return Err(err());
        }
        Ok(Ratio::new(num, den))
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a.max(1)
}

/// Sorted, duplicate-free set of items.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct Itemset {
    items: Vec<String>,
}

impl<'de> Deserialize<'de> for Itemset {
    fn deserialize<D>(deserializer: D) -> std::result::Result<Self, D::Error>
    where
        D: serde::Deserializer<'de>,
    {
        let items = Vec::<String>::deserialize(deserializer)?;
        Ok(Itemset::from_items(items))
    }
}

impl Itemset {
    pub fn from_items<I, S>(items: I) -> Itemset
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut items: Vec<String> = items.into_iter().map(Into::into).collect();
        items.sort();
        items.dedup();
        Itemset { items }
    }

    pub fn items(&self) -> &[String] {
        &self.items
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn contains(&self, item: &str) -> bool {
        self.items.binary_search_by(|i| i.as_str().cmp(item)).is_ok()
    }

    /// Merge walk over the two sorted item lists.
    pub fn is_subset_of(&self, other: &Itemset) -> bool {
        let mut theirs = other.items.iter();
        'outer: for item in &self.items {
            for candidate in theirs.by_ref() {
                match candidate.as_str().cmp(item.as_str()) {
                    Ordering::Less => {}
                    Ordering::Equal => continue 'outer,
                    Ordering::Greater => return false,
                }
            }
            return false;
        }
        true
    }
}

impl fmt::Display for Itemset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.items.join(","))
    }
}

/// A class-labeled itemset.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Transaction {
    pub itemset: Itemset,
    pub class_label: String,
}

impl Transaction {
    pub fn new<I, S>(items: I, class_label: impl Into<String>) -> Transaction
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Transaction {
            itemset: Itemset::from_items(items),
            class_label: class_label.into(),
        }
    }
}

/// A class association rule with its exact support and confidence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CAR {
    pub itemset: Itemset,
    pub class_label: String,
    pub support: Ratio,
    pub confidence: Ratio,
}

impl CAR {
    pub fn support_value(&self) -> f64 {
        self.support.to_f64()
    }

    pub fn confidence_value(&self) -> f64 {
        self.confidence.to_f64()
    }

    /// The total rule order: confidence desc, support desc, itemset, class.
    pub fn rule_cmp(&self, other: &CAR) -> Ordering {
        other
            .confidence
            .cmp(&self.confidence)
            .then_with(|| other.support.cmp(&self.support))
            .then_with(|| self.itemset.cmp(&other.itemset))
            .then_with(|| self.class_label.cmp(&other.class_label))
    }
}

/// Sorts rules into the documented total order.
pub fn sort_rules(rules: &mut [CAR]) {
    rules.sort_by(CAR::rule_cmp);
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MiningParams {
    /// Minimum support sigma in [0, 1].
    pub min_support: f64,
    /// Minimum confidence kappa in [0, 1].
    pub min_confidence: f64,
    /// Apriori is exponential in itemset size; this cap keeps it bounded.
    pub max_itemset_size: usize,
}

impl Default for MiningParams {
    fn default() -> Self {
        MiningParams {
            min_support: 0.01,
            min_confidence: 0.5,
            max_itemset_size: 5,
        }
    }
}

impl MiningParams {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.min_support) {
            return Err(Error::Config(format!(
                "min_support {} outside [0, 1]",
                self.min_support
            )));
        }
        if !(0.0..=1.0).contains(&self.min_confidence) {
            return Err(Error::Config(format!(
                "min_confidence {} outside [0, 1]",
                self.min_confidence
            )));
        }
        if self.max_itemset_size == 0 {
            return Err(Error::Config("max_itemset_size must be at least 1".into()));
        }
        Ok(())
    }
}

/// Fraction of transactions whose itemset contains `itemset`.
pub fn support(itemset: &Itemset, db: &[Transaction]) -> Result<Ratio> {
    if db.is_empty() {
        return Err(Error::Domain("support over an empty database".into()));
    }
    let covering = db
        .iter()
        .filter(|t| itemset.is_subset_of(&t.itemset))
        .count();
    Ok(Ratio::new(covering as u64, db.len() as u64))
}

/// Among transactions containing `itemset`, the fraction carrying `class_label`.
pub fn confidence(itemset: &Itemset, class_label: &str, db: &[Transaction]) -> Result<Ratio> {
    let mut covering = 0u64;
    let mut matching = 0u64;
    for t in db {
        if itemset.is_subset_of(&t.itemset) {
            covering += 1;
            if t.class_label == class_label {
                matching += 1;
            }
        }
    }
    if covering == 0 {
        return Err(Error::UndefinedConfidence);
    }
    Ok(Ratio::new(matching, covering))
}

struct LevelEntry<'db> {
    itemset: Itemset,
    covering: usize,
    per_class: BTreeMap<&'db str, usize>,
}

fn count_candidates(db: &[Transaction], candidates: Vec<Itemset>) -> Vec<LevelEntry<'_>> {
    candidates
        .into_iter()
        .map(|itemset| {
            let mut covering = 0;
            let mut per_class: BTreeMap<&str, usize> = BTreeMap::new();
            for t in db {
                if itemset.is_subset_of(&t.itemset) {
                    covering += 1;
                    *per_class.entry(t.class_label.as_str()).or_insert(0) += 1;
                }
            }
            LevelEntry {
                itemset,
                covering,
                per_class,
            }
        })
        .collect()
}

// Standard level-wise join: two frequent k-itemsets sharing their first
// k - 1 items produce one (k+1)-candidate, which is kept only when all of
// its k-subsets are frequent (anti-monotonicity).
fn join_level(frequent: &[Itemset]) -> Vec<Itemset> {
    let known: BTreeSet<&Itemset> = frequent.iter().collect();
    let mut candidates = Vec::new();
    for i in 0..frequent.len() {
        for j in (i + 1)..frequent.len() {
            let a = frequent[i].items();
            let b = frequent[j].items();
            let k = a.len();
            if a[..k - 1] != b[..k - 1] {
                break; // sorted input: the shared-prefix block is contiguous
            }
            let mut items = a.to_vec();
            items.push(b[k - 1].clone());
            let candidate = Itemset::from_items(items);
            let all_subsets_frequent = (0..candidate.len()).all(|drop| {
                let subset = Itemset::from_items(
                    candidate
                        .items()
                        .iter()
                        .enumerate()
                        .filter(|(idx, _)| *idx != drop)
                        .map(|(_, item)| item.clone()),
                );
                known.contains(&subset)
            });
            if all_subsets_frequent {
                candidates.push(candidate);
            }
        }
    }
    candidates
}

/// Mines all class association rules: itemsets with support >= sigma
/// (computed class-agnostically) of size up to the cap, paired with every
/// class whose confidence reaches kappa. Each rule carries its exact
/// support and confidence.
pub fn apriori(db: &[Transaction], params: &MiningParams) -> Result<Vec<CAR>> {
    if db.is_empty() {
        return Err(Error::Domain("apriori over an empty database".into()));
    }
    params.validate()?;
    let total = db.len();
    let frequent_enough = |covering: usize| {
        (covering as f64 / total as f64) >= params.min_support
    };

    let classes: BTreeSet<&str> = db.iter().map(|t| t.class_label.as_str()).collect();
    let mut rules = Vec::new();

    let singletons: BTreeSet<&str> = db
        .iter()
        .flat_map(|t| t.itemset.items().iter().map(String::as_str))
        .collect();
    let mut candidates: Vec<Itemset> = singletons
        .into_iter()
        .map(|item| Itemset::from_items([item]))
        .collect();

    let mut size = 1;
    while !candidates.is_empty() && size <= params.max_itemset_size {
        let counted = count_candidates(db, candidates);
        let mut frequent: Vec<LevelEntry> = counted
            .into_iter()
            .filter(|e| frequent_enough(e.covering))
            .collect();
        frequent.sort_by(|a, b| a.itemset.cmp(&b.itemset));

        for entry in &frequent {
            if entry.covering == 0 {
                continue; // confidence undefined
            }
            for class in &classes {
                let matching = entry.per_class.get(class).copied().unwrap_or(0);
                let conf = Ratio::new(matching as u64, entry.covering as u64);
                if conf.to_f64() >= params.min_confidence {
                    rules.push(CAR {
                        itemset: entry.itemset.clone(),
                        class_label: (*class).to_string(),
                        support: Ratio::new(entry.covering as u64, total as u64),
                        confidence: conf,
                    });
                }
            }
        }

        if size == params.max_itemset_size {
            break;
        }
        let level: Vec<Itemset> = frequent.into_iter().map(|e| e.itemset).collect();
        candidates = join_level(&level);
        size += 1;
    }

    sort_rules(&mut rules);
    Ok(rules)
}

/// Everything a training run produces besides the rules themselves.
#[derive(Debug, Clone)]
pub struct TrainRun {
    pub rules: Vec<CAR>,
    /// Non-empty transactions that reached the miner.
    pub transaction_count: usize,
    /// Mean itemset size over non-empty pruned sentences, when any exist.
    pub avg_transaction_size: Option<f64>,
    /// Sentence-frequency table frozen for classification, tfidf only.
    pub tfidf: Option<TfidfTable>,
}

/// The training pipeline: forget documents, prune each sentence, apply
/// order-n hyperonymization, drop empty itemsets, and mine.
pub fn train_run(
    corpus: &Corpus,
    params: &MiningParams,
    strategy: &PruneStrategy,
    hyper_n: usize,
    lexicon: Option<&Lexicon>,
    hyper_pos: PosSelection,
) -> Result<TrainRun> {
    let sentences = corpus.forgetful();
    let (pruned, tfidf) = match strategy {
        PruneStrategy::Tfidf { n } => {
            let table = TfidfTable::build(sentences.iter().map(|(s, _)| *s));
            (
                pruning::prune_tfidf_with(&sentences, *n, &table),
                Some(table),
            )
        }
        PruneStrategy::Dependency(constraint) => {
            (pruning::prune_dependency(&sentences, constraint), None)
        }
    };
    let extended = if hyper_n > 0 {
        let lexicon = lexicon.ok_or(Error::MissingLexicon(hyper_n))?;
        wordnet::hyperonymize_corpus_with(lexicon, &pruned, hyper_n, hyper_pos)
    } else {
        pruned
    };

    let itemsets: Vec<&PrunedItemset> = extended.iter().map(|t| &t.itemset).collect();
    let avg_transaction_size = pruning::average_transaction_size(itemsets).ok();

    let transactions: Vec<Transaction> = extended
        .iter()
        .filter(|t| !t.itemset.is_empty())
        .map(|t| Transaction {
            itemset: Itemset::from_items(t.itemset.lemmas()),
            class_label: t.class_label.clone(),
        })
        .collect();
    if transactions.is_empty() {
        return Err(Error::Domain(
            "pruning left no non-empty transactions to mine".into(),
        ));
    }
    let rules = apriori(&transactions, params)?;
    Ok(TrainRun {
        rules,
        transaction_count: transactions.len(),
        avg_transaction_size,
        tfidf,
    })
}

/// Trains a rule set; the rules-only form of [`train_run`].
pub fn train(
    corpus: &Corpus,
    params: &MiningParams,
    strategy: &PruneStrategy,
    hyper_n: usize,
    lexicon: Option<&Lexicon>,
) -> Result<Vec<CAR>> {
    train_run(corpus, params, strategy, hyper_n, lexicon, PosSelection::default())
        .map(|run| run.rules)
}
