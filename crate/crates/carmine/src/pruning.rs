//! Sentence pruning: tf-idf rank selection and morphosyntactic constraints.
//!
//! Both pruners turn a lemmatized, dependency-parsed sentence into a small
//! set of items. Items are lemmas; the POS tag of the originating token is
//! carried along as metadata so that hyperonymization can later restrict
//! itself to nouns and verbs, but it does not distinguish items.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::corpus::Sentence;
use crate::error::{Error, Result};

/// A lemma kept by pruning, with the POS tag of the token it came from.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct PrunedItem {
    pub lemma: String,
    pub pos: String,
}

/// Duplicate-free set of pruned items, sorted by lemma.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PrunedItemset {
    items: Vec<PrunedItem>,
}

impl PrunedItemset {
    /// Sorts by (lemma, pos) and keeps the first item of each lemma.
    pub fn from_items(mut items: Vec<PrunedItem>) -> Self {
        items.sort();
        items.dedup_by(|a, b| a.lemma == b.lemma);
        PrunedItemset { items }
    }

    pub fn items(&self) -> &[PrunedItem] {
        &self.items
    }

    pub fn lemmas(&self) -> impl Iterator<Item = &str> {
        self.items.iter().map(|i| i.lemma.as_str())
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }
}

/// A pruned sentence together with the class it inherited from its document.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrunedTransaction {
    pub itemset: PrunedItemset,
    pub class_label: String,
}

/// Named morphosyntactic constraints, plus a custom form over direct
/// dependents of the root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConstraintId {
    /// Keep only the root of the sentence.
    HeadOnly,
    /// Keep words attached to the root by an `nsubj` dependency.
    NsubjOfHead,
    /// Keep words attached to the root by a `ccomp` dependency.
    CcompOfHead,
    /// Keep nouns (POS starting with `N`) at distance 1 from the root.
    NounsDist1,
    /// Keep verbs (POS starting with `V`) at distance 1 from the root.
    VerbsDist1,
    /// Keep direct dependents of the root filtered by label set and/or POS
    /// prefix, optionally plus the root itself. At least one of the three
    /// parts must be given. With `include_head` alone this equals `HeadOnly`.
    Custom {
        dep_labels: BTreeSet<String>,
        pos_prefix: Option<String>,
        include_head: bool,
    },
}

impl ConstraintId {
    /// Evaluates the constraint on the token at `index` (0-based).
    pub fn matches(&self, sentence: &Sentence, index: usize) -> bool {
        let t = &sentence.tokens[index];
        let is_root = t.head == 0;
        let at_dist1 = t.head == sentence.root_position();
        match self {
            ConstraintId::HeadOnly => is_root,
            ConstraintId::NsubjOfHead => at_dist1 && t.dep_label == "nsubj",
            ConstraintId::CcompOfHead => at_dist1 && t.dep_label == "ccomp",
            ConstraintId::NounsDist1 => at_dist1 && t.pos.starts_with('N'),
            ConstraintId::VerbsDist1 => at_dist1 && t.pos.starts_with('V'),
            ConstraintId::Custom {
                dep_labels,
                pos_prefix,
                include_head,
            } => {
                if is_root {
                    return *include_head;
                }
                if dep_labels.is_empty() && pos_prefix.is_none() {
                    return false;
                }
                at_dist1
                    && (dep_labels.is_empty() || dep_labels.contains(t.dep_label.as_str()))
                    && pos_prefix
                        .as_deref()
                        .is_none_or(|p| t.pos.starts_with(p))
            }
        }
    }

    fn validate(&self) -> Result<()> {
        if let ConstraintId::Custom {
            dep_labels,
            pos_prefix,
            include_head,
        } = self
        {
            if dep_labels.is_empty() && pos_prefix.is_none() && !include_head {
                return Err(Error::Config(
                    "custom constraint needs at least one of labels, pos or head".into(),
                ));
            }
        }
        Ok(())
    }
}

/// How a sentence is reduced to an itemset before mining.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum PruneStrategy {
    /// Keep the N highest-scoring lemmas of each sentence by tf-idf rank.
    Tfidf { n: usize },
    /// Keep the lemmas satisfying a morphosyntactic constraint.
    Dependency(ConstraintId),
}

impl fmt::Display for PruneStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PruneStrategy::Tfidf { n } => write!(f, "tfidf:N={n}"),
            PruneStrategy::Dependency(c) => match c {
                ConstraintId::HeadOnly => write!(f, "dep:I0"),
                ConstraintId::NsubjOfHead => write!(f, "dep:I1"),
                ConstraintId::CcompOfHead => write!(f, "dep:I1'"),
                ConstraintId::NounsDist1 => write!(f, "dep:I2"),
                ConstraintId::VerbsDist1 => write!(f, "dep:I2'"),
                ConstraintId::Custom {
                    dep_labels,
                    pos_prefix,
                    include_head,
                } => {
                    write!(f, "dep:custom(")?;
                    let mut sep = "";
                    if !dep_labels.is_empty() {
                        let labels: Vec<&str> = dep_labels.iter().map(String::as_str).collect();
                        write!(f, "labels={}", labels.join("|"))?;
                        sep = ",";
                    }
                    if let Some(p) = pos_prefix {
                        write!(f, "{sep}pos={p}")?;
                        sep = ",";
                    }
                    write!(f, "{sep}head={include_head})")
                }
            },
        }
    }
}

impl FromStr for PruneStrategy {
    type Err = Error;

    /// Accepts `tfidf:N=<n>`, `dep:I0|I1|I1'|I2|I2'`, and
    /// `dep:custom(labels=a|b,pos=N,head=true)`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = |msg: String| Error::Config(msg);
        if let Some(rest) = s.strip_prefix("tfidf:") {
            let n = rest
                .strip_prefix("N=")
                .ok_or_else(|| bad(format!("expected tfidf:N=<n>, got {s:?}")))?
                .parse::<usize>()
                .map_err(|_| bad(format!("invalid tfidf N in {s:?}")))?;
            if n == 0 {
                return Err(bad("tfidf N must be at least 1".into()));
            }
            return Ok(PruneStrategy::Tfidf { n });
        }
        let Some(rest) = s.strip_prefix("dep:") else {
            return Err(bad(format!(
                "unknown strategy {s:?}; expected tfidf:N=<n> or dep:<constraint>"
            )));
        };
        let constraint = match rest {
            "I0" | "i0" => ConstraintId::HeadOnly,
            "I1" | "i1" => ConstraintId::NsubjOfHead,
            "I1'" | "i1'" => ConstraintId::CcompOfHead,
            "I2" | "i2" => ConstraintId::NounsDist1,
            "I2'" | "i2'" => ConstraintId::VerbsDist1,
            other => {
                let inner = other
                    .strip_prefix("custom(")
                    .and_then(|r| r.strip_suffix(')'))
                    .ok_or_else(|| bad(format!("unknown dependency constraint {other:?}")))?;
                let mut dep_labels = BTreeSet::new();
                let mut pos_prefix = None;
                let mut include_head = false;
                for part in inner.split(',').filter(|p| !p.is_empty()) {
                    let (key, value) = part
                        .split_once('=')
                        .ok_or_else(|| bad(format!("expected key=value in {part:?}")))?;
                    match key.trim() {
                        "labels" => {
                            dep_labels = value
                                .split('|')
                                .filter(|l| !l.is_empty())
                                .map(str::to_string)
                                .collect();
                        }
                        "pos" => pos_prefix = Some(value.to_string()),
                        "head" => {
                            include_head = value
                                .parse::<bool>()
                                .map_err(|_| bad(format!("invalid head flag {value:?}")))?;
                        }
                        other => return Err(bad(format!("unknown custom key {other:?}"))),
                    }
                }
                ConstraintId::Custom {
                    dep_labels,
                    pos_prefix,
                    include_head,
                }
            }
        };
        if let ConstraintId::Custom { .. } = &constraint {
            constraint.validate()?;
        }
        Ok(PruneStrategy::Dependency(constraint))
    }
}

impl From<PruneStrategy> for String {
    fn from(s: PruneStrategy) -> String {
        s.to_string()
    }
}

impl TryFrom<String> for PruneStrategy {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

/// Sentence-frequency statistics for tf-idf scoring. Built once over the
/// training sentences and reused read-only, including at classification
/// time where the training statistics stay frozen.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TfidfTable {
    total_sentences: usize,
    sentence_freq: BTreeMap<String, usize>,
}

impl TfidfTable {
    pub fn build<'a>(sentences: impl IntoIterator<Item = &'a Sentence>) -> Self {
        let mut total = 0;
        let mut freq: BTreeMap<String, usize> = BTreeMap::new();
        for sentence in sentences {
            total += 1;
            let distinct: BTreeSet<&str> =
                sentence.tokens.iter().map(|t| t.lemma.as_str()).collect();
            for lemma in distinct {
                *freq.entry(lemma.to_string()).or_insert(0) += 1;
            }
        }
        TfidfTable {
            total_sentences: total,
            sentence_freq: freq,
        }
    }

    pub fn total_sentences(&self) -> usize {
        self.total_sentences
    }

    pub fn sentence_frequency(&self, lemma: &str) -> usize {
        self.sentence_freq.get(lemma).copied().unwrap_or(0)
    }

    /// tf-idf of `lemma` within `sentence`: in-sentence count times the
    /// natural log of total sentences over sentences containing the lemma.
    /// Lemmas unseen when the table was built fall back to a sentence
    /// frequency of 1, which ranks them like the rarest seen lemmas.
    pub fn score(&self, sentence: &Sentence, lemma: &str) -> Result<f64> {
        let tf = sentence.tokens.iter().filter(|t| t.lemma == lemma).count();
        if tf == 0 {
            return Err(Error::Domain(format!(
                "lemma {:?} does not occur in sentence {:?}",
                lemma, sentence.id
            )));
        }
        let df = self.sentence_frequency(lemma).max(1);
        Ok(tf as f64 * (self.total_sentences as f64 / df as f64).ln())
    }
}

/// tf-idf score of `lemma` in `s`, with sentence frequencies taken over
/// the full sentence set; builds the frequency table ad hoc.
pub fn tfidf_score(sentences: &[(&Sentence, &str)], s: &Sentence, lemma: &str) -> Result<f64> {
    TfidfTable::build(sentences.iter().map(|(sentence, _)| *sentence)).score(s, lemma)
}

/// Keeps the `n` distinct lemmas of `sentence` with the highest tf-idf
/// scores. Ties are broken by the earliest token position in the sentence.
pub fn prune_sentence_tfidf(sentence: &Sentence, n: usize, table: &TfidfTable) -> PrunedItemset {
    // first occurrence position and POS per distinct lemma
    let mut order: Vec<(&str, &str, usize)> = Vec::new();
    for (i, t) in sentence.tokens.iter().enumerate() {
        if !order.iter().any(|(lemma, _, _)| *lemma == t.lemma) {
            order.push((t.lemma.as_str(), t.pos.as_str(), i));
        }
    }
    let mut scored: Vec<(f64, usize, &str, &str)> = order
        .into_iter()
        .map(|(lemma, pos, first)| {
            let score = table.score(sentence, lemma).expect("lemma occurs");
            (score, first, lemma, pos)
        })
        .collect();
    scored.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
    PrunedItemset::from_items(
        scored
            .into_iter()
            .take(n)
            .map(|(_, _, lemma, pos)| PrunedItem {
                lemma: lemma.to_string(),
                pos: pos.to_string(),
            })
            .collect(),
    )
}

/// Tf-idf pruning over a sentence set, with frequencies computed from that
/// same set.
pub fn prune_tfidf(sentences: &[(&Sentence, &str)], n: usize) -> Vec<PrunedTransaction> {
    let table = TfidfTable::build(sentences.iter().map(|(s, _)| *s));
    prune_tfidf_with(sentences, n, &table)
}

/// Tf-idf pruning against an existing (typically frozen) frequency table.
pub fn prune_tfidf_with(
    sentences: &[(&Sentence, &str)],
    n: usize,
    table: &TfidfTable,
) -> Vec<PrunedTransaction> {
    sentences
        .iter()
        .map(|(sentence, class)| PrunedTransaction {
            itemset: prune_sentence_tfidf(sentence, n, table),
            class_label: (*class).to_string(),
        })
        .collect()
}

/// Keeps the lemmas of the tokens satisfying `constraint`.
pub fn prune_sentence_dependency(sentence: &Sentence, constraint: &ConstraintId) -> PrunedItemset {
    let items = (0..sentence.tokens.len())
        .filter(|&i| constraint.matches(sentence, i))
        .map(|i| {
            let t = &sentence.tokens[i];
            PrunedItem {
                lemma: t.lemma.clone(),
                pos: t.pos.clone(),
            }
        })
        .collect();
    PrunedItemset::from_items(items)
}

/// Dependency pruning over a sentence set. Sentences where no word satisfies
/// the constraint yield an empty itemset; the mining pipeline drops those
/// before building transactions.
pub fn prune_dependency(
    sentences: &[(&Sentence, &str)],
    constraint: &ConstraintId,
) -> Vec<PrunedTransaction> {
    sentences
        .iter()
        .map(|(sentence, class)| PrunedTransaction {
            itemset: prune_sentence_dependency(sentence, constraint),
            class_label: (*class).to_string(),
        })
        .collect()
}

/// Arithmetic mean of itemset cardinalities over the non-empty itemsets.
pub fn average_transaction_size<'a>(
    itemsets: impl IntoIterator<Item = &'a PrunedItemset>,
) -> Result<f64> {
    let mut count = 0usize;
    let mut total = 0usize;
    let mut any = false;
    for itemset in itemsets {
        any = true;
        if !itemset.is_empty() {
            count += 1;
            total += itemset.len();
        }
    }
    if !any {
        return Err(Error::Domain(
            "average transaction size of an empty list".into(),
        ));
    }
    if count == 0 {
        return Err(Error::Domain(
            "average transaction size: all itemsets are empty".into(),
        ));
    }
    Ok(total as f64 / count as f64)
}

/// Fraction of sentences in which at least one token satisfies the constraint.
pub fn constraint_coverage<'a>(
    sentences: impl IntoIterator<Item = &'a Sentence>,
    constraint: &ConstraintId,
) -> f64 {
    let mut total = 0usize;
    let mut covered = 0usize;
    for sentence in sentences {
        total += 1;
        if (0..sentence.tokens.len()).any(|i| constraint.matches(sentence, i)) {
            covered += 1;
        }
    }
    if total == 0 {
        0.0
    } else {
        covered as f64 / total as f64
    }
}

/// Dependency labels referenced by a custom constraint that never occur in
/// the given sentences. Worth a warning, never a failure.
pub fn unknown_constraint_labels<'a>(
    constraint: &ConstraintId,
    sentences: impl IntoIterator<Item = &'a Sentence>,
) -> Vec<String> {
    let ConstraintId::Custom { dep_labels, .. } = constraint else {
        return Vec::new();
    };
    let mut seen: BTreeSet<&str> = BTreeSet::new();
    for sentence in sentences {
        for t in &sentence.tokens {
            seen.insert(t.dep_label.as_str());
        }
    }
    dep_labels
        .iter()
        .filter(|l| !seen.contains(l.as_str()))
        .cloned()
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::Corpus;

    fn john_gives() -> Corpus {
        let text = "\
# newdoc id = d1
# class = GSPO
# sent_id = d1-s1
1\tJohn\tJohn\tNP\t2\tnsubj
2\tgives\tgive\tVVZ\t0\troot
3\tMary\tMary\tNP\t2\tiobj
4\tan\tan\tDT\t5\tdet
5\tapple\tapple\tNN\t2\tdobj
";
        Corpus::parse(text, "test").unwrap()
    }

    fn lemmas(itemset: &PrunedItemset) -> Vec<&str> {
        itemset.lemmas().collect()
    }

    #[test]
    fn head_only_keeps_the_lemmatized_root() {
        let corpus = john_gives();
        let pruned = prune_dependency(&corpus.forgetful(), &ConstraintId::HeadOnly);
        assert_eq!(lemmas(&pruned[0].itemset), vec!["give"]);
        assert_eq!(pruned[0].class_label, "GSPO");
    }

    #[test]
    fn nsubj_of_head_keeps_the_subject() {
        let corpus = john_gives();
        let pruned = prune_dependency(&corpus.forgetful(), &ConstraintId::NsubjOfHead);
        assert_eq!(lemmas(&pruned[0].itemset), vec!["John"]);
    }

    #[test]
    fn nouns_dist1_keeps_nominal_dependents_of_the_root() {
        let corpus = john_gives();
        let pruned = prune_dependency(&corpus.forgetful(), &ConstraintId::NounsDist1);
        assert_eq!(lemmas(&pruned[0].itemset), vec!["John", "Mary", "apple"]);
    }

    #[test]
    fn several_nsubj_edges_all_survive() {
        // coordination can hang more than one nsubj off the root
        let text = "\
# newdoc id = d1
# class = A
# sent_id = s1
1\tJohn\tJohn\tNP\t3\tnsubj
2\tMary\tMary\tNP\t3\tnsubj
3\tsing\tsing\tVVP\t0\troot
";
        let corpus = Corpus::parse(text, "test").unwrap();
        let pruned = prune_dependency(&corpus.forgetful(), &ConstraintId::NsubjOfHead);
        assert_eq!(lemmas(&pruned[0].itemset), vec!["John", "Mary"]);
    }

    #[test]
    fn ccomp_yields_empty_itemset_here() {
        let corpus = john_gives();
        let pruned = prune_dependency(&corpus.forgetful(), &ConstraintId::CcompOfHead);
        assert!(pruned[0].itemset.is_empty());
    }

    #[test]
    fn custom_constraints_subsume_the_named_ones() {
        let corpus = john_gives();
        let pairs = corpus.forgetful();
        let as_nsubj = ConstraintId::Custom {
            dep_labels: ["nsubj".to_string()].into(),
            pos_prefix: None,
            include_head: false,
        };
        assert_eq!(
            prune_dependency(&pairs, &as_nsubj),
            prune_dependency(&pairs, &ConstraintId::NsubjOfHead)
        );
        let as_nouns = ConstraintId::Custom {
            dep_labels: BTreeSet::new(),
            pos_prefix: Some("N".to_string()),
            include_head: false,
        };
        assert_eq!(
            prune_dependency(&pairs, &as_nouns),
            prune_dependency(&pairs, &ConstraintId::NounsDist1)
        );
        let as_head = ConstraintId::Custom {
            dep_labels: BTreeSet::new(),
            pos_prefix: None,
            include_head: true,
        };
        assert_eq!(
            prune_dependency(&pairs, &as_head),
            prune_dependency(&pairs, &ConstraintId::HeadOnly)
        );
    }

    #[test]
    fn phi_soundness_on_pruned_output() {
        let corpus = john_gives();
        for constraint in [
            ConstraintId::HeadOnly,
            ConstraintId::NsubjOfHead,
            ConstraintId::NounsDist1,
            ConstraintId::VerbsDist1,
        ] {
            for (sentence, _) in corpus.forgetful() {
                let itemset = prune_sentence_dependency(sentence, &constraint);
                for item in itemset.items() {
                    let satisfied = (0..sentence.tokens.len()).any(|i| {
                        sentence.tokens[i].lemma == item.lemma
                            && constraint.matches(sentence, i)
                    });
                    assert!(satisfied, "{constraint:?} kept {:?}", item.lemma);
                }
            }
        }
    }

    fn four_sentence_corpus() -> Corpus {
        // d1: "cat cat sits", "dog sits"; d2: "bird sings", "cat sings"
        let text = "\
# newdoc id = d1
# class = A
# sent_id = s1
1\tcat\tcat\tNN\t3\tnsubj
2\tcat\tcat\tNN\t3\tnsubj
3\tsits\tsit\tVVZ\t0\troot

# sent_id = s2
1\tdog\tdog\tNN\t2\tnsubj
2\tsits\tsit\tVVZ\t0\troot

# newdoc id = d2
# class = B
# sent_id = s3
1\tbird\tbird\tNN\t2\tnsubj
2\tsings\tsing\tVVZ\t0\troot

# sent_id = s4
1\tcat\tcat\tNN\t2\tnsubj
2\tsings\tsing\tVVZ\t0\troot
";
        Corpus::parse(text, "test").unwrap()
    }

    #[test]
    fn tfidf_score_matches_hand_count() {
        let corpus = four_sentence_corpus();
        let pairs = corpus.forgetful();
        // "dog" appears twice in no sentence; in s2 once, df("dog") = 1 -> 1 * ln(4)
        let s2 = pairs[1].0;
        let got = tfidf_score(&pairs, s2, "dog").unwrap();
        assert!((got - 4.0f64.ln()).abs() < 1e-12);
        // "cat" appears twice within s1 and in 2 sentences overall -> 2 * ln(4/2)
        let s1 = pairs[0].0;
        let got = tfidf_score(&pairs, s1, "cat").unwrap();
        assert!((got - 2.0 * 2.0f64.ln()).abs() < 1e-12);
        // a lemma present in every sentence would score 0; "sit" is in 2 of 4
        let got = tfidf_score(&pairs, s1, "sit").unwrap();
        assert!((got - 2.0f64.ln()).abs() < 1e-12);
        assert!(tfidf_score(&pairs, s1, "bird").is_err());

        // twice within one sentence, once corpus-wide: 2 * ln(4)
        let text = "\
# newdoc id = d1
# class = A
# sent_id = t1
1\tdogs\tdog\tNNS\t3\tnsubj
2\tdogs\tdog\tNNS\t3\tnsubj
3\tbark\tbark\tVVP\t0\troot

# sent_id = t2
1\tbark\tbark\tVVP\t0\troot

# sent_id = t3
1\tbark\tbark\tVVP\t0\troot

# sent_id = t4
1\tbark\tbark\tVVP\t0\troot
";
        let corpus = Corpus::parse(text, "test").unwrap();
        let pairs = corpus.forgetful();
        let got = tfidf_score(&pairs, pairs[0].0, "dog").unwrap();
        assert!((got - 2.0 * 4.0f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn tfidf_score_zero_when_lemma_is_everywhere() {
        let text = "\
# newdoc id = d1
# class = A
# sent_id = s1
1\tthe\tthe\tDT\t2\tdet
2\tend\tend\tNN\t0\troot

# sent_id = s2
1\tthe\tthe\tDT\t2\tdet
2\tstart\tstart\tNN\t0\troot
";
        let corpus = Corpus::parse(text, "test").unwrap();
        let pairs = corpus.forgetful();
        let got = tfidf_score(&pairs, pairs[0].0, "the").unwrap();
        assert_eq!(got, 0.0);
    }

    #[test]
    fn rarer_lemma_scores_strictly_higher() {
        let corpus = four_sentence_corpus();
        let pairs = corpus.forgetful();
        let s4 = pairs[3].0; // "cat sings": cat df=2, sing df=2... use s3 instead
        let s3 = pairs[2].0; // "bird sings": bird df=1, sing df=2
        let bird = tfidf_score(&pairs, s3, "bird").unwrap();
        let sing = tfidf_score(&pairs, s3, "sing").unwrap();
        assert!(bird > sing);
        let _ = s4;
    }

    #[test]
    fn prune_tfidf_top1_matches_brute_force_sort() {
        let corpus = four_sentence_corpus();
        let pairs = corpus.forgetful();
        let pruned = prune_tfidf(&pairs, 1);
        for ((sentence, _), transaction) in pairs.iter().zip(&pruned) {
            // brute force: score every distinct lemma, full sort, take the top
            let mut scored: Vec<(String, f64, usize)> = Vec::new();
            for (i, t) in sentence.tokens.iter().enumerate() {
                if !scored.iter().any(|(l, _, _)| *l == t.lemma) {
                    let score = tfidf_score(&pairs, sentence, &t.lemma).unwrap();
                    scored.push((t.lemma.clone(), score, i));
                }
            }
            scored.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.2.cmp(&b.2)));
            assert_eq!(lemmas(&transaction.itemset), vec![scored[0].0.as_str()]);
        }
    }

    #[test]
    fn prune_tfidf_large_n_keeps_all_distinct_lemmas() {
        let corpus = four_sentence_corpus();
        let pairs = corpus.forgetful();
        let pruned = prune_tfidf(&pairs, 50);
        let s1 = &pruned[0];
        assert_eq!(lemmas(&s1.itemset), vec!["cat", "sit"]);
    }

    #[test]
    fn tfidf_tie_breaks_by_earliest_position() {
        // two lemmas with identical tf and df compete for the single slot
        let text = "\
# newdoc id = d1
# class = A
# sent_id = s1
1\talpha\talpha\tNN\t3\tnsubj
2\tbeta\tbeta\tNN\t3\tdobj
3\truns\trun\tVVZ\t0\troot

# sent_id = s2
1\truns\trun\tVVZ\t0\troot
";
        let corpus = Corpus::parse(text, "test").unwrap();
        let pairs = corpus.forgetful();
        let pruned = prune_tfidf(&pairs, 1);
        assert_eq!(lemmas(&pruned[0].itemset), vec!["alpha"]);
    }

    #[test]
    fn output_cardinality_bounded_by_n() {
        let corpus = four_sentence_corpus();
        let pairs = corpus.forgetful();
        for n in 1..4 {
            for t in prune_tfidf(&pairs, n) {
                assert!(t.itemset.len() <= n);
            }
        }
    }

    #[test]
    fn average_size_conventions() {
        let single = |lemma: &str| {
            PrunedItemset::from_items(vec![PrunedItem {
                lemma: lemma.into(),
                pos: "NN".into(),
            }])
        };
        let pair = PrunedItemset::from_items(vec![
            PrunedItem {
                lemma: "a".into(),
                pos: "NN".into(),
            },
            PrunedItem {
                lemma: "b".into(),
                pos: "NN".into(),
            },
        ]);
        let singletons = vec![single("a"), single("b"), single("c")];
        assert_eq!(average_transaction_size(&singletons).unwrap(), 1.0);

        let sets = vec![single("a"), single("b"), single("c"), single("d"), pair];
        assert!((average_transaction_size(&sets).unwrap() - 1.2).abs() < 1e-12);

        let with_empty = vec![single("a"), PrunedItemset::default(), single("b")];
        assert_eq!(average_transaction_size(&with_empty).unwrap(), 1.0);

        assert!(average_transaction_size(&[]).is_err());
        assert!(average_transaction_size(&[PrunedItemset::default()]).is_err());
    }

    #[test]
    fn strategy_strings_round_trip() {
        for s in [
            "tfidf:N=10",
            "dep:I0",
            "dep:I1",
            "dep:I1'",
            "dep:I2",
            "dep:I2'",
            "dep:custom(labels=dobj|nsubj,pos=N,head=false)",
            "dep:custom(head=true)",
        ] {
            let parsed: PruneStrategy = s.parse().unwrap();
            assert_eq!(parsed.to_string(), s);
            let reparsed: PruneStrategy = parsed.to_string().parse().unwrap();
            assert_eq!(parsed, reparsed);
        }
        assert!("tfidf:N=0".parse::<PruneStrategy>().is_err());
        assert!("dep:custom()".parse::<PruneStrategy>().is_err());
        assert!("bogus".parse::<PruneStrategy>().is_err());
    }

    #[test]
    fn coverage_counts_sentences_with_a_match() {
        let corpus = four_sentence_corpus();
        let sentences: Vec<&Sentence> = corpus.forgetful().iter().map(|(s, _)| *s).collect();
        let cov = constraint_coverage(sentences.iter().copied(), &ConstraintId::NsubjOfHead);
        assert_eq!(cov, 1.0);
        let cov = constraint_coverage(sentences.iter().copied(), &ConstraintId::CcompOfHead);
        assert_eq!(cov, 0.0);
    }

    #[test]
    fn unknown_labels_are_reported() {
        let corpus = john_gives();
        let sentences: Vec<&Sentence> = corpus.forgetful().iter().map(|(s, _)| *s).collect();
        let constraint = ConstraintId::Custom {
            dep_labels: ["nsubj".to_string(), "xcomp".to_string()].into(),
            pos_prefix: None,
            include_head: false,
        };
        assert_eq!(
            unknown_constraint_labels(&constraint, sentences.iter().copied()),
            vec!["xcomp".to_string()]
        );
    }
}
