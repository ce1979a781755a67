//! Tenfold cross-validation with per-class and macro metrics, plus the
//! rule-budget threshold search.
//!
//! The search procedure: a geometric ladder on minimum support (factor 1.5
//! from the initial value) brackets the rule-count window, bisection inside
//! the bracket lands in it, and a linear scan over minimum confidence
//! (step 0.02) then looks for a better macro F among in-window settings.
//! Rule counts are monotone non-increasing in both thresholds, which makes
//! the bracketing sound.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::classifier;
use crate::corpus::{Corpus, Document};
use crate::error::{Error, Result};
use crate::mining::MiningParams;
use crate::model;
use crate::pruning::PruneStrategy;
use crate::synth::shuffle;
use crate::wordnet::{Lexicon, PosSelection};

pub const DEFAULT_FOLDS: usize = 10;

/// Seeded shuffle of the document indices, then `k` contiguous, near-equal
/// parts (sizes differ by at most one).
pub fn partition(corpus: &Corpus, k: usize, seed: u64) -> Result<Vec<Vec<usize>>> {
    let n = corpus.documents().len();
    if k == 0 {
        return Err(Error::Config("fold count must be positive".into()));
    }
    if n < k {
        return Err(Error::Domain(format!(
            "cannot split {n} documents into {k} folds"
        )));
    }
    let mut order: Vec<usize> = (0..n).collect();
    shuffle(&mut order, seed);
    let base = n / k;
    let extra = n % k;
    let mut folds = Vec::with_capacity(k);
    let mut start = 0;
    for i in 0..k {
        let size = base + usize::from(i < extra);
        folds.push(order[start..start + size].to_vec());
        start += size;
    }
    assert_partition(&folds, n);
    Ok(folds)
}

// Disjointness and coverage are asserted on every run.
fn assert_partition(folds: &[Vec<usize>], n: usize) {
    let mut seen = vec![false; n];
    for fold in folds {
        for &idx in fold {
            assert!(!seen[idx], "folds overlap at document {idx}");
            seen[idx] = true;
        }
    }
    assert!(
        seen.iter().all(|&s| s),
        "folds do not cover every document"
    );
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassMetrics {
    pub recall: f64,
    pub precision: f64,
    pub f_measure: f64,
}

/// Per-class metrics within one fold. `precision_defined` is false when the
/// class was never predicted; the precision then counts as 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FoldClassMetrics {
    pub recall: f64,
    pub precision: f64,
    pub f_measure: f64,
    pub precision_defined: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FoldReport {
    pub fold: usize,
    pub rule_count: usize,
    /// Mean variety over the fold's test documents.
    pub mean_variety: f64,
    /// Mean dispersion over the fold's test documents.
    pub mean_dispersion: f64,
    pub avg_transaction_size: Option<f64>,
    /// `None` marks a class absent from this test fold; it is excluded
    /// from that class's fold average.
    pub per_class: BTreeMap<String, Option<FoldClassMetrics>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub min_support: f64,
    pub min_confidence: f64,
    pub seed: u64,
    pub per_class: BTreeMap<String, ClassMetrics>,
    pub macro_recall: f64,
    pub macro_precision: f64,
    pub macro_f: f64,
    /// Mean rule count over folds.
    pub rule_count: f64,
    pub mean_variety: f64,
    pub mean_dispersion: f64,
    pub avg_transaction_size: f64,
    pub notes: Vec<String>,
    pub folds: Vec<FoldReport>,
}

fn f_measure(recall: f64, precision: f64) -> f64 {
    if recall + precision > 0.0 {
        2.0 * recall * precision / (recall + precision)
    } else {
        0.0
    }
}

/// Tenfold cross-validation at fixed thresholds, with the default
/// itemset-size cap and POS selection.
pub fn single_evaluate(
    corpus: &Corpus,
    min_support: f64,
    min_confidence: f64,
    strategy: &PruneStrategy,
    hyper_n: usize,
    lexicon: Option<&Lexicon>,
    seed: u64,
) -> Result<EvalReport> {
    let params = MiningParams {
        min_support,
        min_confidence,
        ..MiningParams::default()
    };
    single_evaluate_with(
        corpus,
        &params,
        strategy,
        hyper_n,
        lexicon,
        PosSelection::default(),
        seed,
    )
}

pub fn single_evaluate_with(
    corpus: &Corpus,
    params: &MiningParams,
    strategy: &PruneStrategy,
    hyper_n: usize,
    lexicon: Option<&Lexicon>,
    hyper_pos: PosSelection,
    seed: u64,
) -> Result<EvalReport> {
    let folds = partition(corpus, DEFAULT_FOLDS, seed)?;
    let classes = corpus.classes();
    let documents = corpus.documents();
    let mut fold_reports = Vec::with_capacity(folds.len());
    let mut notes = Vec::new();

    for (fold_idx, test_fold) in folds.iter().enumerate() {
        let test_ids: BTreeSet<usize> = test_fold.iter().copied().collect();
        let training_docs: Vec<Document> = documents
            .iter()
            .enumerate()
            .filter(|(i, _)| !test_ids.contains(i))
            .map(|(_, d)| d.clone())
            .collect();
        // no test leakage: rules for this fold never see its documents
        for doc in &training_docs {
            assert!(
                !test_fold.iter().any(|&t| documents[t].id == doc.id),
                "test document leaked into the training split"
            );
        }
        let training = Corpus::new(training_docs)?;
        let model = model::train_model(&training, params, strategy, hyper_n, lexicon, hyper_pos)?;
        let ctx = model.prune_context(lexicon);

        let mut predictions: Vec<(usize, Option<String>)> = Vec::with_capacity(test_fold.len());
        let mut variety_sum = 0.0;
        let mut dispersion_sum = 0.0;
        for &doc_idx in test_fold {
            let result = classifier::classify(&model.rules, classes, &documents[doc_idx], &ctx)?;
            variety_sum += result.variety as f64;
            dispersion_sum += result.dispersion;
            predictions.push((doc_idx, result.predicted_class));
        }
        let test_count = test_fold.len().max(1);

        let mut per_class = BTreeMap::new();
        for class in classes {
            let actual: Vec<usize> = test_fold
                .iter()
                .copied()
                .filter(|&i| documents[i].class_label == *class)
                .collect();
            if actual.is_empty() {
                notes.push(format!(
                    "class {class:?} absent from test fold {fold_idx}; excluded from its average"
                ));
                per_class.insert(class.clone(), None);
                continue;
            }
            let predicted_as: Vec<&(usize, Option<String>)> = predictions
                .iter()
                .filter(|(_, p)| p.as_deref() == Some(class.as_str()))
                .collect();
            let correct = predicted_as
                .iter()
                .filter(|(i, _)| documents[*i].class_label == *class)
                .count();
            let recall = correct as f64 / actual.len() as f64;
            let (precision, precision_defined) = if predicted_as.is_empty() {
                notes.push(format!(
                    "class {class:?} never predicted in fold {fold_idx}; precision counted as 0"
                ));
                (0.0, false)
            } else {
                (correct as f64 / predicted_as.len() as f64, true)
            };
            per_class.insert(
                class.clone(),
                Some(FoldClassMetrics {
                    recall,
                    precision,
                    f_measure: f_measure(recall, precision),
                    precision_defined,
                }),
            );
        }

        fold_reports.push(FoldReport {
            fold: fold_idx,
            rule_count: model.rule_count(),
            mean_variety: variety_sum / test_count as f64,
            mean_dispersion: dispersion_sum / test_count as f64,
            avg_transaction_size: model.avg_transaction_size,
            per_class,
        });
    }

    // fold averages per class, then macro averages over classes
    let mut per_class = BTreeMap::new();
    for class in classes {
        let folds_with_class: Vec<&FoldClassMetrics> = fold_reports
            .iter()
            .filter_map(|f| f.per_class.get(class).and_then(Option::as_ref))
            .collect();
        let count = folds_with_class.len().max(1) as f64;
        let recall = folds_with_class.iter().map(|m| m.recall).sum::<f64>() / count;
        let precision = folds_with_class.iter().map(|m| m.precision).sum::<f64>() / count;
        let f = folds_with_class.iter().map(|m| m.f_measure).sum::<f64>() / count;
        per_class.insert(
            class.clone(),
            ClassMetrics {
                recall,
                precision,
                f_measure: f,
            },
        );
    }
    let class_count = classes.len().max(1) as f64;
    let macro_recall = per_class.values().map(|m| m.recall).sum::<f64>() / class_count;
    let macro_precision = per_class.values().map(|m| m.precision).sum::<f64>() / class_count;
    let macro_f = per_class.values().map(|m| m.f_measure).sum::<f64>() / class_count;

    let fold_count = fold_reports.len() as f64;
    let rule_count = fold_reports.iter().map(|f| f.rule_count as f64).sum::<f64>() / fold_count;
    let mean_variety = fold_reports.iter().map(|f| f.mean_variety).sum::<f64>() / fold_count;
    let mean_dispersion =
        fold_reports.iter().map(|f| f.mean_dispersion).sum::<f64>() / fold_count;
    let sized_folds: Vec<f64> = fold_reports
        .iter()
        .filter_map(|f| f.avg_transaction_size)
        .collect();
    let avg_transaction_size = if sized_folds.is_empty() {
        notes.push("no fold had non-empty transactions to size".into());
        0.0
    } else {
        sized_folds.iter().sum::<f64>() / sized_folds.len() as f64
    };

    Ok(EvalReport {
        min_support: params.min_support,
        min_confidence: params.min_confidence,
        seed,
        per_class,
        macro_recall,
        macro_precision,
        macro_f,
        rule_count,
        mean_variety,
        mean_dispersion,
        avg_transaction_size,
        notes,
        folds: fold_reports,
    })
}

/// Configuration of the rule-budget threshold search.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub initial_support: f64,
    pub initial_confidence: f64,
    /// Target mean rule count rho_0.
    pub target_rules: usize,
    /// Accepted window is `target_rules` plus or minus this.
    pub tolerance: usize,
    pub seed: u64,
    pub max_probes: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            initial_support: 0.01,
            initial_confidence: 0.5,
            target_rules: 1000,
            tolerance: 2,
            seed: 42,
            max_probes: 60,
        }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<()> {
        if self.target_rules == 0 {
            return Err(Error::Config("target_rules must be at least 1".into()));
        }
        if !(0.0..=1.0).contains(&self.initial_support)
            || !(0.0..=1.0).contains(&self.initial_confidence)
        {
            return Err(Error::Config(
                "initial thresholds must lie in [0, 1]".into(),
            ));
        }
        if self.max_probes == 0 {
            return Err(Error::Config("max_probes must be at least 1".into()));
        }
        Ok(())
    }
}

/// Result of the threshold search; `in_window` is false when no probed
/// setting reached the rule-count window and the closest probe was taken.
#[derive(Debug, Clone)]
pub struct SearchOutcome {
    pub min_support: f64,
    pub min_confidence: f64,
    pub in_window: bool,
    pub probes: usize,
    pub report: EvalReport,
}

struct Search<'a> {
    corpus: &'a Corpus,
    strategy: &'a PruneStrategy,
    hyper_n: usize,
    lexicon: Option<&'a Lexicon>,
    hyper_pos: PosSelection,
    max_itemset_size: usize,
    seed: u64,
    budget: usize,
    used: usize,
    probes: Vec<(f64, f64, EvalReport)>,
}

impl Search<'_> {
    /// Runs one evaluation if budget remains. A failing run (for example a
    /// support so high that nothing mines) consumes budget and returns None.
    fn probe(&mut self, sigma: f64, kappa: f64) -> Option<usize> {
        if self.used >= self.budget {
            return None;
        }
        self.used += 1;
        let params = MiningParams {
            min_support: sigma,
            min_confidence: kappa,
            max_itemset_size: self.max_itemset_size,
        };
        match single_evaluate_with(
            self.corpus,
            &params,
            self.strategy,
            self.hyper_n,
            self.lexicon,
            self.hyper_pos,
            self.seed,
        ) {
            Ok(report) => {
                self.probes.push((sigma, kappa, report));
                Some(self.probes.len() - 1)
            }
            Err(_) => None,
        }
    }

    fn rho(&self, idx: usize) -> f64 {
        self.probes[idx].2.rule_count
    }
}

const SIGMA_FLOOR: f64 = 1e-9;
const KAPPA_STEP: f64 = 0.02;

/// Finds thresholds whose mean rule count lands in the target window
/// with maximal macro F, returning just the threshold pair.
pub fn find_optimal(
    corpus: &Corpus,
    config: &SearchConfig,
    strategy: &PruneStrategy,
    hyper_n: usize,
    lexicon: Option<&Lexicon>,
) -> Result<(f64, f64)> {
    find_optimal_with(
        corpus,
        config,
        strategy,
        hyper_n,
        lexicon,
        PosSelection::default(),
        MiningParams::default().max_itemset_size,
    )
    .map(|o| (o.min_support, o.min_confidence))
}

pub fn find_optimal_with(
    corpus: &Corpus,
    config: &SearchConfig,
    strategy: &PruneStrategy,
    hyper_n: usize,
    lexicon: Option<&Lexicon>,
    hyper_pos: PosSelection,
    max_itemset_size: usize,
) -> Result<SearchOutcome> {
    config.validate()?;
    let lo = config.target_rules as f64 - config.tolerance as f64;
    let hi = config.target_rules as f64 + config.tolerance as f64;
    let in_window = |rho: f64| rho >= lo && rho <= hi;

    let mut search = Search {
        corpus,
        strategy,
        hyper_n,
        lexicon,
        hyper_pos,
        max_itemset_size,
        seed: config.seed,
        budget: config.max_probes,
        used: 0,
        probes: Vec::new(),
    };

    let kappa = config.initial_confidence;
    let mut window_sigma: Option<f64> = None;

    if let Some(first) = search.probe(config.initial_support, kappa) {
        if in_window(search.rho(first)) {
            window_sigma = Some(config.initial_support);
        } else {
            // geometric ladder toward the window; rho is non-increasing in sigma
            let rising = search.rho(first) > hi;
            let mut prev = (config.initial_support, search.rho(first));
            let mut bracket: Option<(f64, f64)> = None;
            loop {
                let next_sigma = if rising {
                    (prev.0 * 1.5).min(1.0)
                } else {
                    (prev.0 / 1.5).max(SIGMA_FLOOR)
                };
                if next_sigma == prev.0 {
                    break; // ladder hit its bound without reaching the window
                }
                let Some(idx) = search.probe(next_sigma, kappa) else {
                    break;
                };
                let rho = search.rho(idx);
                if in_window(rho) {
                    window_sigma = Some(next_sigma);
                    break;
                }
                let crossed = if rising { rho < lo } else { rho > hi };
                if crossed {
                    // the ladder stepped over the window; bisect inside
                    let (low_sigma, high_sigma) = if rising {
                        (prev.0, next_sigma)
                    } else {
                        (next_sigma, prev.0)
                    };
                    bracket = Some((low_sigma, high_sigma));
                    break;
                }
                prev = (next_sigma, rho);
            }
            if let Some((mut a, mut b)) = bracket {
                // invariant: rho(a) > hi, rho(b) < lo, rho non-increasing
                while b - a > 1e-12 {
                    let mid = (a + b) / 2.0;
                    let Some(idx) = search.probe(mid, kappa) else {
                        break;
                    };
                    let rho = search.rho(idx);
                    if in_window(rho) {
                        window_sigma = Some(mid);
                        break;
                    } else if rho > hi {
                        a = mid;
                    } else {
                        b = mid;
                    }
                }
            }
        }
    }

    // refine kappa around the in-window sigma, maximizing macro F
    if let Some(sigma) = window_sigma {
        for direction in [1.0, -1.0] {
            let mut step = 1;
            loop {
                let kappa_probe = config.initial_confidence + direction * step as f64 * KAPPA_STEP;
                if !(0.0..=1.0).contains(&kappa_probe) {
                    break;
                }
                let Some(idx) = search.probe(sigma, kappa_probe) else {
                    break;
                };
                if !in_window(search.rho(idx)) {
                    break; // rho is monotone in kappa too; no point going on
                }
                step += 1;
            }
        }
    }

    if search.probes.is_empty() {
        return Err(Error::SearchExhausted(search.used));
    }

    let winner = search
        .probes
        .iter()
        .enumerate()
        .filter(|(_, (_, _, r))| in_window(r.rule_count))
        .max_by(|(ia, (_, _, a)), (ib, (_, _, b))| {
            a.macro_f
                .total_cmp(&b.macro_f)
                .then(ib.cmp(ia)) // earlier probe wins ties
        });
    let (found, idx) = match winner {
        Some((idx, _)) => (true, idx),
        None => {
            let target = config.target_rules as f64;
            let (idx, _) = search
                .probes
                .iter()
                .enumerate()
                .min_by(|(ia, (_, _, a)), (ib, (_, _, b))| {
                    (a.rule_count - target)
                        .abs()
                        .total_cmp(&(b.rule_count - target).abs())
                        .then(ia.cmp(ib))
                })
                .expect("probes non-empty");
            (false, idx)
        }
    };
    let (sigma, kappa, report) = search.probes[idx].clone();
    Ok(SearchOutcome {
        min_support: sigma,
        min_confidence: kappa,
        in_window: found,
        probes: search.used,
        report,
    })
}

/// Threshold search followed by a full evaluation at the found thresholds.
pub fn evaluate(
    corpus: &Corpus,
    config: &SearchConfig,
    strategy: &PruneStrategy,
    hyper_n: usize,
    lexicon: Option<&Lexicon>,
) -> Result<EvalReport> {
    evaluate_with(
        corpus,
        config,
        strategy,
        hyper_n,
        lexicon,
        PosSelection::default(),
        MiningParams::default().max_itemset_size,
    )
}

pub fn evaluate_with(
    corpus: &Corpus,
    config: &SearchConfig,
    strategy: &PruneStrategy,
    hyper_n: usize,
    lexicon: Option<&Lexicon>,
    hyper_pos: PosSelection,
    max_itemset_size: usize,
) -> Result<EvalReport> {
    let outcome = find_optimal_with(
        corpus,
        config,
        strategy,
        hyper_n,
        lexicon,
        hyper_pos,
        max_itemset_size,
    )?;
    let params = MiningParams {
        min_support: outcome.min_support,
        min_confidence: outcome.min_confidence,
        max_itemset_size,
    };
    let mut report = single_evaluate_with(
        corpus,
        &params,
        strategy,
        hyper_n,
        lexicon,
        hyper_pos,
        config.seed,
    )?;
    if !outcome.in_window {
        report.notes.push(format!(
            "rule budget missed: mean rule count {:.1} vs target {} ± {}",
            report.rule_count, config.target_rules, config.tolerance
        ));
    }
    Ok(report)
}

/// Axis of a curve sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepAxis {
    /// Vary the tfidf word budget N; the strategy becomes `tfidf:N=x`.
    TfidfN,
    /// Vary the hyperonymization order with the strategy unchanged.
    HyperOrder,
}

impl std::str::FromStr for SweepAxis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "tfidf_n" => Ok(SweepAxis::TfidfN),
            "hyper_order" => Ok(SweepAxis::HyperOrder),
            other => Err(Error::Config(format!(
                "unknown sweep axis {other:?} (use tfidf_n or hyper_order)"
            ))),
        }
    }
}

/// One row of a sweep curve: the axis value and the headline metrics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub x: usize,
    pub macro_recall: f64,
    pub macro_precision: f64,
    pub macro_f: f64,
    pub mean_variety: f64,
    pub mean_dispersion: f64,
}

/// Reruns `evaluate` for each axis value and collects one curve row each.
#[allow(clippy::too_many_arguments)]
pub fn sweep_curve(
    corpus: &Corpus,
    config: &SearchConfig,
    strategy: &PruneStrategy,
    hyper_n: usize,
    lexicon: Option<&Lexicon>,
    hyper_pos: PosSelection,
    max_itemset_size: usize,
    axis: SweepAxis,
    range: std::ops::RangeInclusive<usize>,
) -> Result<Vec<CurvePoint>> {
    let mut points = Vec::new();
    for x in range {
        let (strategy_x, hyper_x) = match axis {
            SweepAxis::TfidfN => {
                if x == 0 {
                    return Err(Error::Config("tfidf N must be at least 1".into()));
                }
                (PruneStrategy::Tfidf { n: x }, hyper_n)
            }
            SweepAxis::HyperOrder => (strategy.clone(), x),
        };
        let report = evaluate_with(
            corpus,
            config,
            &strategy_x,
            hyper_x,
            lexicon,
            hyper_pos,
            max_itemset_size,
        )?;
        points.push(CurvePoint {
            x,
            macro_recall: report.macro_recall,
            macro_precision: report.macro_precision,
            macro_f: report.macro_f,
            mean_variety: report.mean_variety,
            mean_dispersion: report.mean_dispersion,
        });
    }
    Ok(points)
}

/// Renders the report as the tabular TSV form: metric rows by class
/// columns plus AVG, then a parameter footer line.
pub fn report_table(report: &EvalReport) -> String {
    use std::fmt::Write as _;
    let mut out = String::new();
    let classes: Vec<&String> = report.per_class.keys().collect();
    for class in &classes {
        write!(out, "\t{class}").unwrap();
    }
    out.push_str("\tAVG\n");
    for (label, avg) in [
        ("Recall", report.macro_recall),
        ("Precision", report.macro_precision),
        ("F-measure", report.macro_f),
    ] {
        out.push_str(label);
        for class in &classes {
            let metrics = &report.per_class[*class];
            let value = match label {
                "Recall" => metrics.recall,
                "Precision" => metrics.precision,
                _ => metrics.f_measure,
            };
            write!(out, "\t{:.2}", value * 100.0).unwrap();
        }
        writeln!(out, "\t{:.2}", avg * 100.0).unwrap();
    }
    writeln!(
        out,
        "MinSupp={:.3}, MinConf={:.1}, Var.={:.2}, Disp.={:.2}, AvgTransSize={:.2}",
        report.min_support,
        report.min_confidence * 100.0,
        report.mean_variety,
        report.mean_dispersion,
        report.avg_transaction_size
    )
    .unwrap();
    out
}
