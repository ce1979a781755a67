//! Tenfold cross-validation on a synthetic corpus, printing per-class and
//! macro recall/precision/F plus the rule-count and quality diagnostics.
//!
//! ```bash
//! cargo run --example cross_validate
//! ```

use carmine::evaluation::{self, report_table};
use carmine::pruning::ConstraintId;
use carmine::synth;
use carmine::PruneStrategy;

fn main() -> carmine::Result<()> {
    let corpus = synth::marker_corpus(
        &[
            ("sports", "score"),
            ("economy", "trade"),
            ("politics", "vote"),
            ("crime", "steal"),
        ],
        25,
        42,
    );
    println!(
        "{} documents, {} classes",
        corpus.documents().len(),
        corpus.classes().len()
    );

    let strategy = PruneStrategy::Dependency(ConstraintId::HeadOnly);
    let report = evaluation::single_evaluate(&corpus, 0.05, 0.6, &strategy, 0, None, 42)?;

    print!("{}", report_table(&report));
    println!(
        "mean rule count {:.1}, {} folds, seed {}",
        report.rule_count,
        report.folds.len(),
        report.seed
    );
    for fold in report.folds.iter().take(3) {
        println!(
            "  fold {}: {} rules, mean variety {:.2}, mean dispersion {:.2}",
            fold.fold, fold.rule_count, fold.mean_variety, fold.mean_dispersion
        );
    }
    Ok(())
}
