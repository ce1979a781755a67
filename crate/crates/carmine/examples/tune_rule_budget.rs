//! Search mining thresholds so that the mean rule count lands on a fixed
//! budget, then evaluate at the thresholds found.
//!
//! Fixing the number of rules keeps rule sets human-readable and makes
//! pruning strategies comparable: more rules would otherwise always buy
//! more F-measure.
//!
//! ```bash
//! cargo run --example tune_rule_budget
//! ```

use carmine::evaluation::{self, SearchConfig};
use carmine::pruning::ConstraintId;
use carmine::synth;
use carmine::wordnet::PosSelection;
use carmine::PruneStrategy;

fn main() -> carmine::Result<()> {
    // word m{f} occurs in exactly f sentences, so the rule count falls by
    // one each time the support threshold passes a frequency
    let corpus = synth::graded_frequency_corpus(10, 49, 10, 3);
    let strategy = PruneStrategy::Dependency(ConstraintId::HeadOnly);

    let config = SearchConfig {
        initial_support: 0.02,
        initial_confidence: 0.0,
        target_rules: 25,
        tolerance: 2,
        seed: 42,
        max_probes: 40,
    };
    let outcome = evaluation::find_optimal_with(
        &corpus,
        &config,
        &strategy,
        0,
        None,
        PosSelection::default(),
        5,
    )?;
    println!(
        "{} probes -> sigma = {:.5}, kappa = {:.2} ({})",
        outcome.probes,
        outcome.min_support,
        outcome.min_confidence,
        if outcome.in_window {
            "inside the budget window"
        } else {
            "window unreachable, closest taken"
        }
    );
    println!(
        "mean rule count {:.1} vs target {} ± {}",
        outcome.report.rule_count, config.target_rules, config.tolerance
    );

    // evaluate() composes the search with a final cross-validation
    let report = evaluation::evaluate(&corpus, &config, &strategy, 0, None)?;
    println!(
        "macro F at the tuned thresholds: {:.4} (rule count {:.1})",
        report.macro_f, report.rule_count
    );
    Ok(())
}
