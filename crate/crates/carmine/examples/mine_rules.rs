//! Mine class association rules from the bundled corpus and print them.
//!
//! ```bash
//! cargo run --example mine_rules
//! ```

use std::path::PathBuf;

use carmine::model;
use carmine::pruning::ConstraintId;
use carmine::wordnet::PosSelection;
use carmine::{Corpus, MiningParams, PruneStrategy};

fn main() -> carmine::Result<()> {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/tiny.conllu");
    let corpus = Corpus::from_path(&path)?;

    let params = MiningParams {
        min_support: 0.1,
        min_confidence: 0.6,
        max_itemset_size: 5,
    };
    let strategy = PruneStrategy::Dependency(ConstraintId::HeadOnly);
    let model = model::train_model(
        &corpus,
        &params,
        &strategy,
        0,
        None,
        PosSelection::default(),
    )?;

    println!(
        "mined {} rules from {} transactions (avg size {:.2})",
        model.rule_count(),
        model.transaction_count,
        model.avg_transaction_size.unwrap_or(0.0)
    );
    for rule in &model.rules {
        println!(
            "  {:?} -> {}  support {} ({:.3})  confidence {} ({:.3})",
            rule.itemset.items(),
            rule.class_label,
            rule.support,
            rule.support_value(),
            rule.confidence,
            rule.confidence_value()
        );
    }

    // the TSV rule file is self-describing and round-trips
    println!("\nrule file:\n{}", model.to_tsv());
    Ok(())
}
