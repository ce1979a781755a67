//! Train on a synthetic corpus, hold one document out, classify it, and
//! inspect the per-sentence verdicts behind the decision.
//!
//! ```bash
//! cargo run --example classify_document
//! ```

use carmine::model;
use carmine::pruning::ConstraintId;
use carmine::synth;
use carmine::wordnet::PosSelection;
use carmine::{Corpus, MiningParams, PruneStrategy};

fn main() -> carmine::Result<()> {
    let corpus = synth::marker_corpus(
        &[
            ("sports", "score"),
            ("economy", "trade"),
            ("politics", "vote"),
            ("crime", "steal"),
        ],
        12,
        7,
    );

    // hold the last document out of training
    let mut documents = corpus.documents().to_vec();
    let held_out = documents.pop().unwrap();
    let training = Corpus::new(documents)?;

    let params = MiningParams {
        min_support: 0.05,
        min_confidence: 0.6,
        max_itemset_size: 5,
    };
    let strategy = PruneStrategy::Dependency(ConstraintId::HeadOnly);
    let model = model::train_model(
        &training,
        &params,
        &strategy,
        0,
        None,
        PosSelection::default(),
    )?;
    println!(
        "trained {} rules on {} documents",
        model.rule_count(),
        training.documents().len()
    );

    let result = model.classify(&held_out, None)?;
    println!(
        "document {} (actually {:?}) -> predicted {:?}",
        held_out.id, held_out.class_label, result.predicted_class
    );
    println!(
        "variety = {} classes scored, dispersion = {:.2}",
        result.variety, result.dispersion
    );
    for (class, score) in &result.class_scores {
        println!("  score[{class}] = {score:.2}");
    }
    for verdict in &result.verdicts {
        match &verdict.rule {
            Some(rule) => println!(
                "  {} matched {:?} -> {} (confidence {:.2})",
                verdict.sentence_id,
                rule.itemset.items(),
                rule.class_label,
                rule.confidence_value()
            ),
            None => println!("  {} matched nothing", verdict.sentence_id),
        }
    }

    // the whole result serializes to the same JSON the CLI emits
    println!("\nas JSON: {}", serde_json::to_string_pretty(&result).unwrap());
    Ok(())
}
