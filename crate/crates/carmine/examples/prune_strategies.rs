//! Apply every pruning strategy to the same sentences and compare the
//! itemsets they keep.
//!
//! ```bash
//! cargo run --example prune_strategies
//! ```

use std::path::PathBuf;

use carmine::pruning::{self, ConstraintId, PruneStrategy};
use carmine::Corpus;

fn main() -> carmine::Result<()> {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/tiny.conllu");
    let corpus = Corpus::from_path(&path)?;
    let sentences = corpus.forgetful();

    let constraints: [(&str, ConstraintId); 5] = [
        ("I0  (head only)", ConstraintId::HeadOnly),
        ("I1  (nsubj of head)", ConstraintId::NsubjOfHead),
        ("I1' (ccomp of head)", ConstraintId::CcompOfHead),
        ("I2  (nouns at distance 1)", ConstraintId::NounsDist1),
        ("I2' (verbs at distance 1)", ConstraintId::VerbsDist1),
    ];

    // the five-token example sentence
    let sample = &sentences[1];
    let words: Vec<&str> = sample.0.tokens.iter().map(|t| t.surface.as_str()).collect();
    println!("sentence: {}", words.join(" "));
    for (label, constraint) in &constraints {
        let itemset = pruning::prune_sentence_dependency(sample.0, constraint);
        let lemmas: Vec<&str> = itemset.lemmas().collect();
        println!("  {label:<28} -> {lemmas:?}");
    }

    // tf-idf pruning ranks within the sentence against the whole corpus
    for n in [1, 2, 3] {
        let pruned = pruning::prune_tfidf(&sentences, n);
        let lemmas: Vec<&str> = pruned[1].itemset.lemmas().collect();
        let label = format!("tfidf:N={n}");
        println!("  {label:<28} -> {lemmas:?}");
    }

    // corpus-level statistics the strategies are usually judged by
    println!("\nconstraint coverage over {} sentences:", sentences.len());
    let sentence_refs: Vec<&carmine::Sentence> = sentences.iter().map(|(s, _)| *s).collect();
    for (label, constraint) in &constraints {
        let coverage = pruning::constraint_coverage(sentence_refs.iter().copied(), constraint);
        println!("  {label:<28} {:.2}%", coverage * 100.0);
    }
    let pruned = pruning::prune_dependency(&sentences, &ConstraintId::NounsDist1);
    let sizes: Vec<_> = pruned.iter().map(|t| &t.itemset).collect();
    println!(
        "average transaction size under I2: {:.2}",
        pruning::average_transaction_size(sizes)?
    );

    // strategies parse from the same strings the CLI accepts
    let strategy: PruneStrategy = "dep:custom(labels=nsubj|dobj,pos=N,head=false)".parse()?;
    println!("parsed custom strategy: {strategy}");
    Ok(())
}
