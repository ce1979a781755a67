//! Walk hyperonymic chains in the fixture lexicon and replace words by
//! their hyperonyms of increasing order.
//!
//! ```bash
//! cargo run --example hyperonymize
//! ```
//!
//! The fixture lexicon ships in the same file formats as a real WordNet
//! installation; point `Lexicon::load` at a full `dict/` directory plus a
//! `SYNSET_ID<TAB>COUNT` frequency file for production use.

use std::collections::BTreeSet;
use std::path::PathBuf;

use carmine::wordnet::Pos;
use carmine::Lexicon;

fn main() -> carmine::Result<()> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/fixture_wordnet");
    let lexicon = Lexicon::load(&dir, &dir.join("freq.tsv"))?;
    println!(
        "lexicon: {} noun synsets, {} verb synsets, {} noun sinks, {} verb sinks",
        lexicon.synset_count(Pos::Noun),
        lexicon.synset_count(Pos::Verb),
        lexicon.sink_count(Pos::Noun),
        lexicon.sink_count(Pos::Verb),
    );

    let context = BTreeSet::new();

    // the most significant hyperonymic chain of a word's preferred sense
    for lemma in ["dalmatian", "dog", "bank", "paris"] {
        let sense = lexicon.disambiguate(lemma, Pos::Noun, &context).unwrap();
        let chain = lexicon.msch(sense)?;
        let names: Vec<String> = chain
            .synsets
            .iter()
            .map(|id| lexicon.synset(*id).unwrap().lemmas[0].clone())
            .collect();
        println!("MSCH({lemma}) = {}", names.join(" -> "));
    }

    // hyperonyms of increasing order; too-short chains fall back to the word
    println!("\nhyperonymization by order:");
    for lemma in ["dalmatian", "poodle", "dog", "quasar"] {
        let steps: Vec<String> = (1..=4)
            .map(|n| lexicon.hyperonymize_word(lemma, Pos::Noun, &context, n))
            .collect();
        println!("  {lemma}: {}", steps.join(", "));
    }

    // disambiguation picks the most frequent sense by default
    let sense = lexicon.disambiguate("bank", Pos::Noun, &context).unwrap();
    println!(
        "\nbank resolves to {sense} {:?}",
        lexicon.synset(sense).unwrap().lemmas
    );
    Ok(())
}
