//! Parse the bundled corpus and inspect the document/sentence model.
//!
//! ```bash
//! cargo run --example parse_and_validate
//! ```

use std::path::PathBuf;

use carmine::Corpus;

fn main() -> carmine::Result<()> {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/tiny.conllu");
    let corpus = Corpus::from_path(&path)?;

    println!("corpus: {}", path.display());
    println!(
        "{} documents, {} sentences, {} tokens, hash {}",
        corpus.documents().len(),
        corpus.num_sentences(),
        corpus.num_tokens(),
        corpus.content_hash()
    );
    println!("classes: {:?}", corpus.classes());

    // the forgetful view: every sentence with the class of its document
    for (sentence, class) in corpus.forgetful().iter().take(3) {
        let words: Vec<&str> = sentence.tokens.iter().map(|t| t.surface.as_str()).collect();
        println!(
            "[{class}] {} (root: {:?})",
            words.join(" "),
            sentence.root().lemma
        );
    }

    // dependency edges of one sentence
    let sentence = &corpus.documents()[0].sentences[1];
    println!("edges of {}:", sentence.id);
    for (dependent, head, label) in sentence.edges() {
        println!("  {label}({} -> {})", dependent.surface, head.surface);
    }

    // the serializer round-trips
    let reparsed = Corpus::parse(&corpus.to_text(), "round-trip")?;
    assert_eq!(corpus, reparsed);
    println!("round-trip: ok");
    Ok(())
}
