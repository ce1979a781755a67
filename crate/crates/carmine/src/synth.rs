//! Deterministic synthetic corpora for tests, examples and benchmarks.
//!
//! All generators are seeded and reproducible; the same arguments always
//! build the identical corpus.

use crate::corpus::{Corpus, Document, Sentence, Token};

/// SplitMix64; stable across platforms and toolchains.
pub(crate) struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub(crate) fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub(crate) fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    pub(crate) fn below(&mut self, bound: usize) -> usize {
        (self.next_u64() % bound as u64) as usize
    }
}

pub(crate) fn shuffle<T>(items: &mut [T], seed: u64) {
    let mut rng = SplitMix64::new(seed);
    for i in (1..items.len()).rev() {
        let j = rng.below(i + 1);
        items.swap(i, j);
    }
}

const NOISE_SUBJECTS: &[&str] = &[
    "analyst", "reporter", "witness", "official", "resident", "visitor", "manager", "spokesman",
];

const NOISE_OBJECTS: &[&str] = &[
    "result", "report", "plan", "record", "event", "meeting", "statement", "case",
];

const SHARED_VERBS: &[&str] = &["make", "take", "hold", "give"];

fn noun(lemma: &str, head: usize, dep: &str) -> Token {
    Token {
        surface: lemma.to_string(),
        lemma: lemma.to_string(),
        pos: "NN".to_string(),
        head,
        dep_label: dep.to_string(),
    }
}

fn root_verb(lemma: &str) -> Token {
    Token {
        surface: lemma.to_string(),
        lemma: lemma.to_string(),
        pos: "VV".to_string(),
        head: 0,
        dep_label: String::new(),
    }
}

fn three_token_sentence(id: String, doc_id: String, subject: &str, verb: &str, object: &str) -> Sentence {
    Sentence {
        id,
        doc_id,
        tokens: vec![
            noun(subject, 2, "nsubj"),
            root_verb(verb),
            noun(object, 2, "dobj"),
        ],
    }
}

/// A corpus where every sentence of a class is rooted at that class's
/// marker verb. HEAD_ONLY pruning separates the classes perfectly.
pub fn marker_corpus(classes: &[(&str, &str)], docs_per_class: usize, seed: u64) -> Corpus {
    let mut rng = SplitMix64::new(seed);
    let mut documents = Vec::new();
    for (class, marker) in classes {
        for d in 0..docs_per_class {
            let doc_id = format!("{class}-{d:03}");
            let sentence_count = 2 + rng.below(3);
            let sentences = (0..sentence_count)
                .map(|s| {
                    let subject = NOISE_SUBJECTS[rng.below(NOISE_SUBJECTS.len())];
                    let object = NOISE_OBJECTS[rng.below(NOISE_OBJECTS.len())];
                    three_token_sentence(
                        format!("{doc_id}-s{s}"),
                        doc_id.clone(),
                        subject,
                        marker,
                        object,
                    )
                })
                .collect();
            documents.push(Document {
                id: doc_id,
                class_label: class.to_string(),
                sentences,
            });
        }
    }
    Corpus::new(documents).expect("generated corpus is valid")
}

/// A corpus whose class signal sits in the subject position: sentence roots
/// are verbs shared across classes, while the nsubj dependent is a
/// class-specific marker noun. NSUBJ_OF_HEAD separates classes perfectly;
/// HEAD_ONLY cannot.
pub fn subject_marker_corpus(
    classes: &[(&str, &str)],
    docs_per_class: usize,
    seed: u64,
) -> Corpus {
    let mut rng = SplitMix64::new(seed);
    let mut documents = Vec::new();
    for (class, marker) in classes {
        for d in 0..docs_per_class {
            let doc_id = format!("{class}-{d:03}");
            let sentence_count = 2 + rng.below(3);
            let sentences = (0..sentence_count)
                .map(|s| {
                    let verb = SHARED_VERBS[rng.below(SHARED_VERBS.len())];
                    let object = NOISE_OBJECTS[rng.below(NOISE_OBJECTS.len())];
                    three_token_sentence(
                        format!("{doc_id}-s{s}"),
                        doc_id.clone(),
                        marker,
                        verb,
                        object,
                    )
                })
                .collect();
            documents.push(Document {
                id: doc_id,
                class_label: class.to_string(),
                sentences,
            });
        }
    }
    Corpus::new(documents).expect("generated corpus is valid")
}

/// A single-class corpus of one-token sentences where the word `m{f}`
/// occurs in exactly `f` sentences, for every `f` in `min_freq..=max_freq`.
/// Mined with HEAD_ONLY, the rule count then steps down by one as the
/// support threshold rises past each frequency, which makes rule-budget
/// searches well-behaved.
pub fn graded_frequency_corpus(
    min_freq: usize,
    max_freq: usize,
    sentences_per_doc: usize,
    seed: u64,
) -> Corpus {
    assert!(min_freq >= 1 && min_freq <= max_freq && sentences_per_doc >= 1);
    let mut words: Vec<String> = Vec::new();
    for f in min_freq..=max_freq {
        for _ in 0..f {
            words.push(format!("m{f:03}"));
        }
    }
    shuffle(&mut words, seed);
    let mut documents = Vec::new();
    for (d, chunk) in words.chunks(sentences_per_doc).enumerate() {
        let doc_id = format!("d{d:04}");
        let sentences = chunk
            .iter()
            .enumerate()
            .map(|(s, word)| Sentence {
                id: format!("{doc_id}-s{s}"),
                doc_id: doc_id.clone(),
                tokens: vec![Token {
                    surface: word.clone(),
                    lemma: word.clone(),
                    pos: "NN".to_string(),
                    head: 0,
                    dep_label: String::new(),
                }],
            })
            .collect();
        documents.push(Document {
            id: doc_id,
            class_label: "only".to_string(),
            sentences,
        });
    }
    Corpus::new(documents).expect("generated corpus is valid")
}
