//! Class-annotated, dependency-parsed corpora and their file format.
//!
//! A corpus file is UTF-8 text. `# newdoc id = <id>` starts a document,
//! `# class = <label>` (required once per document) assigns its class,
//! `# sent_id = <id>` starts a sentence, and token lines carry six
//! TAB-separated columns: INDEX, SURFACE, LEMMA, POS, HEAD, DEPREL.
//! A blank line ends a sentence. HEAD is a 1-based index into the same
//! sentence; 0 marks the root token. Lemmatization and parsing happen
//! upstream: the LEMMA and POS columns are expected to be pre-filled,
//! with the surface form repeated when the lemma is unknown.

use std::collections::{BTreeSet, HashSet};
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};

/// One word of a sentence with its lemma, POS tag and dependency edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub surface: String,
    /// Lemmatized form, or the surface form when the word was unknown upstream.
    pub lemma: String,
    /// Tagset tag, e.g. `NN` or `VVD`.
    pub pos: String,
    /// 1-based index of the governing token; 0 for the sentence root.
    pub head: usize,
    /// Dependency label of the edge to the head; empty for the root token.
    pub dep_label: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sentence {
    pub id: String,
    /// Id of the owning document (the back reference from sentence to document).
    pub doc_id: String,
    pub tokens: Vec<Token>,
}

impl Sentence {
    /// The unique token with head = 0.
    ///
    /// Panics on hand-built sentences that violate the single-root invariant;
    /// sentences obtained from a [`Corpus`] always satisfy it.
    pub fn root(&self) -> &Token {
        self.tokens
            .iter()
            .find(|t| t.head == 0)
            .expect("sentence has a root token")
    }

    /// 1-based position of the root token.
    pub fn root_position(&self) -> usize {
        self.tokens
            .iter()
            .position(|t| t.head == 0)
            .expect("sentence has a root token")
            + 1
    }

    /// Dependency triples (dependent, head, label). A sentence with n tokens
    /// has exactly n - 1 of them; the root contributes none.
    pub fn edges(&self) -> impl Iterator<Item = (&Token, &Token, &str)> {
        self.tokens
            .iter()
            .filter(|t| t.head != 0)
            .map(|t| (t, &self.tokens[t.head - 1], t.dep_label.as_str()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Document {
    pub id: String,
    pub class_label: String,
    pub sentences: Vec<Sentence>,
}

/// An annotated corpus: documents with class labels, plus the derived class set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Corpus {
    documents: Vec<Document>,
    classes: BTreeSet<String>,
}

impl Corpus {
    /// Builds a corpus from documents, checking every structural invariant:
    /// unique document ids, corpus-wide unique sentence ids, consistent
    /// back references, non-empty documents, and valid dependency trees.
    pub fn new(documents: Vec<Document>) -> Result<Self> {
        let mut doc_ids = HashSet::new();
        let mut sentence_ids = HashSet::new();
        for doc in &documents {
            if doc.id.is_empty() {
                return Err(Error::Schema("document with empty id".into()));
            }
            if !doc_ids.insert(doc.id.clone()) {
                return Err(Error::Schema(format!("duplicate document id {:?}", doc.id)));
            }
            if doc.class_label.is_empty() {
                return Err(Error::Schema(format!(
                    "document {:?} has an empty class label",
                    doc.id
                )));
            }
            if doc.sentences.is_empty() {
                return Err(Error::Schema(format!(
                    "document {:?} has no sentences",
                    doc.id
                )));
            }
            for sentence in &doc.sentences {
                if !sentence_ids.insert(sentence.id.clone()) {
                    return Err(Error::Schema(format!(
                        "duplicate sentence id {:?}",
                        sentence.id
                    )));
                }
                if sentence.doc_id != doc.id {
                    return Err(Error::Schema(format!(
                        "sentence {:?} points at document {:?} but belongs to {:?}",
                        sentence.id, sentence.doc_id, doc.id
                    )));
                }
                validate_sentence(sentence)?;
            }
        }
        let classes = documents.iter().map(|d| d.class_label.clone()).collect();
        Ok(Corpus { documents, classes })
    }

    /// Parses a corpus file from disk.
    pub fn from_path(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&text, &path.display().to_string())
    }

    /// Parses corpus text; `origin` names the source in error messages.
    pub fn parse(text: &str, origin: &str) -> Result<Self> {
        Parser::new(origin).run(text)
    }

    pub fn documents(&self) -> &[Document] {
        &self.documents
    }

    /// The set of distinct class labels.
    pub fn classes(&self) -> &BTreeSet<String> {
        &self.classes
    }

    pub fn num_sentences(&self) -> usize {
        self.documents.iter().map(|d| d.sentences.len()).sum()
    }

    pub fn num_tokens(&self) -> usize {
        self.documents
            .iter()
            .flat_map(|d| &d.sentences)
            .map(|s| s.tokens.len())
            .sum()
    }

    /// Every sentence paired with the class of its document. Identical
    /// sentences in different documents stay distinct entries.
    pub fn forgetful(&self) -> Vec<(&Sentence, &str)> {
        self.documents
            .iter()
            .flat_map(|d| d.sentences.iter().map(move |s| (s, d.class_label.as_str())))
            .collect()
    }

    /// Serializes back to the corpus file format. `parse(to_text(c))` equals `c`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for doc in &self.documents {
            writeln!(out, "# newdoc id = {}", doc.id).unwrap();
            writeln!(out, "# class = {}", doc.class_label).unwrap();
            for sentence in &doc.sentences {
                writeln!(out, "# sent_id = {}", sentence.id).unwrap();
                for (i, t) in sentence.tokens.iter().enumerate() {
                    let dep = if t.head == 0 { "root" } else { &t.dep_label };
                    writeln!(
                        out,
                        "{}\t{}\t{}\t{}\t{}\t{}",
                        i + 1,
                        t.surface,
                        t.lemma,
                        t.pos,
                        t.head,
                        dep
                    )
                    .unwrap();
                }
                out.push('\n');
            }
        }
        out
    }

    pub fn write_to(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_text()).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })
    }

    /// FNV-1a digest of the serialized corpus, as 16 hex digits. Stored in
    /// rule files so that training provenance is auditable.
    pub fn content_hash(&self) -> String {
        let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
        for byte in self.to_text().bytes() {
            hash ^= u64::from(byte);
            hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
        }
        format!("{hash:016x}")
    }
}

/// Free-function form of [`Corpus::from_path`].
pub fn parse_corpus(path: &Path) -> Result<Corpus> {
    Corpus::from_path(path)
}

/// The unique token with head = 0 of `sentence`.
pub fn sentence_root(sentence: &Sentence) -> &Token {
    sentence.root()
}

fn validate_sentence(sentence: &Sentence) -> Result<()> {
    let id = &sentence.id;
    let tree_err = |message: String| Error::Tree {
        sentence_id: id.clone(),
        message,
    };
    let n = sentence.tokens.len();
    if n == 0 {
        return Err(Error::Schema(format!("sentence {id:?} has no tokens")));
    }
    let mut roots = 0;
    for (i, t) in sentence.tokens.iter().enumerate() {
        if t.surface.is_empty() || t.lemma.is_empty() {
            return Err(Error::Schema(format!(
                "sentence {id:?}: token {} has an empty surface or lemma",
                i + 1
            )));
        }
        if t.head > n {
            return Err(tree_err(format!(
                "token {} has head {} but the sentence has {} tokens",
                i + 1,
                t.head,
                n
            )));
        }
        if t.head == i + 1 {
            return Err(tree_err(format!("token {} is its own head", i + 1)));
        }
        if t.head == 0 {
            roots += 1;
            if !t.dep_label.is_empty() {
                return Err(tree_err(format!(
                    "root token {} carries dependency label {:?}",
                    i + 1,
                    t.dep_label
                )));
            }
        }
    }
    if roots != 1 {
        return Err(tree_err(format!("{roots} root tokens, expected exactly 1")));
    }
    // Walking head links from any token must reach the root in at most n steps.
    for start in 0..n {
        let mut cur = start + 1;
        let mut steps = 0;
        while cur != 0 {
            cur = sentence.tokens[cur - 1].head;
            steps += 1;
            if steps > n {
                return Err(tree_err(format!(
                    "head indices form a cycle involving token {}",
                    start + 1
                )));
            }
        }
    }
    Ok(())
}

struct Parser<'a> {
    origin: &'a str,
    documents: Vec<Document>,
    doc: Option<DocBuilder>,
    sentence: Option<SentBuilder>,
}

struct DocBuilder {
    id: String,
    class: Option<String>,
    sentences: Vec<Sentence>,
}

struct SentBuilder {
    id: String,
    tokens: Vec<Token>,
}

impl<'a> Parser<'a> {
    fn new(origin: &'a str) -> Self {
        Parser {
            origin,
            documents: Vec::new(),
            doc: None,
            sentence: None,
        }
    }

    fn err(&self, line: usize, message: impl Into<String>) -> Error {
        Error::Parse {
            path: self.origin.to_string(),
            line,
            message: message.into(),
        }
    }

    fn run(mut self, text: &str) -> Result<Corpus> {
        for (idx, raw) in text.lines().enumerate() {
            let ln = idx + 1;
            let line = raw.trim_end_matches('\r');
            if line.trim().is_empty() {
                self.flush_sentence()?;
            } else if let Some(body) = line.strip_prefix('#') {
                self.comment(ln, body.trim())?;
            } else {
                self.token_line(ln, line)?;
            }
        }
        self.flush_sentence()?;
        self.flush_document()?;
        if self.documents.is_empty() {
            return Err(self.err(1, "no documents found"));
        }
        Corpus::new(self.documents)
    }

    fn comment(&mut self, ln: usize, body: &str) -> Result<()> {
        let Some((key, value)) = body.split_once('=') else {
            return Ok(()); // free-form comment
        };
        let key = key.trim();
        let value = value.trim();
        match key {
            "newdoc id" => {
                if value.is_empty() {
                    return Err(self.err(ln, "newdoc with empty id"));
                }
                self.flush_sentence()?;
                self.flush_document()?;
                self.doc = Some(DocBuilder {
                    id: value.to_string(),
                    class: None,
                    sentences: Vec::new(),
                });
            }
            "class" => {
                let Some(doc) = self.doc.as_mut() else {
                    return Err(self.err(ln, "class annotation outside a document"));
                };
                if doc.class.is_some() {
                    return Err(Error::Schema(format!(
                        "document {:?} has more than one class annotation",
                        doc.id
                    )));
                }
                if value.is_empty() {
                    return Err(self.err(ln, "empty class label"));
                }
                doc.class = Some(value.to_string());
            }
            "sent_id" => {
                if self.doc.is_none() {
                    return Err(self.err(ln, "sentence outside a document"));
                }
                if value.is_empty() {
                    return Err(self.err(ln, "sent_id with empty id"));
                }
                self.flush_sentence()?;
                self.sentence = Some(SentBuilder {
                    id: value.to_string(),
                    tokens: Vec::new(),
                });
            }
            _ => {} // unknown metadata is ignored
        }
        Ok(())
    }

    fn token_line(&mut self, ln: usize, line: &str) -> Result<()> {
        let origin = self.origin;
        let err = |message: String| Error::Parse {
            path: origin.to_string(),
            line: ln,
            message,
        };
        let Some(sentence) = self.sentence.as_mut() else {
            return Err(err("token line outside a sentence".into()));
        };
        let cols: Vec<&str> = line.split('\t').collect();
        if cols.len() != 6 {
            return Err(err(format!(
                "expected 6 tab-separated columns, found {}",
                cols.len()
            )));
        }
        let index: usize = cols[0]
            .parse()
            .map_err(|_| err(format!("invalid token index {:?}", cols[0])))?;
        let expected = sentence.tokens.len() + 1;
        if index != expected {
            return Err(err(format!(
                "token index {index} out of sequence (expected {expected})"
            )));
        }
        if cols[1].is_empty() || cols[2].is_empty() {
            return Err(err("empty surface or lemma column".into()));
        }
        let head: usize = cols[4]
            .parse()
            .map_err(|_| err(format!("invalid head index {:?}", cols[4])))?;
        let dep_label = if head == 0 { "" } else { cols[5] };
        sentence.tokens.push(Token {
            surface: cols[1].to_string(),
            lemma: cols[2].to_string(),
            pos: cols[3].to_string(),
            head,
            dep_label: dep_label.to_string(),
        });
        Ok(())
    }

    fn flush_sentence(&mut self) -> Result<()> {
        if let Some(sent) = self.sentence.take() {
            let doc = self.doc.as_mut().expect("sentence implies open document");
            if sent.tokens.is_empty() {
                return Err(Error::Schema(format!(
                    "sentence {:?} has no tokens",
                    sent.id
                )));
            }
            doc.sentences.push(Sentence {
                id: sent.id,
                doc_id: doc.id.clone(),
                tokens: sent.tokens,
            });
        }
        Ok(())
    }

    fn flush_document(&mut self) -> Result<()> {
        if let Some(doc) = self.doc.take() {
            let Some(class) = doc.class else {
                return Err(Error::Schema(format!(
                    "document {:?} is missing its class annotation",
                    doc.id
                )));
            };
            self.documents.push(Document {
                id: doc.id,
                class_label: class,
                sentences: doc.sentences,
            });
        }
        Ok(())
    }
}
