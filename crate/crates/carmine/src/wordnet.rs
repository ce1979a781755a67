//! WordNet lexical database: loading, most significant hyperonymic chains,
//! and corpus hyperonymization.
//!
//! The loader reads Princeton 3.0 `data.noun`/`data.verb` and
//! `index.noun`/`index.verb` files, keeping only the hypernym (`@`) and
//! instance-hypernym (`@i`) pointers. Synset frequencies come from a
//! separate file with one `SYNSET_ID<TAB>COUNT` line per synset (ids in the
//! `00001740-n` form, as produced by converting wn-similarity information
//! content data); synsets absent from it default to count 0. A strict total
//! order over synsets is derived as (ln(1 + count), synset id), so equal
//! raw frequencies are split deterministically by id.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pruning::{PrunedItem, PrunedItemset, PrunedTransaction};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Pos {
    Noun,
    Verb,
    Adj,
    Adv,
}

impl Pos {
    pub fn letter(self) -> char {
        match self {
            Pos::Noun => 'n',
            Pos::Verb => 'v',
            Pos::Adj => 'a',
            Pos::Adv => 'r',
        }
    }

    fn from_letter(c: char) -> Option<Pos> {
        match c {
            'n' => Some(Pos::Noun),
            'v' => Some(Pos::Verb),
            'a' | 's' => Some(Pos::Adj),
            'r' => Some(Pos::Adv),
            _ => None,
        }
    }

    /// Maps a corpus tagset tag onto the WordNet part of speech used for
    /// lookups: tags starting with `N` are nouns, tags starting with `V`
    /// are verbs, everything else has no hypernym structure here.
    pub fn from_corpus_tag(tag: &str) -> Option<Pos> {
        match tag.chars().next() {
            Some('N') => Some(Pos::Noun),
            Some('V') => Some(Pos::Verb),
            _ => None,
        }
    }
}

/// Database offset plus part of speech, e.g. `00001740-n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SynsetId {
    pub offset: u32,
    pub pos: Pos,
}

impl fmt::Display for SynsetId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:08}-{}", self.offset, self.pos.letter())
    }
}

impl FromStr for SynsetId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let err = || Error::Config(format!("invalid synset id {s:?}"));
        let (offset, pos) = s.split_once('-').ok_or_else(err)?;
        let offset: u32 = offset.parse().map_err(|_| err())?;
        let mut chars = pos.chars();
        let (letter, rest) = (chars.next().ok_or_else(err)?, chars.next());
        if rest.is_some() {
            return Err(err());
        }
        let pos = Pos::from_letter(letter).ok_or_else(err)?;
        Ok(SynsetId { offset, pos })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Synset {
    pub id: SynsetId,
    /// Words of the synset in database order; the first one is the most
    /// frequent word of the synset by WordNet convention.
    pub lemmas: Vec<String>,
    pub hypernyms: Vec<SynsetId>,
    pub instance_hypernyms: Vec<SynsetId>,
}

impl Synset {
    fn hypernym_edges(&self) -> impl Iterator<Item = &SynsetId> {
        self.hypernyms.iter().chain(self.instance_hypernyms.iter())
    }

    fn is_sink(&self) -> bool {
        self.hypernyms.is_empty() && self.instance_hypernyms.is_empty()
    }
}

/// A hyperonymic chain starting at some synset and ending at a sink.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HyperonymicChain {
    pub synsets: Vec<SynsetId>,
}

impl HyperonymicChain {
    pub fn len(&self) -> usize {
        self.synsets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.synsets.is_empty()
    }
}

/// Strict total order key for a synset: log frequency, id as tiebreak.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrderKey {
    pub log_frequency: f64,
    pub id: SynsetId,
}

impl Eq for OrderKey {}

impl PartialOrd for OrderKey {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for OrderKey {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.log_frequency
            .total_cmp(&other.log_frequency)
            .then_with(|| self.id.cmp(&other.id))
    }
}

/// How a lemma with several senses is resolved to one synset.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DisambiguationPolicy {
    /// Most frequent sense: the candidate with the maximal order key.
    #[default]
    MostFrequent,
    /// Most context lemmas shared with the candidate's lemma list; ties go
    /// to the frequency key.
    ContextOverlap,
}

impl FromStr for DisambiguationPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "most-frequent" => Ok(DisambiguationPolicy::MostFrequent),
            "context-overlap" => Ok(DisambiguationPolicy::ContextOverlap),
            other => Err(Error::Config(format!(
                "unknown disambiguation policy {other:?}"
            ))),
        }
    }
}

/// Which parts of speech hyperonymization touches; other items pass through.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum PosSelection {
    #[default]
    NounsAndVerbs,
    NounsOnly,
    VerbsOnly,
}

impl PosSelection {
    pub fn allows(self, pos: Pos) -> bool {
        matches!(
            (self, pos),
            (PosSelection::NounsAndVerbs, Pos::Noun | Pos::Verb)
                | (PosSelection::NounsOnly, Pos::Noun)
                | (PosSelection::VerbsOnly, Pos::Verb)
        )
    }
}

impl fmt::Display for PosSelection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PosSelection::NounsAndVerbs => "nv",
            PosSelection::NounsOnly => "n",
            PosSelection::VerbsOnly => "v",
        })
    }
}

impl FromStr for PosSelection {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "nv" | "vn" => Ok(PosSelection::NounsAndVerbs),
            "n" => Ok(PosSelection::NounsOnly),
            "v" => Ok(PosSelection::VerbsOnly),
            other => Err(Error::Config(format!(
                "unknown hyperonymization POS selection {other:?} (use nv, n or v)"
            ))),
        }
    }
}

impl From<PosSelection> for String {
    fn from(p: PosSelection) -> String {
        p.to_string()
    }
}

impl TryFrom<String> for PosSelection {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

/// The loaded noun and verb databases with frequencies and a lemma index.
#[derive(Debug, Clone)]
pub struct Lexicon {
    synsets: BTreeMap<SynsetId, Synset>,
    lemma_index: HashMap<(String, Pos), Vec<SynsetId>>,
    frequencies: HashMap<SynsetId, u64>,
    policy: DisambiguationPolicy,
}

/// Free-function form of [`Lexicon::load`].
pub fn load_lexicon(wordnet_dir: &Path, freq_file: &Path) -> Result<Lexicon> {
    Lexicon::load(wordnet_dir, freq_file)
}

impl Lexicon {
    /// Reads `data.noun`, `data.verb`, `index.noun`, `index.verb` from
    /// `dir` and synset counts from `freq_file`.
    pub fn load(dir: &Path, freq_file: &Path) -> Result<Lexicon> {
        let mut synsets = BTreeMap::new();
        for (name, pos) in [("data.noun", Pos::Noun), ("data.verb", Pos::Verb)] {
            let path = dir.join(name);
            let text = read(&path)?;
            for (idx, line) in text.lines().enumerate() {
                if skip_line(line) {
                    continue;
                }
                let synset = parse_data_line(line, pos, &path, idx + 1)?;
                if synsets.insert(synset.id, synset.clone()).is_some() {
                    return Err(Error::Schema(format!("duplicate synset id {}", synset.id)));
                }
            }
        }

        let mut lemma_index: HashMap<(String, Pos), Vec<SynsetId>> = HashMap::new();
        for (name, pos) in [("index.noun", Pos::Noun), ("index.verb", Pos::Verb)] {
            let path = dir.join(name);
            let text = read(&path)?;
            for (idx, line) in text.lines().enumerate() {
                if skip_line(line) {
                    continue;
                }
                let (lemma, ids) = parse_index_line(line, pos, &path, idx + 1)?;
                for id in &ids {
                    if !synsets.contains_key(id) {
                        return Err(Error::UnknownSynset(format!(
                            "{id} (sense of {lemma:?} in {name})"
                        )));
                    }
                }
                lemma_index.insert((lemma, pos), ids);
            }
        }

        let frequencies = parse_frequencies(freq_file)?;
        Lexicon::assemble(synsets, lemma_index, frequencies, DisambiguationPolicy::default())
    }

    /// Builds a lexicon from in-memory synsets; the lemma index is derived
    /// from the synsets' own lemma lists. Intended for fixtures and tests.
    pub fn build(
        synsets: Vec<Synset>,
        frequencies: impl IntoIterator<Item = (SynsetId, u64)>,
        policy: DisambiguationPolicy,
    ) -> Result<Lexicon> {
        let mut map = BTreeMap::new();
        let mut lemma_index: HashMap<(String, Pos), Vec<SynsetId>> = HashMap::new();
        for synset in synsets {
            if synset.lemmas.is_empty() {
                return Err(Error::Schema(format!("synset {} has no lemmas", synset.id)));
            }
            for lemma in &synset.lemmas {
                lemma_index
                    .entry((normalize(lemma), synset.id.pos))
                    .or_default()
                    .push(synset.id);
            }
            if map.insert(synset.id, synset.clone()).is_some() {
                return Err(Error::Schema(format!("duplicate synset id {}", synset.id)));
            }
        }
        Lexicon::assemble(map, lemma_index, frequencies.into_iter().collect(), policy)
    }

    fn assemble(
        synsets: BTreeMap<SynsetId, Synset>,
        lemma_index: HashMap<(String, Pos), Vec<SynsetId>>,
        mut frequencies: HashMap<SynsetId, u64>,
        policy: DisambiguationPolicy,
    ) -> Result<Lexicon> {
        for synset in synsets.values() {
            for target in synset.hypernym_edges() {
                if !synsets.contains_key(target) {
                    return Err(Error::UnknownSynset(format!(
                        "{target} (hypernym of {})",
                        synset.id
                    )));
                }
            }
        }
        check_acyclic(&synsets)?;
        frequencies.retain(|id, _| synsets.contains_key(id));
        Ok(Lexicon {
            synsets,
            lemma_index,
            frequencies,
            policy,
        })
    }

    pub fn set_policy(&mut self, policy: DisambiguationPolicy) {
        self.policy = policy;
    }

    pub fn policy(&self) -> DisambiguationPolicy {
        self.policy
    }

    pub fn synset(&self, id: SynsetId) -> Option<&Synset> {
        self.synsets.get(&id)
    }

    pub fn synsets(&self) -> impl Iterator<Item = &Synset> {
        self.synsets.values()
    }

    pub fn synset_count(&self, pos: Pos) -> usize {
        self.synsets.keys().filter(|id| id.pos == pos).count()
    }

    /// Synsets of the given part of speech with no outgoing hypernym edge.
    pub fn sink_count(&self, pos: Pos) -> usize {
        self.synsets
            .values()
            .filter(|s| s.id.pos == pos && s.is_sink())
            .count()
    }

    /// Synset ids containing the lemma, in index order. Lookup lowercases
    /// and maps spaces to underscores.
    pub fn synsets_for(&self, lemma: &str, pos: Pos) -> &[SynsetId] {
        self.lemma_index
            .get(&(normalize(lemma), pos))
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    pub fn frequency(&self, id: SynsetId) -> u64 {
        self.frequencies.get(&id).copied().unwrap_or(0)
    }

    /// The strict total order key (ln(1 + count), id).
    pub fn total_order_key(&self, id: SynsetId) -> Result<OrderKey> {
        if !self.synsets.contains_key(&id) {
            return Err(Error::UnknownSynset(id.to_string()));
        }
        Ok(OrderKey {
            log_frequency: (1.0 + self.frequency(id) as f64).ln(),
            id,
        })
    }

    /// The most significant hyperonymic chain of `id`: starting there, each
    /// step goes to the hypernym or instance hypernym with the maximal
    /// order key, until a sink is reached. Unique keys make it deterministic.
    pub fn msch(&self, id: SynsetId) -> Result<HyperonymicChain> {
        let mut current = self
            .synsets
            .get(&id)
            .ok_or_else(|| Error::UnknownSynset(id.to_string()))?;
        let mut chain = vec![id];
        let mut seen: HashSet<SynsetId> = chain.iter().copied().collect();
        loop {
            let mut best: Option<OrderKey> = None;
            for candidate in current.hypernym_edges() {
                let key = self.total_order_key(*candidate)?;
                if best.as_ref().is_none_or(|b| key > *b) {
                    best = Some(key);
                }
            }
            let Some(next) = best.map(|k| k.id) else {
                break;
            };
            if !seen.insert(next) {
                return Err(Error::HypernymCycle(next.to_string()));
            }
            chain.push(next);
            current = &self.synsets[&next];
        }
        Ok(HyperonymicChain { synsets: chain })
    }

    /// Picks one synset for (lemma, pos) under the configured policy, or
    /// `None` when the lemma is absent. A unique sense wins regardless of
    /// context or policy.
    pub fn disambiguate(
        &self,
        lemma: &str,
        pos: Pos,
        context: &BTreeSet<String>,
    ) -> Option<SynsetId> {
        let candidates = self.synsets_for(lemma, pos);
        match candidates {
            [] => None,
            [single] => Some(*single),
            _ => match self.policy {
                DisambiguationPolicy::MostFrequent => candidates
                    .iter()
                    .map(|id| self.total_order_key(*id).expect("indexed synset"))
                    .max()
                    .map(|k| k.id),
                DisambiguationPolicy::ContextOverlap => candidates
                    .iter()
                    .map(|id| {
                        let synset = &self.synsets[id];
                        let overlap = context
                            .iter()
                            .filter(|c| {
                                synset.lemmas.iter().any(|l| normalize(l) == normalize(c))
                            })
                            .count();
                        (
                            overlap,
                            self.total_order_key(*id).expect("indexed synset"),
                        )
                    })
                    .max()
                    .map(|(_, k)| k.id),
            },
        }
    }

    /// Replaces a lemma by the first word of the n-th synset on the MSCH of
    /// its disambiguated sense. Falls back to the lemma itself when
    /// disambiguation fails or the chain is shorter than n + 1 synsets.
    pub fn hyperonymize_word(
        &self,
        lemma: &str,
        pos: Pos,
        context: &BTreeSet<String>,
        n: usize,
    ) -> String {
        if n == 0 {
            return lemma.to_string();
        }
        let Some(sense) = self.disambiguate(lemma, pos, context) else {
            return lemma.to_string();
        };
        let chain = self.msch(sense).expect("indexed synset");
        match chain.synsets.get(n) {
            Some(id) => self.synsets[id].lemmas[0].clone(),
            None => lemma.to_string(),
        }
    }
}

/// Hyperonymizes one pruned itemset; the itemset's own lemmas serve as the
/// disambiguation context. Mapped items merge when they collide.
pub fn hyperonymize_itemset(
    lexicon: &Lexicon,
    itemset: &PrunedItemset,
    n: usize,
    selection: PosSelection,
) -> PrunedItemset {
    if n == 0 {
        return itemset.clone();
    }
    let context: BTreeSet<String> = itemset.lemmas().map(str::to_string).collect();
    let items = itemset
        .items()
        .iter()
        .map(|item| {
            match Pos::from_corpus_tag(&item.pos).filter(|p| selection.allows(*p)) {
                Some(pos) => PrunedItem {
                    lemma: lexicon.hyperonymize_word(&item.lemma, pos, &context, n),
                    pos: item.pos.clone(),
                },
                None => item.clone(),
            }
        })
        .collect();
    PrunedItemset::from_items(items)
}

/// Order-n hyperonymization of a pruned corpus; n = 0 is the identity.
pub fn hyperonymize_corpus(
    lexicon: &Lexicon,
    pruned: &[PrunedTransaction],
    n: usize,
) -> Vec<PrunedTransaction> {
    hyperonymize_corpus_with(lexicon, pruned, n, PosSelection::default())
}

pub fn hyperonymize_corpus_with(
    lexicon: &Lexicon,
    pruned: &[PrunedTransaction],
    n: usize,
    selection: PosSelection,
) -> Vec<PrunedTransaction> {
    if n == 0 {
        return pruned.to_vec();
    }
    pruned
        .iter()
        .map(|t| PrunedTransaction {
            itemset: hyperonymize_itemset(lexicon, &t.itemset, n, selection),
            class_label: t.class_label.clone(),
        })
        .collect()
}

fn normalize(lemma: &str) -> String {
    lemma.to_lowercase().replace(' ', "_")
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

// Princeton files carry a license header of lines starting with two spaces.
fn skip_line(line: &str) -> bool {
    line.is_empty() || line.starts_with("  ")
}

fn parse_data_line(line: &str, file_pos: Pos, path: &Path, lineno: usize) -> Result<Synset> {
    let err = |message: String| Error::Parse {
        path: path.display().to_string(),
        line: lineno,
        message,
    };
    let data = match line.split_once(" | ") {
        Some((data, _gloss)) => data,
        None => line,
    };
    let mut tokens = data.split_whitespace();
    let mut next = |what: &str| {
        tokens
            .next()
            .ok_or_else(|| err(format!("truncated synset record: missing {what}")))
    };

    let offset: u32 = next("offset")?
        .parse()
        .map_err(|_| err("invalid synset offset".into()))?;
    let _lex_filenum = next("lex_filenum")?;
    let ss_type = next("ss_type")?;
    let pos = ss_type
        .chars()
        .next()
        .and_then(Pos::from_letter)
        .ok_or_else(|| err(format!("invalid ss_type {ss_type:?}")))?;
    if pos != file_pos {
        return Err(err(format!(
            "synset type {ss_type:?} does not match the database file"
        )));
    }

    let w_cnt = usize::from_str_radix(next("w_cnt")?, 16)
        .map_err(|_| err("invalid word count".into()))?;
    if w_cnt == 0 {
        return Err(err("synset with zero words".into()));
    }
    let mut lemmas = Vec::with_capacity(w_cnt);
    for _ in 0..w_cnt {
        lemmas.push(next("word")?.to_string());
        let _lex_id = next("lex_id")?;
    }

    let p_cnt: usize = next("p_cnt")?
        .parse()
        .map_err(|_| err("invalid pointer count".into()))?;
    let mut hypernyms = Vec::new();
    let mut instance_hypernyms = Vec::new();
    for _ in 0..p_cnt {
        let symbol = next("pointer symbol")?;
        let target_offset: u32 = next("pointer offset")?
            .parse()
            .map_err(|_| err("invalid pointer offset".into()))?;
        let target_pos = next("pointer pos")?
            .chars()
            .next()
            .and_then(Pos::from_letter)
            .ok_or_else(|| err("invalid pointer pos".into()))?;
        let _source_target = next("pointer source/target")?;
        let target = SynsetId {
            offset: target_offset,
            pos: target_pos,
        };
        match symbol {
            "@" => hypernyms.push(target),
            "@i" => instance_hypernyms.push(target),
            _ => {} // other relations are out of scope
        }
    }
    // verb frames and anything else after the pointers are ignored

    Ok(Synset {
        id: SynsetId { offset, pos },
        lemmas,
        hypernyms,
        instance_hypernyms,
    })
}

fn parse_index_line(
    line: &str,
    pos: Pos,
    path: &Path,
    lineno: usize,
) -> Result<(String, Vec<SynsetId>)> {
    let err = |message: String| Error::Parse {
        path: path.display().to_string(),
        line: lineno,
        message,
    };
    let mut tokens = line.split_whitespace();
    let mut next = |what: &str| {
        tokens
            .next()
            .ok_or_else(|| err(format!("truncated index record: missing {what}")))
    };

    let lemma = next("lemma")?.to_string();
    let _pos = next("pos")?;
    let synset_cnt: usize = next("synset_cnt")?
        .parse()
        .map_err(|_| err("invalid synset count".into()))?;
    let p_cnt: usize = next("p_cnt")?
        .parse()
        .map_err(|_| err("invalid pointer count".into()))?;
    for _ in 0..p_cnt {
        let _symbol = next("pointer symbol")?;
    }
    let _sense_cnt = next("sense_cnt")?;
    let _tagsense_cnt = next("tagsense_cnt")?;
    let mut ids = Vec::with_capacity(synset_cnt);
    for _ in 0..synset_cnt {
        let offset: u32 = next("synset offset")?
            .parse()
            .map_err(|_| err("invalid synset offset".into()))?;
        ids.push(SynsetId { offset, pos });
    }
    Ok((lemma, ids))
}

fn parse_frequencies(path: &Path) -> Result<HashMap<SynsetId, u64>> {
    let text = read(path)?;
    let mut frequencies = HashMap::new();
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |message: String| Error::Parse {
            path: path.display().to_string(),
            line: idx + 1,
            message,
        };
        let mut fields = line.split_whitespace();
        let (id, count) = match (fields.next(), fields.next(), fields.next()) {
            (Some(id), Some(count), None) => (id, count),
            _ => return Err(err("expected SYNSET_ID<TAB>COUNT".into())),
        };
        let id: SynsetId = id.parse()?;
        let count: u64 = count
            .parse()
            .map_err(|_| err(format!("invalid count {count:?}")))?;
        frequencies.insert(id, count);
    }
    Ok(frequencies)
}

fn check_acyclic(synsets: &BTreeMap<SynsetId, Synset>) -> Result<()> {
    const UNSEEN: u8 = 0;
    const OPEN: u8 = 1;
    const DONE: u8 = 2;
    let mut state: HashMap<SynsetId, u8> = HashMap::with_capacity(synsets.len());
    for &start in synsets.keys() {
        if state.get(&start).copied().unwrap_or(UNSEEN) != UNSEEN {
            continue;
        }
        // iterative DFS: (node, next edge index)
        let mut stack: Vec<(SynsetId, usize)> = vec![(start, 0)];
        state.insert(start, OPEN);
        while let Some((node, edge)) = stack.pop() {
            let targets: Vec<SynsetId> = synsets[&node].hypernym_edges().copied().collect();
            if edge < targets.len() {
                stack.push((node, edge + 1));
                let target = targets[edge];
                match state.get(&target).copied().unwrap_or(UNSEEN) {
                    OPEN => return Err(Error::HypernymCycle(target.to_string())),
                    UNSEEN => {
                        state.insert(target, OPEN);
                        stack.push((target, 0));
                    }
                    _ => {}
                }
            } else {
                state.insert(node, DONE);
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::path::PathBuf;

    fn fixture_dir() -> PathBuf {
        PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/fixture_wordnet")
    }

    pub(crate) fn fixture_lexicon() -> Lexicon {
        Lexicon::load(&fixture_dir(), &fixture_dir().join("freq.tsv")).unwrap()
    }

    fn id(s: &str) -> SynsetId {
        s.parse().unwrap()
    }

    fn ctx() -> BTreeSet<String> {
        BTreeSet::new()
    }

    #[test]
    fn synset_ids_round_trip() {
        for s in ["00001740-n", "00033000-v", "12345678-a"] {
            assert_eq!(id(s).to_string(), s);
        }
        assert!("1740".parse::<SynsetId>().is_err());
        assert!("00001740-x".parse::<SynsetId>().is_err());
    }

    #[test]
    fn loads_the_fixture_lexicon() {
        let lexicon = fixture_lexicon();
        assert!(lexicon.synset_count(Pos::Noun) > 10);
        assert!(lexicon.synset_count(Pos::Verb) > 3);
        let entity = lexicon.synset(id("00001740-n")).unwrap();
        assert_eq!(entity.lemmas[0], "entity");
        assert!(entity.is_sink());
    }

    #[test]
    fn every_noun_chain_ends_at_entity() {
        let lexicon = fixture_lexicon();
        for synset in lexicon.synsets().filter(|s| s.id.pos == Pos::Noun) {
            let chain = lexicon.msch(synset.id).unwrap();
            assert_eq!(
                *chain.synsets.last().unwrap(),
                id("00001740-n"),
                "chain from {} ends elsewhere",
                synset.id
            );
        }
    }

    #[test]
    fn chains_are_deterministic_and_valid() {
        let lexicon = fixture_lexicon();
        for synset in lexicon.synsets() {
            let a = lexicon.msch(synset.id).unwrap();
            let b = lexicon.msch(synset.id).unwrap();
            assert_eq!(a, b);
            for pair in a.synsets.windows(2) {
                let here = lexicon.synset(pair[0]).unwrap();
                assert!(
                    here.hypernym_edges().any(|t| *t == pair[1]),
                    "{} -> {} is not an edge",
                    pair[0],
                    pair[1]
                );
            }
            // no repeats
            let unique: HashSet<_> = a.synsets.iter().collect();
            assert_eq!(unique.len(), a.synsets.len());
        }
    }

    #[test]
    fn sink_chain_has_length_one() {
        let lexicon = fixture_lexicon();
        let chain = lexicon.msch(id("00001740-n")).unwrap();
        assert_eq!(chain.len(), 1);
    }

    #[test]
    fn msch_steps_to_the_higher_frequency_hypernym() {
        // dog has hypernyms canid (count 12) and domestic_animal (count 7)
        let lexicon = fixture_lexicon();
        let chain = lexicon.msch(id("00013000-n")).unwrap();
        assert_eq!(chain.synsets[1], id("00012000-n"));
        // enumerate both candidate chains by hand: the rejected branch exists
        let rejected = lexicon.msch(id("00014000-n")).unwrap();
        assert_eq!(*rejected.synsets.last().unwrap(), id("00001740-n"));
    }

    #[test]
    fn order_keys_are_injective_and_monotone() {
        let lexicon = fixture_lexicon();
        let mut keys = Vec::new();
        for synset in lexicon.synsets() {
            keys.push(lexicon.total_order_key(synset.id).unwrap());
        }
        for i in 0..keys.len() {
            for j in (i + 1)..keys.len() {
                assert_ne!(keys[i], keys[j]);
            }
        }
        // dalmatian (2) and poodle (3) share no count; poodle ranks higher
        let dalmatian = lexicon.total_order_key(id("00015000-n")).unwrap();
        let poodle = lexicon.total_order_key(id("00016000-n")).unwrap();
        assert!(poodle > dalmatian);
        assert!(lexicon.total_order_key(id("09999999-n")).is_err());
    }

    #[test]
    fn equal_frequencies_split_by_id() {
        let a = Synset {
            id: id("00000001-n"),
            lemmas: vec!["a".into()],
            hypernyms: vec![],
            instance_hypernyms: vec![],
        };
        let b = Synset {
            id: id("00000002-n"),
            lemmas: vec!["b".into()],
            hypernyms: vec![],
            instance_hypernyms: vec![],
        };
        let lexicon =
            Lexicon::build(vec![a, b], [], DisambiguationPolicy::MostFrequent).unwrap();
        let ka = lexicon.total_order_key(id("00000001-n")).unwrap();
        let kb = lexicon.total_order_key(id("00000002-n")).unwrap();
        assert!(ka < kb);
        assert_ne!(ka, kb);
    }

    #[test]
    fn disambiguation_prefers_the_frequent_sense() {
        let lexicon = fixture_lexicon();
        // bank: institution sense has count 30, slope sense count 5
        assert_eq!(
            lexicon.disambiguate("bank", Pos::Noun, &ctx()),
            Some(id("00017000-n"))
        );
        // single-sense lemma resolves regardless of context
        assert_eq!(
            lexicon.disambiguate("dalmatian", Pos::Noun, &ctx()),
            Some(id("00015000-n"))
        );
        assert_eq!(lexicon.disambiguate("xyzzy", Pos::Noun, &ctx()), None);
    }

    #[test]
    fn context_overlap_policy_uses_shared_lemmas() {
        let mut lexicon = fixture_lexicon();
        lexicon.set_policy(DisambiguationPolicy::ContextOverlap);
        // "slope" appears in the rarer bank sense's lemma list
        let context: BTreeSet<String> = ["slope".to_string()].into();
        assert_eq!(
            lexicon.disambiguate("bank", Pos::Noun, &context),
            Some(id("00019000-n"))
        );
        // empty context falls back to the frequency key
        assert_eq!(
            lexicon.disambiguate("bank", Pos::Noun, &ctx()),
            Some(id("00017000-n"))
        );
    }

    #[test]
    fn dalmatian_to_dog_to_canid() {
        let lexicon = fixture_lexicon();
        assert_eq!(
            lexicon.hyperonymize_word("dalmatian", Pos::Noun, &ctx(), 1),
            "dog"
        );
        assert_eq!(lexicon.hyperonymize_word("dog", Pos::Noun, &ctx(), 1), "canid");
        assert_eq!(
            lexicon.hyperonymize_word("poodle", Pos::Noun, &ctx(), 1),
            "dog"
        );
    }

    #[test]
    fn unknown_words_and_short_chains_are_fixed_points() {
        let lexicon = fixture_lexicon();
        assert_eq!(
            lexicon.hyperonymize_word("qwerty", Pos::Noun, &ctx(), 1),
            "qwerty"
        );
        assert_eq!(
            lexicon.hyperonymize_word("entity", Pos::Noun, &ctx(), 1),
            "entity"
        );
        assert_eq!(
            lexicon.hyperonymize_word("dalmatian", Pos::Noun, &ctx(), 99),
            "dalmatian"
        );
    }

    #[test]
    fn instance_hypernyms_are_chain_edges() {
        let lexicon = fixture_lexicon();
        let chain = lexicon.msch(id("00022000-n")).unwrap();
        assert_eq!(chain.synsets[1], id("00021000-n"));
        assert_eq!(
            lexicon.hyperonymize_word("paris", Pos::Noun, &ctx(), 1),
            "city"
        );
    }

    fn item(lemma: &str, pos: &str) -> PrunedItem {
        PrunedItem {
            lemma: lemma.into(),
            pos: pos.into(),
        }
    }

    #[test]
    fn corpus_hyperonymization_identities() {
        let lexicon = fixture_lexicon();
        let pruned = vec![PrunedTransaction {
            itemset: PrunedItemset::from_items(vec![
                item("dalmatian", "NN"),
                item("poodle", "NN"),
            ]),
            class_label: "pets".into(),
        }];
        // n = 0 is the identity
        assert_eq!(hyperonymize_corpus(&lexicon, &pruned, 0), pruned);
        // first order merges both breeds into dog
        let once = hyperonymize_corpus(&lexicon, &pruned, 1);
        let lemmas: Vec<&str> = once[0].itemset.lemmas().collect();
        assert_eq!(lemmas, vec!["dog"]);
        // items absent from the lexicon pass through for every order
        let absent = vec![PrunedTransaction {
            itemset: PrunedItemset::from_items(vec![item("blorp", "NN"), item("an", "DT")]),
            class_label: "c".into(),
        }];
        for n in [1, 3, 12] {
            assert_eq!(hyperonymize_corpus(&lexicon, &absent, n), absent);
        }
    }

    #[test]
    fn pos_selection_gates_hyperonymization() {
        let lexicon = fixture_lexicon();
        let pruned = vec![PrunedTransaction {
            itemset: PrunedItemset::from_items(vec![item("dalmatian", "NN"), item("run", "VV")]),
            class_label: "c".into(),
        }];
        let nouns_only =
            hyperonymize_corpus_with(&lexicon, &pruned, 1, PosSelection::NounsOnly);
        let lemmas: Vec<&str> = nouns_only[0].itemset.lemmas().collect();
        assert_eq!(lemmas, vec!["dog", "run"]);
        let verbs_only =
            hyperonymize_corpus_with(&lexicon, &pruned, 1, PosSelection::VerbsOnly);
        let lemmas: Vec<&str> = verbs_only[0].itemset.lemmas().collect();
        assert_eq!(lemmas, vec!["dalmatian", "travel"]);
    }

    #[test]
    fn hypernym_cycles_are_rejected_at_load() {
        let a = Synset {
            id: id("00000001-n"),
            lemmas: vec!["a".into()],
            hypernyms: vec![id("00000002-n")],
            instance_hypernyms: vec![],
        };
        let b = Synset {
            id: id("00000002-n"),
            lemmas: vec!["b".into()],
            hypernyms: vec![id("00000001-n")],
            instance_hypernyms: vec![],
        };
        let err = Lexicon::build(vec![a, b], [], DisambiguationPolicy::MostFrequent)
            .unwrap_err();
        assert!(matches!(err, Error::HypernymCycle(_)), "{err}");
    }

    #[test]
    fn unresolved_pointers_are_rejected() {
        let a = Synset {
            id: id("00000001-n"),
            lemmas: vec!["a".into()],
            hypernyms: vec![id("09999999-n")],
            instance_hypernyms: vec![],
        };
        let err = Lexicon::build(vec![a], [], DisambiguationPolicy::MostFrequent).unwrap_err();
        assert!(matches!(err, Error::UnknownSynset(_)), "{err}");
    }

    #[test]
    fn empty_frequency_data_still_gives_a_total_order() {
        let dir = fixture_dir();
        let empty = std::env::temp_dir().join("carmine_test_empty_freq.tsv");
        std::fs::write(&empty, "# no counts\n").unwrap();
        let lexicon = Lexicon::load(&dir, &empty).unwrap();
        std::fs::remove_file(&empty).ok();
        // order falls back to id order
        let a = lexicon.total_order_key(id("00001740-n")).unwrap();
        let b = lexicon.total_order_key(id("00002000-n")).unwrap();
        assert!(a < b);
        // chains still terminate deterministically
        let chain = lexicon.msch(id("00015000-n")).unwrap();
        assert_eq!(*chain.synsets.last().unwrap(), id("00001740-n"));
    }
}
