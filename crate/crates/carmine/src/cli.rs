//! The command-line interface: corpus validation, rule mining, document
//! classification, cross-validated evaluation and curve sweeps.
//!
//! Exit codes: 0 ok, 1 validation failure, 2 configuration error,
//! 3 runtime error.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::Serialize;

use crate::classifier::ClassificationResult;
use crate::config::RunConfig;
use crate::corpus::Corpus;
use crate::error::{Error, Result};
use crate::evaluation::{self, SweepAxis};
use crate::model::{self, TrainedModel};
use crate::pruning::{self, ConstraintId, PruneStrategy};
use crate::wordnet::Pos;

#[derive(Debug, Parser)]
#[command(
    name = "carmine",
    version,
    about = "Class-association-rule text classification over dependency-parsed corpora"
)]
pub struct Cli {
    /// TOML run configuration; flags below override its values.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    #[arg(long, global = true)]
    pub corpus: Option<PathBuf>,

    #[arg(long, global = true)]
    pub wordnet_dir: Option<PathBuf>,

    #[arg(long, global = true)]
    pub freq_file: Option<PathBuf>,

    /// Pruning strategy, e.g. dep:I1, dep:I2, tfidf:N=10.
    #[arg(long, global = true)]
    pub strategy: Option<String>,

    /// Hyperonymization order (0 disables).
    #[arg(long, global = true)]
    pub hyper_n: Option<usize>,

    #[arg(long, global = true)]
    pub min_support: Option<f64>,

    #[arg(long, global = true)]
    pub min_confidence: Option<f64>,

    #[arg(long, global = true)]
    pub max_itemset_size: Option<usize>,

    /// Rule budget rho_0 for evaluate and sweep.
    #[arg(long, global = true)]
    pub target_rules: Option<usize>,

    #[arg(long, global = true)]
    pub seed: Option<u64>,

    #[arg(long, global = true)]
    pub output_dir: Option<PathBuf>,

    /// Stdout report format: tsv or json.
    #[arg(long, global = true)]
    pub format: Option<String>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse the corpus, check every invariant, print counts and coverage.
    Validate,
    /// Train a rule set and write rules.json and rules.tsv.
    Mine,
    /// Classify the documents of a corpus file with a mined rule set.
    Classify {
        /// Rule file written by mine (.json, or .tsv for dependency strategies).
        #[arg(long)]
        rules: PathBuf,
        /// Corpus file with the documents to classify.
        #[arg(long)]
        docs: PathBuf,
        /// Output path for the JSON-lines verdicts; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Threshold search plus tenfold cross-validation; writes report files.
    Evaluate,
    /// Rerun evaluate along an axis and write one curve row per value.
    Sweep {
        /// tfidf_n or hyper_order.
        #[arg(long)]
        axis: String,
        #[arg(long)]
        from: usize,
        #[arg(long)]
        to: usize,
    },
}

/// Entry point used by the binary; parses arguments from the process.
pub fn main() -> i32 {
    run(Cli::parse())
}

pub fn run(cli: Cli) -> i32 {
    match dispatch(cli) {
        Ok(()) => 0,
        Err(err) => {
            eprintln!("error: {err}");
            exit_code(&err)
        }
    }
}

fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Parse { .. } | Error::Schema(_) | Error::Tree { .. } => 1,
        Error::Config(_) | Error::ModelMismatch(_) => 2,
        _ => 3,
    }
}

fn dispatch(cli: Cli) -> Result<()> {
    let mut config = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    config.apply_env();
    merge_flags(&mut config, &cli);
    config.validate()?;
    match cli.command {
        Command::Validate => cmd_validate(&config),
        Command::Mine => cmd_mine(&config),
        Command::Classify { rules, docs, out } => {
            cmd_classify(&config, &rules, &docs, out.as_deref())
        }
        Command::Evaluate => cmd_evaluate(&config),
        Command::Sweep { axis, from, to } => cmd_sweep(&config, &axis, from, to),
    }
}

fn merge_flags(config: &mut RunConfig, cli: &Cli) {
    if let Some(v) = &cli.corpus {
        config.corpus = Some(v.clone());
    }
    if let Some(v) = &cli.wordnet_dir {
        config.wordnet_dir = Some(v.clone());
    }
    if let Some(v) = &cli.freq_file {
        config.freq_file = Some(v.clone());
    }
    if let Some(v) = &cli.strategy {
        config.strategy = v.clone();
    }
    if let Some(v) = cli.hyper_n {
        config.hyper_n = v;
    }
    if let Some(v) = cli.min_support {
        config.mining.min_support = v;
        config.search.initial_support = v;
    }
    if let Some(v) = cli.min_confidence {
        config.mining.min_confidence = v;
        config.search.initial_confidence = v;
    }
    if let Some(v) = cli.max_itemset_size {
        config.mining.max_itemset_size = v;
    }
    if let Some(v) = cli.target_rules {
        config.search.target_rules = v;
    }
    if let Some(v) = cli.seed {
        config.search.seed = v;
    }
    if let Some(v) = &cli.output_dir {
        config.output_dir = v.clone();
    }
    if let Some(v) = &cli.format {
        config.format = v.clone();
    }
}

fn load_corpus(config: &RunConfig) -> Result<Corpus> {
    Corpus::from_path(config.corpus_path()?)
}

fn ensure_output_dir(config: &RunConfig) -> Result<()> {
    fs::create_dir_all(&config.output_dir).map_err(|source| Error::Io {
        path: config.output_dir.clone(),
        source,
    })
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn cmd_validate(config: &RunConfig) -> Result<()> {
    let path = config.corpus_path()?;
    let corpus = Corpus::from_path(path)?;
    let sentences: Vec<&crate::corpus::Sentence> =
        corpus.forgetful().iter().map(|(s, _)| *s).collect();

    let mut out = String::new();
    writeln!(out, "corpus: {}", path.display()).unwrap();
    writeln!(out, "documents: {}", corpus.documents().len()).unwrap();
    writeln!(out, "sentences: {}", corpus.num_sentences()).unwrap();
    writeln!(out, "tokens: {}", corpus.num_tokens()).unwrap();
    let class_list: Vec<&str> = corpus.classes().iter().map(String::as_str).collect();
    writeln!(
        out,
        "classes: {} ({})",
        corpus.classes().len(),
        class_list.join(", ")
    )
    .unwrap();
    for class in corpus.classes() {
        let count = corpus
            .documents()
            .iter()
            .filter(|d| d.class_label == *class)
            .count();
        writeln!(out, "  {class}: {count} documents").unwrap();
    }
    writeln!(out, "constraint coverage:").unwrap();
    let named: [(&str, ConstraintId); 5] = [
        ("head (I0)", ConstraintId::HeadOnly),
        ("nsubj->root (I1)", ConstraintId::NsubjOfHead),
        ("ccomp->root (I1')", ConstraintId::CcompOfHead),
        ("nouns at distance 1 (I2)", ConstraintId::NounsDist1),
        ("verbs at distance 1 (I2')", ConstraintId::VerbsDist1),
    ];
    for (label, constraint) in &named {
        let coverage =
            pruning::constraint_coverage(sentences.iter().copied(), constraint) * 100.0;
        writeln!(out, "  {label}: {coverage:.2}% of sentences").unwrap();
    }
    if let PruneStrategy::Dependency(constraint) = config.strategy()? {
        let unknown =
            pruning::unknown_constraint_labels(&constraint, sentences.iter().copied());
        for label in unknown {
            writeln!(
                out,
                "warning: dependency label {label:?} never occurs in the corpus"
            )
            .unwrap();
        }
    }
    if let Some(lexicon) = config.load_lexicon()? {
        writeln!(
            out,
            "lexicon: {} noun synsets, {} verb synsets",
            lexicon.synset_count(Pos::Noun),
            lexicon.synset_count(Pos::Verb)
        )
        .unwrap();
    }
    out.push_str("ok\n");
    print!("{out}");
    Ok(())
}

fn cmd_mine(config: &RunConfig) -> Result<()> {
    let corpus = load_corpus(config)?;
    let lexicon = config.load_lexicon()?;
    let model = model::train_model(
        &corpus,
        &config.mining_params(),
        &config.strategy()?,
        config.hyper_n,
        lexicon.as_ref(),
        config.hyper_pos()?,
    )?;
    ensure_output_dir(config)?;
    let json_path = config.output_dir.join("rules.json");
    let tsv_path = config.output_dir.join("rules.tsv");
    model.write_json(&json_path)?;
    model.write_tsv(&tsv_path)?;
    println!("transactions: {}", model.transaction_count);
    match model.avg_transaction_size {
        Some(avg) => println!("average transaction size: {avg:.2}"),
        None => println!("average transaction size: n/a"),
    }
    println!("rules: {}", model.rule_count());
    if model.rules.is_empty() {
        println!("warning: empty rule set (thresholds too strict?)");
    }
    println!("wrote {}", json_path.display());
    println!("wrote {}", tsv_path.display());
    Ok(())
}

#[derive(Serialize)]
struct DocumentVerdict<'a> {
    doc_id: &'a str,
    actual_class: &'a str,
    #[serde(flatten)]
    result: ClassificationResult,
}

fn cmd_classify(
    config: &RunConfig,
    rules_path: &Path,
    docs_path: &Path,
    out: Option<&Path>,
) -> Result<()> {
    let model = TrainedModel::read(rules_path)?;
    model.check_compatible(&config.strategy()?, config.hyper_n, config.hyper_pos()?)?;
    let lexicon = config.load_lexicon()?;
    if model.hyper_n > 0 && lexicon.is_none() {
        return Err(Error::MissingLexicon(model.hyper_n));
    }
    let corpus = Corpus::from_path(docs_path)?;
    let mut lines = String::new();
    for document in corpus.documents() {
        let result = model.classify(document, lexicon.as_ref())?;
        let verdict = DocumentVerdict {
            doc_id: &document.id,
            actual_class: &document.class_label,
            result,
        };
        lines.push_str(&serde_json::to_string(&verdict).expect("verdict serializes"));
        lines.push('\n');
    }
    match out {
        Some(path) => {
            write_file(path, &lines)?;
            println!(
                "classified {} documents -> {}",
                corpus.documents().len(),
                path.display()
            );
        }
        None => print!("{lines}"),
    }
    Ok(())
}

fn cmd_evaluate(config: &RunConfig) -> Result<()> {
    let corpus = load_corpus(config)?;
    let lexicon = config.load_lexicon()?;
    let report = evaluation::evaluate_with(
        &corpus,
        &config.search_config(),
        &config.strategy()?,
        config.hyper_n,
        lexicon.as_ref(),
        config.hyper_pos()?,
        config.mining.max_itemset_size,
    )?;
    ensure_output_dir(config)?;
    let json_path = config.output_dir.join("report.json");
    let tsv_path = config.output_dir.join("report.tsv");
    write_file(
        &json_path,
        &serde_json::to_string_pretty(&report).expect("report serializes"),
    )?;
    let table = evaluation::report_table(&report);
    write_file(&tsv_path, &table)?;
    if config.format == "json" {
        println!(
            "{}",
            serde_json::to_string_pretty(&report).expect("report serializes")
        );
    } else {
        print!("{table}");
    }
    for note in &report.notes {
        eprintln!("note: {note}");
    }
    println!("wrote {}", json_path.display());
    println!("wrote {}", tsv_path.display());
    Ok(())
}

fn cmd_sweep(config: &RunConfig, axis: &str, from: usize, to: usize) -> Result<()> {
    let axis: SweepAxis = axis.parse()?;
    if from > to {
        return Err(Error::Config(format!("empty sweep range {from}..{to}")));
    }
    let corpus = load_corpus(config)?;
    let lexicon = config.load_lexicon()?;
    let points = evaluation::sweep_curve(
        &corpus,
        &config.search_config(),
        &config.strategy()?,
        config.hyper_n,
        lexicon.as_ref(),
        config.hyper_pos()?,
        config.mining.max_itemset_size,
        axis,
        from..=to,
    )?;
    let mut table = String::from("x\trecall\tprecision\tf_measure\tvariety\tdispersion\n");
    for p in &points {
        writeln!(
            table,
            "{}\t{:.4}\t{:.4}\t{:.4}\t{:.4}\t{:.4}",
            p.x, p.macro_recall, p.macro_precision, p.macro_f, p.mean_variety, p.mean_dispersion
        )
        .unwrap();
    }
    ensure_output_dir(config)?;
    let name = match axis {
        SweepAxis::TfidfN => "curve_tfidf_n.tsv",
        SweepAxis::HyperOrder => "curve_hyper_order.tsv",
    };
    let path = config.output_dir.join(name);
    write_file(&path, &table)?;
    print!("{table}");
    println!("wrote {}", path.display());
    Ok(())
}
