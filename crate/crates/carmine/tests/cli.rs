//! End-to-end tests of the carmine binary and its exit codes.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use carmine::synth;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_carmine"))
}

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

fn stdout(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

fn stderr(output: &Output) -> String {
    String::from_utf8_lossy(&output.stderr).into_owned()
}

#[test]
fn validate_reports_counts_and_coverage() {
    let output = bin()
        .args(["validate", "--corpus"])
        .arg(data("tiny.conllu"))
        .output()
        .unwrap();
    assert!(output.status.success(), "{}", stderr(&output));
    let out = stdout(&output);
    assert!(out.contains("documents: 8"), "{out}");
    assert!(out.contains("classes: 4 (crime, economy, politics, sports)"));
    assert!(out.contains("head (I0): 100.00% of sentences"));
    assert!(out.contains("nsubj->root (I1): 100.00% of sentences"));
    assert!(out.contains("ok"));
}

#[test]
fn validate_reports_lexicon_counts() {
    let output = bin()
        .args(["validate", "--corpus"])
        .arg(data("tiny.conllu"))
        .arg("--wordnet-dir")
        .arg(data("fixture_wordnet"))
        .arg("--freq-file")
        .arg(data("fixture_wordnet/freq.tsv"))
        .output()
        .unwrap();
    assert!(output.status.success(), "{}", stderr(&output));
    let out = stdout(&output);
    assert!(out.contains("lexicon: 21 noun synsets, 11 verb synsets"), "{out}");
}

#[test]
fn validate_computes_partial_nsubj_coverage() {
    // 4 of 5 sentences carry an nsubj -> root edge
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("partial.conllu");
    let mut text = String::new();
    for i in 0..4 {
        text.push_str(&format!(
            "# newdoc id = d{i}\n# class = A\n# sent_id = d{i}-s1\n\
             1\tcat\tcat\tNN\t2\tnsubj\n2\truns\trun\tVVZ\t0\troot\n\n"
        ));
    }
    text.push_str(
        "# newdoc id = d4\n# class = B\n# sent_id = d4-s1\n\
         1\truns\trun\tVVZ\t0\troot\n2\tfast\tfast\tRB\t1\tadvmod\n\n",
    );
    fs::write(&path, text).unwrap();
    let output = bin().args(["validate", "--corpus"]).arg(&path).output().unwrap();
    assert!(output.status.success(), "{}", stderr(&output));
    assert!(
        stdout(&output).contains("nsubj->root (I1): 80.00% of sentences"),
        "{}",
        stdout(&output)
    );
}

#[test]
fn validate_rejects_corrupted_head_with_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.conllu");
    fs::write(
        &path,
        "# newdoc id = d1\n# class = A\n# sent_id = bad-sentence\n\
         1\ta\ta\tNN\t9\tdep\n2\tb\tb\tVV\t0\troot\n",
    )
    .unwrap();
    let output = bin().args(["validate", "--corpus"]).arg(&path).output().unwrap();
    assert_eq!(output.status.code(), Some(1));
    assert!(stderr(&output).contains("bad-sentence"), "{}", stderr(&output));
}

#[test]
fn missing_corpus_path_is_a_config_error() {
    let output = bin()
        .args(["validate", "--corpus", "/nonexistent/corpus.conllu"])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
}

fn mine_tiny(dir: &Path) -> Output {
    bin()
        .args(["mine", "--corpus"])
        .arg(data("tiny.conllu"))
        .args(["--strategy", "dep:I0"])
        .args(["--min-support", "0.1", "--min-confidence", "0.6"])
        .arg("--output-dir")
        .arg(dir)
        .output()
        .unwrap()
}

#[test]
fn mine_writes_rule_files_and_stats() {
    let dir = tempfile::tempdir().unwrap();
    let output = mine_tiny(dir.path());
    assert!(output.status.success(), "{}", stderr(&output));
    let out = stdout(&output);
    assert!(out.contains("rules: 4"), "{out}");
    assert!(out.contains("average transaction size: 1.00"), "{out}");
    let json = fs::read_to_string(dir.path().join("rules.json")).unwrap();
    assert!(json.contains("\"score\""));
    let tsv = fs::read_to_string(dir.path().join("rules.tsv")).unwrap();
    assert!(tsv.contains("# strategy = dep:I0"));
    assert!(tsv.contains("ITEMS\tCLASS\tSUPPORT\tCONFIDENCE"));

    // byte-identical rerun
    let dir2 = tempfile::tempdir().unwrap();
    let output2 = mine_tiny(dir2.path());
    assert!(output2.status.success());
    let json2 = fs::read_to_string(dir2.path().join("rules.json")).unwrap();
    assert_eq!(json, json2);
}

#[test]
fn classify_emits_verdicts_and_refuses_mismatch() {
    let dir = tempfile::tempdir().unwrap();
    assert!(mine_tiny(dir.path()).status.success());
    let rules = dir.path().join("rules.json");

    let output = bin()
        .args(["classify", "--rules"])
        .arg(&rules)
        .arg("--docs")
        .arg(data("tiny.conllu"))
        .args(["--strategy", "dep:I0"])
        .output()
        .unwrap();
    assert!(output.status.success(), "{}", stderr(&output));
    let out = stdout(&output);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 8);
    for line in &lines {
        let verdict: serde_json::Value = serde_json::from_str(line).unwrap();
        assert_eq!(verdict["predicted_class"], verdict["actual_class"]);
        assert!(verdict["class_scores"].is_object());
        assert!(verdict["verdicts"].is_array());
    }

    // the strategy recorded in the rule file must equal the configuration
    let mismatch = bin()
        .args(["classify", "--rules"])
        .arg(&rules)
        .arg("--docs")
        .arg(data("tiny.conllu"))
        .args(["--strategy", "dep:I1"])
        .output()
        .unwrap();
    assert_eq!(mismatch.status.code(), Some(2));
    assert!(stderr(&mismatch).contains("mismatch"), "{}", stderr(&mismatch));
}

#[test]
fn classify_writes_to_file_when_asked() {
    let dir = tempfile::tempdir().unwrap();
    assert!(mine_tiny(dir.path()).status.success());
    let out_path = dir.path().join("verdicts.jsonl");
    let output = bin()
        .args(["classify", "--rules"])
        .arg(dir.path().join("rules.json"))
        .arg("--docs")
        .arg(data("tiny.conllu"))
        .args(["--strategy", "dep:I0"])
        .arg("--out")
        .arg(&out_path)
        .output()
        .unwrap();
    assert!(output.status.success(), "{}", stderr(&output));
    let written = fs::read_to_string(&out_path).unwrap();
    assert_eq!(written.lines().count(), 8);
}

fn write_synthetic_corpus(path: &Path) {
    let corpus = synth::marker_corpus(
        &[
            ("sports", "score"),
            ("economy", "trade"),
            ("politics", "vote"),
            ("crime", "steal"),
        ],
        10,
        42,
    );
    corpus.write_to(path).unwrap();
}

#[test]
fn evaluate_writes_deterministic_reports() {
    let dir = tempfile::tempdir().unwrap();
    let corpus_path = dir.path().join("synthetic.conllu");
    write_synthetic_corpus(&corpus_path);
    let run = |out: &Path| {
        bin()
            .args(["evaluate", "--corpus"])
            .arg(&corpus_path)
            .args(["--strategy", "dep:I0"])
            .args(["--min-support", "0.05", "--min-confidence", "0.6"])
            .args(["--target-rules", "4", "--seed", "42"])
            .arg("--output-dir")
            .arg(out)
            .output()
            .unwrap()
    };
    let out_a = dir.path().join("a");
    let out_b = dir.path().join("b");
    let output = run(&out_a);
    assert!(output.status.success(), "{}", stderr(&output));
    let table = stdout(&output);
    assert!(table.contains("\tAVG"), "{table}");
    assert!(table.contains("F-measure\t"), "{table}");
    assert!(table.contains("MinSupp="), "{table}");
    for field in ["MinConf=", "Var.=", "Disp.=", "AvgTransSize="] {
        assert!(table.contains(field), "missing {field} in {table}");
    }
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out_a.join("report.json")).unwrap()).unwrap();
    assert_eq!(report["macro_f"], 1.0);

    assert!(run(&out_b).status.success());
    assert_eq!(
        fs::read(out_a.join("report.json")).unwrap(),
        fs::read(out_b.join("report.json")).unwrap()
    );
    assert_eq!(
        fs::read(out_a.join("report.tsv")).unwrap(),
        fs::read(out_b.join("report.tsv")).unwrap()
    );
}

#[test]
fn sweep_tfidf_axis_emits_monotone_rows() {
    let dir = tempfile::tempdir().unwrap();
    let corpus_path = dir.path().join("synthetic.conllu");
    write_synthetic_corpus(&corpus_path);
    let output = bin()
        .args(["sweep", "--axis", "tfidf_n", "--from", "1", "--to", "3"])
        .args(["--corpus"])
        .arg(&corpus_path)
        .args(["--min-support", "0.05", "--min-confidence", "0.6"])
        .args(["--target-rules", "4", "--seed", "42"])
        .arg("--output-dir")
        .arg(dir.path())
        .output()
        .unwrap();
    assert!(output.status.success(), "{}", stderr(&output));
    let curve = fs::read_to_string(dir.path().join("curve_tfidf_n.tsv")).unwrap();
    let lines: Vec<&str> = curve.lines().collect();
    assert_eq!(lines[0], "x\trecall\tprecision\tf_measure\tvariety\tdispersion");
    assert_eq!(lines.len(), 4);
    let xs: Vec<&str> = lines[1..]
        .iter()
        .map(|l| l.split('\t').next().unwrap())
        .collect();
    assert_eq!(xs, ["1", "2", "3"]);
}

#[test]
fn sweep_hyper_axis_with_empty_lexicon_is_flat() {
    let dir = tempfile::tempdir().unwrap();
    let corpus_path = dir.path().join("synthetic.conllu");
    write_synthetic_corpus(&corpus_path);
    // an empty lexicon: present but with no synsets, so hyperonymization
    // leaves every item unchanged and all rows coincide
    let wn = dir.path().join("empty_wordnet");
    fs::create_dir_all(&wn).unwrap();
    for file in ["data.noun", "data.verb", "index.noun", "index.verb"] {
        fs::write(wn.join(file), "").unwrap();
    }
    fs::write(wn.join("freq.tsv"), "").unwrap();
    let output = bin()
        .args(["sweep", "--axis", "hyper_order", "--from", "1", "--to", "3"])
        .args(["--corpus"])
        .arg(&corpus_path)
        .args(["--strategy", "dep:I0"])
        .args(["--min-support", "0.05", "--min-confidence", "0.6"])
        .args(["--target-rules", "4", "--seed", "42"])
        .arg("--wordnet-dir")
        .arg(&wn)
        .arg("--freq-file")
        .arg(wn.join("freq.tsv"))
        .arg("--output-dir")
        .arg(dir.path())
        .output()
        .unwrap();
    assert!(output.status.success(), "{}", stderr(&output));
    let curve = fs::read_to_string(dir.path().join("curve_hyper_order.tsv")).unwrap();
    let rows: Vec<Vec<&str>> = curve
        .lines()
        .skip(1)
        .map(|l| l.split('\t').skip(1).collect())
        .collect();
    assert_eq!(rows.len(), 3);
    assert_eq!(rows[0], rows[1]);
    assert_eq!(rows[1], rows[2]);
}

#[test]
fn config_file_drives_the_run_and_flags_override() {
    let dir = tempfile::tempdir().unwrap();
    let config_path = dir.path().join("run.toml");
    fs::write(
        &config_path,
        format!(
            "corpus = {:?}\nstrategy = \"dep:I0\"\noutput_dir = {:?}\n\n\
             [mining]\nmin_support = 0.1\nmin_confidence = 0.6\n",
            data("tiny.conllu").display().to_string(),
            dir.path().display().to_string(),
        ),
    )
    .unwrap();
    let output = bin().arg("--config").arg(&config_path).arg("mine").output().unwrap();
    assert!(output.status.success(), "{}", stderr(&output));
    assert!(dir.path().join("rules.json").exists());

    // a flag overrides the file: an unknown strategy string must fail
    let output = bin()
        .arg("--config")
        .arg(&config_path)
        .args(["mine", "--strategy", "nonsense"])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
}
