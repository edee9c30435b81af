#![allow(dead_code)]

use std::path::Path;
use std::process::{Command, Output};

pub fn sentimt(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sentimt"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

/// Run and require exit 0, returning stdout.
pub fn ok(dir: &Path, args: &[&str]) -> String {
    let out = sentimt(dir, args);
    assert!(
        out.status.success(),
        "sentimt {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

pub fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

pub fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

pub fn demo_dir() -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    ok(dir.path(), &["demo", "--out", "."]);
    dir
}

/// The full detect, round trip, infuse, score and report chain on the
/// bundled data. Every output lands in `dir`.
pub const PIPELINE: &[&[&str]] = &[
    &["dialect", "train", "--data", "dialect_train.tsv", "--model", "model.daid"],
    &["dialect", "extract", "--model", "model.daid", "--input", "mixed.ar",
      "--out-da", "da.txt", "--out-msa", "msa.txt", "--report", "extract.tsv"],
    &["silver", "roundtrip", "--input", "da.txt", "--out", "raw.tsv", "--backend", "mock",
      "--mock-table", "mock_table.tsv", "--review", "review.tsv"],
    &["silver", "infuse", "--input", "raw.tsv", "--out", "infused.tsv", "--phrases", "phrases.tsv",
      "--log", "infuse.jsonl"],
    &["silver", "export", "--input", "raw.tsv", "--out", "raw", "--format", "paired-files"],
    &["silver", "export", "--input", "infused.tsv", "--out", "infused", "--format", "paired-files"],
    &["sam", "--hyp", "raw.en", "--ref", "mixed.ref.en", "--lexicon", "lexicon.tsv", "--out", "sam_raw"],
    &["sam", "--hyp", "infused.en", "--ref", "mixed.ref.en", "--lexicon", "lexicon.tsv", "--out", "sam_infused"],
    &["bleu", "--hyp", "infused.en", "--ref", "mixed.ref.en"],
    &["report", "compare", "--ref", "mixed.ref.en", "--system", "online=raw.en",
      "--system", "infused=infused.en", "--lexicon", "lexicon.tsv", "--out", "report.json"],
    &["report", "render", "--report", "report.json", "--format", "markdown", "--out", "report.md"],
];

/// Files the pipeline writes, compared across runs.
pub const PIPELINE_OUTPUTS: &[&str] = &[
    "model.daid", "da.txt", "msa.txt", "extract.tsv", "raw.tsv", "review.tsv", "infused.tsv",
    "infuse.jsonl", "raw.da", "raw.en", "raw.msa", "infused.da", "infused.en", "infused.msa",
    "sam_raw/sam.tsv", "sam_raw/summary.json", "sam_infused/sam.tsv", "sam_infused/summary.json",
    "report.json", "report.md",
];

/// Run the pipeline with extra global flags; returns captured stdout of
/// every step, concatenated.
pub fn run_pipeline(dir: &Path, global: &[&str]) -> String {
    let mut stdout = String::new();
    for step in PIPELINE {
        let mut args: Vec<&str> = global.to_vec();
        args.extend_from_slice(step);
        stdout.push_str(&ok(dir, &args));
    }
    stdout
}
