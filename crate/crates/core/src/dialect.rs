//! Dialectal-vs-standard Arabic sentence classifier.
//!
//! A logistic model over hashed character n-gram counts of the normalized
//! sentence. Training is plain SGD in a seeded shuffle order, keeping the
//! weights of the epoch with the best dev accuracy. Everything that feeds
//! the arithmetic is ordered (sorted sparse vectors, seeded RNG), so two
//! runs with the same data and seed produce bit-identical weights.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::textproc::normalize_arabic;

/// First line of every model file.
pub const MODEL_MAGIC: &str = "DAID1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DialectLabel {
    #[serde(rename = "DA")]
    Da,
    #[serde(rename = "MSA")]
    Msa,
}

impl fmt::Display for DialectLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DialectLabel::Da => "DA",
            DialectLabel::Msa => "MSA",
        })
    }
}

impl FromStr for DialectLabel {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_uppercase().as_str() {
            "DA" => Ok(DialectLabel::Da),
            "MSA" => Ok(DialectLabel::Msa),
            other => Err(format!("unknown label `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabeledSentence {
    pub text: String,
    pub label: DialectLabel,
}

/// Read `label<TAB>text` lines. Blank lines are skipped; sentences that are
/// empty after normalization are rejected.
pub fn read_labeled(path: &Path) -> Result<Vec<LabeledSentence>> {
    let text = fs::read_to_string(path).map_err(|e| Error::read(path, e))?;
    parse_labeled(&text, &path.display().to_string())
}

pub fn parse_labeled(text: &str, source_name: &str) -> Result<Vec<LabeledSentence>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.strip_suffix('\r').unwrap_or(line);
        if line.trim().is_empty() {
            continue;
        }
        let (label, body) = line
            .split_once('\t')
            .ok_or_else(|| Error::parse(source_name, i + 1, "expected `label<TAB>text`"))?;
        let label = label.parse().map_err(|m: String| Error::parse(source_name, i + 1, m))?;
        if normalize_arabic(body).trim().is_empty() {
            return Err(Error::parse(source_name, i + 1, "empty text"));
        }
        out.push(LabeledSentence {
            text: body.to_string(),
            label,
        });
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    pub epochs: usize,
    pub learning_rate: f64,
    pub l2: f64,
    pub seed: u64,
    /// Stop after this many epochs without a dev improvement.
    pub patience: usize,
    pub ngram_orders: Vec<usize>,
    pub hash_bits: u32,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            epochs: 20,
            learning_rate: 0.5,
            l2: 1e-6,
            seed: 42,
            patience: 3,
            ngram_orders: vec![2, 3, 4],
            hash_bits: 18,
        }
    }
}

/// Train / dev fractions; the remainder is held out as test data.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Split {
    pub train: f64,
    pub dev: f64,
}

impl Default for Split {
    fn default() -> Self {
        Split { train: 0.8, dev: 0.1 }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct DatasetSplit {
    pub train: Vec<LabeledSentence>,
    pub dev: Vec<LabeledSentence>,
    pub test: Vec<LabeledSentence>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainingMeta {
    pub n_train: usize,
    pub n_dev: usize,
    pub n_test: usize,
    pub epochs_run: usize,
    pub best_epoch: usize,
    pub dev_accuracy: Option<f64>,
    pub test_accuracy: Option<f64>,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DialectModel {
    pub ngram_orders: Vec<usize>,
    pub hash_bits: u32,
    pub hash_seed: u64,
    /// Non-zero weights only, keyed by hashed feature index.
    pub feature_weights: BTreeMap<u32, f64>,
    pub bias: f64,
    pub training_meta: TrainingMeta,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Prediction {
    pub label: DialectLabel,
    /// Probability of the dialectal class.
    pub probability: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    pub accuracy: f64,
    /// DA is the positive class; 0 when nothing was predicted DA.
    pub precision: f64,
    /// 0 when the test set holds no DA sentence.
    pub recall: f64,
    pub true_da: usize,
    pub false_da: usize,
    pub true_msa: usize,
    pub false_msa: usize,
    pub total: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoredLine {
    pub index: usize,
    pub probability: f64,
    pub label: DialectLabel,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Extraction {
    pub da: Vec<String>,
    pub msa: Vec<String>,
    pub report: Vec<ScoredLine>,
}

type SparseVec = Vec<(u32, f64)>;

fn fnv1a(seed: u64, order: usize, bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325 ^ seed;
    for &b in std::iter::once(&(order as u8)).chain(bytes) {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

/// Text that features are computed on: normalized, whitespace collapsed,
/// padded with a space on both ends so word edges form n-grams.
fn feature_text(text: &str) -> Option<Vec<char>> {
    let norm = normalize_arabic(text);
    let words: Vec<&str> = norm.split_whitespace().collect();
    if words.is_empty() {
        return None;
    }
    Some(format!(" {} ", words.join(" ")).chars().collect())
}

/// L2-normalized hashed n-gram counts, sorted by index. Colliding n-grams
/// share a slot and their counts add up.
fn featurize(text: &str, orders: &[usize], bits: u32, seed: u64) -> SparseVec {
    let Some(chars) = feature_text(text) else {
        return Vec::new();
    };
    let mask = (1u64 << bits) - 1;
    let mut counts: BTreeMap<u32, f64> = BTreeMap::new();
    let mut buf = String::new();
    for &n in orders {
        if n == 0 || chars.len() < n {
            continue;
        }
        for w in chars.windows(n) {
            buf.clear();
            buf.extend(w);
            let idx = (fnv1a(seed, n, buf.as_bytes()) & mask) as u32;
            *counts.entry(idx).or_default() += 1.0;
        }
    }
    let norm = counts.values().map(|c| c * c).sum::<f64>().sqrt();
    counts.into_iter().map(|(i, c)| (i, c / norm)).collect()
}

fn sigmoid(z: f64) -> f64 {
    1.0 / (1.0 + (-z.clamp(-30.0, 30.0)).exp())
}

fn target(label: DialectLabel) -> f64 {
    match label {
        DialectLabel::Da => 1.0,
        DialectLabel::Msa => 0.0,
    }
}

/// Stratified, seeded split. Each class is shuffled on its own and cut by
/// the fractions (at least one training example per class), then the three
/// parts are shuffled again.
pub fn split_dataset(data: &[LabeledSentence], split: Split, seed: u64) -> Result<DatasetSplit> {
    if !(0.0..=1.0).contains(&split.train)
        || !(0.0..=1.0).contains(&split.dev)
        || split.train + split.dev > 1.0 + 1e-12
    {
        return Err(Error::Input(format!(
            "invalid split: train {} + dev {} must be fractions summing to at most 1",
            split.train, split.dev
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = DatasetSplit::default();
    for label in [DialectLabel::Da, DialectLabel::Msa] {
        let mut class: Vec<LabeledSentence> =
            data.iter().filter(|s| s.label == label).cloned().collect();
        class.shuffle(&mut rng);
        let n = class.len();
        let n_train = ((n as f64 * split.train).round() as usize).clamp(n.min(1), n);
        let n_dev = ((n as f64 * split.dev).round() as usize).min(n - n_train);
        let rest = class.split_off(n_train);
        out.train.extend(class);
        let mut rest = rest;
        let test = rest.split_off(n_dev);
        out.dev.extend(rest);
        out.test.extend(test);
    }
    out.train.shuffle(&mut rng);
    out.dev.shuffle(&mut rng);
    out.test.shuffle(&mut rng);
    Ok(out)
}

struct Trainer<'a> {
    config: &'a TrainConfig,
    weights: Vec<f64>,
    bias: f64,
}

impl Trainer<'_> {
    fn score(&self, x: &SparseVec) -> f64 {
        self.bias + x.iter().map(|&(i, v)| self.weights[i as usize] * v).sum::<f64>()
    }

    fn step(&mut self, x: &SparseVec, y: f64, lr: f64) {
        let g = sigmoid(self.score(x)) - y;
        for &(i, v) in x {
            let w = &mut self.weights[i as usize];
            *w -= lr * (g * v + self.config.l2 * *w);
        }
        self.bias -= lr * g;
    }

    fn accuracy(&self, xs: &[(SparseVec, f64)]) -> f64 {
        let correct = xs
            .iter()
            .filter(|(x, y)| (sigmoid(self.score(x)) >= 0.5) == (*y == 1.0))
            .count();
        correct as f64 / xs.len() as f64
    }
}

/// Train a model. Fails when either class is missing from the data.
pub fn train(data: &[LabeledSentence], split: Split, config: &TrainConfig) -> Result<DialectModel> {
    for label in [DialectLabel::Da, DialectLabel::Msa] {
        if !data.iter().any(|s| s.label == label) {
            return Err(Error::Input(format!(
                "training data has no {label} sentences; both classes are required"
            )));
        }
    }
    if config.hash_bits == 0 || config.hash_bits > 30 {
        return Err(Error::Input("hash_bits must be between 1 and 30".into()));
    }
    let parts = split_dataset(data, split, config.seed)?;
    let hash_seed = config.seed;
    let encode = |set: &[LabeledSentence]| -> Vec<(SparseVec, f64)> {
        set.iter()
            .map(|s| {
                (
                    featurize(&s.text, &config.ngram_orders, config.hash_bits, hash_seed),
                    target(s.label),
                )
            })
            .collect()
    };
    let train_x = encode(&parts.train);
    let dev_x = encode(&parts.dev);

    let mut t = Trainer {
        config,
        weights: vec![0.0; 1 << config.hash_bits],
        bias: 0.0,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed.wrapping_add(1));
    let mut order: Vec<usize> = (0..train_x.len()).collect();

    let mut best: Option<(f64, usize, Vec<f64>, f64)> = None;
    let mut since_best = 0;
    let mut epochs_run = 0;
    for epoch in 1..=config.epochs {
        order.shuffle(&mut rng);
        let lr = config.learning_rate / (1.0 + 0.1 * (epoch - 1) as f64);
        for &i in &order {
            let (x, y) = &train_x[i];
            t.step(x, *y, lr);
        }
        epochs_run = epoch;
        if dev_x.is_empty() {
            continue;
        }
        let acc = t.accuracy(&dev_x);
        if best.as_ref().is_none_or(|b| acc > b.0) {
            best = Some((acc, epoch, t.weights.clone(), t.bias));
            since_best = 0;
        } else {
            since_best += 1;
            if since_best >= config.patience {
                break;
            }
        }
    }

    let (dev_accuracy, best_epoch, weights, bias) = match best {
        Some((acc, epoch, w, b)) => (Some(acc), epoch, w, b),
        None => (None, epochs_run, t.weights, t.bias),
    };

    let mut model = DialectModel {
        ngram_orders: config.ngram_orders.clone(),
        hash_bits: config.hash_bits,
        hash_seed,
        feature_weights: weights
            .iter()
            .enumerate()
            .filter(|(_, w)| **w != 0.0)
            .map(|(i, &w)| (i as u32, w))
            .collect(),
        bias,
        training_meta: TrainingMeta {
            n_train: parts.train.len(),
            n_dev: parts.dev.len(),
            n_test: parts.test.len(),
            epochs_run,
            best_epoch,
            dev_accuracy,
            test_accuracy: None,
            seed: config.seed,
        },
    };
    if !parts.test.is_empty() {
        model.training_meta.test_accuracy = Some(evaluate(&model, &parts.test, 0.5).accuracy);
    }
    Ok(model)
}

impl DialectModel {
    /// Raw probability of DA, or `None` when the text has no features.
    fn probability(&self, text: &str) -> Option<f64> {
        feature_text(text)?;
        let x = featurize(text, &self.ngram_orders, self.hash_bits, self.hash_seed);
        let z = self.bias
            + x.iter()
                .map(|(i, v)| self.feature_weights.get(i).copied().unwrap_or(0.0) * v)
                .sum::<f64>();
        Some(sigmoid(z))
    }

    /// Probability of the dialectal class and the thresholded label. Empty
    /// text scores exactly 0.5 and is labelled MSA.
    pub fn predict_with_threshold(&self, text: &str, threshold: f64) -> Prediction {
        match self.probability(text) {
            None => Prediction {
                label: DialectLabel::Msa,
                probability: 0.5,
            },
            Some(p) => Prediction {
                label: if p >= threshold { DialectLabel::Da } else { DialectLabel::Msa },
                probability: p,
            },
        }
    }

    pub fn predict(&self, text: &str) -> Prediction {
        self.predict_with_threshold(text, 0.5)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let mut f = fs::File::create(path).map_err(|e| Error::write(path, e))?;
        self.write_to(&mut f).map_err(|e| Error::write(path, e))
    }

    pub fn write_to<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "{MODEL_MAGIC}")?;
        serde_json::to_writer(&mut out, self)?;
        writeln!(out)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let f = fs::File::open(path).map_err(|e| Error::read(path, e))?;
        let mut reader = BufReader::new(f);
        let mut header = String::new();
        reader
            .read_line(&mut header)
            .map_err(|e| Error::read(path, e))?;
        if header.trim_end() != MODEL_MAGIC {
            return Err(Error::Model(format!(
                "{}: not a dialect model (missing {MODEL_MAGIC} header)",
                path.display()
            )));
        }
        serde_json::from_reader(reader)
            .map_err(|e| Error::Model(format!("{}: {e}", path.display())))
    }
}

pub fn predict(model: &DialectModel, text: &str) -> Prediction {
    model.predict(text)
}

/// Partition a corpus by predicted label. Every line lands in exactly one
/// side; the report keeps per-line probabilities in input order.
pub fn extract_da(model: &DialectModel, corpus: &[String], threshold: f64) -> Result<Extraction> {
    if !(threshold > 0.0 && threshold < 1.0) {
        return Err(Error::Input(format!("threshold {threshold} must lie strictly between 0 and 1")));
    }
    let report: Vec<ScoredLine> = corpus
        .par_iter()
        .enumerate()
        .map(|(index, line)| {
            let p = model.predict_with_threshold(line, threshold);
            ScoredLine {
                index,
                probability: p.probability,
                label: p.label,
            }
        })
        .collect();
    let mut da = Vec::new();
    let mut msa = Vec::new();
    for (line, scored) in corpus.iter().zip(&report) {
        match scored.label {
            DialectLabel::Da => da.push(line.clone()),
            DialectLabel::Msa => msa.push(line.clone()),
        }
    }
    Ok(Extraction { da, msa, report })
}

pub fn metrics_from_pairs(pairs: impl IntoIterator<Item = (DialectLabel, DialectLabel)>) -> Metrics {
    let (mut tp, mut fp, mut tn, mut fneg) = (0, 0, 0, 0);
    for (gold, pred) in pairs {
        match (gold, pred) {
            (DialectLabel::Da, DialectLabel::Da) => tp += 1,
            (DialectLabel::Msa, DialectLabel::Da) => fp += 1,
            (DialectLabel::Msa, DialectLabel::Msa) => tn += 1,
            (DialectLabel::Da, DialectLabel::Msa) => fneg += 1,
        }
    }
    let total = tp + fp + tn + fneg;
    let ratio = |a: usize, b: usize| if b == 0 { 0.0 } else { a as f64 / b as f64 };
    Metrics {
        accuracy: ratio(tp + tn, total),
        precision: ratio(tp, tp + fp),
        recall: ratio(tp, tp + fneg),
        true_da: tp,
        false_da: fp,
        true_msa: tn,
        false_msa: fneg,
        total,
    }
}

pub fn evaluate(model: &DialectModel, test: &[LabeledSentence], threshold: f64) -> Metrics {
    let preds: Vec<DialectLabel> = test
        .par_iter()
        .map(|s| model.predict_with_threshold(&s.text, threshold).label)
        .collect();
    metrics_from_pairs(test.iter().map(|s| s.label).zip(preds))
}
