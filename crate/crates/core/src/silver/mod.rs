//! Silver-standard DA–EN–MSA triples: round-trip translation through an MT
//! backend followed by correction of known sentiment-idiom mistranslations.

pub mod backend;
pub mod io;

use std::fmt;
use std::thread;
use std::time::Duration;

use log::{debug, warn};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lexicon::PhraseLexicon;
use crate::textproc::casefold::{contains_ci, replace_ci};
use crate::textproc::{normalize_arabic, tokenize, Lang};

pub use backend::{BackendError, HttpBackend, HttpConfig, MockBackend, MtBackend};
pub use io::{export, import, ExportFormat, TripleWriter};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReviewReason {
    EmptySource,
    BackendError,
    UnlocatableSpan,
}

impl fmt::Display for ReviewReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ReviewReason::EmptySource => "empty_source",
            ReviewReason::BackendError => "backend_error",
            ReviewReason::UnlocatableSpan => "unlocatable_span",
        })
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReviewFlags {
    pub needs_review: bool,
    /// Sorted, without duplicates.
    pub reasons: Vec<ReviewReason>,
}

impl ReviewFlags {
    pub fn flag(&mut self, reason: ReviewReason) {
        self.needs_review = true;
        if let Err(at) = self.reasons.binary_search(&reason) {
            self.reasons.insert(at, reason);
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    En,
    Msa,
}

/// One applied replacement of a literal mistranslation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InfusionRecord {
    pub da_phrase: String,
    pub side: Side,
    pub replaced: String,
    pub replacement: String,
    pub count: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SilverTriple {
    pub da: String,
    pub en: String,
    pub msa: String,
    pub infusion_log: Vec<InfusionRecord>,
    pub flags: ReviewFlags,
}

impl SilverTriple {
    pub fn new(da: &str, en: &str, msa: &str) -> Self {
        SilverTriple {
            da: da.to_string(),
            en: en.to_string(),
            msa: msa.to_string(),
            ..Default::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RoundTripConfig {
    pub batch_size: usize,
    /// Extra attempts per batch after the first failure.
    pub max_retries: usize,
    /// Delay before retry `k` is `retry_backoff_ms * 2^k`.
    pub retry_backoff_ms: u64,
    /// Batches translated concurrently.
    pub in_flight: usize,
    /// Abort once this many batches in a row have failed.
    pub max_consecutive_failures: usize,
}

impl Default for RoundTripConfig {
    fn default() -> Self {
        RoundTripConfig {
            batch_size: 32,
            max_retries: 2,
            retry_backoff_ms: 200,
            in_flight: 4,
            max_consecutive_failures: 3,
        }
    }
}

#[derive(Debug, Error)]
pub enum SilverError {
    #[error("backend unreachable after {failures} consecutive failed batches ({} triples completed): {last}", .completed.len())]
    BackendUnreachable {
        failures: usize,
        last: BackendError,
        /// Triples of every batch processed before the abort, in input order.
        completed: Vec<SilverTriple>,
    },
    #[error("{0}")]
    Config(String),
}

fn with_retries(
    backend: &dyn MtBackend,
    batch: &[String],
    source: Lang,
    target: Lang,
    config: &RoundTripConfig,
) -> Result<Vec<String>, BackendError> {
    let mut attempt = 0;
    loop {
        match backend::translate_checked(backend, batch, source, target) {
            Ok(out) => return Ok(out),
            Err(e) if attempt < config.max_retries => {
                debug!("batch failed on attempt {}: {e}", attempt + 1);
                let delay = config.retry_backoff_ms.saturating_mul(1 << attempt.min(16));
                if delay > 0 {
                    thread::sleep(Duration::from_millis(delay));
                }
                attempt += 1;
            }
            Err(e) => return Err(e),
        }
    }
}

struct BatchOutcome {
    en: Vec<String>,
    msa: Vec<String>,
    error: Option<BackendError>,
}

fn run_batch(backend: &dyn MtBackend, da: &[String], config: &RoundTripConfig) -> BatchOutcome {
    let en = match with_retries(backend, da, Lang::Da, Lang::En, config) {
        Ok(en) => en,
        Err(e) => {
            return BatchOutcome {
                en: Vec::new(),
                msa: Vec::new(),
                error: Some(e),
            }
        }
    };
    match with_retries(backend, &en, Lang::En, Lang::Msa, config) {
        Ok(msa) => BatchOutcome {
            en,
            msa,
            error: None,
        },
        Err(e) => BatchOutcome {
            en,
            msa: Vec::new(),
            error: Some(e),
        },
    }
}

/// Translate every DA sentence to English and back to Arabic.
///
/// The output has one triple per input line, in input order. Blank inputs
/// are not sent and come back flagged `empty_source`; batches that still
/// fail after retries come back flagged `backend_error`. Windows of
/// `in_flight` batches run concurrently, and results are applied strictly in
/// batch order so the outcome does not depend on scheduling.
pub fn round_trip(
    corpus: &[String],
    backend: &dyn MtBackend,
    config: &RoundTripConfig,
) -> Result<Vec<SilverTriple>, SilverError> {
    if config.batch_size == 0 || config.in_flight == 0 {
        return Err(SilverError::Config(
            "batch_size and in_flight must be at least 1".into(),
        ));
    }
    let mut triples: Vec<SilverTriple> = corpus
        .iter()
        .map(|da| SilverTriple {
            da: da.clone(),
            ..Default::default()
        })
        .collect();

    let mut pending = Vec::new();
    for (i, t) in triples.iter_mut().enumerate() {
        if t.da.trim().is_empty() {
            t.flags.flag(ReviewReason::EmptySource);
        } else {
            pending.push(i);
        }
    }
    let batches: Vec<&[usize]> = pending.chunks(config.batch_size).collect();

    let mut consecutive = 0;
    for (w, window) in batches.chunks(config.in_flight).enumerate() {
        let outcomes: Vec<BatchOutcome> = window
            .par_iter()
            .map(|ids| {
                let da: Vec<String> = ids.iter().map(|&i| corpus[i].clone()).collect();
                run_batch(backend, &da, config)
            })
            .collect();

        for (b, (ids, outcome)) in window.iter().zip(outcomes).enumerate() {
            for (k, &i) in ids.iter().enumerate() {
                if let Some(en) = outcome.en.get(k) {
                    triples[i].en = en.clone();
                }
                if let Some(msa) = outcome.msa.get(k) {
                    triples[i].msa = msa.clone();
                }
            }
            match outcome.error {
                None => consecutive = 0,
                Some(err) => {
                    warn!("batch {} failed: {err}", w * config.in_flight + b);
                    for &i in ids.iter() {
                        triples[i].flags.flag(ReviewReason::BackendError);
                    }
                    consecutive += 1;
                    if consecutive >= config.max_consecutive_failures.max(1) {
                        let last_done = ids.last().copied().unwrap_or(0);
                        triples.truncate(last_done + 1);
                        return Err(SilverError::BackendUnreachable {
                            failures: consecutive,
                            last: err,
                            completed: triples,
                        });
                    }
                }
            }
        }
    }
    Ok(triples)
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct InfusionStats {
    pub phrases_found: usize,
    pub replacements_en: usize,
    pub replacements_msa: usize,
    pub already_correct: usize,
    /// Triples that had at least one phrase with no locatable rendering.
    pub flagged: usize,
}

impl InfusionStats {
    fn add(mut self, o: InfusionStats) -> InfusionStats {
        self.phrases_found += o.phrases_found;
        self.replacements_en += o.replacements_en;
        self.replacements_msa += o.replacements_msa;
        self.already_correct += o.already_correct;
        self.flagged += o.flagged;
        self
    }
}

/// Token sequence phrase search runs over.
fn normalized_tokens(text: &str) -> Vec<String> {
    tokenize(&normalize_arabic(text), Lang::Da)
        .into_iter()
        .map(|t| t.text)
        .collect()
}

fn infuse_one(t: &mut SilverTriple, phrases: &PhraseLexicon) -> InfusionStats {
    let mut stats = InfusionStats::default();
    let tokens = normalized_tokens(&t.da);
    let refs: Vec<&str> = tokens.iter().map(String::as_str).collect();
    let mut unlocatable = false;

    for m in phrases.find_matches(&refs) {
        let entry = phrases.get(m.entry);
        stats.phrases_found += 1;
        for side in [Side::En, Side::Msa] {
            let (text, correct) = match side {
                Side::En => (&mut t.en, &entry.en_translation),
                Side::Msa => (&mut t.msa, &entry.msa_translation),
            };
            let mut replaced_any = false;
            for lit in &entry.literal_mistranslations {
                let (new_text, n) = replace_ci(text, lit, correct);
                if n > 0 {
                    *text = new_text;
                    replaced_any = true;
                    match side {
                        Side::En => stats.replacements_en += n,
                        Side::Msa => stats.replacements_msa += n,
                    }
                    t.infusion_log.push(InfusionRecord {
                        da_phrase: entry.da_phrase.clone(),
                        side,
                        replaced: lit.clone(),
                        replacement: correct.clone(),
                        count: n,
                    });
                }
            }
            if replaced_any {
                continue;
            }
            if contains_ci(text, correct) {
                stats.already_correct += 1;
            } else {
                unlocatable = true;
            }
        }
    }
    if unlocatable {
        t.flags.flag(ReviewReason::UnlocatableSpan);
        stats.flagged = 1;
    }
    stats
}

/// Replace known literal renderings of lexicon phrases with their curated
/// translations on the EN and MSA sides. The DA side is never modified, and
/// spans that cannot be located are flagged rather than guessed.
pub fn infuse(triples: &mut [SilverTriple], phrases: &PhraseLexicon) -> InfusionStats {
    let per_triple: Vec<InfusionStats> = triples
        .par_iter_mut()
        .map(|t| infuse_one(t, phrases))
        .collect();
    per_triple
        .into_iter()
        .fold(InfusionStats::default(), InfusionStats::add)
}
