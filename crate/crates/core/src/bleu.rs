//! Single-reference corpus BLEU (up to 4-grams).
//!
//! Clipped n-gram matches and totals are summed over the whole corpus
//! before the precisions are taken. With `Smoothing::Floor`, an order that
//! has candidate n-grams but no match gets precision `0.1 / total` instead
//! of zero; an order with no candidate n-grams at all is always zero.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MAX_ORDER: usize = 4;
const FLOOR: f64 = 0.1;

/// Label recorded in output metadata for the built-in tokenizer.
pub const TOKENIZER_NAME: &str = "sentimt-rules-v1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[derive(Default)]
pub enum Smoothing {
    /// Strict: any order without matches zeroes the score.
    #[serde(rename = "none")]
    None,
    /// Zero-match orders get `0.1` on the numerator.
    #[serde(rename = "add-one-exp")]
    #[default]
    Floor,
}


impl fmt::Display for Smoothing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Smoothing::None => "none",
            Smoothing::Floor => "add-one-exp",
        })
    }
}

impl FromStr for Smoothing {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "none" => Ok(Smoothing::None),
            "add-one-exp" | "floor" => Ok(Smoothing::Floor),
            other => Err(format!("unknown smoothing `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BleuScore {
    pub score: f64,
    pub precisions: [f64; MAX_ORDER],
    #[serde(rename = "bp")]
    pub brevity_penalty: f64,
    pub hyp_len: usize,
    pub ref_len: usize,
    pub smoothing: Smoothing,
    pub tokenizer: String,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
struct Counts {
    matches: [u64; MAX_ORDER],
    totals: [u64; MAX_ORDER],
    hyp_len: usize,
    ref_len: usize,
}

impl Counts {
    fn merge(mut self, other: Counts) -> Counts {
        for k in 0..MAX_ORDER {
            self.matches[k] += other.matches[k];
            self.totals[k] += other.totals[k];
        }
        self.hyp_len += other.hyp_len;
        self.ref_len += other.ref_len;
        self
    }
}

fn ngram_counts<S: AsRef<str>>(tokens: &[S], order: usize) -> HashMap<Vec<&str>, u64> {
    let mut counts = HashMap::new();
    if tokens.len() >= order {
        for w in tokens.windows(order) {
            let key: Vec<&str> = w.iter().map(AsRef::as_ref).collect();
            *counts.entry(key).or_default() += 1;
        }
    }
    counts
}

fn sentence_counts<S: AsRef<str>>(hyp: &[S], reference: &[S]) -> Counts {
    let mut c = Counts {
        hyp_len: hyp.len(),
        ref_len: reference.len(),
        ..Default::default()
    };
    for order in 1..=MAX_ORDER {
        let h = ngram_counts(hyp, order);
        let r = ngram_counts(reference, order);
        c.totals[order - 1] = h.values().sum();
        c.matches[order - 1] = h
            .iter()
            .map(|(g, &n)| n.min(r.get(g).copied().unwrap_or(0)))
            .sum();
    }
    c
}

fn brevity_penalty(hyp_len: usize, ref_len: usize) -> f64 {
    if hyp_len >= ref_len {
        1.0
    } else if hyp_len == 0 {
        0.0
    } else {
        (1.0 - ref_len as f64 / hyp_len as f64).exp()
    }
}

fn finish(c: Counts, smoothing: Smoothing) -> BleuScore {
    let precisions: [f64; MAX_ORDER] = std::array::from_fn(|k| {
        let (m, t) = (c.matches[k], c.totals[k]);
        if t == 0 {
            0.0
        } else if m == 0 {
            match smoothing {
                Smoothing::None => 0.0,
                Smoothing::Floor => FLOOR / t as f64,
            }
        } else {
            m as f64 / t as f64
        }
    });
    let bp = brevity_penalty(c.hyp_len, c.ref_len);
    let score = if precisions.contains(&0.0) {
        0.0
    } else {
        let log_mean = precisions.iter().map(|p| p.ln()).sum::<f64>() / MAX_ORDER as f64;
        100.0 * bp * log_mean.exp()
    };
    BleuScore {
        score,
        precisions,
        brevity_penalty: bp,
        hyp_len: c.hyp_len,
        ref_len: c.ref_len,
        smoothing,
        tokenizer: TOKENIZER_NAME.to_string(),
    }
}

/// Corpus BLEU over pre-tokenized, line-aligned hypotheses and references.
pub fn corpus_bleu<S>(hyps: &[Vec<S>], refs: &[Vec<S>], smoothing: Smoothing) -> Result<BleuScore>
where
    S: AsRef<str> + Sync,
{
    if hyps.len() != refs.len() {
        return Err(Error::Input(format!(
            "hypothesis has {} sentences but reference has {}",
            hyps.len(),
            refs.len()
        )));
    }
    if hyps.is_empty() {
        return Err(Error::Input("BLEU needs at least one sentence pair".into()));
    }
    // Integer counts, so the parallel reduction is order-independent.
    let counts = hyps
        .par_iter()
        .zip(refs.par_iter())
        .map(|(h, r)| sentence_counts(h, r))
        .reduce(Counts::default, Counts::merge);
    Ok(finish(counts, smoothing))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(s: &str) -> Vec<String> {
        s.split_whitespace().map(String::from).collect()
    }

    #[test]
    fn identity_is_100() {
        let c = vec![toks("the cat sat on the mat"), toks("a very good book indeed")];
        let b = corpus_bleu(&c, &c, Smoothing::None).unwrap();
        assert_eq!(b.score, 100.0);
        assert_eq!(b.brevity_penalty, 1.0);
        assert_eq!(b.precisions, [1.0; 4]);
    }

    #[test]
    fn empty_hypotheses_score_zero() {
        let h = vec![toks(""), toks("")];
        let r = vec![toks("a b c d"), toks("e f g h")];
        let b = corpus_bleu(&h, &r, Smoothing::Floor).unwrap();
        assert_eq!(b.score, 0.0);
        assert_eq!(b.hyp_len, 0);
        assert_eq!(b.brevity_penalty, 0.0);
    }

    #[test]
    fn length_mismatch_is_error() {
        let err = corpus_bleu(&[toks("a")], &[toks("a"), toks("b")], Smoothing::None).unwrap_err();
        assert!(err.is_user_error());
        assert!(corpus_bleu::<String>(&[], &[], Smoothing::None).is_err());
    }

    #[test]
    fn strict_zeroes_on_missing_4grams() {
        let h = vec![toks("a very rigid book")];
        let r = vec![toks("a very good book")];
        assert_eq!(corpus_bleu(&h, &r, Smoothing::None).unwrap().score, 0.0);
        let smooth = corpus_bleu(&h, &r, Smoothing::Floor).unwrap();
        // p = 3/4, 1/3, 0.1/2, 0.1/1
        let expect = 100.0 * ((0.75f64).ln() + (1.0f64 / 3.0).ln() + 0.05f64.ln() + 0.1f64.ln()).exp().powf(0.25);
        assert!((smooth.score - expect).abs() < 1e-9);
    }

    #[test]
    fn clipping() {
        let h = vec![toks("the the the the")];
        let r = vec![toks("the cat")];
        let b = corpus_bleu(&h, &r, Smoothing::Floor).unwrap();
        assert_eq!(b.precisions[0], 0.25);
    }
}
