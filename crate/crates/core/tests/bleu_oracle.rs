//! Corpus BLEU against an independent implementation and a frozen value.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sentimt::bleu::{corpus_bleu, Smoothing};
use sentimt::textproc::tokenize_words;
use sentimt::Lang;

/// Textbook corpus BLEU with the same smoothing rule, written without any
/// shared code: n-grams are joined strings in ordered maps.
fn oracle(hyps: &[Vec<String>], refs: &[Vec<String>], smooth: bool) -> f64 {
    let mut matches = [0f64; 4];
    let mut totals = [0f64; 4];
    let (mut hyp_len, mut ref_len) = (0f64, 0f64);
    for (h, r) in hyps.iter().zip(refs) {
        hyp_len += h.len() as f64;
        ref_len += r.len() as f64;
        for n in 1..=4 {
            let grams = |t: &[String]| {
                let mut m: BTreeMap<String, usize> = BTreeMap::new();
                for i in 0..(t.len() + 1).saturating_sub(n) {
                    *m.entry(t[i..i + n].join("\u{1}")).or_insert(0) += 1;
                }
                m
            };
            let (hg, rg) = (grams(h), grams(r));
            for (g, c) in &hg {
                totals[n - 1] += *c as f64;
                matches[n - 1] += (*c).min(*rg.get(g).unwrap_or(&0)) as f64;
            }
        }
    }
    let mut log_sum = 0.0;
    for n in 0..4 {
        let p = if totals[n] == 0.0 {
            return 0.0;
        } else if matches[n] == 0.0 {
            if !smooth {
                return 0.0;
            }
            0.1 / totals[n]
        } else {
            matches[n] / totals[n]
        };
        log_sum += p.ln();
    }
    let bp = if hyp_len >= ref_len {
        1.0
    } else if hyp_len == 0.0 {
        0.0
    } else {
        (1.0 - ref_len / hyp_len).exp()
    };
    100.0 * bp * (log_sum / 4.0).exp()
}

fn toks(lines: &[&str]) -> Vec<Vec<String>> {
    lines.iter().map(|l| tokenize_words(l, Lang::En)).collect()
}

#[test]
fn identity_is_exactly_100() {
    let c = toks(&["the cat sat on the mat", "a very good book indeed , really", "they said : hello world"]);
    for s in [Smoothing::None, Smoothing::Floor] {
        let b = corpus_bleu(&c, &c, s).unwrap();
        assert_eq!(b.score, 100.0);
    }
}

#[test]
fn empty_hypotheses_score_zero() {
    let h = toks(&["", ""]);
    let r = toks(&["a b c d", "e f g"]);
    assert_eq!(corpus_bleu(&h, &r, Smoothing::Floor).unwrap().score, 0.0);
}

#[test]
fn frozen_five_pair_corpus() {
    // Counts and score computed once with a standalone script:
    // matches [25, 18, 12, 9] of [29, 24, 19, 14], hyp 29 / ref 30 tokens.
    let h = toks(&[
        "the cat is on the mat",
        "there is a cat on the mat",
        "a very rigid book",
        "i would not advise anyone to buy it",
        "damn you saadu deen",
    ]);
    let r = toks(&[
        "the cat sat on the mat",
        "there is a cat on the mat",
        "a very good book",
        "i would not advise anyone to buy it",
        "go to hell saadu deen",
    ]);
    let b = corpus_bleu(&h, &r, Smoothing::None).unwrap();
    assert_eq!((b.hyp_len, b.ref_len), (29, 30));
    assert!((b.brevity_penalty - 0.9661049965255963).abs() < 1e-12);
    assert!((b.score - 69.15294443163599).abs() < 1e-9, "{}", b.score);
    assert_eq!(corpus_bleu(&h, &r, Smoothing::Floor).unwrap().score, b.score);
}

#[test]
fn fifty_random_mini_corpora_match_oracle() {
    let vocab = ["the", "a", "cat", "dog", "sat", "on", "mat", "very", "good", "bad", "book", "is"];
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for case in 0..50 {
        let n = rng.random_range(1..=6);
        let sent = |rng: &mut ChaCha8Rng| -> Vec<String> {
            let len = rng.random_range(0..=12);
            (0..len).map(|_| vocab[rng.random_range(0..vocab.len())].to_string()).collect()
        };
        let refs: Vec<Vec<String>> = (0..n).map(|_| sent(&mut rng)).collect();
        // Hypotheses are noisy copies so that higher orders often match.
        let hyps: Vec<Vec<String>> = refs
            .iter()
            .map(|r| {
                let mut h = r.clone();
                for w in h.iter_mut() {
                    if rng.random_range(0..4) == 0 {
                        *w = vocab[rng.random_range(0..vocab.len())].to_string();
                    }
                }
                if rng.random_range(0..3) == 0 {
                    h.truncate(h.len() / 2);
                }
                h
            })
            .collect();
        for (smooth, s) in [(false, Smoothing::None), (true, Smoothing::Floor)] {
            let got = corpus_bleu(&hyps, &refs, s).unwrap().score;
            let want = oracle(&hyps, &refs, smooth);
            assert!((got - want).abs() < 0.1, "case {case}: {got} vs {want}");
        }
    }
}
