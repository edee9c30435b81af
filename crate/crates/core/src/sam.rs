//! Sentiment-Aware Measure between a hypothesis and a reference translation.
//!
//! Both sentences are reduced to the lemma-POS items left over after
//! cancelling everything they share. Each leftover item `i` carries its
//! prior polarity `s_i` (0 when absent from the lexicon) and a weight
//! `w_i = |s_i|`. A side's sentiment is the weighted mean
//! `S = Σ (w_i / Σw) · s_i`, defined as 0 when `Σw = 0`, and the score is
//!
//! ```text
//! sam = |S_ref - S_hyp| / 2        (0 = same sentiment, 1 = opposite poles)
//! ```

use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::lexicon::{Pos, PriorPolarityLexicon};
use crate::textproc::AnnotatedSentence;

pub type Item = (String, Pos);

/// Items left unmatched on each side after multiset cancellation.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MismatchSets {
    pub hyp_mismatched: Vec<Item>,
    pub ref_mismatched: Vec<Item>,
}

impl MismatchSets {
    pub fn m(&self) -> usize {
        self.hyp_mismatched.len()
    }

    pub fn n(&self) -> usize {
        self.ref_mismatched.len()
    }
}

/// A weighted item: lemma, POS, prior polarity and normalized weight.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightedItem {
    pub lemma: String,
    pub pos: Pos,
    pub score: f64,
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SamResult {
    pub s_h: f64,
    pub s_r: f64,
    pub sam: f64,
    pub hyp_weights: Vec<WeightedItem>,
    pub ref_weights: Vec<WeightedItem>,
    /// Every hypothesis-side weight is zero (or there are no items).
    pub degenerate_hyp: bool,
    pub degenerate_ref: bool,
    pub m: usize,
    pub n: usize,
}

impl SamResult {
    /// At least one side had a non-zero total weight.
    pub fn is_defined(&self) -> bool {
        !(self.degenerate_hyp && self.degenerate_ref)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusSamSummary {
    pub total_sam: f64,
    /// Mean over all pairs; absent for an empty corpus.
    pub mean_sam_all: Option<f64>,
    /// Mean over pairs where at least one side is non-degenerate.
    pub mean_sam_defined: Option<f64>,
    pub n_pairs: usize,
    pub n_defined: usize,
}

fn items(s: &AnnotatedSentence) -> impl Iterator<Item = Item> + '_ {
    s.tokens
        .iter()
        .filter(|t| !t.is_punctuation())
        .map(|t| (t.lemma.to_lowercase(), t.pos))
}

/// Multiset cancellation of case-folded (lemma, POS) items.
///
/// Shared occurrences are removed from both sides, earliest first; the
/// remaining items keep their sentence order. Punctuation is dropped before
/// matching.
pub fn extract_mismatches(hyp: &AnnotatedSentence, reference: &AnnotatedSentence) -> MismatchSets {
    let hyp_items: Vec<Item> = items(hyp).collect();
    let ref_items: Vec<Item> = items(reference).collect();

    let mut hyp_counts: HashMap<&Item, usize> = HashMap::new();
    for it in &hyp_items {
        *hyp_counts.entry(it).or_default() += 1;
    }
    let mut ref_counts: HashMap<&Item, usize> = HashMap::new();
    for it in &ref_items {
        *ref_counts.entry(it).or_default() += 1;
    }
    let shared: HashMap<&Item, usize> = hyp_counts
        .iter()
        .filter_map(|(k, &c)| ref_counts.get(k).map(|&r| (*k, c.min(r))))
        .collect();

    let remaining = |side: &[Item]| -> Vec<Item> {
        let mut to_cancel = shared.clone();
        side.iter()
            .filter(|it| match to_cancel.get_mut(it) {
                Some(c) if *c > 0 => {
                    *c -= 1;
                    false
                }
                _ => true,
            })
            .cloned()
            .collect()
    };

    MismatchSets {
        hyp_mismatched: remaining(&hyp_items),
        ref_mismatched: remaining(&ref_items),
    }
}

/// Weighted sentiment of one side; returns (S, items, degenerate).
fn side_score(side: &[Item], lex: &PriorPolarityLexicon) -> (f64, Vec<WeightedItem>, bool) {
    let scores: Vec<f64> = side
        .iter()
        .map(|(lemma, pos)| lex.lookup(lemma, *pos).unwrap_or(0.0))
        .collect();
    let total_weight: f64 = scores.iter().map(|s| s.abs()).sum();
    let degenerate = total_weight == 0.0;

    let weighted: Vec<WeightedItem> = side
        .iter()
        .zip(&scores)
        .map(|((lemma, pos), &score)| WeightedItem {
            lemma: lemma.clone(),
            pos: *pos,
            score,
            weight: if degenerate { 0.0 } else { score.abs() / total_weight },
        })
        .collect();
    let sentiment = if degenerate {
        0.0
    } else {
        weighted.iter().map(|w| w.weight * w.score).sum()
    };
    (sentiment, weighted, degenerate)
}

pub fn sentence_sam(mm: &MismatchSets, lex: &PriorPolarityLexicon) -> SamResult {
    let (s_h, hyp_weights, degenerate_hyp) = side_score(&mm.hyp_mismatched, lex);
    let (s_r, ref_weights, degenerate_ref) = side_score(&mm.ref_mismatched, lex);
    SamResult {
        s_h,
        s_r,
        sam: (s_r - s_h).abs() / 2.0,
        hyp_weights,
        ref_weights,
        degenerate_hyp,
        degenerate_ref,
        m: mm.m(),
        n: mm.n(),
    }
}

/// Score one annotated pair.
pub fn pair_sam(
    hyp: &AnnotatedSentence,
    reference: &AnnotatedSentence,
    lex: &PriorPolarityLexicon,
) -> SamResult {
    sentence_sam(&extract_mismatches(hyp, reference), lex)
}

/// Per-pair results, computed in parallel on the current rayon pool and
/// returned in input order.
pub fn score_pairs(
    pairs: &[(AnnotatedSentence, AnnotatedSentence)],
    lex: &PriorPolarityLexicon,
) -> Vec<SamResult> {
    pairs
        .par_iter()
        .map(|(h, r)| pair_sam(h, r, lex))
        .collect()
}

/// Sequential reduction in input order, so totals are reproducible.
pub fn summarize(results: &[SamResult]) -> CorpusSamSummary {
    let n_pairs = results.len();
    let total_sam: f64 = results.iter().map(|r| r.sam).sum();
    let defined: Vec<f64> = results.iter().filter(|r| r.is_defined()).map(|r| r.sam).collect();
    let n_defined = defined.len();
    CorpusSamSummary {
        total_sam,
        mean_sam_all: (n_pairs > 0).then(|| total_sam / n_pairs as f64),
        mean_sam_defined: (n_defined > 0).then(|| defined.iter().sum::<f64>() / n_defined as f64),
        n_pairs,
        n_defined,
    }
}

pub fn corpus_sam(
    pairs: &[(AnnotatedSentence, AnnotatedSentence)],
    lex: &PriorPolarityLexicon,
) -> CorpusSamSummary {
    summarize(&score_pairs(pairs, lex))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lexicon::LexiconFormat;
    use crate::textproc::{annotate_text, Lang};

    fn lex(text: &str) -> PriorPolarityLexicon {
        PriorPolarityLexicon::parse(text, LexiconFormat::LemmaHashPos, "t").unwrap()
    }

    fn item(lemma: &str, pos: Pos) -> Item {
        (lemma.to_string(), pos)
    }

    fn en(text: &str, l: &PriorPolarityLexicon) -> AnnotatedSentence {
        annotate_text(text, Lang::En, l)
    }

    #[test]
    fn rigid_vs_good_mismatch() {
        let l = lex("rigid#a\t-0.3\ngood#a\t0.7\n");
        let mm = extract_mismatches(&en("a very rigid book", &l), &en("a very good book", &l));
        assert_eq!(mm.hyp_mismatched, vec![item("rigid", Pos::Adjective)]);
        assert_eq!(mm.ref_mismatched, vec![item("good", Pos::Adjective)]);
    }

    #[test]
    fn identical_sentences_cancel() {
        let l = lex("good#a\t0.7\n");
        let s = en("A very good book.", &l);
        let mm = extract_mismatches(&s, &s);
        assert_eq!((mm.m(), mm.n()), (0, 0));
    }

    #[test]
    fn multiset_counts_matter() {
        let l = lex("bad#a\t-0.6\n");
        let mm = extract_mismatches(&en("bad bad day", &l), &en("bad day", &l));
        assert_eq!(mm.hyp_mismatched, vec![item("bad", Pos::Adjective)]);
        assert!(mm.ref_mismatched.is_empty());
    }

    #[test]
    fn punctuation_ignored_case_folded() {
        let l = lex("good#a\t0.7\n");
        let mm = extract_mismatches(&en("GOOD!!", &l), &en("good.", &l));
        assert_eq!((mm.m(), mm.n()), (0, 0));
    }

    #[test]
    fn single_items_give_half_distance() {
        let l = lex("rigid#a\t-0.3\ngood#a\t0.7\n");
        let mm = MismatchSets {
            hyp_mismatched: vec![item("rigid", Pos::Adjective)],
            ref_mismatched: vec![item("good", Pos::Adjective)],
        };
        let r = sentence_sam(&mm, &l);
        assert_eq!(r.s_h, -0.3);
        assert_eq!(r.s_r, 0.7);
        assert_eq!(r.sam, 0.5);
        assert_eq!(r.hyp_weights[0].weight, 1.0);
    }

    #[test]
    fn two_item_weighted_average() {
        // S_h = (0.6·-0.6 + 0.8·-0.8) / 1.4 = -1.0 / 1.4
        let l = lex("bad#a\t-0.6\nterrible#a\t-0.8\ngood#a\t0.7\n");
        let mm = MismatchSets {
            hyp_mismatched: vec![item("bad", Pos::Adjective), item("terrible", Pos::Adjective)],
            ref_mismatched: vec![item("good", Pos::Adjective)],
        };
        let r = sentence_sam(&mm, &l);
        assert!((r.hyp_weights[0].weight - 0.6 / 1.4).abs() < 1e-15);
        assert!((r.hyp_weights[1].weight - 0.8 / 1.4).abs() < 1e-15);
        assert!((r.s_h - (-0.714_285_714_285_714_3)).abs() < 1e-12);
        assert!((r.sam - 0.707_142_857_142_857_1).abs() < 1e-12);
    }

    #[test]
    fn empty_sides_are_degenerate() {
        let r = sentence_sam(&MismatchSets::default(), &lex(""));
        assert_eq!((r.s_h, r.s_r, r.sam), (0.0, 0.0, 0.0));
        assert!(r.degenerate_hyp && r.degenerate_ref);
        assert!(!r.is_defined());
    }

    #[test]
    fn out_of_lexicon_items_have_no_weight() {
        let l = lex("good#a\t0.5\n");
        let mm = MismatchSets {
            hyp_mismatched: vec![item("table", Pos::Noun), item("good", Pos::Adjective)],
            ref_mismatched: vec![item("chair", Pos::Noun)],
        };
        let r = sentence_sam(&mm, &l);
        assert_eq!(r.s_h, 0.5);
        assert_eq!(r.hyp_weights[0].weight, 0.0);
        assert!(r.degenerate_ref);
        assert_eq!(r.sam, 0.25);
    }

    #[test]
    fn corpus_totals_and_means() {
        let l = lex("rigid#a\t-0.3\ngood#a\t0.7\n");
        let pairs = vec![
            (en("a very rigid book", &l), en("a very good book", &l)),
            (en("a book", &l), en("a book", &l)),
        ];
        let s = corpus_sam(&pairs, &l);
        assert_eq!(s.total_sam, 0.5);
        assert_eq!(s.mean_sam_all, Some(0.25));
        assert_eq!(s.mean_sam_defined, Some(0.5));
        assert_eq!((s.n_pairs, s.n_defined), (2, 1));

        let empty = corpus_sam(&[], &l);
        assert_eq!(empty.n_pairs, 0);
        assert_eq!(empty.mean_sam_all, None);
        assert_eq!(empty.mean_sam_defined, None);
    }
}
