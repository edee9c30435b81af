//! Brute-force reference implementation of the SAM formula, checked against
//! the library on randomized inputs.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sentimt::lexicon::{LexiconFormat, PriorPolarityEntry};
use sentimt::sam::{extract_mismatches, pair_sam, sentence_sam, MismatchSets};
use sentimt::textproc::annotate_text;
use sentimt::{Lang, Pos, PriorPolarityLexicon};

/// S = Σ s·|s| / Σ |s|, or 0 when every score is 0.
fn oracle_side(scores: &[f64]) -> f64 {
    let mut num = 0.0;
    let mut den = 0.0;
    for &s in scores {
        num += s * s.abs();
        den += s.abs();
    }
    if den == 0.0 {
        0.0
    } else {
        num / den
    }
}

fn oracle_sam(hyp: &[f64], reference: &[f64]) -> f64 {
    (oracle_side(reference) - oracle_side(hyp)).abs() / 2.0
}

const POS: [Pos; 4] = [Pos::Adjective, Pos::Noun, Pos::Verb, Pos::Adverb];

fn random_side(rng: &mut ChaCha8Rng, tag: &str, entries: &mut Vec<PriorPolarityEntry>) -> (Vec<(String, Pos)>, Vec<f64>) {
    let len = rng.random_range(0..=6);
    let mut items = Vec::new();
    let mut scores = Vec::new();
    for k in 0..len {
        let lemma = format!("{tag}{k}");
        let pos = POS[rng.random_range(0..POS.len())];
        // One item in eight is absent from the lexicon, i.e. neutral.
        let score = if rng.random_range(0..8) == 0 {
            0.0
        } else {
            let s: f64 = rng.random_range(-1.0..=1.0);
            entries.push(PriorPolarityEntry { lemma: lemma.clone(), pos, score: s });
            s
        };
        items.push((lemma, pos));
        scores.push(score);
    }
    (items, scores)
}

#[test]
fn agrees_with_brute_force_on_10000_instances() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst: f64 = 0.0;
    for _ in 0..10_000 {
        let mut entries = Vec::new();
        let (hyp_items, hyp_scores) = random_side(&mut rng, "h", &mut entries);
        let (ref_items, ref_scores) = random_side(&mut rng, "r", &mut entries);
        let lex = PriorPolarityLexicon::from_entries("random", entries).unwrap();
        let mm = MismatchSets {
            hyp_mismatched: hyp_items,
            ref_mismatched: ref_items,
        };
        let got = sentence_sam(&mm, &lex);
        let want = oracle_sam(&hyp_scores, &ref_scores);
        worst = worst.max((got.sam - want).abs());
        assert!(
            (got.sam - want).abs() <= 1e-12,
            "hyp {hyp_scores:?} ref {ref_scores:?}: {} vs {want}",
            got.sam
        );
        assert!((got.s_h - oracle_side(&hyp_scores)).abs() <= 1e-12);
        assert!((got.s_r - oracle_side(&ref_scores)).abs() <= 1e-12);
    }
    assert!(start.elapsed().as_secs_f64() < 10.0, "took {:?}", start.elapsed());
    eprintln!("max deviation {worst:e}");
}

type Items = Vec<(String, Pos)>;

/// Independent multiset cancellation over lowercased (lemma, pos) pairs.
fn oracle_mismatches(h: &[(String, Pos)], r: &[(String, Pos)]) -> (Items, Items) {
    let mut hyp = h.to_vec();
    let mut rest = Vec::new();
    for item in r {
        if let Some(at) = hyp.iter().position(|x| x == item) {
            hyp.remove(at);
        } else {
            rest.push(item.clone());
        }
    }
    (hyp, rest)
}

#[test]
fn sentence_level_pipeline_matches_oracle() {
    let lex = PriorPolarityLexicon::parse(
        "good#a\t0.7\nbad#a\t-0.6\nlove#v\t0.7\nhate#v\t-0.75\nrigid#a\t-0.3\nsuccess#n\t0.6\n",
        LexiconFormat::LemmaHashPos,
        "mini",
    )
    .unwrap();
    let vocab = ["good", "bad", "love", "hate", "rigid", "success", "the", "book", "a", "very", "Good", "BAD"];
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..2000 {
        let mut sentence = || -> String {
            let n = rng.random_range(0..8);
            (0..n).map(|_| vocab[rng.random_range(0..vocab.len())]).collect::<Vec<_>>().join(" ")
        };
        let (h, r) = (sentence(), sentence());
        let hyp = annotate_text(&h, Lang::En, &lex);
        let reference = annotate_text(&r, Lang::En, &lex);
        let items = |s: &sentimt::AnnotatedSentence| -> Vec<(String, Pos)> {
            s.tokens.iter().map(|t| (t.lemma.to_lowercase(), t.pos)).collect()
        };
        let (oh, or) = oracle_mismatches(&items(&hyp), &items(&reference));
        let mm = extract_mismatches(&hyp, &reference);
        assert_eq!(mm.hyp_mismatched, oh, "{h} | {r}");
        assert_eq!(mm.ref_mismatched, or, "{h} | {r}");

        let score = |side: &[(String, Pos)]| -> Vec<f64> {
            side.iter().map(|(l, p)| lex.lookup(l, *p).unwrap_or(0.0)).collect()
        };
        let got = pair_sam(&hyp, &reference, &lex).sam;
        assert!((got - oracle_sam(&score(&oh), &score(&or))).abs() <= 1e-12);
    }
}
