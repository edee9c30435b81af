//! Acceptance checks. Prints one PASS or FAIL line per criterion and exits
//! non-zero if any fails.

mod common;

use std::collections::BTreeMap;
use std::fs;
use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sentimt::bleu::{corpus_bleu, Smoothing};
use sentimt::dialect::{self, Split, TrainConfig};
use sentimt::lexicon::{LexiconFormat, PhraseLexicon, PriorPolarityEntry};
use sentimt::sam::{corpus_sam, pair_sam, sentence_sam, MismatchSets};
use sentimt::silver::{export, infuse, round_trip, ExportFormat, MockBackend, RoundTripConfig};
use sentimt::textproc::{annotate_text, tokenize_words};
use sentimt::{demo, Lang, Pos, PriorPolarityLexicon};

type Check = fn() -> Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn oracle_side(scores: &[f64]) -> f64 {
    let (num, den) = scores.iter().fold((0.0, 0.0), |(n, d), s| (n + s * s.abs(), d + s.abs()));
    if den == 0.0 {
        0.0
    } else {
        num / den
    }
}

fn sam_oracle_10k() -> Result<String, String> {
    const POS: [Pos; 4] = [Pos::Adjective, Pos::Noun, Pos::Verb, Pos::Adverb];
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst: f64 = 0.0;
    for _ in 0..10_000 {
        let mut entries = Vec::new();
        let mut side = |tag: &str, entries: &mut Vec<PriorPolarityEntry>| {
            let mut items = Vec::new();
            let mut scores = Vec::new();
            for k in 0..rng.random_range(0..=6) {
                let lemma = format!("{tag}{k}");
                let pos = POS[rng.random_range(0..POS.len())];
                let s = if rng.random_range(0..8) == 0 { 0.0 } else { rng.random_range(-1.0..=1.0) };
                if s != 0.0 {
                    entries.push(PriorPolarityEntry { lemma: lemma.clone(), pos, score: s });
                }
                items.push((lemma, pos));
                scores.push(s);
            }
            (items, scores)
        };
        let (hi, hs) = side("h", &mut entries);
        let (ri, rs) = side("r", &mut entries);
        let lex = PriorPolarityLexicon::from_entries("random", entries).map_err(|e| e.to_string())?;
        let got = sentence_sam(&MismatchSets { hyp_mismatched: hi, ref_mismatched: ri }, &lex).sam;
        let want = (oracle_side(&rs) - oracle_side(&hs)).abs() / 2.0;
        worst = worst.max((got - want).abs());
    }
    let secs = start.elapsed().as_secs_f64();
    ensure(worst <= 1e-12, || format!("max deviation {worst:e}"))?;
    ensure(secs < 10.0, || format!("took {secs:.2}s"))?;
    Ok(format!("max deviation {worst:e}, {secs:.2}s"))
}

const LEX: &str = "good#a\t0.7\nbad#a\t-0.6\ngreat#a\t0.8\nawful#a\t-0.8\nlove#v\t0.7\nhate#v\t-0.75\n\
rigid#a\t-0.3\nsuccess#n\t0.6\nfraud#n\t-0.7\nhappy#a\t0.7\nsad#a\t-0.6\ncalm#a\t0.3\n";
const VOCAB: &[&str] = &[
    "good", "bad", "great", "awful", "love", "hate", "rigid", "success", "fraud", "happy", "sad",
    "calm", "the", "a", "book", "very", "film", "and", "is", "was", "not", "Good", "!", ",",
];
const NEUTRAL: &[&str] = &["the", "a", "book", "very", "film", "and", "is", "was", "table", "river"];

fn sam_invariants() -> Result<String, String> {
    let lex = PriorPolarityLexicon::parse(LEX, LexiconFormat::LemmaHashPos, "inv").map_err(|e| e.to_string())?;
    let sam = |h: &str, r: &str, l: &PriorPolarityLexicon| {
        pair_sam(&annotate_text(h, Lang::En, l), &annotate_text(r, Lang::En, l), l).sam
    };
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut sent = |vocab: &[&str], max: usize| -> String {
        let n = rng.random_range(0..max);
        (0..n).map(|_| vocab[rng.random_range(0..vocab.len())]).collect::<Vec<_>>().join(" ")
    };
    const CASES: usize = 1000;
    for _ in 0..CASES {
        let (h, r, shared) = (sent(VOCAB, 10), sent(VOCAB, 10), sent(VOCAB, 5));
        let (n1, n2) = (sent(NEUTRAL, 10), sent(NEUTRAL, 10));
        let s = sam(&h, &r, &lex);
        ensure((0.0..=1.0).contains(&s), || format!("range: {s} for {h:?} / {r:?}"))?;
        ensure(s == sam(&r, &h, &lex), || format!("symmetry: {h:?} / {r:?}"))?;
        ensure(sam(&h, &h, &lex) == 0.0, || format!("identity: {h:?}"))?;
        ensure(sam(&n1, &n2, &lex) == 0.0, || format!("neutrality: {n1:?} / {n2:?}"))?;
        let ext = sam(&format!("{shared} {h}"), &format!("{r} {shared}"), &lex);
        ensure((s - ext).abs() <= 1e-12, || format!("cancellation: {s} vs {ext}"))?;
        let c = 0.01 + 0.99 * (s * 7.0).fract();
        let scaled = lex.scaled(c).map_err(|e| e.to_string())?;
        let b = sam(&h, &r, &scaled);
        ensure((c * s - b).abs() <= 1e-12, || format!("scale: {c} * {s} vs {b}"))?;
    }
    Ok(format!("range, symmetry, identity, neutrality, cancellation, scale on {CASES} cases each"))
}

fn rigid_pair() -> Result<String, String> {
    let lex = PriorPolarityLexicon::parse(demo::LEXICON, LexiconFormat::LemmaHashPos, "demo").map_err(|e| e.to_string())?;
    let (h, r) = (demo::RIGID_HYP.trim(), demo::RIGID_REF.trim());
    let got = pair_sam(&annotate_text(h, Lang::En, &lex), &annotate_text(r, Lang::En, &lex), &lex);
    ensure(got.sam == 0.5, || format!("got {}", got.sam))?;
    Ok(format!("{h:?} vs {r:?}: sam {}", got.sam))
}

fn bleu_oracle(hyps: &[Vec<String>], refs: &[Vec<String>], smooth: bool) -> f64 {
    let (mut matches, mut totals) = ([0f64; 4], [0f64; 4]);
    let (mut hl, mut rl) = (0f64, 0f64);
    for (h, r) in hyps.iter().zip(refs) {
        hl += h.len() as f64;
        rl += r.len() as f64;
        for n in 1..=4 {
            let grams = |t: &[String]| {
                let mut m: BTreeMap<String, usize> = BTreeMap::new();
                for i in 0..(t.len() + 1).saturating_sub(n) {
                    *m.entry(t[i..i + n].join("\u{1}")).or_insert(0) += 1;
                }
                m
            };
            let rg = grams(r);
            for (g, c) in grams(h) {
                totals[n - 1] += c as f64;
                matches[n - 1] += c.min(*rg.get(&g).unwrap_or(&0)) as f64;
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
    let bp = if hl >= rl { 1.0 } else if hl == 0.0 { 0.0 } else { (1.0 - rl / hl).exp() };
    100.0 * bp * (log_sum / 4.0).exp()
}

fn bleu() -> Result<String, String> {
    let refs: Vec<Vec<String>> = demo::CONTRAST_REF.lines().map(|l| tokenize_words(l, Lang::En)).collect();
    let id = corpus_bleu(&refs, &refs, Smoothing::Floor).map_err(|e| e.to_string())?.score;
    ensure(id == 100.0, || format!("identity gave {id}"))?;
    let vocab = ["the", "a", "cat", "dog", "sat", "on", "mat", "very", "good", "bad", "book", "is"];
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let n = rng.random_range(1..=6);
        let refs: Vec<Vec<String>> = (0..n)
            .map(|_| (0..rng.random_range(0..=12)).map(|_| vocab[rng.random_range(0..vocab.len())].to_string()).collect())
            .collect();
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
            let got = corpus_bleu(&hyps, &refs, s).map_err(|e| e.to_string())?.score;
            worst = worst.max((got - bleu_oracle(&hyps, &refs, smooth)).abs());
        }
    }
    ensure(worst < 0.1, || format!("max deviation {worst}"))?;
    Ok(format!("identity 100, 50 random corpora within {worst:.2e} of the reference implementation"))
}

fn dialect_classifier() -> Result<String, String> {
    let data = demo::synthetic_dialect_corpus(demo::SYNTHETIC_SIZE, 42);
    let config = TrainConfig::default();
    let start = Instant::now();
    let model = dialect::train(&data, Split::default(), &config).map_err(|e| e.to_string())?;
    let secs = start.elapsed().as_secs_f64();
    let acc = model.training_meta.test_accuracy.ok_or("no held-out split")?;
    let again = dialect::train(&data, Split::default(), &config).map_err(|e| e.to_string())?;
    let bytes = |m: &dialect::DialectModel| {
        let mut v = Vec::new();
        m.write_to(&mut v).map(|_| v).map_err(|e| e.to_string())
    };
    ensure(acc >= 0.90, || format!("held-out accuracy {acc}"))?;
    ensure(secs < 30.0, || format!("training took {secs:.2}s"))?;
    ensure(bytes(&model)? == bytes(&again)?, || "retraining changed the model bytes".into())?;
    Ok(format!("{} sentences, held-out accuracy {acc:.3}, trained in {secs:.2}s, reproducible", data.len()))
}

fn silver() -> Result<String, String> {
    let input: Vec<String> = demo::synthetic_dialect_corpus(1000, 5).into_iter().map(|s| s.text).collect();
    let config = RoundTripConfig { batch_size: 7, in_flight: 3, retry_backoff_ms: 0, ..RoundTripConfig::default() };
    let run = |threads: usize| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| e.to_string())?
            .install(|| round_trip(&input, &MockBackend::new(), &config))
            .map_err(|e| e.to_string())
    };
    let a = run(1)?;
    let b = run(4)?;
    ensure(a.len() == input.len(), || format!("{} triples for {} lines", a.len(), input.len()))?;
    ensure(a.iter().zip(&input).all(|(t, s)| &t.da == s), || "order or DA side changed".into())?;

    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let (pa, pb) = (dir.path().join("a.tsv"), dir.path().join("b.tsv"));
    export(&a, &pa, ExportFormat::Tsv3).map_err(|e| e.to_string())?;
    export(&b, &pb, ExportFormat::Tsv3).map_err(|e| e.to_string())?;
    ensure(fs::read(&pa).ok() == fs::read(&pb).ok(), || "reruns differ".into())?;

    let phrases = PhraseLexicon::parse(demo::PHRASES, "demo").map_err(|e| e.to_string())?;
    let mock = MockBackend::parse_table(demo::MOCK_TABLE, "demo").map_err(|e| e.to_string())?;
    let da: Vec<String> = demo::IDIOMS_SOURCE.lines().map(str::to_string).collect();
    let mut triples = round_trip(&da, &mock, &config).map_err(|e| e.to_string())?;
    let before: Vec<String> = triples.iter().map(|t| t.da.clone()).collect();
    let first = infuse(&mut triples, &phrases);
    let once = triples.clone();
    let second = infuse(&mut triples, &phrases);
    ensure(first.replacements_en + first.replacements_msa > 0, || "nothing infused".into())?;
    ensure(triples == once, || "second infusion changed triples".into())?;
    ensure(second.replacements_en + second.replacements_msa == 0, || format!("second pass {second:?}"))?;
    ensure(triples.iter().map(|t| &t.da).eq(before.iter()), || "DA side edited".into())?;
    Ok(format!(
        "1000 lines kept in order, byte-identical across 1 and 4 threads; infusion made {} edits, idempotent",
        first.replacements_en + first.replacements_msa
    ))
}

fn contrast() -> Result<String, String> {
    let lex = PriorPolarityLexicon::parse(demo::LEXICON, LexiconFormat::LemmaHashPos, "demo").map_err(|e| e.to_string())?;
    let pairs = |hyp: &str| -> Vec<_> {
        hyp.lines()
            .zip(demo::CONTRAST_REF.lines())
            .map(|(h, r)| (annotate_text(h, Lang::En, &lex), annotate_text(r, Lang::En, &lex)))
            .collect()
    };
    let toks = |t: &str| -> Vec<Vec<String>> { t.lines().map(|l| tokenize_words(l, Lang::En)).collect() };
    let refs = toks(demo::CONTRAST_REF);
    let bleu = |hyp: &str| corpus_bleu(&toks(hyp), &refs, Smoothing::Floor).map(|b| b.score).map_err(|e| e.to_string());
    let (sp, sf) = (corpus_sam(&pairs(demo::CONTRAST_PRESERVING), &lex).total_sam, corpus_sam(&pairs(demo::CONTRAST_FLIPPED), &lex).total_sam);
    let (bp, bf) = (bleu(demo::CONTRAST_PRESERVING)?, bleu(demo::CONTRAST_FLIPPED)?);
    ensure(sp < sf, || format!("SAM preserving {sp} vs flipped {sf}"))?;
    ensure((bp - bf).abs() < demo::CONTRAST_BLEU_MARGIN, || format!("BLEU gap {:.2}", (bp - bf).abs()))?;
    Ok(format!("SAM total {sp:.3} vs {sf:.3}, BLEU {bp:.2} vs {bf:.2}"))
}

fn cli_pipeline() -> Result<String, String> {
    let run = |threads: &str| -> Result<(tempfile::TempDir, f64), String> {
        let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
        let start = Instant::now();
        common::ok(dir.path(), &["--threads", threads, "demo", "--out", "."]);
        common::run_pipeline(dir.path(), &["--threads", threads]);
        Ok((dir, start.elapsed().as_secs_f64()))
    };
    let (one, secs) = run("1")?;
    let (four, _) = run("4")?;
    ensure(secs < 60.0, || format!("single-threaded run took {secs:.2}s"))?;
    for f in common::PIPELINE_OUTPUTS {
        let a = fs::read(one.path().join(f)).map_err(|e| format!("{f}: {e}"))?;
        let b = fs::read(four.path().join(f)).map_err(|e| format!("{f}: {e}"))?;
        ensure(a == b, || format!("{f} differs between 1 and 4 threads"))?;
    }
    Ok(format!(
        "{} steps in {secs:.2}s with 1 thread; {} outputs identical with 4 threads",
        common::PIPELINE.len(),
        common::PIPELINE_OUTPUTS.len()
    ))
}

fn main() -> ExitCode {
    let checks: &[(&str, Check)] = &[
        ("sam-oracle-10k", sam_oracle_10k),
        ("sam-invariants", sam_invariants),
        ("sam-rigid-good-pair", rigid_pair),
        ("bleu-identity-and-oracle", bleu),
        ("dialect-synthetic-2000", dialect_classifier),
        ("silver-mock-1000", silver),
        ("contrast-demo", contrast),
        ("cli-pipeline", cli_pipeline),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (name, check) in checks {
        let outcome = panic::catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_else(|| "panicked".into()))
        });
        match outcome {
            Ok(detail) => println!("PASS {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL {name}: {why}");
            }
        }
    }
    println!("{} passed, {failed} failed", checks.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
