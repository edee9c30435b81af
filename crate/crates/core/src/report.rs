//! Multi-system comparison: SAM, BLEU and optional human scores side by side.

use std::collections::{BTreeMap, HashSet};
use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bleu::{corpus_bleu, BleuScore, Smoothing};
use crate::corpus::{check_aligned, load_annotated, surfaces};
use crate::error::{Error, Result};
use crate::lexicon::PriorPolarityLexicon;
use crate::sam::{score_pairs, summarize, CorpusSamSummary};
use crate::textproc::{AnnotatedSentence, AnnotationTier, Lang};

pub const REPORT_VERSION: u32 = 1;

const TIE_EPS: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HumanScore {
    pub annotator: String,
    pub mean: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SystemRun {
    pub name: String,
    pub hyp_path: String,
    pub sam: CorpusSamSummary,
    pub bleu: BleuScore,
    pub human_scores: Option<Vec<HumanScore>>,
}

impl SystemRun {
    pub fn human(&self, annotator: &str) -> Option<f64> {
        self.human_scores
            .as_ref()?
            .iter()
            .find(|h| h.annotator == annotator)
            .map(|h| h.mean)
    }
}

/// Indices of the best system(s) per column; ties share the mark.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BestMarks {
    pub sam_total: Vec<usize>,
    pub sam_mean_all: Vec<usize>,
    pub sam_mean_defined: Vec<usize>,
    pub human: BTreeMap<String, Vec<usize>>,
    pub bleu: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub report_version: u32,
    pub reference_path: String,
    pub lexicon_name: String,
    pub annotation_tier: AnnotationTier,
    pub annotators: Vec<String>,
    pub systems: Vec<SystemRun>,
    pub best: BestMarks,
    pub created_at: Option<String>,
    pub tool_version: String,
}

/// Human judgements: `system<TAB>annotator<TAB>mean_score`, scores in [1, 5].
pub fn parse_human(text: &str, source_name: &str) -> Result<Vec<(String, String, f64)>> {
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let cols: Vec<&str> = line.split('\t').collect();
        if cols.len() != 3 {
            return Err(Error::parse(
                source_name,
                i + 1,
                format!("expected 3 columns, found {}", cols.len()),
            ));
        }
        let score: f64 = cols[2]
            .trim()
            .parse()
            .map_err(|_| Error::parse(source_name, i + 1, "unparseable score"))?;
        if !(1.0..=5.0).contains(&score) {
            return Err(Error::parse(source_name, i + 1, "human score outside 1..5"));
        }
        let key = (cols[0].to_string(), cols[1].to_string());
        if !seen.insert(key.clone()) {
            return Err(Error::parse(
                source_name,
                i + 1,
                format!("duplicate score for system {} annotator {}", key.0, key.1),
            ));
        }
        out.push((key.0, key.1, score));
    }
    Ok(out)
}

fn arg_best<I>(values: I, lower_is_better: bool) -> Vec<usize>
where
    I: IntoIterator<Item = Option<f64>>,
{
    let vals: Vec<(usize, f64)> = values
        .into_iter()
        .enumerate()
        .filter_map(|(i, v)| v.map(|v| (i, v)))
        .collect();
    let best = vals.iter().map(|&(_, v)| v).reduce(|a, b| {
        if lower_is_better {
            a.min(b)
        } else {
            a.max(b)
        }
    });
    match best {
        None => Vec::new(),
        Some(b) => vals
            .into_iter()
            .filter(|&(_, v)| (v - b).abs() <= TIE_EPS)
            .map(|(i, _)| i)
            .collect(),
    }
}

pub fn mark_best(systems: &[SystemRun], annotators: &[String]) -> BestMarks {
    BestMarks {
        sam_total: arg_best(systems.iter().map(|s| Some(s.sam.total_sam)), true),
        sam_mean_all: arg_best(systems.iter().map(|s| s.sam.mean_sam_all), true),
        sam_mean_defined: arg_best(systems.iter().map(|s| s.sam.mean_sam_defined), true),
        human: annotators
            .iter()
            .map(|a| (a.clone(), arg_best(systems.iter().map(|s| s.human(a)), false)))
            .collect(),
        bleu: arg_best(systems.iter().map(|s| Some(s.bleu.score)), false),
    }
}

#[derive(Debug, Clone)]
#[derive(Default)]
pub struct CompareOptions {
    pub smoothing: Smoothing,
    pub created_at: Option<String>,
}


fn score_system(
    name: &str,
    hyp_path: &Path,
    reference: &[AnnotatedSentence],
    lex: &PriorPolarityLexicon,
    smoothing: Smoothing,
) -> Result<(SystemRun, AnnotationTier)> {
    let (hyp, tier) = load_annotated(hyp_path, Lang::En, lex)?;
    check_aligned(&format!("system `{name}`"), hyp.len(), reference.len())?;
    let pairs: Vec<_> = hyp.into_iter().zip(reference.iter().cloned()).collect();
    let sam = summarize(&score_pairs(&pairs, lex));
    let (h, r): (Vec<_>, Vec<_>) = pairs.into_iter().unzip();
    let bleu = corpus_bleu(&surfaces(&h), &surfaces(&r), smoothing)?;
    Ok((
        SystemRun {
            name: name.to_string(),
            hyp_path: hyp_path.display().to_string(),
            sam,
            bleu,
            human_scores: None,
        },
        tier,
    ))
}

/// Score every system against one reference and lexicon. System order is
/// kept as given; best values are marked, never re-sorted.
pub fn compare(
    reference_path: &Path,
    systems: &[(String, std::path::PathBuf)],
    lex: &PriorPolarityLexicon,
    human: Option<&Path>,
    options: &CompareOptions,
) -> Result<ComparisonReport> {
    if systems.is_empty() {
        return Err(Error::Input("at least one system is required".into()));
    }
    let mut names = HashSet::new();
    for (name, _) in systems {
        if !names.insert(name.as_str()) {
            return Err(Error::Input(format!("duplicate system name `{name}`")));
        }
    }
    let (reference, ref_tier) = load_annotated(reference_path, Lang::En, lex)?;

    let scored: Vec<(SystemRun, AnnotationTier)> = systems
        .par_iter()
        .map(|(name, path)| score_system(name, path, &reference, lex, options.smoothing))
        .collect::<Result<_>>()?;
    if scored.iter().any(|(_, t)| *t != ref_tier) {
        return Err(Error::Input(
            "reference and systems must all be plain text or all be CoNLL-U".into(),
        ));
    }
    let mut runs: Vec<SystemRun> = scored.into_iter().map(|(r, _)| r).collect();

    let mut annotators = Vec::new();
    if let Some(path) = human {
        let text = fs::read_to_string(path).map_err(|e| Error::read(path, e))?;
        for (system, annotator, mean) in parse_human(&text, &path.display().to_string())? {
            let run = runs.iter_mut().find(|r| r.name == system).ok_or_else(|| {
                Error::Input(format!("human scores name unknown system `{system}`"))
            })?;
            if !annotators.contains(&annotator) {
                annotators.push(annotator.clone());
            }
            run.human_scores
                .get_or_insert_with(Vec::new)
                .push(HumanScore { annotator, mean });
        }
    }

    let best = mark_best(&runs, &annotators);
    Ok(ComparisonReport {
        report_version: REPORT_VERSION,
        reference_path: reference_path.display().to_string(),
        lexicon_name: lex.source_name().to_string(),
        annotation_tier: ref_tier,
        annotators,
        systems: runs,
        best,
        created_at: options.created_at.clone(),
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RenderFormat {
    Json,
    Tsv,
    Markdown,
}

impl FromStr for RenderFormat {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "json" => Ok(RenderFormat::Json),
            "tsv" => Ok(RenderFormat::Tsv),
            "markdown" | "markdown-table" | "md" => Ok(RenderFormat::Markdown),
            other => Err(format!("unknown report format `{other}`")),
        }
    }
}

fn opt(v: Option<f64>, prec: usize) -> String {
    v.map_or_else(|| "n/a".to_string(), |v| format!("{v:.prec$}"))
}

fn cell(v: Option<f64>, prec: usize, bold: bool) -> String {
    let s = opt(v, prec);
    if bold && v.is_some() {
        format!("**{s}**")
    } else {
        s
    }
}

pub fn render(report: &ComparisonReport, format: RenderFormat) -> Result<String> {
    match format {
        RenderFormat::Json => {
            let mut s = serde_json::to_string_pretty(report)?;
            s.push('\n');
            Ok(s)
        }
        RenderFormat::Tsv => {
            let mut s = String::from("system\tsam_total\tsam_mean_all\tsam_mean_defined");
            for a in &report.annotators {
                let _ = write!(s, "\thuman_{a}");
            }
            s.push_str("\tbleu\n");
            for sys in &report.systems {
                let _ = write!(
                    s,
                    "{}\t{}\t{}\t{}",
                    sys.name,
                    sys.sam.total_sam,
                    opt(sys.sam.mean_sam_all, 6),
                    opt(sys.sam.mean_sam_defined, 6)
                );
                for a in &report.annotators {
                    let _ = write!(s, "\t{}", opt(sys.human(a), 2));
                }
                let _ = writeln!(s, "\t{}", sys.bleu.score);
            }
            Ok(s)
        }
        RenderFormat::Markdown => {
            let b = &report.best;
            let mut s = String::from("| System | SAM total | SAM mean | SAM mean (defined) |");
            let mut rule = String::from("|---|---:|---:|---:|");
            for a in &report.annotators {
                let _ = write!(s, " {a} |");
                rule.push_str("---:|");
            }
            s.push_str(" BLEU |\n");
            rule.push_str("---:|\n");
            s.push_str(&rule);
            for (i, sys) in report.systems.iter().enumerate() {
                let _ = write!(
                    s,
                    "| {} | {} | {} | {} |",
                    sys.name,
                    cell(Some(sys.sam.total_sam), 4, b.sam_total.contains(&i)),
                    cell(sys.sam.mean_sam_all, 4, b.sam_mean_all.contains(&i)),
                    cell(sys.sam.mean_sam_defined, 4, b.sam_mean_defined.contains(&i)),
                );
                for a in &report.annotators {
                    let bold = b.human.get(a).is_some_and(|v| v.contains(&i));
                    let _ = write!(s, " {} |", cell(sys.human(a), 2, bold));
                }
                let _ = writeln!(s, " {} |", cell(Some(sys.bleu.score), 2, b.bleu.contains(&i)));
            }
            Ok(s)
        }
    }
}

pub fn load_report(path: &Path) -> Result<ComparisonReport> {
    let text = fs::read_to_string(path).map_err(|e| Error::read(path, e))?;
    let report: ComparisonReport = serde_json::from_str(&text)
        .map_err(|e| Error::Input(format!("{}: not a comparison report: {e}", path.display())))?;
    if report.report_version != REPORT_VERSION {
        return Err(Error::Input(format!(
            "{}: unsupported report_version {}",
            path.display(),
            report.report_version
        )));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arg_best_directions_and_ties() {
        assert_eq!(arg_best([Some(0.3), Some(0.1), Some(0.1)], true), vec![1, 2]);
        assert_eq!(arg_best([Some(0.3), None, Some(0.1)], false), vec![0]);
        assert!(arg_best([None, None], true).is_empty());
    }

    #[test]
    fn human_tsv_validation() {
        let ok = parse_human("a\tH1\t3.5\nb\tH1\t4\n", "h").unwrap();
        assert_eq!(ok.len(), 2);
        assert!(parse_human("a\tH1\t6\n", "h").is_err());
        assert!(parse_human("a\tH1\n", "h").is_err());
        assert!(parse_human("a\tH1\t2\na\tH1\t3\n", "h").is_err());
    }
}
