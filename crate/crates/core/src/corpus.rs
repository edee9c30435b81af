//! Line-aligned corpus loading shared by the scorers and the report.

use std::fs;
use std::path::Path;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lexicon::PriorPolarityLexicon;
use crate::textproc::{annotate_text, ingest_conllu, AnnotatedSentence, AnnotationTier, Lang};

/// One sentence per line; a trailing CR is dropped and a final newline does
/// not create an extra empty sentence.
pub fn read_lines(path: &Path) -> Result<Vec<String>> {
    let text = fs::read_to_string(path).map_err(|e| Error::read(path, e))?;
    Ok(text
        .lines()
        .map(|l| l.strip_suffix('\r').unwrap_or(l).to_string())
        .collect())
}

/// Write lines with LF endings.
pub fn write_lines<S: AsRef<str>>(path: &Path, lines: &[S]) -> Result<()> {
    let mut out = String::new();
    for l in lines {
        out.push_str(l.as_ref());
        out.push('\n');
    }
    fs::write(path, out).map_err(|e| Error::write(path, e))
}

fn is_conllu(path: &Path) -> bool {
    path.extension().is_some_and(|e| e == "conllu")
}

/// Load and annotate a corpus. Files ending in `.conllu` are read as tagger
/// output; anything else is plain text run through the rule annotator.
pub fn load_annotated(
    path: &Path,
    lang: Lang,
    lex: &PriorPolarityLexicon,
) -> Result<(Vec<AnnotatedSentence>, AnnotationTier)> {
    if is_conllu(path) {
        return Ok((ingest_conllu(path, lang)?, AnnotationTier::Conllu));
    }
    let lines = read_lines(path)?;
    let sents = lines.par_iter().map(|l| annotate_text(l, lang, lex)).collect();
    Ok((sents, AnnotationTier::Fallback))
}

/// Error unless both sides have the same number of sentences.
pub fn check_aligned(what: &str, hyp: usize, reference: usize) -> Result<()> {
    if hyp != reference {
        return Err(Error::Input(format!(
            "{what}: hypothesis has {hyp} lines but reference has {reference}"
        )));
    }
    Ok(())
}

/// Surface tokens of each sentence, as fed to BLEU.
pub fn surfaces(sents: &[AnnotatedSentence]) -> Vec<Vec<String>> {
    sents
        .iter()
        .map(|s| s.tokens.iter().map(|t| t.surface.clone()).collect())
        .collect()
}
