//! Rule-based lemma-POS annotation used when no tagger output is supplied.
//!
//! English lemmas come from a small suffix table. The POS is whichever class
//! the lemma is listed under in the prior-polarity lexicon (adjective, then
//! noun, verb, adverb); unlisted lemmas are tagged `other`. Arabic tokens get
//! their normalized surface as lemma and are always `other`.

use super::normalize::normalize_arabic;
use super::tokenize::{tokenize, SurfaceToken};
use super::{AnnotatedSentence, Lang, Token};
use crate::lexicon::{Pos, PriorPolarityLexicon};

fn is_vowel(c: char) -> bool {
    matches!(c, 'a' | 'e' | 'i' | 'o' | 'u')
}

/// "runn" -> "run"; doubled l, s and z are kept ("fall", "miss", "buzz").
fn undouble(stem: &str) -> Option<String> {
    let cs: Vec<char> = stem.chars().collect();
    let n = cs.len();
    if n >= 3 && cs[n - 1] == cs[n - 2] && cs[n - 1].is_ascii_alphabetic() {
        let c = cs[n - 1];
        if !is_vowel(c) && !matches!(c, 'l' | 's' | 'z') {
            return Some(cs[..n - 1].iter().collect());
        }
    }
    None
}

fn strip<'a>(word: &'a str, suffix: &str, min_len: usize) -> Option<&'a str> {
    if word.chars().count() >= min_len {
        word.strip_suffix(suffix)
    } else {
        None
    }
}

/// Candidate lemmas for a lower-cased English word. The first element is the
/// word itself, the second (when present) the default rule output; the rest
/// are alternatives tried against the lexicon.
///
/// | suffix                         | default            | alternatives        |
/// |--------------------------------|--------------------|---------------------|
/// | `-ies` (len ≥ 5)               | `-y`               |                     |
/// | `-sses -shes -ches -xes -zes`  | drop `-es`         | drop `-s`           |
/// | `-es` (len ≥ 4)                | drop `-s`          | drop `-es`          |
/// | `-s` (len ≥ 4, not ss/us/is)   | drop `-s`          |                     |
/// | `-ied` (len ≥ 5)               | `-y`               |                     |
/// | `-ing` (len ≥ 5)               | drop, undouble     | raw stem, stem + e  |
/// | `-ed` (len ≥ 4)                | drop, undouble     | raw stem, stem + e  |
pub fn english_lemma_candidates(word: &str) -> Vec<String> {
    let mut out = vec![word.to_string()];
    let mut push = |s: String| {
        if !s.is_empty() && !out.contains(&s) {
            out.push(s);
        }
    };

    if let Some(stem) = strip(word, "ies", 5) {
        push(format!("{stem}y"));
    } else if ["sses", "shes", "ches", "xes", "zes"]
        .iter()
        .any(|suf| word.ends_with(suf))
        && word.len() >= 4
    {
        push(word[..word.len() - 2].to_string());
        push(word[..word.len() - 1].to_string());
    } else if let Some(stem) = strip(word, "es", 4) {
        push(format!("{stem}e"));
        push(stem.to_string());
    } else if word.ends_with('s')
        && word.chars().count() >= 4
        && !["ss", "us", "is"].iter().any(|suf| word.ends_with(suf))
    {
        push(word[..word.len() - 1].to_string());
    } else if let Some(stem) = strip(word, "ied", 5) {
        push(format!("{stem}y"));
    } else if let Some(stem) = strip(word, "ing", 5).or_else(|| strip(word, "ed", 4)) {
        match undouble(stem) {
            Some(short) => {
                push(short);
                push(stem.to_string());
            }
            None => push(stem.to_string()),
        }
        push(format!("{stem}e"));
    }
    out
}

fn annotate_token(tok: &SurfaceToken, lang: Lang, lex: &PriorPolarityLexicon) -> Token {
    let char_span = (tok.start, tok.end);
    let lower = tok.text.to_lowercase();

    if !tok.text.chars().any(char::is_alphabetic) {
        return Token {
            surface: tok.text.clone(),
            lemma: lower,
            pos: Pos::Other,
            char_span,
        };
    }

    if lang.is_arabic() {
        let norm = normalize_arabic(&lower);
        return Token {
            surface: tok.text.clone(),
            lemma: if norm.is_empty() { lower } else { norm },
            pos: Pos::Other,
            char_span,
        };
    }

    let candidates = english_lemma_candidates(&lower);
    for cand in &candidates {
        if let Some(&pos) = lex.classes_of(cand).first() {
            return Token {
                surface: tok.text.clone(),
                lemma: cand.clone(),
                pos,
                char_span,
            };
        }
    }
    let lemma = candidates.get(1).unwrap_or(&candidates[0]).clone();
    Token {
        surface: tok.text.clone(),
        lemma,
        pos: Pos::Other,
        char_span,
    }
}

/// Attach lemma and POS to already-tokenized text.
pub fn annotate_fallback(
    text: &str,
    tokens: &[SurfaceToken],
    lang: Lang,
    lex: &PriorPolarityLexicon,
) -> AnnotatedSentence {
    AnnotatedSentence {
        text: text.to_string(),
        tokens: tokens.iter().map(|t| annotate_token(t, lang, lex)).collect(),
        lang,
    }
}

/// Tokenize and annotate in one step.
pub fn annotate_text(text: &str, lang: Lang, lex: &PriorPolarityLexicon) -> AnnotatedSentence {
    annotate_fallback(text, &tokenize(text, lang), lang, lex)
}
