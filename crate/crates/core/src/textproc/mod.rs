//! Tokenization, normalization and lemma-POS annotation.
//!
//! Annotation comes from one of two tiers: CoNLL-U files produced by an
//! external tagger ([`conllu`]), or the built-in rule fallback
//! ([`annotate`]). Downstream scores record which tier produced them.

pub mod annotate;
pub mod casefold;
pub mod conllu;
pub mod normalize;
pub mod tokenize;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::lexicon::Pos;

pub use annotate::{annotate_fallback, annotate_text, english_lemma_candidates};
pub use conllu::{ingest_conllu, parse_conllu, write_conllu};
pub use normalize::normalize_arabic;
pub use tokenize::{tokenize, tokenize_words, SurfaceToken};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Lang {
    #[serde(rename = "en")]
    En,
    #[serde(rename = "msa")]
    Msa,
    #[serde(rename = "da")]
    Da,
    #[serde(rename = "ar-unknown")]
    ArUnknown,
}

impl Lang {
    pub fn is_arabic(self) -> bool {
        !matches!(self, Lang::En)
    }

    /// Language code used on the wire to MT services.
    pub fn iso_code(self) -> &'static str {
        match self {
            Lang::En => "en",
            _ => "ar",
        }
    }
}

impl fmt::Display for Lang {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Lang::En => "en",
            Lang::Msa => "msa",
            Lang::Da => "da",
            Lang::ArUnknown => "ar-unknown",
        })
    }
}

impl FromStr for Lang {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "en" => Ok(Lang::En),
            "msa" => Ok(Lang::Msa),
            "da" => Ok(Lang::Da),
            "ar" | "ar-unknown" => Ok(Lang::ArUnknown),
            other => Err(format!("unknown language tag `{other}`")),
        }
    }
}

/// Which annotation route produced a sentence's lemmas and POS tags.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AnnotationTier {
    Conllu,
    Fallback,
}

impl fmt::Display for AnnotationTier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AnnotationTier::Conllu => "conllu",
            AnnotationTier::Fallback => "fallback",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub surface: String,
    /// Lower-cased, never empty.
    pub lemma: String,
    pub pos: Pos,
    /// Half-open character offsets into the sentence text.
    pub char_span: (usize, usize),
}

impl Token {
    /// Punctuation-like tokens: untagged and without a single letter.
    pub fn is_punctuation(&self) -> bool {
        self.pos == Pos::Other && !self.surface.chars().any(char::is_alphabetic)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnnotatedSentence {
    pub text: String,
    pub tokens: Vec<Token>,
    pub lang: Lang,
}

impl AnnotatedSentence {
    /// Check that spans are ordered, non-overlapping, match their surfaces and
    /// leave only whitespace in between.
    pub fn check_spans(&self) -> Result<(), String> {
        let chars: Vec<char> = self.text.chars().collect();
        let mut cursor = 0;
        for (i, t) in self.tokens.iter().enumerate() {
            let (s, e) = t.char_span;
            if s >= e || s < cursor || e > chars.len() {
                return Err(format!("token {i} has invalid span {s}..{e}"));
            }
            if !chars[cursor..s].iter().all(|c| c.is_whitespace()) {
                return Err(format!("non-whitespace gap before token {i}"));
            }
            let surface: String = chars[s..e].iter().collect();
            if surface != t.surface {
                return Err(format!("token {i} surface does not match its span"));
            }
            cursor = e;
        }
        if !chars[cursor..].iter().all(|c| c.is_whitespace()) {
            return Err("text continues after the last token".into());
        }
        Ok(())
    }
}
