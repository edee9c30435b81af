//! Sentiment-aware evaluation and data tooling for dialectal Arabic to
//! English machine translation.
//!
//! * [`sam`]: the Sentiment-Aware Measure over lemma-POS prior polarities.
//! * [`bleu`]: single-reference corpus BLEU for side-by-side comparison.
//! * [`dialect`]: DA/MSA sentence classifier and DA extraction.
//! * [`silver`]: round-trip silver-data generation and phrase infusion.
//! * [`report`]: multi-system comparison tables.

pub mod bleu;
pub mod config;
pub mod corpus;
pub mod demo;
pub mod dialect;
pub mod error;
pub mod lexicon;
pub mod report;
pub mod sam;
pub mod silver;
pub mod textproc;

pub use error::{Error, Result};
pub use lexicon::{PhraseLexicon, Pos, PriorPolarityLexicon};
pub use textproc::{AnnotatedSentence, AnnotationTier, Lang, Token};
