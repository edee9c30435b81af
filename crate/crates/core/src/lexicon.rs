//! Prior-polarity word lexicon and dialectal sentiment phrase lexicon.
//!
//! The word lexicon maps a `(lemma, POS)` pair to a prior-polarity score in
//! `[-1, 1]`. Two on-disk layouts are accepted:
//!
//! * `hash`: `lemma#p<TAB>score`, with `p` one of `n`, `v`, `a`, `r`.
//! * `columns`: `lemma<TAB>pos<TAB>score`, with the POS spelled out.
//!
//! In both layouts a line whose first two characters are `"# "` is a comment
//! and blank lines are skipped. Lemmas are case-folded on load and on lookup.

use std::collections::HashMap;
use std::fmt;
use std::fs;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::textproc::casefold;
use crate::textproc::normalize::normalize_arabic;

/// Coarse part-of-speech classes. Only the first four carry prior polarity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Pos {
    Noun,
    Verb,
    Adjective,
    Adverb,
    Other,
}

impl Pos {
    /// Order used to break ties when a lemma exists under several classes.
    pub const PREFERENCE: [Pos; 4] = [Pos::Adjective, Pos::Noun, Pos::Verb, Pos::Adverb];

    pub fn as_str(self) -> &'static str {
        match self {
            Pos::Noun => "noun",
            Pos::Verb => "verb",
            Pos::Adjective => "adjective",
            Pos::Adverb => "adverb",
            Pos::Other => "other",
        }
    }

    /// Single-letter code used by the `lemma#p` layout.
    pub fn code(self) -> Option<char> {
        match self {
            Pos::Noun => Some('n'),
            Pos::Verb => Some('v'),
            Pos::Adjective => Some('a'),
            Pos::Adverb => Some('r'),
            Pos::Other => None,
        }
    }

    pub fn from_code(code: &str) -> Option<Pos> {
        match code {
            "n" => Some(Pos::Noun),
            "v" => Some(Pos::Verb),
            "a" => Some(Pos::Adjective),
            "r" => Some(Pos::Adverb),
            _ => None,
        }
    }

    pub fn is_sentiment_bearing(self) -> bool {
        self != Pos::Other
    }
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Pos {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "noun" => Ok(Pos::Noun),
            "verb" => Ok(Pos::Verb),
            "adjective" => Ok(Pos::Adjective),
            "adverb" => Ok(Pos::Adverb),
            "other" => Ok(Pos::Other),
            other => Err(format!("unknown POS `{other}`")),
        }
    }
}

/// On-disk layout of a prior-polarity lexicon.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LexiconFormat {
    /// `lemma#p<TAB>score`
    LemmaHashPos,
    /// `lemma<TAB>pos<TAB>score`
    ThreeColumn,
}

impl LexiconFormat {
    /// Guess the layout from the first data line: two columns means
    /// `lemma#p`, anything else the spelled-out layout.
    pub fn detect(text: &str) -> LexiconFormat {
        text.lines()
            .find(|l| !l.trim().is_empty() && !is_comment(l))
            .map(|l| {
                if l.split('\t').count() == 2 {
                    LexiconFormat::LemmaHashPos
                } else {
                    LexiconFormat::ThreeColumn
                }
            })
            .unwrap_or(LexiconFormat::LemmaHashPos)
    }
}

impl FromStr for LexiconFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "lemma-hash-pos" | "hash" => Ok(LexiconFormat::LemmaHashPos),
            "three-column" | "columns" => Ok(LexiconFormat::ThreeColumn),
            other => Err(format!("unknown lexicon format `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PriorPolarityEntry {
    pub lemma: String,
    pub pos: Pos,
    pub score: f64,
}

/// Immutable `(lemma, POS) -> score` table.
#[derive(Debug, Clone, Default)]
pub struct PriorPolarityLexicon {
    entries: Vec<PriorPolarityEntry>,
    index: HashMap<(String, Pos), usize>,
    source_name: String,
}

fn is_comment(line: &str) -> bool {
    line.starts_with("# ") || line == "#"
}

fn check_lemma(lemma: &str) -> std::result::Result<(), String> {
    if lemma.is_empty() {
        return Err("empty lemma".into());
    }
    if lemma.chars().any(char::is_whitespace) {
        return Err(format!("lemma `{lemma}` contains whitespace"));
    }
    Ok(())
}

fn check_score(raw: &str) -> std::result::Result<f64, String> {
    let score: f64 = raw
        .trim()
        .parse()
        .map_err(|_| format!("unparseable score `{}`", raw.trim()))?;
    check_range(score)
}

fn check_range(score: f64) -> std::result::Result<f64, String> {
    if !score.is_finite() || !(-1.0..=1.0).contains(&score) {
        return Err("score out of range".into());
    }
    Ok(score)
}

impl PriorPolarityLexicon {
    pub fn new(source_name: impl Into<String>) -> Self {
        PriorPolarityLexicon {
            source_name: source_name.into(),
            ..Default::default()
        }
    }

    /// Build from in-memory entries, applying the same validation as the
    /// file loaders.
    pub fn from_entries<I>(source_name: impl Into<String>, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = PriorPolarityEntry>,
    {
        let mut lex = PriorPolarityLexicon::new(source_name);
        let mut lines = HashMap::new();
        for (i, entry) in entries.into_iter().enumerate() {
            let score = check_range(entry.score)
                .map_err(|m| Error::parse(&lex.source_name, i + 1, m))?;
            lex.insert(&mut lines, i + 1, &entry.lemma, entry.pos, score)?;
        }
        Ok(lex)
    }

    pub fn load(path: &Path, format: Option<LexiconFormat>) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::read(path, e))?;
        let format = format.unwrap_or_else(|| LexiconFormat::detect(&text));
        Self::parse(&text, format, &path.display().to_string())
    }

    pub fn parse(text: &str, format: LexiconFormat, source_name: &str) -> Result<Self> {
        let mut lex = PriorPolarityLexicon::new(source_name);
        let mut lines: HashMap<(String, Pos), usize> = HashMap::new();

        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.strip_suffix('\r').unwrap_or(raw);
            if line.trim().is_empty() || is_comment(line) {
                continue;
            }
            let cols: Vec<&str> = line.split('\t').collect();
            let (lemma, pos, score) = match format {
                LexiconFormat::LemmaHashPos => {
                    if cols.len() != 2 {
                        return Err(Error::parse(
                            source_name,
                            line_no,
                            format!("expected 2 columns, found {}", cols.len()),
                        ));
                    }
                    let (lemma, code) = cols[0].rsplit_once('#').ok_or_else(|| {
                        Error::parse(source_name, line_no, "missing `#pos` suffix")
                    })?;
                    let pos = Pos::from_code(code).ok_or_else(|| {
                        Error::parse(source_name, line_no, format!("unknown POS code `{code}`"))
                    })?;
                    (lemma, pos, cols[1])
                }
                LexiconFormat::ThreeColumn => {
                    if cols.len() != 3 {
                        return Err(Error::parse(
                            source_name,
                            line_no,
                            format!("expected 3 columns, found {}", cols.len()),
                        ));
                    }
                    let pos: Pos = cols[1]
                        .trim()
                        .parse()
                        .map_err(|m: String| Error::parse(source_name, line_no, m))?;
                    if !pos.is_sentiment_bearing() {
                        return Err(Error::parse(
                            source_name,
                            line_no,
                            "POS must be noun, verb, adjective or adverb",
                        ));
                    }
                    (cols[0], pos, cols[2])
                }
            };
            let score = check_score(score).map_err(|m| Error::parse(source_name, line_no, m))?;
            lex.insert(&mut lines, line_no, lemma, pos, score)?;
        }
        Ok(lex)
    }

    fn insert(
        &mut self,
        lines: &mut HashMap<(String, Pos), usize>,
        line_no: usize,
        lemma: &str,
        pos: Pos,
        score: f64,
    ) -> Result<()> {
        let lemma = lemma.to_lowercase();
        check_lemma(&lemma).map_err(|m| Error::parse(&self.source_name, line_no, m))?;
        if !pos.is_sentiment_bearing() {
            return Err(Error::parse(
                &self.source_name,
                line_no,
                "POS must be noun, verb, adjective or adverb",
            ));
        }
        let key = (lemma.clone(), pos);
        if let Some(first) = lines.get(&key) {
            return Err(Error::parse(
                &self.source_name,
                line_no,
                format!("duplicate entry {lemma}#{pos} (first defined at line {first})"),
            ));
        }
        lines.insert(key.clone(), line_no);
        self.index.insert(key, self.entries.len());
        self.entries.push(PriorPolarityEntry { lemma, pos, score });
        Ok(())
    }

    /// Exact-match score for a lemma-POS pair. The lemma is case-folded
    /// before lookup; `Pos::Other` is always absent.
    pub fn lookup(&self, lemma: &str, pos: Pos) -> Option<f64> {
        if !pos.is_sentiment_bearing() {
            return None;
        }
        self.index
            .get(&(lemma.to_lowercase(), pos))
            .map(|&i| self.entries[i].score)
    }

    /// All classes under which `lemma` is listed, in tie-break preference order.
    pub fn classes_of(&self, lemma: &str) -> Vec<Pos> {
        let lemma = lemma.to_lowercase();
        Pos::PREFERENCE
            .into_iter()
            .filter(|&p| self.index.contains_key(&(lemma.clone(), p)))
            .collect()
    }

    pub fn entries(&self) -> &[PriorPolarityEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn source_name(&self) -> &str {
        &self.source_name
    }

    /// Copy of this lexicon with every score multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::from_entries(
            self.source_name.clone(),
            self.entries.iter().map(|e| PriorPolarityEntry {
                score: e.score * factor,
                ..e.clone()
            }),
        )
    }

    pub fn write_to<W: Write>(&self, mut out: W, format: LexiconFormat) -> std::io::Result<()> {
        for e in &self.entries {
            match format {
                LexiconFormat::LemmaHashPos => {
                    // Sentiment-bearing entries always have a code.
                    let code = e.pos.code().unwrap_or('n');
                    writeln!(out, "{}#{}\t{}", e.lemma, code, e.score)?;
                }
                LexiconFormat::ThreeColumn => {
                    writeln!(out, "{}\t{}\t{}", e.lemma, e.pos, e.score)?;
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Polarity {
    Positive,
    Negative,
}

impl FromStr for Polarity {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "positive" => Ok(Polarity::Positive),
            "negative" => Ok(Polarity::Negative),
            _ => Err("unknown polarity".into()),
        }
    }
}

impl fmt::Display for Polarity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Polarity::Positive => "positive",
            Polarity::Negative => "negative",
        })
    }
}

/// A dialectal sentiment phrase with its curated translations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhraseEntry {
    /// Normalized with [`normalize_arabic`], single-space separated.
    pub da_phrase: String,
    pub polarity: Polarity,
    pub en_translation: String,
    pub msa_translation: String,
    /// Known wrong machine renderings of the phrase, English or Arabic.
    pub literal_mistranslations: Vec<String>,
}

impl PhraseEntry {
    pub fn tokens(&self) -> impl Iterator<Item = &str> {
        self.da_phrase.split(' ')
    }
}

/// One occurrence of a lexicon phrase inside a token sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PhraseMatch {
    pub entry: usize,
    pub start: usize,
    pub len: usize,
}

/// Dialectal phrase lexicon indexed by first token for longest-match search.
#[derive(Debug, Clone, Default)]
pub struct PhraseLexicon {
    entries: Vec<PhraseEntry>,
    // first token -> entry ids, longest phrase first
    by_head: HashMap<String, Vec<usize>>,
}

/// Canonical form used for phrase keys: normalized, whitespace collapsed.
pub fn phrase_key(text: &str) -> String {
    normalize_arabic(text)
        .split_whitespace()
        .collect::<Vec<_>>()
        .join(" ")
}

impl PhraseLexicon {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::read(path, e))?;
        Self::parse(&text, &path.display().to_string())
    }

    pub fn parse(text: &str, source_name: &str) -> Result<Self> {
        let mut entries = Vec::new();
        let mut seen: HashMap<String, usize> = HashMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.strip_suffix('\r').unwrap_or(raw);
            if line.trim().is_empty() || line.starts_with("# ") || line == "#" {
                continue;
            }
            let cols: Vec<&str> = line.split('\t').collect();
            if !(4..=5).contains(&cols.len()) {
                return Err(Error::parse(
                    source_name,
                    line_no,
                    format!("expected 4 or 5 columns, found {}", cols.len()),
                ));
            }
            let da_phrase = phrase_key(cols[0]);
            let polarity: Polarity = cols[1]
                .parse()
                .map_err(|m: String| Error::parse(source_name, line_no, m))?;
            let en_translation = cols[2].trim().to_string();
            let msa_translation = cols[3].trim().to_string();
            for (name, value) in [
                ("da_phrase", &da_phrase),
                ("en_translation", &en_translation),
                ("msa_translation", &msa_translation),
            ] {
                if value.is_empty() {
                    return Err(Error::parse(source_name, line_no, format!("empty {name}")));
                }
            }
            let literal_mistranslations: Vec<String> = cols
                .get(4)
                .map(|c| {
                    c.split(';')
                        .map(str::trim)
                        .filter(|s| !s.is_empty())
                        .map(String::from)
                        .collect()
                })
                .unwrap_or_default();
            // A literal inside a correct rendering would be re-replaced on
            // every pass.
            for lit in &literal_mistranslations {
                if casefold::contains_ci(&en_translation, lit)
                    || casefold::contains_ci(&msa_translation, lit)
                {
                    return Err(Error::parse(
                        source_name,
                        line_no,
                        format!("literal mistranslation `{lit}` occurs inside a correct translation"),
                    ));
                }
            }
            if let Some(first) = seen.get(&da_phrase) {
                return Err(Error::parse(
                    source_name,
                    line_no,
                    format!("duplicate phrase `{da_phrase}` (first defined at line {first})"),
                ));
            }
            seen.insert(da_phrase.clone(), line_no);
            entries.push(PhraseEntry {
                da_phrase,
                polarity,
                en_translation,
                msa_translation,
                literal_mistranslations,
            });
        }
        Ok(Self::from_validated(entries))
    }

    fn from_validated(entries: Vec<PhraseEntry>) -> Self {
        let mut by_head: HashMap<String, Vec<usize>> = HashMap::new();
        for (i, e) in entries.iter().enumerate() {
            let head = e.tokens().next().unwrap_or_default().to_string();
            by_head.entry(head).or_default().push(i);
        }
        for ids in by_head.values_mut() {
            ids.sort_by_key(|&i| (std::cmp::Reverse(entries[i].tokens().count()), i));
        }
        PhraseLexicon { entries, by_head }
    }

    pub fn entries(&self) -> &[PhraseEntry] {
        &self.entries
    }

    pub fn get(&self, id: usize) -> &PhraseEntry {
        &self.entries[id]
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Non-overlapping phrase occurrences in a sequence of normalized tokens.
    /// Longer phrases claim their span first; among equal lengths the
    /// leftmost occurrence wins. Results are ordered by position.
    pub fn find_matches(&self, tokens: &[&str]) -> Vec<PhraseMatch> {
        let mut candidates = Vec::new();
        for start in 0..tokens.len() {
            let Some(ids) = self.by_head.get(tokens[start]) else {
                continue;
            };
            for &id in ids {
                let phrase: Vec<&str> = self.entries[id].tokens().collect();
                let end = start + phrase.len();
                if end <= tokens.len() && tokens[start..end] == phrase[..] {
                    candidates.push(PhraseMatch {
                        entry: id,
                        start,
                        len: phrase.len(),
                    });
                }
            }
        }
        candidates.sort_by_key(|m| (std::cmp::Reverse(m.len), m.start, m.entry));

        let mut taken = vec![false; tokens.len()];
        let mut accepted = Vec::new();
        for m in candidates {
            if taken[m.start..m.start + m.len].iter().any(|&t| t) {
                continue;
            }
            taken[m.start..m.start + m.len].iter_mut().for_each(|t| *t = true);
            accepted.push(m);
        }
        accepted.sort_by_key(|m| m.start);
        accepted
    }

    pub fn write_to<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        for e in &self.entries {
            write!(
                out,
                "{}\t{}\t{}\t{}",
                e.da_phrase, e.polarity, e.en_translation, e.msa_translation
            )?;
            if !e.literal_mistranslations.is_empty() {
                write!(out, "\t{}", e.literal_mistranslations.join(";"))?;
            }
            writeln!(out)?;
        }
        Ok(())
    }
}
