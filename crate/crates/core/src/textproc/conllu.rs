//! CoNLL-U reader and writer for externally tagged sentences.
//!
//! Only FORM, LEMMA and UPOS are consumed. Multi-word token ranges (`1-2`)
//! and empty nodes (`1.1`) are skipped. When a `# text = ...` comment is
//! present and every form can be located in it in order, spans refer to
//! that text; otherwise the text is rebuilt from the forms, honouring
//! `SpaceAfter=No`.

use std::fs;
use std::io::Write;
use std::path::Path;

use super::{AnnotatedSentence, Lang, Token};
use crate::error::{Error, Result};
use crate::lexicon::Pos;

pub fn upos_to_pos(upos: &str) -> Pos {
    match upos {
        "NOUN" | "PROPN" => Pos::Noun,
        "VERB" | "AUX" => Pos::Verb,
        "ADJ" => Pos::Adjective,
        "ADV" => Pos::Adverb,
        _ => Pos::Other,
    }
}

fn pos_to_upos(pos: Pos) -> &'static str {
    match pos {
        Pos::Noun => "NOUN",
        Pos::Verb => "VERB",
        Pos::Adjective => "ADJ",
        Pos::Adverb => "ADV",
        Pos::Other => "X",
    }
}

struct Row {
    form: String,
    lemma: String,
    pos: Pos,
    space_after: bool,
}

#[derive(Default)]
struct Block {
    text: Option<String>,
    rows: Vec<Row>,
    has_content: bool,
}

fn locate(text: &str, rows: &[Row]) -> Option<Vec<(usize, usize)>> {
    let chars: Vec<char> = text.chars().collect();
    let mut spans = Vec::with_capacity(rows.len());
    let mut cursor = 0;
    for row in rows {
        while cursor < chars.len() && chars[cursor].is_whitespace() {
            cursor += 1;
        }
        let form: Vec<char> = row.form.chars().collect();
        let end = cursor + form.len();
        if end > chars.len() || chars[cursor..end] != form[..] {
            return None;
        }
        spans.push((cursor, end));
        cursor = end;
    }
    if chars[cursor..].iter().all(|c| c.is_whitespace()) {
        Some(spans)
    } else {
        None
    }
}

fn rebuild(rows: &[Row]) -> (String, Vec<(usize, usize)>) {
    let mut text = String::new();
    let mut spans = Vec::with_capacity(rows.len());
    let mut pos = 0;
    for (i, row) in rows.iter().enumerate() {
        let n = row.form.chars().count();
        text.push_str(&row.form);
        spans.push((pos, pos + n));
        pos += n;
        if row.space_after && i + 1 < rows.len() {
            text.push(' ');
            pos += 1;
        }
    }
    (text, spans)
}

fn finish(block: Block, lang: Lang) -> Option<AnnotatedSentence> {
    if !block.has_content {
        return None;
    }
    if block.rows.is_empty() && block.text.is_none() {
        return None;
    }
    let (text, spans) = match block.text.as_deref().and_then(|t| locate(t, &block.rows).map(|s| (t.to_string(), s))) {
        Some(found) => found,
        None => rebuild(&block.rows),
    };
    let tokens = block
        .rows
        .into_iter()
        .zip(spans)
        .map(|(r, span)| Token {
            surface: r.form,
            lemma: r.lemma,
            pos: r.pos,
            char_span: span,
        })
        .collect();
    Some(AnnotatedSentence { text, tokens, lang })
}

/// Parse CoNLL-U text into sentences.
pub fn parse_conllu(input: &str, source_name: &str, lang: Lang) -> Result<Vec<AnnotatedSentence>> {
    let mut out = Vec::new();
    let mut block = Block::default();

    for (i, raw) in input.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.strip_suffix('\r').unwrap_or(raw);
        if line.trim().is_empty() {
            out.extend(finish(std::mem::take(&mut block), lang));
            continue;
        }
        if let Some(comment) = line.strip_prefix('#') {
            block.has_content = true;
            if let Some(t) = comment.trim_start().strip_prefix("text =") {
                block.text = Some(t.strip_prefix(' ').unwrap_or(t).to_string());
            }
            continue;
        }
        let cols: Vec<&str> = line.split('\t').collect();
        if cols.len() != 10 {
            return Err(Error::parse(
                source_name,
                line_no,
                format!("expected 10 columns, found {}", cols.len()),
            ));
        }
        block.has_content = true;
        let id = cols[0];
        if id.contains('-') || id.contains('.') {
            continue;
        }
        if id.parse::<usize>().is_err() {
            return Err(Error::parse(source_name, line_no, format!("invalid token id `{id}`")));
        }
        let form = cols[1];
        if form.is_empty() {
            return Err(Error::parse(source_name, line_no, "empty FORM"));
        }
        let lemma = match cols[2] {
            "" | "_" => form.to_lowercase(),
            l => l.to_lowercase(),
        };
        let space_after = !cols[9].split('|').any(|f| f == "SpaceAfter=No");
        block.rows.push(Row {
            form: form.to_string(),
            lemma,
            pos: upos_to_pos(cols[3]),
            space_after,
        });
    }
    out.extend(finish(block, lang));
    Ok(out)
}

pub fn ingest_conllu(path: &Path, lang: Lang) -> Result<Vec<AnnotatedSentence>> {
    let text = fs::read_to_string(path).map_err(|e| Error::read(path, e))?;
    parse_conllu(&text, &path.display().to_string(), lang)
}

/// Serialize sentences as CoNLL-U. Unused columns are written as `_`.
pub fn write_conllu<W: Write>(mut out: W, sentences: &[AnnotatedSentence]) -> std::io::Result<()> {
    for (si, s) in sentences.iter().enumerate() {
        writeln!(out, "# sent_id = {}", si + 1)?;
        writeln!(out, "# text = {}", s.text.replace('\n', " "))?;
        for (i, t) in s.tokens.iter().enumerate() {
            let glued = s
                .tokens
                .get(i + 1)
                .is_some_and(|next| next.char_span.0 == t.char_span.1);
            writeln!(
                out,
                "{}\t{}\t{}\t{}\t_\t_\t_\t_\t_\t{}",
                i + 1,
                t.surface,
                t.lemma,
                pos_to_upos(t.pos),
                if glued { "SpaceAfter=No" } else { "_" }
            )?;
        }
        writeln!(out)?;
    }
    Ok(())
}
