//! Triple files.
//!
//! * `tsv3`: one `da<TAB>en<TAB>msa` line per triple.
//! * `paired-files`: three line-aligned files `<prefix>.da`, `<prefix>.en`,
//!   `<prefix>.msa`.
//!
//! Backslash, tab, LF and CR inside a field are written as `\\`, `\t`, `\n`
//! and `\r`, so every text round-trips. Review flags and infusion logs are
//! not part of either format.

use std::borrow::Borrow;
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::SilverTriple;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExportFormat {
    Tsv3,
    PairedFiles,
}

impl FromStr for ExportFormat {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "tsv3" => Ok(ExportFormat::Tsv3),
            "paired-files" => Ok(ExportFormat::PairedFiles),
            other => Err(format!("unknown export format `{other}`")),
        }
    }
}

pub fn escape_field(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '\\' => out.push_str("\\\\"),
            '\t' => out.push_str("\\t"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            c => out.push(c),
        }
    }
    out
}

pub fn unescape_field(s: &str) -> std::result::Result<String, String> {
    let mut out = String::with_capacity(s.len());
    let mut chars = s.chars();
    while let Some(c) = chars.next() {
        if c != '\\' {
            out.push(c);
            continue;
        }
        match chars.next() {
            Some('\\') => out.push('\\'),
            Some('t') => out.push('\t'),
            Some('n') => out.push('\n'),
            Some('r') => out.push('\r'),
            Some(other) => return Err(format!("unknown escape `\\{other}`")),
            None => return Err("dangling backslash".into()),
        }
    }
    Ok(out)
}

fn side_path(prefix: &Path, ext: &str) -> PathBuf {
    let mut p = prefix.as_os_str().to_owned();
    p.push(".");
    p.push(ext);
    PathBuf::from(p)
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| Error::write(path, e))
}

/// Streaming writer: holds only its output buffers, never the triples.
pub enum TripleWriter {
    Tsv3 {
        path: PathBuf,
        out: BufWriter<File>,
    },
    Paired {
        paths: [PathBuf; 3],
        outs: [BufWriter<File>; 3],
    },
}

impl TripleWriter {
    pub fn create(path: &Path, format: ExportFormat) -> Result<Self> {
        Ok(match format {
            ExportFormat::Tsv3 => TripleWriter::Tsv3 {
                path: path.to_path_buf(),
                out: create(path)?,
            },
            ExportFormat::PairedFiles => {
                let paths = ["da", "en", "msa"].map(|ext| side_path(path, ext));
                TripleWriter::Paired {
                    outs: [create(&paths[0])?, create(&paths[1])?, create(&paths[2])?],
                    paths,
                }
            }
        })
    }

    pub fn write(&mut self, t: &SilverTriple) -> Result<()> {
        match self {
            TripleWriter::Tsv3 { path, out } => writeln!(
                out,
                "{}\t{}\t{}",
                escape_field(&t.da),
                escape_field(&t.en),
                escape_field(&t.msa)
            )
            .map_err(|e| Error::write(path.as_path(), e)),
            TripleWriter::Paired { paths, outs } => {
                for ((out, path), text) in outs.iter_mut().zip(paths.iter()).zip([&t.da, &t.en, &t.msa]) {
                    writeln!(out, "{}", escape_field(text)).map_err(|e| Error::write(path.as_path(), e))?;
                }
                Ok(())
            }
        }
    }

    pub fn finish(self) -> Result<()> {
        match self {
            TripleWriter::Tsv3 { path, mut out } => out.flush().map_err(|e| Error::write(path, e)),
            TripleWriter::Paired { paths, outs } => {
                for (mut out, path) in outs.into_iter().zip(paths) {
                    out.flush().map_err(|e| Error::write(path, e))?;
                }
                Ok(())
            }
        }
    }
}

/// Write triples from any iterator without collecting them.
pub fn export<I>(triples: I, path: &Path, format: ExportFormat) -> Result<usize>
where
    I: IntoIterator,
    I::Item: Borrow<SilverTriple>,
{
    let mut w = TripleWriter::create(path, format)?;
    let mut n = 0;
    for t in triples {
        w.write(t.borrow())?;
        n += 1;
    }
    w.finish()?;
    Ok(n)
}

fn read_lines(path: &Path) -> Result<Vec<String>> {
    let text = fs::read_to_string(path).map_err(|e| Error::read(path, e))?;
    Ok(text
        .lines()
        .map(|l| l.strip_suffix('\r').unwrap_or(l).to_string())
        .collect())
}

pub fn import(path: &Path, format: ExportFormat) -> Result<Vec<SilverTriple>> {
    let source = path.display().to_string();
    let field = |line: usize, s: &str| unescape_field(s).map_err(|m| Error::parse(&source, line, m));
    match format {
        ExportFormat::Tsv3 => read_lines(path)?
            .iter()
            .enumerate()
            .map(|(i, line)| {
                let cols: Vec<&str> = line.split('\t').collect();
                if cols.len() != 3 {
                    return Err(Error::parse(
                        &source,
                        i + 1,
                        format!("expected 3 columns, found {}", cols.len()),
                    ));
                }
                Ok(SilverTriple::new(
                    &field(i + 1, cols[0])?,
                    &field(i + 1, cols[1])?,
                    &field(i + 1, cols[2])?,
                ))
            })
            .collect(),
        ExportFormat::PairedFiles => {
            let [da, en, msa] = ["da", "en", "msa"].map(|ext| side_path(path, ext));
            let (da, en, msa) = (read_lines(&da)?, read_lines(&en)?, read_lines(&msa)?);
            if da.len() != en.len() || da.len() != msa.len() {
                return Err(Error::Input(format!(
                    "paired files are not aligned: {} da, {} en, {} msa lines",
                    da.len(),
                    en.len(),
                    msa.len()
                )));
            }
            (0..da.len())
                .map(|i| {
                    Ok(SilverTriple::new(
                        &field(i + 1, &da[i])?,
                        &field(i + 1, &en[i])?,
                        &field(i + 1, &msa[i])?,
                    ))
                })
                .collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn tab_and_newline_escaped() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t.tsv");
        let ts = vec![SilverTriple::new("a\tb", "line1\nline2", "back\\slash\r")];
        export(&ts, &path, ExportFormat::Tsv3).unwrap();
        let raw = fs::read_to_string(&path).unwrap();
        assert_eq!(raw, "a\\tb\tline1\\nline2\tback\\\\slash\\r\n");
        assert_eq!(import(&path, ExportFormat::Tsv3).unwrap(), ts);
    }

    #[test]
    fn paired_files_roundtrip() {
        let dir = tempfile::tempdir().unwrap();
        let prefix = dir.path().join("silver");
        let ts = vec![
            SilverTriple::new("كتاب جامد جدا", "A very rigid book", "كتاب صلب جدا"),
            SilverTriple::new("", "", ""),
        ];
        assert_eq!(export(&ts, &prefix, ExportFormat::PairedFiles).unwrap(), 2);
        assert!(dir.path().join("silver.msa").exists());
        assert_eq!(import(&prefix, ExportFormat::PairedFiles).unwrap(), ts);
    }

    #[test]
    fn unwritable_path() {
        let err = export(
            Vec::<SilverTriple>::new(),
            Path::new("/nonexistent-dir/x.tsv"),
            ExportFormat::Tsv3,
        )
        .unwrap_err();
        assert!(matches!(err, Error::Write { .. }));
    }

    #[test]
    fn bad_escape_rejected() {
        assert!(unescape_field("a\\qb").is_err());
        assert!(unescape_field("a\\").is_err());
    }

    proptest! {
        #[test]
        fn escaping_is_lossless(s in "\\PC*|[\\\\\t\n\r a]{0,20}") {
            prop_assert_eq!(unescape_field(&escape_field(&s)).unwrap(), s.clone());
            let e = escape_field(&s);
            prop_assert!(!e.contains('\t') && !e.contains('\n') && !e.contains('\r'));
        }
    }
}
