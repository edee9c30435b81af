//! Rule-based word tokenizer for English and Arabic user-generated text.
//!
//! Splits on whitespace, then detaches clause punctuation from the edges of
//! each chunk. URLs, `@mentions` and `#hashtags` survive as single tokens and
//! every emoji becomes its own token.

use super::Lang;

/// Punctuation that is split off into its own token.
pub const PUNCTUATION: &[char] = &[
    '.', ',', '!', '?', ';', ':', '«', '»', '"', '\'', '(', ')', '،', '؛', '؟',
];

/// A surface token with its character (not byte) span in the source text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurfaceToken {
    pub text: String,
    pub start: usize,
    pub end: usize,
}

pub fn is_punct(c: char) -> bool {
    PUNCTUATION.contains(&c)
}

fn is_emoji(c: char) -> bool {
    matches!(c,
        '\u{1F000}'..='\u{1FAFF}'
        | '\u{2600}'..='\u{27BF}'
        | '\u{2B00}'..='\u{2BFF}')
}

fn is_emoji_continuation(c: char) -> bool {
    matches!(c, '\u{FE0F}' | '\u{1F3FB}'..='\u{1F3FF}')
}

fn is_handle_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_'
}

struct Emitter<'a> {
    chars: &'a [char],
    out: Vec<SurfaceToken>,
}

impl Emitter<'_> {
    fn emit(&mut self, start: usize, end: usize) {
        if start < end {
            self.out.push(SurfaceToken {
                text: self.chars[start..end].iter().collect(),
                start,
                end,
            });
        }
    }

    /// Length of the emoji cluster beginning at `i`, or 0.
    fn emoji_len(&self, i: usize) -> usize {
        if !is_emoji(self.chars[i]) {
            return 0;
        }
        let mut j = i + 1;
        while j < self.chars.len() {
            let c = self.chars[j];
            if is_emoji_continuation(c) {
                j += 1;
            } else if c == '\u{200D}' && j + 1 < self.chars.len() && is_emoji(self.chars[j + 1]) {
                j += 2;
            } else {
                break;
            }
        }
        j - i
    }

    fn starts_url(&self, start: usize, end: usize) -> bool {
        let head: String = self.chars[start..end.min(start + 8)].iter().collect();
        let lower = head.to_ascii_lowercase();
        lower.starts_with("http://") || lower.starts_with("https://") || lower.starts_with("www.")
    }

    fn chunk(&mut self, mut start: usize, end: usize) {
        // leading punctuation
        while start < end && is_punct(self.chars[start]) {
            self.emit(start, start + 1);
            start += 1;
        }
        if start >= end {
            return;
        }

        if self.starts_url(start, end) {
            let mut body_end = end;
            while body_end > start && is_punct(self.chars[body_end - 1]) {
                body_end -= 1;
            }
            self.emit(start, body_end);
            for i in body_end..end {
                self.emit(i, i + 1);
            }
            return;
        }

        let c = self.chars[start];
        if (c == '@' || c == '#') && start + 1 < end && is_handle_char(self.chars[start + 1]) {
            let mut j = start + 1;
            while j < end && is_handle_char(self.chars[j]) {
                j += 1;
            }
            self.emit(start, j);
            self.chunk(j, end);
            return;
        }

        // trailing punctuation, emitted after the body
        let mut trail = end;
        while trail > start && is_punct(self.chars[trail - 1]) {
            trail -= 1;
        }

        let mut word_start = start;
        let mut i = start;
        while i < trail {
            let n = self.emoji_len(i).min(trail - i);
            if n > 0 {
                self.emit(word_start, i);
                self.emit(i, i + n);
                i += n;
                word_start = i;
            } else {
                i += 1;
            }
        }
        self.emit(word_start, trail);
        for i in trail..end {
            self.emit(i, i + 1);
        }
    }
}

/// Tokenize `text`. The language tag is accepted for interface symmetry;
/// the same rules apply to every language.
pub fn tokenize(text: &str, _lang: Lang) -> Vec<SurfaceToken> {
    let chars: Vec<char> = text.chars().collect();
    let mut em = Emitter {
        chars: &chars,
        out: Vec::new(),
    };
    let mut i = 0;
    while i < chars.len() {
        if chars[i].is_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        while i < chars.len() && !chars[i].is_whitespace() {
            i += 1;
        }
        em.chunk(start, i);
    }
    em.out
}

/// Convenience: the surface strings only.
pub fn tokenize_words(text: &str, lang: Lang) -> Vec<String> {
    tokenize(text, lang).into_iter().map(|t| t.text).collect()
}
