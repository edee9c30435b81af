//! Case-insensitive substring search over the original text.
//!
//! Matches are reported as byte ranges into the haystack as written, so a
//! replacement never has to go through a lower-cased copy whose byte offsets
//! may differ.

fn folded(s: &str) -> Vec<char> {
    s.chars().flat_map(char::to_lowercase).collect()
}

/// Byte range of the first case-insensitive occurrence of `needle` at or
/// after byte offset `from`.
pub fn find_ci_from(haystack: &str, needle: &str, from: usize) -> Option<(usize, usize)> {
    let needle = folded(needle);
    if needle.is_empty() {
        return None;
    }
    for (start, _) in haystack[from..].char_indices() {
        let start = from + start;
        let mut want = needle.iter();
        let mut end = start;
        let mut matched = true;
        'outer: for (off, c) in haystack[start..].char_indices() {
            for lc in c.to_lowercase() {
                match want.next() {
                    Some(&w) if w == lc => {}
                    Some(_) => {
                        matched = false;
                        break 'outer;
                    }
                    // the needle ended inside a multi-char lowercase expansion
                    None => {
                        matched = false;
                        break 'outer;
                    }
                }
            }
            end = start + off + c.len_utf8();
            if want.len() == 0 {
                break;
            }
        }
        if matched && want.len() == 0 {
            return Some((start, end));
        }
    }
    None
}

pub fn contains_ci(haystack: &str, needle: &str) -> bool {
    find_ci_from(haystack, needle, 0).is_some()
}

/// Replace every case-insensitive occurrence of `needle`; returns the new
/// text and the number of replacements.
pub fn replace_ci(haystack: &str, needle: &str, replacement: &str) -> (String, usize) {
    let mut out = String::with_capacity(haystack.len());
    let mut pos = 0;
    let mut count = 0;
    while let Some((s, e)) = find_ci_from(haystack, needle, pos) {
        out.push_str(&haystack[pos..s]);
        out.push_str(replacement);
        pos = e;
        count += 1;
    }
    out.push_str(&haystack[pos..]);
    (out, count)
}
