//! C ABI over the sentimt scorers and dialect classifier.
//!
//! Conventions:
//!
//! * Every fallible function returns a [`SentimtStatus`]; results are
//!   written through out-pointers only on `SENTIMT_STATUS_OK`.
//! * On failure, [`sentimt_last_error`] returns a message for the calling
//!   thread, valid until that thread's next call into this library.
//! * Handles are opaque. Each `*_load`/`*_parse` has a matching `*_free`;
//!   freeing NULL is a no-op. Handles are immutable after creation and may
//!   be shared between threads.
//! * Strings are NUL-terminated UTF-8. Strings returned by this library are
//!   released with [`sentimt_string_free`].
//! * Panics never cross the boundary; they are reported as
//!   `SENTIMT_STATUS_PANIC`.

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use sentimt::bleu::{corpus_bleu, Smoothing, MAX_ORDER};
use sentimt::dialect::{DialectLabel, DialectModel};
use sentimt::lexicon::{LexiconFormat, PriorPolarityLexicon};
use sentimt::sam::pair_sam;
use sentimt::textproc::{annotate_text, normalize_arabic, tokenize_words};
use sentimt::{Error, Lang};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SentimtStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    /// A file could not be read or written.
    Io = 3,
    /// Malformed input file; the message names the line.
    Parse = 4,
    /// Invalid argument value or inconsistent input.
    InvalidInput = 5,
    /// Model file missing its header or otherwise unusable.
    Model = 6,
    Panic = 7,
}

/// Lexicon file layout for [`sentimt_lexicon_load`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SentimtLexiconFormat {
    /// Decide from the first data line.
    Detect = 0,
    /// `lemma#pos<TAB>score`
    LemmaHashPos = 1,
    /// `lemma<TAB>pos<TAB>score`
    ThreeColumn = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SentimtSmoothing {
    None = 0,
    AddOneExp = 1,
}

/// Opaque prior-polarity lexicon.
pub struct SentimtLexicon(PriorPolarityLexicon);

/// Opaque DA/MSA classifier.
pub struct SentimtDialectModel(DialectModel);

/// Sentence-level SAM result.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SentimtSam {
    pub sam: f64,
    pub s_h: f64,
    pub s_r: f64,
    /// Mismatched hypothesis items.
    pub m: usize,
    /// Mismatched reference items.
    pub n: usize,
    pub degenerate_hyp: bool,
    pub degenerate_ref: bool,
}

/// Corpus BLEU result; `score` is on the 0-100 scale.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SentimtBleu {
    pub score: f64,
    pub precisions: [f64; 4],
    pub brevity_penalty: f64,
    pub hyp_len: usize,
    pub ref_len: usize,
}

/// Dialect prediction.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SentimtPrediction {
    /// 1 for dialectal Arabic, 0 for MSA.
    pub is_da: c_int,
    /// Probability of the dialectal class.
    pub probability: f64,
}

const _: () = assert!(MAX_ORDER == 4);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: String) {
    let c = CString::new(message.replace('\0', "\\0")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Failure(SentimtStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match &e {
            Error::Read { .. } | Error::Write { .. } | Error::Io(_) => SentimtStatus::Io,
            Error::Parse { .. } | Error::Json(_) => SentimtStatus::Parse,
            Error::Model(_) => SentimtStatus::Model,
            _ => SentimtStatus::InvalidInput,
        };
        Failure(status, e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(SentimtStatus::NullArgument, format!("{what} is NULL"))
}

/// Run `f`, translating errors and panics into a status code.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> SentimtStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => SentimtStatus::Ok,
        Ok(Err(Failure(status, message))) => {
            set_error(message);
            status
        }
        Err(payload) => {
            let message = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("internal panic: {message}"));
            SentimtStatus::Panic
        }
    }
}

/// # Safety
/// `p` is NULL or a valid NUL-terminated string.
unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(SentimtStatus::InvalidUtf8, format!("{what} is not valid UTF-8")))
}

/// # Safety
/// `p` is NULL or valid for writes.
unsafe fn write_out<T>(p: *mut T, value: T, what: &str) -> Result<(), Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    p.write(value);
    Ok(())
}

/// # Safety
/// `p` is NULL or a live handle created by this library.
unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

/// Message for the last failure on this thread, or NULL after a success.
/// The pointer stays valid until the thread's next call into the library.
#[no_mangle]
pub extern "C" fn sentimt_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn sentimt_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Release a string returned by this library.
///
/// # Safety
/// `s` is NULL or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sentimt_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

fn lexicon_format(format: SentimtLexiconFormat) -> Option<LexiconFormat> {
    match format {
        SentimtLexiconFormat::Detect => None,
        SentimtLexiconFormat::LemmaHashPos => Some(LexiconFormat::LemmaHashPos),
        SentimtLexiconFormat::ThreeColumn => Some(LexiconFormat::ThreeColumn),
    }
}

/// Load a prior-polarity lexicon file.
///
/// # Safety
/// `path` is a NUL-terminated string; `out` is valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sentimt_lexicon_load(
    path: *const c_char,
    format: SentimtLexiconFormat,
    out: *mut *mut SentimtLexicon,
) -> SentimtStatus {
    guard(|| {
        let path = str_arg(path, "path")?;
        if out.is_null() {
            return Err(null("out"));
        }
        let lex = PriorPolarityLexicon::load(Path::new(path), lexicon_format(format))?;
        write_out(out, Box::into_raw(Box::new(SentimtLexicon(lex))), "out")
    })
}

/// Parse a lexicon from memory. `name` labels error messages.
///
/// # Safety
/// `text` and `name` are NUL-terminated strings; `out` is valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sentimt_lexicon_parse(
    text: *const c_char,
    name: *const c_char,
    format: SentimtLexiconFormat,
    out: *mut *mut SentimtLexicon,
) -> SentimtStatus {
    guard(|| {
        let text = str_arg(text, "text")?;
        let name = str_arg(name, "name")?;
        if out.is_null() {
            return Err(null("out"));
        }
        let format = lexicon_format(format).unwrap_or_else(|| LexiconFormat::detect(text));
        let lex = PriorPolarityLexicon::parse(text, format, name)?;
        write_out(out, Box::into_raw(Box::new(SentimtLexicon(lex))), "out")
    })
}

/// Number of entries, or 0 for NULL.
///
/// # Safety
/// `lex` is NULL or a live lexicon handle.
#[no_mangle]
pub unsafe extern "C" fn sentimt_lexicon_len(lex: *const SentimtLexicon) -> usize {
    lex.as_ref().map_or(0, |l| l.0.len())
}

/// # Safety
/// `lex` is NULL or a lexicon handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sentimt_lexicon_free(lex: *mut SentimtLexicon) {
    if !lex.is_null() {
        drop(Box::from_raw(lex));
    }
}

/// SAM between one English hypothesis and reference, annotated with the
/// built-in rule annotator.
///
/// # Safety
/// `lex` is a live lexicon handle; `hyp` and `reference` are NUL-terminated
/// strings; `out` is valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sentimt_sentence_sam(
    lex: *const SentimtLexicon,
    hyp: *const c_char,
    reference: *const c_char,
    out: *mut SentimtSam,
) -> SentimtStatus {
    guard(|| {
        let lex = &handle(lex, "lex")?.0;
        let hyp = annotate_text(str_arg(hyp, "hyp")?, Lang::En, lex);
        let reference = annotate_text(str_arg(reference, "reference")?, Lang::En, lex);
        let r = pair_sam(&hyp, &reference, lex);
        let result = SentimtSam {
            sam: r.sam,
            s_h: r.s_h,
            s_r: r.s_r,
            m: r.m,
            n: r.n,
            degenerate_hyp: r.degenerate_hyp,
            degenerate_ref: r.degenerate_ref,
        };
        write_out(out, result, "out")
    })
}

/// Corpus BLEU over `n` line-aligned hypothesis/reference strings.
///
/// # Safety
/// `hyps` and `refs` each point to `n` NUL-terminated strings; `out` is
/// valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sentimt_corpus_bleu(
    hyps: *const *const c_char,
    refs: *const *const c_char,
    n: usize,
    smoothing: SentimtSmoothing,
    out: *mut SentimtBleu,
) -> SentimtStatus {
    guard(|| {
        if hyps.is_null() {
            return Err(null("hyps"));
        }
        if refs.is_null() {
            return Err(null("refs"));
        }
        let side = |arr: *const *const c_char, what: &str| -> Result<Vec<Vec<String>>, Failure> {
            (0..n)
                .map(|i| {
                    let s = str_arg(*arr.add(i), &format!("{what}[{i}]"))?;
                    Ok(tokenize_words(s, Lang::En))
                })
                .collect()
        };
        let smoothing = match smoothing {
            SentimtSmoothing::None => Smoothing::None,
            SentimtSmoothing::AddOneExp => Smoothing::Floor,
        };
        let b = corpus_bleu(&side(hyps, "hyps")?, &side(refs, "refs")?, smoothing)?;
        let result = SentimtBleu {
            score: b.score,
            precisions: b.precisions,
            brevity_penalty: b.brevity_penalty,
            hyp_len: b.hyp_len,
            ref_len: b.ref_len,
        };
        write_out(out, result, "out")
    })
}

/// Load a dialect model file.
///
/// # Safety
/// `path` is a NUL-terminated string; `out` is valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sentimt_dialect_model_load(
    path: *const c_char,
    out: *mut *mut SentimtDialectModel,
) -> SentimtStatus {
    guard(|| {
        let path = str_arg(path, "path")?;
        if out.is_null() {
            return Err(null("out"));
        }
        let model = DialectModel::load(Path::new(path))?;
        write_out(out, Box::into_raw(Box::new(SentimtDialectModel(model))), "out")
    })
}

/// Classify one sentence. `threshold` must lie strictly between 0 and 1.
///
/// # Safety
/// `model` is a live model handle; `text` is a NUL-terminated string;
/// `out` is valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sentimt_dialect_predict(
    model: *const SentimtDialectModel,
    text: *const c_char,
    threshold: f64,
    out: *mut SentimtPrediction,
) -> SentimtStatus {
    guard(|| {
        let model = &handle(model, "model")?.0;
        let text = str_arg(text, "text")?;
        if !(threshold > 0.0 && threshold < 1.0) {
            return Err(Failure(
                SentimtStatus::InvalidInput,
                format!("threshold must be in (0, 1), got {threshold}"),
            ));
        }
        let p = model.predict_with_threshold(text, threshold);
        let result = SentimtPrediction {
            is_da: c_int::from(p.label == DialectLabel::Da),
            probability: p.probability,
        };
        write_out(out, result, "out")
    })
}

/// # Safety
/// `model` is NULL or a model handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sentimt_dialect_model_free(model: *mut SentimtDialectModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// Arabic orthographic normalization. The result is released with
/// [`sentimt_string_free`].
///
/// # Safety
/// `text` is a NUL-terminated string; `out` is valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sentimt_normalize_arabic(
    text: *const c_char,
    out: *mut *mut c_char,
) -> SentimtStatus {
    guard(|| {
        let text = str_arg(text, "text")?;
        if out.is_null() {
            return Err(null("out"));
        }
        // Input came from a C string, so it holds no interior NUL.
        let normalized = CString::new(normalize_arabic(text)).expect("no interior NUL");
        write_out(out, normalized.into_raw(), "out")
    })
}
