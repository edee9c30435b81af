/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#ifndef SENTIMT_H
#define SENTIMT_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum SentimtStatus {
  SENTIMT_STATUS_OK = 0,
  SENTIMT_STATUS_NULL_ARGUMENT = 1,
  SENTIMT_STATUS_INVALID_UTF8 = 2,
  // A file could not be read or written.
  SENTIMT_STATUS_IO = 3,
  // Malformed input file; the message names the line.
  SENTIMT_STATUS_PARSE = 4,
  // Invalid argument value or inconsistent input.
  SENTIMT_STATUS_INVALID_INPUT = 5,
  // Model file missing its header or otherwise unusable.
  SENTIMT_STATUS_MODEL = 6,
  SENTIMT_STATUS_PANIC = 7,
} SentimtStatus;

// Lexicon file layout for [`sentimt_lexicon_load`].
typedef enum SentimtLexiconFormat {
  // Decide from the first data line.
  SENTIMT_LEXICON_FORMAT_DETECT = 0,
  // `lemma#pos<TAB>score`
  SENTIMT_LEXICON_FORMAT_LEMMA_HASH_POS = 1,
  // `lemma<TAB>pos<TAB>score`
  SENTIMT_LEXICON_FORMAT_THREE_COLUMN = 2,
} SentimtLexiconFormat;

typedef enum SentimtSmoothing {
  SENTIMT_SMOOTHING_NONE = 0,
  SENTIMT_SMOOTHING_ADD_ONE_EXP = 1,
} SentimtSmoothing;

// Opaque DA/MSA classifier.
typedef struct SentimtDialectModel SentimtDialectModel;

// Opaque prior-polarity lexicon.
typedef struct SentimtLexicon SentimtLexicon;

// Sentence-level SAM result.
typedef struct SentimtSam {
  double sam;
  double s_h;
  double s_r;
  // Mismatched hypothesis items.
  size_t m;
  // Mismatched reference items.
  size_t n;
  bool degenerate_hyp;
  bool degenerate_ref;
} SentimtSam;

// Corpus BLEU result; `score` is on the 0-100 scale.
typedef struct SentimtBleu {
  double score;
  double precisions[4];
  double brevity_penalty;
  size_t hyp_len;
  size_t ref_len;
} SentimtBleu;

// Dialect prediction.
typedef struct SentimtPrediction {
  // 1 for dialectal Arabic, 0 for MSA.
  int is_da;
  // Probability of the dialectal class.
  double probability;
} SentimtPrediction;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failure on this thread, or NULL after a success.
// The pointer stays valid until the thread's next call into the library.
const char *sentimt_last_error(void);

// Library version as a static string.
const char *sentimt_version(void);

// Release a string returned by this library.
//
// # Safety
// `s` is NULL or a string returned by this library, not yet freed.
void sentimt_string_free(char *s);

// Load a prior-polarity lexicon file.
//
// # Safety
// `path` is a NUL-terminated string; `out` is valid for writes.
enum SentimtStatus sentimt_lexicon_load(const char *path,
                                        enum SentimtLexiconFormat format,
                                        struct SentimtLexicon **out);

// Parse a lexicon from memory. `name` labels error messages.
//
// # Safety
// `text` and `name` are NUL-terminated strings; `out` is valid for writes.
enum SentimtStatus sentimt_lexicon_parse(const char *text,
                                         const char *name,
                                         enum SentimtLexiconFormat format,
                                         struct SentimtLexicon **out);

// Number of entries, or 0 for NULL.
//
// # Safety
// `lex` is NULL or a live lexicon handle.
size_t sentimt_lexicon_len(const struct SentimtLexicon *lex);

// # Safety
// `lex` is NULL or a lexicon handle not yet freed.
void sentimt_lexicon_free(struct SentimtLexicon *lex);

// SAM between one English hypothesis and reference, annotated with the
// built-in rule annotator.
//
// # Safety
// `lex` is a live lexicon handle; `hyp` and `reference` are NUL-terminated
// strings; `out` is valid for writes.
enum SentimtStatus sentimt_sentence_sam(const struct SentimtLexicon *lex,
                                        const char *hyp,
                                        const char *reference,
                                        struct SentimtSam *out);

// Corpus BLEU over `n` line-aligned hypothesis/reference strings.
//
// # Safety
// `hyps` and `refs` each point to `n` NUL-terminated strings; `out` is
// valid for writes.
enum SentimtStatus sentimt_corpus_bleu(const char *const *hyps,
                                       const char *const *refs,
                                       size_t n,
                                       enum SentimtSmoothing smoothing,
                                       struct SentimtBleu *out);

// Load a dialect model file.
//
// # Safety
// `path` is a NUL-terminated string; `out` is valid for writes.
enum SentimtStatus sentimt_dialect_model_load(const char *path, struct SentimtDialectModel **out);

// Classify one sentence. `threshold` must lie strictly between 0 and 1.
//
// # Safety
// `model` is a live model handle; `text` is a NUL-terminated string;
// `out` is valid for writes.
enum SentimtStatus sentimt_dialect_predict(const struct SentimtDialectModel *model,
                                           const char *text,
                                           double threshold,
                                           struct SentimtPrediction *out);

// # Safety
// `model` is NULL or a model handle not yet freed.
void sentimt_dialect_model_free(struct SentimtDialectModel *model);

// Arabic orthographic normalization. The result is released with
// [`sentimt_string_free`].
//
// # Safety
// `text` is a NUL-terminated string; `out` is valid for writes.
enum SentimtStatus sentimt_normalize_arabic(const char *text, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SENTIMT_H */
