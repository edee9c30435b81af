//! Bundled demo data and a synthetic DA/MSA corpus generator.
//!
//! The bundle is small enough to ship inside the binary; `sentimt demo`
//! writes it to disk so every other subcommand can be tried on it offline.
//! Lexicon scores in the bundle are illustrative values chosen for the
//! demos, not taken from any published resource.

use std::fs;
use std::path::{Path, PathBuf};

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dialect::{DialectLabel, LabeledSentence};
use crate::error::{Error, Result};

pub const LEXICON: &str = include_str!("../data/lexicon.tsv");
pub const PHRASES: &str = include_str!("../data/phrases.tsv");
pub const MOCK_TABLE: &str = include_str!("../data/mock_table.tsv");
/// Mixed DA and MSA lines; the DA lines all have canned mock translations.
pub const MIXED_AR: &str = include_str!("../data/mixed.ar");
/// References for the DA lines of [`MIXED_AR`], in order.
pub const MIXED_REF_EN: &str = include_str!("../data/mixed.ref.en");
pub const RIGID_HYP: &str = include_str!("../data/rigid/hyp.en");
pub const RIGID_REF: &str = include_str!("../data/rigid/ref.en");
pub const IDIOMS_SOURCE: &str = include_str!("../data/idioms/source.ar");
pub const IDIOMS_ONLINE: &str = include_str!("../data/idioms/online.en");
pub const IDIOMS_SEMI: &str = include_str!("../data/idioms/semi_supervised.en");
pub const IDIOMS_REF: &str = include_str!("../data/idioms/reference.en");
/// Constructed contrast corpus: both systems differ from the reference in
/// exactly one sentiment word per sentence, at the same position. The
/// preserving system uses a same-polarity synonym (plus three neutral word
/// swaps); the flipped system uses an antonym.
pub const CONTRAST_REF: &str = include_str!("../data/contrast/reference.en");
pub const CONTRAST_PRESERVING: &str = include_str!("../data/contrast/preserving.en");
pub const CONTRAST_FLIPPED: &str = include_str!("../data/contrast/flipped.en");

/// Largest BLEU gap (in points) between the two contrast systems that the
/// corpus was built to stay under.
pub const CONTRAST_BLEU_MARGIN: f64 = 2.0;

pub const SYNTHETIC_SIZE: usize = 2000;

const FILES: &[(&str, &str)] = &[
    ("lexicon.tsv", LEXICON),
    ("phrases.tsv", PHRASES),
    ("mock_table.tsv", MOCK_TABLE),
    ("mixed.ar", MIXED_AR),
    ("mixed.ref.en", MIXED_REF_EN),
    ("rigid/hyp.en", RIGID_HYP),
    ("rigid/ref.en", RIGID_REF),
    ("idioms/source.ar", IDIOMS_SOURCE),
    ("idioms/online.en", IDIOMS_ONLINE),
    ("idioms/semi_supervised.en", IDIOMS_SEMI),
    ("idioms/reference.en", IDIOMS_REF),
    ("contrast/reference.en", CONTRAST_REF),
    ("contrast/preserving.en", CONTRAST_PRESERVING),
    ("contrast/flipped.en", CONTRAST_FLIPPED),
];

const DA_MARKERS: &[&str] = &[
    "مش", "ايه", "عايز", "كده", "ازاي", "دلوقتي", "اوي", "بتاع", "هيك", "شو", "ليش", "كتير",
    "منيح", "بدي", "خلينا", "معليش", "بقى", "فين", "امتى", "عشان", "زي", "لسه", "حاجه", "ده",
    "دي", "مفيش", "ازيك", "يعني", "مبحبش", "منصحش", "جامد", "يخرب", "سحلني", "اسفين",
    "لايوفقه", "اكدب", "حد", "اي", "شوي", "زعل", "فكونا", "كفايانا", "احسن", "يحفظكك",
];

const MSA_MARKERS: &[&str] = &[
    "سوف", "لقد", "الذي", "التي", "الذين", "هذا", "هذه", "ذلك", "إن", "لكن", "ليس", "حيث",
    "قد", "يجب", "أيضا", "لم", "لن", "ماذا", "كيف", "متى", "أين", "لماذا", "إلى", "عندما",
    "بينما", "كذلك", "غير", "ثمة", "إذ", "لدى", "كانت", "للغاية", "كما", "أن", "حقا", "تعتبر",
    "أفضل", "أعجبني", "أسلوب", "مستوى", "التوقعات", "قرارات", "يعقد", "القادم", "ممتازة",
];

const SHARED: &[&str] = &[
    "كتاب", "فيلم", "مطعم", "الخدمة", "الفندق", "الرواية", "الناس", "البيت", "المدرسة",
    "الطريق", "اليوم", "الوقت", "جميل", "كبير", "صغير", "جديد", "قديم", "الكاتب", "القصة",
    "السعر", "الجو", "المدينة", "الاصدقاء", "العمل", "الطعام", "المكان", "الموظف", "السيارة",
    "الفريق", "المباراة", "الاسبوع", "الصباح", "الليل", "القهوة", "الشارع", "الهاتف",
];

/// Balanced labelled corpus built from disjoint DA and MSA marker-word
/// inventories mixed with a shared content vocabulary. The inventories hold
/// common function words of each variety plus the idioms and function words
/// that occur in the bundled mixed corpus. Every sentence holds one or two
/// markers of its own class and no marker of the other class.
pub fn synthetic_dialect_corpus(n: usize, seed: u64) -> Vec<LabeledSentence> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|i| {
            let (label, markers) = if i % 2 == 0 {
                (DialectLabel::Da, DA_MARKERS)
            } else {
                (DialectLabel::Msa, MSA_MARKERS)
            };
            let len = rng.random_range(4..=9);
            let n_markers = rng.random_range(1..=2);
            let mut words: Vec<&str> = (0..len - n_markers)
                .map(|_| *SHARED.choose(&mut rng).expect("non-empty"))
                .collect();
            for _ in 0..n_markers {
                let at = rng.random_range(0..=words.len());
                words.insert(at, markers.choose(&mut rng).expect("non-empty"));
            }
            LabeledSentence {
                text: words.join(" "),
                label,
            }
        })
        .collect()
}

/// `label<TAB>text` lines, the format read by [`crate::dialect::read_labeled`].
pub fn labeled_tsv(data: &[LabeledSentence]) -> String {
    data.iter().map(|s| format!("{}\t{}\n", s.label, s.text)).collect()
}

/// Write the bundle plus `dialect_train.tsv` (the synthetic corpus for
/// `seed`) under `dir`. Returns the written paths in a fixed order.
pub fn write_bundle(dir: &Path, seed: u64) -> Result<Vec<PathBuf>> {
    let mut written = Vec::new();
    let synthetic = labeled_tsv(&synthetic_dialect_corpus(SYNTHETIC_SIZE, seed));
    for (rel, text) in FILES.iter().copied().chain([("dialect_train.tsv", synthetic.as_str())]) {
        let path = dir.join(rel);
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent).map_err(|e| Error::write(parent, e))?;
        }
        fs::write(&path, text).map_err(|e| Error::write(&path, e))?;
        written.push(path);
    }
    Ok(written)
}
