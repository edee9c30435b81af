//! Orthographic normalization for noisy Arabic user-generated text.

const TATWEEL: char = '\u{0640}';

fn is_diacritic(c: char) -> bool {
    ('\u{064B}'..='\u{0652}').contains(&c) || c == TATWEEL
}

fn fold_letter(c: char) -> char {
    match c {
        'أ' | 'إ' | 'آ' => 'ا',
        'ى' => 'ي',
        'ة' => 'ه',
        other => other,
    }
}

/// Strip tashkeel and tatweel, unify alef / yaa / taa-marbuta variants and
/// cap runs of an identical letter at two.
///
/// Idempotent, and the output never has more characters than the input.
/// Non-Arabic text passes through untouched apart from the run cap.
pub fn normalize_arabic(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    let mut prev: Option<char> = None;
    let mut run = 0usize;
    for c in text.chars().filter(|&c| !is_diacritic(c)).map(fold_letter) {
        if Some(c) == prev {
            run += 1;
        } else {
            prev = Some(c);
            run = 1;
        }
        if run > 2 && c.is_alphabetic() {
            continue;
        }
        out.push(c);
    }
    out
}

/// True when `c` belongs to one of the Arabic script blocks.
pub fn is_arabic(c: char) -> bool {
    matches!(c,
        '\u{0600}'..='\u{06FF}'
        | '\u{0750}'..='\u{077F}'
        | '\u{08A0}'..='\u{08FF}'
        | '\u{FB50}'..='\u{FDFF}'
        | '\u{FE70}'..='\u{FEFF}')
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn strips_marks() {
        assert_eq!(normalize_arabic("كَتَبَ"), "كتب");
        assert_eq!(normalize_arabic("جـــميل"), "جميل");
    }

    #[test]
    fn collapses_elongation_to_two() {
        assert_eq!(normalize_arabic("جامدددد"), "جامدد");
        assert_eq!(normalize_arabic("sooooo good"), "soo good");
        assert_eq!(normalize_arabic("!!!!"), "!!!!");
    }

    #[test]
    fn folds_letter_variants() {
        assert_eq!(normalize_arabic("أإآ"), "اا");
        assert_eq!(normalize_arabic("على"), "علي");
        assert_eq!(normalize_arabic("مدرسة"), "مدرسه");
    }

    #[test]
    fn marks_between_repeats_do_not_hide_a_run() {
        assert_eq!(normalize_arabic("دَدَدَ"), "دد");
    }

    fn arabic_string() -> impl Strategy<Value = String> {
        let alphabet: Vec<char> = "ابتثجحخدذرسشصضطظعغفقكلمنهويأإآىةءؤئ \u{064B}\u{064E}\u{0650}\u{0651}\u{0652}\u{0640}!a"
            .chars()
            .collect();
        prop::collection::vec(prop::sample::select(alphabet), 0..40)
            .prop_map(|cs| cs.into_iter().collect())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn idempotent(s in arabic_string()) {
            let once = normalize_arabic(&s);
            prop_assert_eq!(normalize_arabic(&once), once.clone());
        }

        #[test]
        fn never_grows(s in arabic_string()) {
            prop_assert!(normalize_arabic(&s).chars().count() <= s.chars().count());
        }

        #[test]
        fn idempotent_on_any_text(s in "\\PC{0,30}") {
            let once = normalize_arabic(&s);
            prop_assert_eq!(normalize_arabic(&once), once.clone());
        }
    }
}
