//! Property-based tests over arbitrary (mostly Ethiopic) text.

use fidel::corpus::{split, ParallelCorpus, SplitRatios};
use fidel::metrics::{corpus_bleu, corpus_chrf, strip_punctuation, ChrfParams, Smoothing};
use fidel::{build_scheme, Language, SchemeKind, SchemeTable};
use proptest::prelude::*;
use unicode_properties::{GeneralCategoryGroup, UnicodeGeneralCategory};

fn shipped_tables() -> Vec<SchemeTable> {
    vec![
        build_scheme(SchemeKind::Identity, Language::Geez, None, None).unwrap(),
        build_scheme(SchemeKind::HOnly, Language::Amharic, None, None).unwrap(),
        build_scheme(SchemeKind::HOnly, Language::Tigrinya, None, None).unwrap(),
        build_scheme(SchemeKind::Hsl, Language::Amharic, None, None).unwrap(),
    ]
}

/// Ethiopic-heavy text with spaces, ASCII, and occasional arbitrary unicode.
fn text() -> impl Strategy<Value = String> {
    let ch = prop_oneof![
        5 => prop::char::range('\u{1200}', '\u{137C}'),
        2 => prop::char::range('a', 'z'),
        2 => Just(' '),
        1 => prop::char::any(),
    ];
    prop::collection::vec(ch, 0..60).prop_map(|chars| chars.into_iter().collect())
}

fn pairs() -> impl Strategy<Value = Vec<(String, String)>> {
    prop::collection::vec((text(), text()), 1..8)
}

proptest! {
    #[test]
    fn normalization_is_idempotent(input in text()) {
        for table in shipped_tables() {
            let once = table.apply(&input);
            prop_assert_eq!(&table.apply(&once), &once, "table {} {}", table.language(), table.kind());
        }
    }

    #[test]
    fn char_tables_preserve_length(input in text()) {
        for table in shipped_tables() {
            if table.seq_rules().is_empty() {
                prop_assert_eq!(table.apply(&input).chars().count(), input.chars().count());
            }
        }
    }

    #[test]
    fn stripping_removes_every_punctuation_mark(input in text()) {
        let stripped = strip_punctuation(&input);
        for ch in stripped.chars() {
            let ethiopic_punct = ('\u{1360}'..='\u{1368}').contains(&ch);
            let unicode_punct = ch.general_category_group() == GeneralCategoryGroup::Punctuation;
            prop_assert!(!ethiopic_punct && !unicode_punct, "{ch:?} survived stripping");
        }
    }

    #[test]
    fn corpus_scores_ignore_pair_order(corpus in pairs(), swaps in prop::collection::vec((0usize..8, 0usize..8), 0..8)) {
        let mut shuffled = corpus.clone();
        for (a, b) in swaps {
            let (a, b) = (a % shuffled.len(), b % shuffled.len());
            shuffled.swap(a, b);
        }
        for smoothing in [Smoothing::None, Smoothing::Exponential] {
            prop_assert_eq!(
                corpus_bleu(&corpus, smoothing).unwrap(),
                corpus_bleu(&shuffled, smoothing).unwrap()
            );
        }
        prop_assert_eq!(
            corpus_chrf(&corpus, ChrfParams::default()).unwrap(),
            corpus_chrf(&shuffled, ChrfParams::default()).unwrap()
        );
    }

    #[test]
    fn scores_stay_within_bounds(corpus in pairs()) {
        for smoothing in [Smoothing::None, Smoothing::Exponential] {
            let bleu = corpus_bleu(&corpus, smoothing).unwrap().score;
            prop_assert!((0.0..=100.0).contains(&bleu), "bleu {bleu}");
        }
        let chrf = corpus_chrf(&corpus, ChrfParams::default()).unwrap().score;
        prop_assert!((0.0..=100.0).contains(&chrf), "chrf {chrf}");
    }

    #[test]
    fn split_partitions_the_corpus(
        n in 3usize..120,
        train in 1u64..10,
        eval in 1u64..10,
        test in 1u64..10,
        seed in any::<u64>(),
    ) {
        let corpus = ParallelCorpus::from_pairs(
            (0..n).map(|i| (format!("ሀ {i}"), format!("t {i}"))).collect(),
        );
        let ratios = SplitRatios { train, eval, test };
        let (a, b, c) = split(&corpus, ratios, seed).unwrap();

        let sum = train + eval + test;
        prop_assert_eq!(a.len(), (n as u128 * train as u128 / sum as u128) as usize);
        prop_assert_eq!(b.len(), (n as u128 * eval as u128 / sum as u128) as usize);
        prop_assert_eq!(a.len() + b.len() + c.len(), n);

        let mut all: Vec<&(String, String)> =
            a.pairs().iter().chain(b.pairs()).chain(c.pairs()).collect();
        all.sort();
        let mut original: Vec<&(String, String)> = corpus.pairs().iter().collect();
        original.sort();
        prop_assert_eq!(all, original);
    }
}
