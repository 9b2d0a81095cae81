//! Corpus-level BLEU and ChrF, self-contained and pinned.
//!
//! Both metrics are computed from their published formulas with a fixed
//! parameter block (BLEU: orders 1-4, brevity penalty from corpus lengths,
//! optional exponential smoothing; ChrF: character orders 1-6, beta 2,
//! whitespace excluded from n-grams, optional word orders). Scores are
//! accumulated corpus-wide, single reference per hypothesis.
//!
//! The evaluation convention removes punctuation from both sides before
//! scoring; [`strip_punctuation`] implements that removal in a way that
//! never glues two formerly separated words together.

use std::collections::HashMap;
use std::fmt;
use std::hash::Hash;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;
use unicode_properties::{GeneralCategoryGroup, UnicodeGeneralCategory};

use crate::ethiopic::{classify, CharClass};

/// Errors from the metric entry points.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum MetricsError {
    #[error("empty corpus: need at least one hypothesis/reference pair")]
    EmptyCorpus,
    #[error("invalid metric parameter: {0}")]
    InvalidParameter(String),
}

/// Zero-count handling for BLEU precisions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Smoothing {
    /// Any zero-match order zeroes the whole score.
    None,
    /// Each zero-match order n with total > 0 scores 1/(2^k * total),
    /// with k counting up from 1 per zero order encountered.
    #[default]
    Exponential,
}

impl fmt::Display for Smoothing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Smoothing::None => "none",
            Smoothing::Exponential => "exponential",
        })
    }
}

impl FromStr for Smoothing {
    type Err = MetricsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "none" => Ok(Smoothing::None),
            "exp" | "exponential" => Ok(Smoothing::Exponential),
            other => Err(MetricsError::InvalidParameter(format!(
                "unknown smoothing {other:?} (expected none or exp)"
            ))),
        }
    }
}

/// Corpus BLEU result with its full parameter block.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BleuReport {
    pub score: f64,
    /// Modified n-gram precisions for orders 1-4 (post-smoothing).
    pub precisions: [f64; 4],
    pub brevity_penalty: f64,
    pub hyp_len: u64,
    pub ref_len: u64,
    pub smoothing: Smoothing,
}

/// Corpus ChrF result with its full parameter block.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChrfReport {
    pub score: f64,
    /// Arithmetic mean of per-order n-gram precisions.
    pub precision: f64,
    /// Arithmetic mean of per-order n-gram recalls.
    pub recall: f64,
    pub beta: f64,
    pub char_order: usize,
    pub word_order: usize,
}

/// ChrF configuration. The default is plain ChrF (character orders 1-6,
/// beta 2); `word_order: 2` gives the word-order extension.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChrfParams {
    pub beta: f64,
    pub char_order: usize,
    pub word_order: usize,
}

impl Default for ChrfParams {
    fn default() -> Self {
        ChrfParams {
            beta: 2.0,
            char_order: 6,
            word_order: 0,
        }
    }
}

fn is_punctuation(ch: char) -> bool {
    classify(ch) == CharClass::EthiopicPunctuation
        || ch.general_category_group() == GeneralCategoryGroup::Punctuation
}

/// Remove punctuation (Ethiopic marks and all Unicode P* categories).
///
/// Each maximal punctuation run disappears outright when it sits at a
/// string edge or next to whitespace; a run wedged between two words (the
/// Ethiopic wordspace convention, "a,b", etc.) becomes a single space so
/// the words stay separate.
pub fn strip_punctuation(text: &str) -> String {
    let chars: Vec<char> = text.chars().collect();
    let mut out = String::with_capacity(text.len());
    let mut i = 0;
    while i < chars.len() {
        if !is_punctuation(chars[i]) {
            out.push(chars[i]);
            i += 1;
            continue;
        }
        let start = i;
        while i < chars.len() && is_punctuation(chars[i]) {
            i += 1;
        }
        let open_left = start == 0 || chars[start - 1].is_whitespace();
        let open_right = i == chars.len() || chars[i].is_whitespace();
        if !open_left && !open_right {
            out.push(' ');
        }
    }
    out
}

/// Whitespace tokenization; never yields empty tokens.
pub fn tokenize(text: &str) -> Vec<&str> {
    text.split_whitespace().collect()
}

/// Clipped n-gram matches: per distinct n-gram, the smaller of its
/// hypothesis and reference occurrence counts.
fn clipped_matches<T: Eq + Hash>(hyp: &[T], reference: &[T], n: usize) -> u64 {
    if n == 0 || hyp.len() < n || reference.len() < n {
        return 0;
    }
    let mut ref_counts: HashMap<&[T], u64> = HashMap::new();
    for gram in reference.windows(n) {
        *ref_counts.entry(gram).or_insert(0) += 1;
    }
    let mut hyp_counts: HashMap<&[T], u64> = HashMap::new();
    for gram in hyp.windows(n) {
        *hyp_counts.entry(gram).or_insert(0) += 1;
    }
    hyp_counts
        .iter()
        .map(|(gram, &count)| count.min(ref_counts.get(gram).copied().unwrap_or(0)))
        .sum()
}

/// Number of n-grams in a sequence of `len` items: max(0, len - n + 1).
fn ngram_total(len: usize, n: usize) -> u64 {
    (len + 1).saturating_sub(n) as u64
}

/// Corpus BLEU over whitespace tokens, orders 1-4, single reference.
pub fn corpus_bleu<H, R>(pairs: &[(H, R)], smoothing: Smoothing) -> Result<BleuReport, MetricsError>
where
    H: AsRef<str>,
    R: AsRef<str>,
{
    if pairs.is_empty() {
        return Err(MetricsError::EmptyCorpus);
    }
    let mut matches = [0u64; 4];
    let mut totals = [0u64; 4];
    let mut hyp_len = 0u64;
    let mut ref_len = 0u64;
    for (hyp, reference) in pairs {
        let h = tokenize(hyp.as_ref());
        let r = tokenize(reference.as_ref());
        hyp_len += h.len() as u64;
        ref_len += r.len() as u64;
        for n in 1..=4usize {
            matches[n - 1] += clipped_matches(&h, &r, n);
            totals[n - 1] += ngram_total(h.len(), n);
        }
    }

    let mut report = BleuReport {
        score: 0.0,
        precisions: [0.0; 4],
        brevity_penalty: 0.0,
        hyp_len,
        ref_len,
        smoothing,
    };
    if hyp_len == 0 {
        return Ok(report);
    }
    report.brevity_penalty = if hyp_len >= ref_len {
        1.0
    } else {
        (1.0 - ref_len as f64 / hyp_len as f64).exp()
    };

    let mut k = 0u32; // zero-order counter; the k-th zero order scores 1/(2^k * total)
    let mut dead = false;
    for n in 0..4 {
        if totals[n] == 0 {
            dead = true;
            continue;
        }
        if matches[n] == 0 {
            match smoothing {
                Smoothing::Exponential => {
                    k += 1;
                    report.precisions[n] = 1.0 / (((1u64 << k) * totals[n]) as f64);
                }
                Smoothing::None => dead = true,
            }
        } else {
            report.precisions[n] = matches[n] as f64 / totals[n] as f64;
        }
    }
    if dead || report.precisions.contains(&0.0) {
        return Ok(report);
    }
    let mean_log = report.precisions.iter().map(|p| p.ln()).sum::<f64>() / 4.0;
    report.score = report.brevity_penalty * mean_log.exp() * 100.0;
    Ok(report)
}

/// Corpus ChrF: character n-grams over whitespace-free text, plus word
/// n-grams when `word_order` > 0. F-beta of the arithmetic-mean precision
/// and recall across all orders that occur on either side.
pub fn corpus_chrf<H, R>(pairs: &[(H, R)], params: ChrfParams) -> Result<ChrfReport, MetricsError>
where
    H: AsRef<str>,
    R: AsRef<str>,
{
    if pairs.is_empty() {
        return Err(MetricsError::EmptyCorpus);
    }
    if params.beta <= 0.0 || params.beta.is_nan() {
        return Err(MetricsError::InvalidParameter(format!(
            "beta must be positive, got {}",
            params.beta
        )));
    }
    if params.char_order == 0 {
        return Err(MetricsError::InvalidParameter(
            "char_order must be at least 1".to_string(),
        ));
    }

    let orders = params.char_order + params.word_order;
    let mut matches = vec![0u64; orders];
    let mut hyp_totals = vec![0u64; orders];
    let mut ref_totals = vec![0u64; orders];

    for (hyp, reference) in pairs {
        let h_chars: Vec<char> = hyp.as_ref().chars().filter(|c| !c.is_whitespace()).collect();
        let r_chars: Vec<char> = reference
            .as_ref()
            .chars()
            .filter(|c| !c.is_whitespace())
            .collect();
        for n in 1..=params.char_order {
            matches[n - 1] += clipped_matches(&h_chars, &r_chars, n);
            hyp_totals[n - 1] += ngram_total(h_chars.len(), n);
            ref_totals[n - 1] += ngram_total(r_chars.len(), n);
        }
        if params.word_order > 0 {
            let h_words = tokenize(hyp.as_ref());
            let r_words = tokenize(reference.as_ref());
            for n in 1..=params.word_order {
                let i = params.char_order + n - 1;
                matches[i] += clipped_matches(&h_words, &r_words, n);
                hyp_totals[i] += ngram_total(h_words.len(), n);
                ref_totals[i] += ngram_total(r_words.len(), n);
            }
        }
    }

    let mut report = ChrfReport {
        score: 0.0,
        precision: 0.0,
        recall: 0.0,
        beta: params.beta,
        char_order: params.char_order,
        word_order: params.word_order,
    };
    // orders absent from both sides (corpus shorter than n) don't dilute
    // the averages
    let effective: Vec<usize> = (0..orders)
        .filter(|&i| hyp_totals[i] > 0 || ref_totals[i] > 0)
        .collect();
    if effective.is_empty() {
        return Ok(report);
    }
    let ratio = |m: u64, t: u64| if t > 0 { m as f64 / t as f64 } else { 0.0 };
    report.precision = effective
        .iter()
        .map(|&i| ratio(matches[i], hyp_totals[i]))
        .sum::<f64>()
        / effective.len() as f64;
    report.recall = effective
        .iter()
        .map(|&i| ratio(matches[i], ref_totals[i]))
        .sum::<f64>()
        / effective.len() as f64;
    if report.precision + report.recall == 0.0 {
        return Ok(report);
    }
    let beta_sq = params.beta * params.beta;
    report.score = 100.0 * (1.0 + beta_sq) * report.precision * report.recall
        / (beta_sq * report.precision + report.recall);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pairs(list: &[(&str, &str)]) -> Vec<(String, String)> {
        list.iter()
            .map(|&(h, r)| (h.to_string(), r.to_string()))
            .collect()
    }

    #[test]
    fn strip_removes_ethiopic_full_stop() {
        assert_eq!(strip_punctuation("ሀለ። ሐመ"), "ሀለ ሐመ");
    }

    #[test]
    fn strip_separates_wedged_punctuation() {
        assert_eq!(strip_punctuation("a,b"), "a b");
        // Ethiopic wordspace joins words without spaces
        assert_eq!(strip_punctuation("ሀለ፡ሐመ"), "ሀለ ሐመ");
    }

    #[test]
    fn strip_leaves_clean_text_alone() {
        assert_eq!(strip_punctuation("ሀለ ሐመ በለ"), "ሀለ ሐመ በለ");
        assert_eq!(strip_punctuation(""), "");
    }

    #[test]
    fn strip_edges_and_runs() {
        assert_eq!(strip_punctuation("(ሀለ)"), "ሀለ");
        assert_eq!(strip_punctuation("«ሀለ»፣ ሐመ!"), "ሀለ ሐመ");
        // a run next to whitespace vanishes instead of doubling the gap
        assert_eq!(tokenize(&strip_punctuation("a -- b")), vec!["a", "b"]);
    }

    #[test]
    fn tokenize_collapses_whitespace() {
        assert_eq!(tokenize("ሀለ ሐመ"), vec!["ሀለ", "ሐመ"]);
        assert_eq!(tokenize("  "), Vec::<&str>::new());
        assert_eq!(tokenize("a\tb\nc"), vec!["a", "b", "c"]);
    }

    #[test]
    fn bleu_identity_is_100() {
        let corpus = pairs(&[("ሀለ ሐመ ሰረ ቀበ", "ሀለ ሐመ ሰረ ቀበ")]);
        for smoothing in [Smoothing::None, Smoothing::Exponential] {
            let report = corpus_bleu(&corpus, smoothing).unwrap();
            assert_eq!(report.score, 100.0);
            assert_eq!(report.precisions, [1.0, 1.0, 1.0, 1.0]);
            assert_eq!(report.brevity_penalty, 1.0);
        }
    }

    #[test]
    fn bleu_zero_order_unsmoothed_zeroes_score() {
        let corpus = pairs(&[("ሀለ ሐመ ሰረ", "ሀለ ሐመ በለ")]);
        let report = corpus_bleu(&corpus, Smoothing::None).unwrap();
        assert_eq!(report.score, 0.0);
        assert!((report.precisions[0] - 2.0 / 3.0).abs() < 1e-12);
        assert!((report.precisions[1] - 0.5).abs() < 1e-12);
        assert_eq!(report.precisions[2], 0.0);
    }

    #[test]
    fn bleu_exponential_smoothing_fills_zero_orders() {
        let corpus = pairs(&[("ሀለ ሐመ ሰረ", "ሀለ ሐመ በለ")]);
        let report = corpus_bleu(&corpus, Smoothing::Exponential).unwrap();
        // order 3: 1 trigram total, first zero order -> 1/2; order 4 has
        // no 4-grams at all (3 tokens), so the score collapses to 0
        assert!((report.precisions[2] - 0.5).abs() < 1e-12);
        assert_eq!(report.score, 0.0);
    }

    #[test]
    fn bleu_brevity_penalty() {
        let corpus = pairs(&[("ሀለ ሐመ ሰረ ቀበ", "ሀለ ሐመ ሰረ ቀበ ገና መጣ")]);
        let report = corpus_bleu(&corpus, Smoothing::Exponential).unwrap();
        assert!((report.brevity_penalty - (1.0f64 - 6.0 / 4.0).exp()).abs() < 1e-12);
        assert_eq!(report.hyp_len, 4);
        assert_eq!(report.ref_len, 6);
    }

    #[test]
    fn bleu_empty_inputs() {
        assert_eq!(
            corpus_bleu(&Vec::<(String, String)>::new(), Smoothing::None),
            Err(MetricsError::EmptyCorpus)
        );
        let all_empty = pairs(&[("", "ሀለ ሐመ")]);
        let report = corpus_bleu(&all_empty, Smoothing::Exponential).unwrap();
        assert_eq!(report.score, 0.0);
        assert_eq!(report.hyp_len, 0);
    }

    #[test]
    fn bleu_clips_repeated_ngrams() {
        let corpus = pairs(&[("ሀለ ሀለ ሀለ ሀለ", "ሀለ ሀለ በለ ገና")]);
        let report = corpus_bleu(&corpus, Smoothing::None).unwrap();
        // unigram matches clip at the reference count of 2
        assert!((report.precisions[0] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn bleu_is_permutation_invariant() {
        let forward = pairs(&[("ሀለ ሐመ", "ሀለ በለ"), ("ሰረ ቀበ ገና", "ሰረ ቀበ ገና")]);
        let backward: Vec<_> = forward.iter().cloned().rev().collect();
        let a = corpus_bleu(&forward, Smoothing::Exponential).unwrap();
        let b = corpus_bleu(&backward, Smoothing::Exponential).unwrap();
        assert_eq!(a.score, b.score);
    }

    #[test]
    fn chrf_identity_is_100() {
        let corpus = pairs(&[("ሀለ ሐመ", "ሀለ ሐመ")]);
        let report = corpus_chrf(&corpus, ChrfParams::default()).unwrap();
        assert_eq!(report.score, 100.0);
        assert_eq!(report.precision, 1.0);
        assert_eq!(report.recall, 1.0);
    }

    #[test]
    fn chrf_hand_enumerated_two_gram_case() {
        // hyp "ab", ref "ab cd" (whitespace excluded): order 1 matches 2 of
        // 2 against 4 ref chars; order 2 matches 1 of 1 against 3 ref
        // bigrams. P = 1, R = (2/4 + 1/3)/2 = 5/12, F2 = 2500/53.
        let corpus = pairs(&[("ab", "ab cd")]);
        let params = ChrfParams {
            char_order: 2,
            ..ChrfParams::default()
        };
        let report = corpus_chrf(&corpus, params).unwrap();
        assert!((report.score - 2500.0 / 53.0).abs() < 1e-9);
        assert_eq!(report.precision, 1.0);
        assert!((report.recall - 5.0 / 12.0).abs() < 1e-12);
    }

    #[test]
    fn chrf_disjoint_is_zero() {
        let corpus = pairs(&[("abc", "xyz")]);
        let report = corpus_chrf(&corpus, ChrfParams::default()).unwrap();
        assert_eq!(report.score, 0.0);
    }

    #[test]
    fn chrf_word_order_extension_differs() {
        let corpus = pairs(&[("ሀለ ሐመ ሰረ", "ሀለ ሐመ በለ")]);
        let plain = corpus_chrf(&corpus, ChrfParams::default()).unwrap();
        let plus = corpus_chrf(
            &corpus,
            ChrfParams {
                word_order: 2,
                ..ChrfParams::default()
            },
        )
        .unwrap();
        assert_ne!(plain.score, plus.score);
    }

    #[test]
    fn chrf_rejects_bad_parameters() {
        let corpus = pairs(&[("a", "a")]);
        assert!(matches!(
            corpus_chrf(&corpus, ChrfParams { beta: 0.0, ..ChrfParams::default() }),
            Err(MetricsError::InvalidParameter(_))
        ));
        assert!(matches!(
            corpus_chrf(&corpus, ChrfParams { char_order: 0, ..ChrfParams::default() }),
            Err(MetricsError::InvalidParameter(_))
        ));
        assert_eq!(
            corpus_chrf(&Vec::<(String, String)>::new(), ChrfParams::default()),
            Err(MetricsError::EmptyCorpus)
        );
    }

    #[test]
    fn smoothing_round_trips_through_strings() {
        assert_eq!("exp".parse::<Smoothing>().unwrap(), Smoothing::Exponential);
        assert_eq!("none".parse::<Smoothing>().unwrap(), Smoothing::None);
        assert_eq!(Smoothing::Exponential.to_string(), "exponential");
        let json = serde_json::to_string(&Smoothing::Exponential).unwrap();
        assert_eq!(json, "\"exponential\"");
    }
}
