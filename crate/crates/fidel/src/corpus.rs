//! Parallel-corpus ingestion, homophone filtering, deterministic splits,
//! and evaluation diagnostics.
//!
//! Corpora load from line-aligned file pairs or two-column TSV. Filtering
//! keeps pairs whose chosen side carries enough homophone characters,
//! splitting shuffles with a pinned deterministic generator, and the
//! diagnostics cover vocabulary statistics and character coverage between
//! references and hypotheses.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use serde::Serialize;
use thiserror::Error;

use crate::alphabet::{foreign_chars, LanguageAlphabet};
use crate::ethiopic::{decompose, family_of};
use crate::normalize::FamilyGroup;

/// Errors from corpus loading and splitting.
#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("line count mismatch: source has {src} lines, target has {tgt}")]
    LineCountMismatch { src: usize, tgt: usize },
    #[error("line {line}: expected 2 tab-separated columns, found {columns}")]
    MalformedRow { line: usize, columns: usize },
    #[error("corpus has {len} pair(s); splitting needs at least 3")]
    TooSmall { len: usize },
    #[error("invalid split ratios {0:?}: expected three positive integers as a:b:c")]
    BadRatios(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Optional provenance carried alongside the sentence pairs.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CorpusMeta {
    pub dataset: Option<String>,
    pub language_pair: Option<String>,
}

/// An ordered list of aligned (source, target) sentences.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ParallelCorpus {
    pairs: Vec<(String, String)>,
    pub meta: CorpusMeta,
}

fn strip_bom(content: &str) -> &str {
    content.strip_prefix('\u{feff}').unwrap_or(content)
}

impl ParallelCorpus {
    pub fn from_pairs(pairs: Vec<(String, String)>) -> Self {
        ParallelCorpus {
            pairs,
            meta: CorpusMeta::default(),
        }
    }

    /// Pair up two line-aligned texts, trimming each line.
    pub fn from_aligned(src: &str, tgt: &str) -> Result<Self, CorpusError> {
        let src_lines: Vec<&str> = strip_bom(src).lines().map(str::trim).collect();
        let tgt_lines: Vec<&str> = strip_bom(tgt).lines().map(str::trim).collect();
        if src_lines.len() != tgt_lines.len() {
            return Err(CorpusError::LineCountMismatch {
                src: src_lines.len(),
                tgt: tgt_lines.len(),
            });
        }
        Ok(Self::from_pairs(
            src_lines
                .into_iter()
                .zip(tgt_lines)
                .map(|(s, t)| (s.to_string(), t.to_string()))
                .collect(),
        ))
    }

    /// Parse two-column TSV, one pair per row.
    pub fn from_tsv(content: &str) -> Result<Self, CorpusError> {
        let mut pairs = Vec::new();
        for (idx, line) in strip_bom(content).lines().enumerate() {
            let columns: Vec<&str> = line.split('\t').collect();
            if columns.len() != 2 {
                return Err(CorpusError::MalformedRow {
                    line: idx + 1,
                    columns: columns.len(),
                });
            }
            pairs.push((columns[0].trim().to_string(), columns[1].trim().to_string()));
        }
        Ok(Self::from_pairs(pairs))
    }

    pub fn pairs(&self) -> &[(String, String)] {
        &self.pairs
    }

    pub fn into_pairs(self) -> Vec<(String, String)> {
        self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn sources(&self) -> impl Iterator<Item = &str> {
        self.pairs.iter().map(|(s, _)| s.as_str())
    }

    pub fn targets(&self) -> impl Iterator<Item = &str> {
        self.pairs.iter().map(|(_, t)| t.as_str())
    }
}

/// Load a corpus from two line-aligned files.
pub fn load_parallel_files(src_path: &Path, tgt_path: &Path) -> Result<ParallelCorpus, CorpusError> {
    let src = std::fs::read_to_string(src_path)?;
    let tgt = std::fs::read_to_string(tgt_path)?;
    ParallelCorpus::from_aligned(&src, &tgt)
}

/// Load a corpus from a two-column TSV file.
pub fn load_parallel_tsv(path: &Path) -> Result<ParallelCorpus, CorpusError> {
    ParallelCorpus::from_tsv(&std::fs::read_to_string(path)?)
}

/// Which side of the pair an operation looks at.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Source,
    Target,
}

impl FromStr for Side {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "source" | "src" => Ok(Side::Source),
            "target" | "tgt" => Ok(Side::Target),
            other => Err(format!("unknown side {other:?} (expected source or target)")),
        }
    }
}

/// Count characters whose consonant family belongs to any group. All group
/// members count, canonical families included, so the total is invariant
/// under normalization.
pub fn count_homophone_chars(text: &str, groups: &[FamilyGroup]) -> u64 {
    let families: BTreeSet<u32> = groups
        .iter()
        .flat_map(|g| g.members.iter().copied())
        .collect();
    text.chars()
        .filter(|&ch| family_of(ch).is_some_and(|f| families.contains(&f)))
        .count() as u64
}

/// Keep pairs whose `side` sentence has at least `min_count` homophone
/// characters; order is preserved.
pub fn filter_by_homophones(
    corpus: &ParallelCorpus,
    side: Side,
    groups: &[FamilyGroup],
    min_count: u64,
) -> ParallelCorpus {
    let kept = corpus
        .pairs()
        .iter()
        .filter(|(src, tgt)| {
            let text = match side {
                Side::Source => src,
                Side::Target => tgt,
            };
            count_homophone_chars(text, groups) >= min_count
        })
        .cloned()
        .collect();
    ParallelCorpus {
        pairs: kept,
        meta: corpus.meta.clone(),
    }
}

/// Train/eval/test proportions, e.g. 8:1:1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SplitRatios {
    pub train: u64,
    pub eval: u64,
    pub test: u64,
}

impl Default for SplitRatios {
    fn default() -> Self {
        SplitRatios {
            train: 8,
            eval: 1,
            test: 1,
        }
    }
}

impl fmt::Display for SplitRatios {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.train, self.eval, self.test)
    }
}

impl FromStr for SplitRatios {
    type Err = CorpusError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || CorpusError::BadRatios(s.to_string());
        let parts: Vec<u64> = s
            .split(':')
            .map(|p| p.trim().parse::<u64>())
            .collect::<Result<_, _>>()
            .map_err(|_| bad())?;
        match parts.as_slice() {
            &[train, eval, test] if train > 0 && eval > 0 && test > 0 => Ok(SplitRatios {
                train,
                eval,
                test,
            }),
            _ => Err(bad()),
        }
    }
}

/// Shuffle with a seeded generator and cut into train/eval/test.
///
/// The shuffle is a Fisher-Yates walk over ChaCha8 output with
/// `j = next_u64() mod (i+1)`, written out here rather than delegated so
/// the permutation is pinned: the same seed reproduces the same split on
/// any platform and any future dependency version. Sizes follow
/// floor(n*train/sum), floor(n*eval/sum), remainder to test.
pub fn split(
    corpus: &ParallelCorpus,
    ratios: SplitRatios,
    seed: u64,
) -> Result<(ParallelCorpus, ParallelCorpus, ParallelCorpus), CorpusError> {
    let n = corpus.len();
    if n < 3 {
        return Err(CorpusError::TooSmall { len: n });
    }
    let mut order: Vec<usize> = (0..n).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in (1..n).rev() {
        let j = (rng.next_u64() % (i as u64 + 1)) as usize;
        order.swap(i, j);
    }

    let sum = ratios.train + ratios.eval + ratios.test;
    let train_len = (n as u128 * ratios.train as u128 / sum as u128) as usize;
    let eval_len = (n as u128 * ratios.eval as u128 / sum as u128) as usize;

    let part = |indices: &[usize]| ParallelCorpus {
        pairs: indices
            .iter()
            .map(|&i| corpus.pairs[i].clone())
            .collect(),
        meta: corpus.meta.clone(),
    };
    let (train_idx, rest) = order.split_at(train_len);
    let (eval_idx, test_idx) = rest.split_at(eval_len);
    Ok((part(train_idx), part(eval_idx), part(test_idx)))
}

/// Sentence, token, and character-level statistics.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct CorpusStats {
    pub sentences: u64,
    pub tokens: u64,
    pub unique_tokens: u64,
    pub char_histogram: BTreeMap<char, u64>,
}

/// Whitespace-token and character statistics over the texts as given;
/// strip punctuation first if that is the intended view.
pub fn vocab_stats<S: AsRef<str>>(texts: &[S]) -> CorpusStats {
    let mut stats = CorpusStats {
        sentences: texts.len() as u64,
        ..CorpusStats::default()
    };
    let mut vocab: BTreeSet<&str> = BTreeSet::new();
    for text in texts {
        let text = text.as_ref();
        for token in text.split_whitespace() {
            stats.tokens += 1;
            vocab.insert(token);
        }
        for ch in text.chars() {
            *stats.char_histogram.entry(ch).or_insert(0) += 1;
        }
    }
    stats.unique_tokens = vocab.len() as u64;
    stats
}

/// Character-coverage diagnostics of a model run.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct CoverageReport {
    /// Ethiopic syllables the references use but the hypotheses never
    /// produce, with reference-side occurrence counts.
    pub missing_from_hyp: BTreeMap<char, u64>,
    /// Ethiopic syllables in the hypotheses that are outside the language's
    /// alphabet, with hypothesis-side occurrence counts.
    pub foreign: BTreeMap<char, u64>,
}

/// Compare reference and hypothesis character sets for one run.
pub fn char_coverage<S: AsRef<str>>(
    hyps: &[S],
    refs: &[S],
    alphabet: &LanguageAlphabet,
) -> CoverageReport {
    let hyp_charset: BTreeSet<char> = hyps
        .iter()
        .flat_map(|h| h.as_ref().chars())
        .collect();

    let mut missing_from_hyp = BTreeMap::new();
    for reference in refs {
        for ch in reference.as_ref().chars() {
            if decompose(ch).is_some() && !hyp_charset.contains(&ch) {
                *missing_from_hyp.entry(ch).or_insert(0) += 1;
            }
        }
    }

    let mut foreign = BTreeMap::new();
    for hyp in hyps {
        for (ch, count) in foreign_chars(hyp.as_ref(), alphabet) {
            *foreign.entry(ch).or_insert(0) += count;
        }
    }

    CoverageReport {
        missing_from_hyp,
        foreign,
    }
}
