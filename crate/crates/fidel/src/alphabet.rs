//! Per-language alphabet membership for the three Ge'ez-script languages.
//!
//! An alphabet is a set of base-consonant families plus individually listed
//! extra characters (labiovelar rows, loanword letters). Membership lists
//! ship as editable data files; the counts per language are fixed (33
//! Amharic, 32 Tigrinya, 26 Ge'ez base families) and enforced at load.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use thiserror::Error;

use crate::ethiopic::{decompose, family_of};

/// The languages with built-in alphabets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Language {
    Amharic,
    Tigrinya,
    Geez,
}

impl Language {
    pub fn id(&self) -> &'static str {
        match self {
            Language::Amharic => "amharic",
            Language::Tigrinya => "tigrinya",
            Language::Geez => "geez",
        }
    }

    /// Base-family count the built-in data file must provide.
    fn expected_base_count(&self) -> usize {
        match self {
            Language::Amharic => 33,
            Language::Tigrinya => 32,
            Language::Geez => 26,
        }
    }
}

impl fmt::Display for Language {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Language {
    type Err = AlphabetError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "amharic" | "am" | "amh" => Ok(Language::Amharic),
            "tigrinya" | "ti" | "tir" => Ok(Language::Tigrinya),
            "geez" | "gez" | "ge'ez" => Ok(Language::Geez),
            other => Err(AlphabetError::UnknownLanguage(other.to_string())),
        }
    }
}

/// Errors from alphabet loading.
#[derive(Debug, Error)]
pub enum AlphabetError {
    #[error("unknown language {0:?} (expected amharic, tigrinya, or geez)")]
    UnknownLanguage(String),
    #[error("line {line}: {entry:?} is not a single character")]
    NotSingleChar { line: usize, entry: String },
    #[error("line {line}: {ch:?} is not an Ethiopic syllable")]
    NotSyllable { line: usize, ch: char },
    #[error("line {line}: base character {ch:?} repeats family {family}")]
    DuplicateFamily { line: usize, ch: char, family: u32 },
    #[error("{language}: expected {expected} base families, data file has {actual}")]
    WrongBaseCount {
        language: Language,
        expected: usize,
        actual: usize,
    },
    #[error("failed to read alphabet file: {0}")]
    Io(#[from] std::io::Error),
}

/// Character membership for one language.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LanguageAlphabet {
    language: String,
    /// Families whose entire row (all orders) belongs to the language.
    base_families: BTreeSet<u32>,
    /// Base characters in file order, for display and iteration.
    base_chars: Vec<char>,
    /// Individually permitted characters outside the base families.
    extra_chars: BTreeSet<char>,
}

impl LanguageAlphabet {
    /// Parse the data-file format: one base character per line, `#` starts a
    /// comment, `+` prefixes an extra character admitted on its own rather
    /// than as a whole family.
    pub fn parse(language: &str, content: &str) -> Result<Self, AlphabetError> {
        let mut base_families = BTreeSet::new();
        let mut base_chars = Vec::new();
        let mut extra_chars = BTreeSet::new();

        for (idx, raw) in content.lines().enumerate() {
            let line = idx + 1;
            let entry = match raw.find('#') {
                Some(pos) => raw[..pos].trim(),
                None => raw.trim(),
            };
            if entry.is_empty() {
                continue;
            }
            let (is_extra, payload) = match entry.strip_prefix('+') {
                Some(rest) => (true, rest.trim()),
                None => (false, entry),
            };
            let mut chars = payload.chars();
            let ch = match (chars.next(), chars.next()) {
                (Some(ch), None) => ch,
                _ => {
                    return Err(AlphabetError::NotSingleChar {
                        line,
                        entry: payload.to_string(),
                    })
                }
            };
            let syl = decompose(ch).ok_or(AlphabetError::NotSyllable { line, ch })?;
            if is_extra {
                extra_chars.insert(ch);
            } else {
                if !base_families.insert(syl.family) {
                    return Err(AlphabetError::DuplicateFamily {
                        line,
                        ch,
                        family: syl.family,
                    });
                }
                base_chars.push(ch);
            }
        }

        Ok(LanguageAlphabet {
            language: language.to_string(),
            base_families,
            base_chars,
            extra_chars,
        })
    }

    /// Load from an alphabet file on disk; the file stem names the language.
    pub fn from_path(path: &Path) -> Result<Self, AlphabetError> {
        let language = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "custom".to_string());
        let content = std::fs::read_to_string(path)?;
        Self::parse(&language, &content)
    }

    /// The compiled-in alphabet for one of the three supported languages.
    pub fn builtin(language: Language) -> Self {
        let content = match language {
            Language::Amharic => include_str!("../data/alphabets/amharic.txt"),
            Language::Tigrinya => include_str!("../data/alphabets/tigrinya.txt"),
            Language::Geez => include_str!("../data/alphabets/geez.txt"),
        };
        let alphabet = Self::parse(language.id(), content)
            .unwrap_or_else(|e| panic!("built-in {language} alphabet is malformed: {e}"));
        let actual = alphabet.base_families.len();
        let expected = language.expected_base_count();
        if actual != expected {
            panic!("built-in {language} alphabet has {actual} base families, expected {expected}");
        }
        alphabet
    }

    pub fn language(&self) -> &str {
        &self.language
    }

    pub fn base_families(&self) -> &BTreeSet<u32> {
        &self.base_families
    }

    /// Base characters in data-file order.
    pub fn base_chars(&self) -> &[char] {
        &self.base_chars
    }

    pub fn extra_chars(&self) -> &BTreeSet<char> {
        &self.extra_chars
    }

    /// True when `ch` is a syllable the language's orthography uses: its
    /// family is a base family, or it is listed individually.
    pub fn contains(&self, ch: char) -> bool {
        match family_of(ch) {
            Some(family) => self.base_families.contains(&family) || self.extra_chars.contains(&ch),
            None => false,
        }
    }
}

/// Every Ethiopic syllable in `text` outside `alphabet`, with occurrence
/// counts. Non-syllable characters are ignored.
pub fn foreign_chars(text: &str, alphabet: &LanguageAlphabet) -> BTreeMap<char, u64> {
    let mut counts = BTreeMap::new();
    for ch in text.chars() {
        if decompose(ch).is_some() && !alphabet.contains(ch) {
            *counts.entry(ch).or_insert(0) += 1;
        }
    }
    counts
}
