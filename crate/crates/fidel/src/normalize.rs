//! Homophone-normalization schemes over Ethiopic text.
//!
//! A scheme is a rule table: single-character rules produced by expanding
//! family groups (consonant rows that share a sound), optionally augmented
//! with similar-sound character rules and labialized sequence rules from a
//! data file. Tables are validated to be idempotent before use: applying a
//! table twice always equals applying it once.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::Deserialize;
use sha2::{Digest, Sha256};
use thiserror::Error;
use toml::Spanned;

use crate::alphabet::Language;
use crate::ethiopic::{compose, family_of};

/// The three normalization settings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SchemeKind {
    /// No normalization; the empty table.
    Identity,
    /// Homophone family groups only.
    HOnly,
    /// Homophone groups plus similar-sound and labialized rules.
    Hsl,
}

impl fmt::Display for SchemeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SchemeKind::Identity => "identity",
            SchemeKind::HOnly => "h-only",
            SchemeKind::Hsl => "hsl",
        })
    }
}

impl FromStr for SchemeKind {
    type Err = NormalizeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "identity" | "none" | "no-norm" | "nonorm" => Ok(SchemeKind::Identity),
            "h-only" | "h_only" | "honly" | "h" => Ok(SchemeKind::HOnly),
            "hsl" => Ok(SchemeKind::Hsl),
            other => Err(NormalizeError::UnknownKind(other.to_string())),
        }
    }
}

/// Consonant rows that share one sound in a language, with an optional
/// canonical row every member maps onto.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyGroup {
    pub members: BTreeSet<u32>,
    pub target: Option<u32>,
}

impl FamilyGroup {
    pub fn new(members: impl IntoIterator<Item = u32>) -> Self {
        FamilyGroup {
            members: members.into_iter().collect(),
            target: None,
        }
    }

    pub fn with_target(members: impl IntoIterator<Item = u32>, target: u32) -> Self {
        FamilyGroup {
            members: members.into_iter().collect(),
            target: Some(target),
        }
    }

    /// Build a group from base characters instead of family indices.
    pub fn from_chars(
        members: impl IntoIterator<Item = char>,
        target: Option<char>,
    ) -> Result<Self, NormalizeError> {
        let mut families = BTreeSet::new();
        for ch in members {
            families.insert(family_of(ch).ok_or(NormalizeError::NotSyllable { ch })?);
        }
        let target = match target {
            Some(ch) => Some(family_of(ch).ok_or(NormalizeError::NotSyllable { ch })?),
            None => None,
        };
        Ok(FamilyGroup {
            members: families,
            target,
        })
    }
}

/// First-order character of a family, for messages.
fn family_label(family: u32) -> String {
    compose(family, 0)
        .map(|c| c.to_string())
        .unwrap_or_else(|_| format!("row#{family}"))
}

fn group_label(group: &FamilyGroup) -> String {
    group
        .members
        .iter()
        .map(|&f| family_label(f))
        .collect::<Vec<_>>()
        .join(" ")
}

/// A defect found by [`SchemeTable::validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// A character rule maps a character to itself.
    SelfMap { ch: char },
    /// A character rule's output is itself a character-rule source.
    CharChain { src: char, dst: char },
    /// A sequence replacement (or its image under the character rules)
    /// contains a rule source, so output re-enters the rule domain.
    SeqReplacementReentersDomain {
        source: String,
        replacement: String,
        offender: String,
    },
    /// The character rules rewrite some string into this sequence source,
    /// but that preimage is not a sequence source itself, so a second
    /// application would still find work to do.
    UnclosedSeqPreimage { source: String, preimage: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::SelfMap { ch } => write!(f, "char rule {ch:?} maps to itself"),
            Violation::CharChain { src, dst } => write!(
                f,
                "char rule {src:?} -> {dst:?}: output {dst:?} is itself a rule source"
            ),
            Violation::SeqReplacementReentersDomain {
                source,
                replacement,
                offender,
            } => write!(
                f,
                "seq rule {source:?} -> {replacement:?}: replacement re-enters the rule domain via {offender:?}"
            ),
            Violation::UnclosedSeqPreimage { source, preimage } => write!(
                f,
                "seq source {source:?}: char rules rewrite {preimage:?} into it, but {preimage:?} is not a seq source"
            ),
        }
    }
}

fn violations_summary(violations: &[Violation]) -> String {
    violations
        .iter()
        .map(|v| format!("  - {v}"))
        .collect::<Vec<_>>()
        .join("\n")
}

/// Errors from scheme construction and table parsing.
#[derive(Debug, Error)]
pub enum NormalizeError {
    #[error("unknown scheme kind {0:?} (expected identity, h-only, or hsl)")]
    UnknownKind(String),
    #[error("scheme {kind} is not defined for {language}")]
    UnsupportedScheme { kind: SchemeKind, language: String },
    #[error("corpus-driven target selection applies to h-only only, not {kind}")]
    CorpusNotApplicable { kind: SchemeKind },
    #[error("empty corpus: frequency-based target selection needs at least one line")]
    EmptyCorpus,
    #[error("{ch:?} is not an Ethiopic syllable")]
    NotSyllable { ch: char },
    #[error("group {index} ({label}): {reason}")]
    BadGroup {
        index: usize,
        label: String,
        reason: String,
    },
    #[error("groups {a} and {b} overlap on family {}", family_label(*.family))]
    OverlappingGroups { a: usize, b: usize, family: u32 },
    #[error("table line {line}: {reason}")]
    BadRule { line: usize, reason: String },
    #[error("table parse error: {0}")]
    Toml(String),
    #[error("table declares language {file:?} but {requested} was requested")]
    LanguageMismatch { file: String, requested: String },
    #[error("table declares kind {file} but {requested} was requested")]
    KindMismatch {
        file: SchemeKind,
        requested: SchemeKind,
    },
    #[error("identity tables must be empty, this one has {rules} rule(s)")]
    IdentityNotEmpty { rules: usize },
    #[error("sequence rule sources and replacements must be non-empty")]
    EmptySeqRule,
    #[error("sequence source {0:?} appears more than once")]
    DuplicateSeqSource(String),
    #[error("table is not idempotent:\n{}", violations_summary(violations))]
    Invalid { violations: Vec<Violation> },
    #[error("failed to read table file: {0}")]
    Io(#[from] std::io::Error),
}

/// A validated, immutable normalization table.
#[derive(Debug, Clone)]
pub struct SchemeTable {
    language: String,
    kind: SchemeKind,
    char_rules: BTreeMap<char, char>,
    seq_rules: Vec<(String, String)>,
    /// Rule indices bucketed by source first char, longest source first.
    seq_by_first: BTreeMap<char, Vec<usize>>,
    warnings: Vec<String>,
}

impl SchemeTable {
    /// Validate and seal a rule table. Rejects tables that are not
    /// idempotent and identity tables that carry rules.
    pub fn new(
        language: &str,
        kind: SchemeKind,
        char_rules: BTreeMap<char, char>,
        seq_rules: Vec<(String, String)>,
    ) -> Result<Self, NormalizeError> {
        if kind == SchemeKind::Identity && (!char_rules.is_empty() || !seq_rules.is_empty()) {
            return Err(NormalizeError::IdentityNotEmpty {
                rules: char_rules.len() + seq_rules.len(),
            });
        }
        let mut seen_sources = BTreeSet::new();
        for (src, dst) in &seq_rules {
            if src.is_empty() || dst.is_empty() {
                return Err(NormalizeError::EmptySeqRule);
            }
            if !seen_sources.insert(src.as_str()) {
                return Err(NormalizeError::DuplicateSeqSource(src.clone()));
            }
        }
        let violations = validate_rules(&char_rules, &seq_rules);
        if !violations.is_empty() {
            return Err(NormalizeError::Invalid { violations });
        }
        let mut seq_by_first: BTreeMap<char, Vec<usize>> = BTreeMap::new();
        for (idx, (src, _)) in seq_rules.iter().enumerate() {
            let first = src.chars().next().expect("sources are non-empty");
            seq_by_first.entry(first).or_default().push(idx);
        }
        for bucket in seq_by_first.values_mut() {
            bucket.sort_by_key(|&idx| (std::cmp::Reverse(seq_rules[idx].0.len()), idx));
        }
        Ok(SchemeTable {
            language: language.to_string(),
            kind,
            char_rules,
            seq_rules,
            seq_by_first,
            warnings: Vec::new(),
        })
    }

    /// The empty table: apply is the identity on every string.
    pub fn identity(language: &str) -> Self {
        SchemeTable {
            language: language.to_string(),
            kind: SchemeKind::Identity,
            char_rules: BTreeMap::new(),
            seq_rules: Vec::new(),
            seq_by_first: BTreeMap::new(),
            warnings: Vec::new(),
        }
    }

    pub fn language(&self) -> &str {
        &self.language
    }

    pub fn kind(&self) -> SchemeKind {
        self.kind
    }

    pub fn char_rules(&self) -> &BTreeMap<char, char> {
        &self.char_rules
    }

    pub fn seq_rules(&self) -> &[(String, String)] {
        &self.seq_rules
    }

    /// Notes produced while building (e.g. groups absent from the target
    /// corpus). Empty for tables built without frequency selection.
    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    /// Normalize one string: sequence rules first (longest match, single
    /// left-to-right pass), then character rules over the whole result.
    pub fn apply(&self, text: &str) -> String {
        let seq_applied: std::borrow::Cow<'_, str> = if self.seq_rules.is_empty() {
            std::borrow::Cow::Borrowed(text)
        } else {
            std::borrow::Cow::Owned(self.apply_seq(text))
        };
        if self.char_rules.is_empty() {
            return seq_applied.into_owned();
        }
        seq_applied
            .chars()
            .map(|c| self.char_rules.get(&c).copied().unwrap_or(c))
            .collect()
    }

    fn apply_seq(&self, text: &str) -> String {
        let mut out = String::with_capacity(text.len());
        let mut rest = text;
        while let Some(ch) = rest.chars().next() {
            let matched = self.seq_by_first.get(&ch).and_then(|bucket| {
                bucket
                    .iter()
                    .map(|&idx| &self.seq_rules[idx])
                    .find(|(src, _)| rest.starts_with(src.as_str()))
            });
            match matched {
                Some((src, dst)) => {
                    out.push_str(dst);
                    rest = &rest[src.len()..];
                }
                None => {
                    out.push(ch);
                    rest = &rest[ch.len_utf8()..];
                }
            }
        }
        out
    }

    /// Re-check the sealed table. Always empty for tables built through
    /// [`SchemeTable::new`]; exposed so external table files can be audited.
    pub fn validate(&self) -> Vec<Violation> {
        validate_rules(&self.char_rules, &self.seq_rules)
    }

    /// Hex digest of the table content; stable across runs and platforms.
    pub fn content_hash(&self) -> String {
        let mut hasher = Sha256::new();
        hasher.update(self.language.as_bytes());
        hasher.update([0]);
        hasher.update(self.kind.to_string().as_bytes());
        hasher.update([0]);
        for (src, dst) in &self.char_rules {
            hasher.update(src.to_string().as_bytes());
            hasher.update([1]);
            hasher.update(dst.to_string().as_bytes());
            hasher.update([0]);
        }
        hasher.update([2]);
        for (src, dst) in &self.seq_rules {
            hasher.update(src.as_bytes());
            hasher.update([1]);
            hasher.update(dst.as_bytes());
            hasher.update([0]);
        }
        hex::encode(hasher.finalize())
    }
}

/// Idempotence audit over a rule set. Reports every rule whose output can
/// re-enter the rule domain and every sequence source whose char-rule
/// preimages are not sequence sources themselves.
fn validate_rules(
    char_rules: &BTreeMap<char, char>,
    seq_rules: &[(String, String)],
) -> Vec<Violation> {
    let mut violations = Vec::new();
    let seq_sources: BTreeSet<&str> = seq_rules.iter().map(|(s, _)| s.as_str()).collect();

    for (&src, &dst) in char_rules {
        if src == dst {
            violations.push(Violation::SelfMap { ch: src });
            continue;
        }
        if char_rules.contains_key(&dst) {
            violations.push(Violation::CharChain { src, dst });
        }
    }

    let char_image = |s: &str| -> String {
        s.chars()
            .map(|c| char_rules.get(&c).copied().unwrap_or(c))
            .collect()
    };

    for (src, dst) in seq_rules {
        let mut offenders = BTreeSet::new();
        for ch in dst.chars() {
            if char_rules.contains_key(&ch) {
                offenders.insert(ch.to_string());
            }
        }
        let image = char_image(dst);
        for probe in [dst.as_str(), image.as_str()] {
            for source in &seq_sources {
                if probe.contains(source) {
                    offenders.insert((*source).to_string());
                }
            }
        }
        for offender in offenders {
            violations.push(Violation::SeqReplacementReentersDomain {
                source: src.clone(),
                replacement: dst.clone(),
                offender,
            });
        }
    }

    // Preimage closure: if the char rules can rewrite some string into a seq
    // source, that string must be a seq source too, or the first pass leaves
    // work behind for a second one.
    let mut preimages: BTreeMap<char, Vec<char>> = BTreeMap::new();
    for (&src, &dst) in char_rules {
        preimages.entry(dst).or_default().push(src);
    }
    for (src, _) in seq_rules {
        let options: Vec<Vec<char>> = src
            .chars()
            .map(|c| {
                let mut opts = vec![c];
                if let Some(pre) = preimages.get(&c) {
                    opts.extend(pre.iter().copied());
                }
                opts
            })
            .collect();
        let combos: usize = options.iter().map(Vec::len).product();
        // combo 0 picks the original char at every position, i.e. src itself
        for combo in 1..combos.min(1 << 16) {
            let mut residue = combo;
            let preimage: String = options
                .iter()
                .map(|opts| {
                    let pick = opts[residue % opts.len()];
                    residue /= opts.len();
                    pick
                })
                .collect();
            if !seq_sources.contains(preimage.as_str()) {
                violations.push(Violation::UnclosedSeqPreimage {
                    source: src.clone(),
                    preimage,
                });
            }
        }
    }

    violations
}

/// Expand family groups into character rules: for each non-target member
/// and each vowel order where both the member slot and the target slot are
/// assigned, map member char to target char. Unassigned target slots emit
/// no rule, preserving the source character.
pub fn expand_family_groups(
    groups: &[FamilyGroup],
) -> Result<BTreeMap<char, char>, NormalizeError> {
    let mut claimed: BTreeMap<u32, usize> = BTreeMap::new();
    let mut rules = BTreeMap::new();

    for (index, group) in groups.iter().enumerate() {
        let label = group_label(group);
        let bad = |reason: String| NormalizeError::BadGroup {
            index,
            label: label.clone(),
            reason,
        };
        if group.members.len() < 2 {
            return Err(bad("needs at least two member families".to_string()));
        }
        for &family in &group.members {
            if compose(family, 0).is_err() {
                return Err(bad(format!("family {family} is not a consonant row")));
            }
            if let Some(&other) = claimed.get(&family) {
                return Err(NormalizeError::OverlappingGroups {
                    a: other,
                    b: index,
                    family,
                });
            }
            claimed.insert(family, index);
        }
        let target = group.target.ok_or_else(|| {
            bad("has no target; set one in the table or select by corpus frequency".to_string())
        })?;
        if !group.members.contains(&target) {
            return Err(bad(format!(
                "target {} is not a member",
                family_label(target)
            )));
        }
        for &member in &group.members {
            if member == target {
                continue;
            }
            for order in 0..=7u8 {
                if let (Ok(src), Ok(dst)) = (compose(member, order), compose(target, order)) {
                    rules.insert(src, dst);
                }
            }
        }
    }
    Ok(rules)
}

/// Outcome of frequency-based target selection.
#[derive(Debug, Clone)]
pub struct CanonicalSelection {
    /// Input groups with targets filled in.
    pub groups: Vec<FamilyGroup>,
    /// Indices of groups whose members never occur in the corpus; their
    /// target fell back to the lowest family index.
    pub unobserved: Vec<usize>,
}

/// Pick each group's target as the member family with the most occurrences
/// (all vowel orders summed) across the corpus. Ties and absent groups
/// resolve to the lowest family index, absent groups are flagged.
pub fn select_canonical_by_frequency<I>(
    groups: &[FamilyGroup],
    corpus: I,
) -> Result<CanonicalSelection, NormalizeError>
where
    I: IntoIterator,
    I::Item: AsRef<str>,
{
    for (index, group) in groups.iter().enumerate() {
        if group.target.is_some() {
            return Err(NormalizeError::BadGroup {
                index,
                label: group_label(group),
                reason: "already has a target; frequency selection expects open groups"
                    .to_string(),
            });
        }
        if group.members.is_empty() {
            return Err(NormalizeError::BadGroup {
                index,
                label: group_label(group),
                reason: "has no members".to_string(),
            });
        }
    }

    let mut counts: BTreeMap<u32, u64> = BTreeMap::new();
    let mut lines = 0usize;
    for line in corpus {
        lines += 1;
        for ch in line.as_ref().chars() {
            if let Some(family) = family_of(ch) {
                *counts.entry(family).or_insert(0) += 1;
            }
        }
    }
    if lines == 0 {
        return Err(NormalizeError::EmptyCorpus);
    }

    let mut selected = Vec::with_capacity(groups.len());
    let mut unobserved = Vec::new();
    for (index, group) in groups.iter().enumerate() {
        // ascending iteration: strict `>` keeps the lowest family on ties
        let mut best: Option<(u32, u64)> = None;
        for &family in &group.members {
            let count = counts.get(&family).copied().unwrap_or(0);
            match best {
                Some((_, best_count)) if count <= best_count => {}
                _ => best = Some((family, count)),
            }
        }
        let (target, count) = best.expect("groups are non-empty");
        if count == 0 {
            unobserved.push(index);
        }
        selected.push(FamilyGroup {
            members: group.members.clone(),
            target: Some(target),
        });
    }
    Ok(CanonicalSelection {
        groups: selected,
        unobserved,
    })
}

#[derive(Deserialize)]
struct RawSchemeFile {
    language: String,
    kind: String,
    #[serde(default)]
    groups: Vec<RawGroup>,
    #[serde(default)]
    char_rules: Vec<Spanned<String>>,
    #[serde(default)]
    seq_rules: Vec<Spanned<String>>,
}

#[derive(Deserialize)]
struct RawGroup {
    members: Vec<Spanned<String>>,
    target: Option<Spanned<String>>,
}

/// A parsed (but not yet compiled) scheme table file.
#[derive(Debug, Clone)]
pub struct SchemeFile {
    pub language: String,
    pub kind: SchemeKind,
    pub groups: Vec<FamilyGroup>,
    pub char_rules: Vec<(char, char)>,
    pub seq_rules: Vec<(String, String)>,
}

fn line_of(source: &str, byte: usize) -> usize {
    source[..byte.min(source.len())]
        .bytes()
        .filter(|&b| b == b'\n')
        .count()
        + 1
}

/// Split a rule entry on `->` (or `→`) into trimmed sides.
fn split_rule(entry: &str) -> Option<(&str, &str)> {
    let (lhs, rhs) = entry
        .split_once("->")
        .or_else(|| entry.split_once('→'))?;
    Some((lhs.trim(), rhs.trim()))
}

impl SchemeFile {
    /// Parse the TOML table format. Rule entries are `"src -> dst"` strings;
    /// malformed entries are reported with their line number.
    pub fn parse(content: &str) -> Result<Self, NormalizeError> {
        let raw: RawSchemeFile =
            toml::from_str(content).map_err(|e| NormalizeError::Toml(e.to_string()))?;
        let kind: SchemeKind = raw.kind.parse()?;

        let single_char = |spanned: &Spanned<String>, role: &str| -> Result<char, NormalizeError> {
            let value = spanned.get_ref();
            let line = line_of(content, spanned.span().start);
            let mut chars = value.chars();
            match (chars.next(), chars.next()) {
                (Some(ch), None) => Ok(ch),
                _ => Err(NormalizeError::BadRule {
                    line,
                    reason: format!("{role} {value:?} must be a single character"),
                }),
            }
        };

        let mut groups = Vec::with_capacity(raw.groups.len());
        for raw_group in &raw.groups {
            let mut members = BTreeSet::new();
            for member in &raw_group.members {
                let ch = single_char(member, "group member")?;
                let line = line_of(content, member.span().start);
                let family = family_of(ch).ok_or(NormalizeError::BadRule {
                    line,
                    reason: format!("group member {ch:?} is not an Ethiopic syllable"),
                })?;
                members.insert(family);
            }
            let target = match &raw_group.target {
                Some(spanned) => {
                    let ch = single_char(spanned, "group target")?;
                    let line = line_of(content, spanned.span().start);
                    Some(family_of(ch).ok_or(NormalizeError::BadRule {
                        line,
                        reason: format!("group target {ch:?} is not an Ethiopic syllable"),
                    })?)
                }
                None => None,
            };
            groups.push(FamilyGroup { members, target });
        }

        let mut char_rules: Vec<(char, char)> = Vec::with_capacity(raw.char_rules.len());
        for spanned in &raw.char_rules {
            let line = line_of(content, spanned.span().start);
            let entry = spanned.get_ref();
            let (lhs, rhs) = split_rule(entry).ok_or_else(|| NormalizeError::BadRule {
                line,
                reason: format!("{entry:?} is not of the form \"src -> dst\""),
            })?;
            let parse_side = |side: &str, role: &str| -> Result<char, NormalizeError> {
                let mut chars = side.chars();
                match (chars.next(), chars.next()) {
                    (Some(ch), None) => Ok(ch),
                    _ => Err(NormalizeError::BadRule {
                        line,
                        reason: format!("char rule {role} {side:?} must be a single character"),
                    }),
                }
            };
            let src = parse_side(lhs, "source")?;
            let dst = parse_side(rhs, "replacement")?;
            if src == dst {
                return Err(NormalizeError::BadRule {
                    line,
                    reason: format!("char rule {src:?} maps to itself"),
                });
            }
            if char_rules.iter().any(|&(existing, _)| existing == src) {
                return Err(NormalizeError::BadRule {
                    line,
                    reason: format!("duplicate char rule source {src:?}"),
                });
            }
            char_rules.push((src, dst));
        }

        let mut seq_rules: Vec<(String, String)> = Vec::with_capacity(raw.seq_rules.len());
        for spanned in &raw.seq_rules {
            let line = line_of(content, spanned.span().start);
            let entry = spanned.get_ref();
            let (lhs, rhs) = split_rule(entry).ok_or_else(|| NormalizeError::BadRule {
                line,
                reason: format!("{entry:?} is not of the form \"src -> dst\""),
            })?;
            if lhs.is_empty() || rhs.is_empty() {
                return Err(NormalizeError::BadRule {
                    line,
                    reason: "sequence rule sides must be non-empty".to_string(),
                });
            }
            if seq_rules.iter().any(|(existing, _)| existing == lhs) {
                return Err(NormalizeError::BadRule {
                    line,
                    reason: format!("duplicate sequence rule source {lhs:?}"),
                });
            }
            seq_rules.push((lhs.to_string(), rhs.to_string()));
        }

        Ok(SchemeFile {
            language: raw.language,
            kind,
            groups,
            char_rules,
            seq_rules,
        })
    }

    pub fn from_path(path: &Path) -> Result<Self, NormalizeError> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    /// The scheme file shipped with the crate for this kind and language,
    /// if one exists (see [`build_scheme`] for which combinations do).
    pub fn builtin(kind: SchemeKind, language: Language) -> Option<Self> {
        builtin_scheme_file(kind, language)
            .map(|content| Self::parse(content).expect("built-in scheme tables parse cleanly"))
    }

    /// Expand groups, lay file character rules over the expansion (the file
    /// wins when both define a rule for one source), and seal the table.
    pub fn compile(&self) -> Result<SchemeTable, NormalizeError> {
        let mut char_rules = expand_family_groups(&self.groups)?;
        for &(src, dst) in &self.char_rules {
            char_rules.insert(src, dst);
        }
        SchemeTable::new(&self.language, self.kind, char_rules, self.seq_rules.clone())
    }
}

fn builtin_scheme_file(kind: SchemeKind, language: Language) -> Option<&'static str> {
    match (kind, language) {
        (SchemeKind::HOnly, Language::Amharic) => {
            Some(include_str!("../data/schemes/amharic-h-only.toml"))
        }
        (SchemeKind::HOnly, Language::Tigrinya) => {
            Some(include_str!("../data/schemes/tigrinya-h-only.toml"))
        }
        (SchemeKind::Hsl, Language::Amharic) => {
            Some(include_str!("../data/schemes/amharic-hsl.toml"))
        }
        _ => None,
    }
}

/// Build a normalization table for a language.
///
/// `identity` is valid everywhere and ignores the table file's rules only in
/// the sense that the file, if given, must itself be an identity table.
/// `h-only` is defined for Amharic and Tigrinya, `hsl` for Amharic only.
/// When `corpus` is given (h-only only), group targets are re-selected by
/// family frequency over it, overriding targets in the table file.
pub fn build_scheme(
    kind: SchemeKind,
    language: Language,
    corpus: Option<&[String]>,
    table_file: Option<&Path>,
) -> Result<SchemeTable, NormalizeError> {
    let supported = match kind {
        SchemeKind::Identity => true,
        SchemeKind::HOnly => matches!(language, Language::Amharic | Language::Tigrinya),
        SchemeKind::Hsl => language == Language::Amharic,
    };
    if !supported {
        return Err(NormalizeError::UnsupportedScheme {
            kind,
            language: language.id().to_string(),
        });
    }
    if corpus.is_some() && kind != SchemeKind::HOnly {
        return Err(NormalizeError::CorpusNotApplicable { kind });
    }

    let mut file = match table_file {
        Some(path) => SchemeFile::from_path(path)?,
        None => match builtin_scheme_file(kind, language) {
            Some(content) => {
                SchemeFile::parse(content).expect("built-in scheme tables parse cleanly")
            }
            None => return Ok(SchemeTable::identity(language.id())),
        },
    };

    if file.kind != kind {
        return Err(NormalizeError::KindMismatch {
            file: file.kind,
            requested: kind,
        });
    }
    let file_language: Language = file.language.parse().map_err(|_| {
        NormalizeError::LanguageMismatch {
            file: file.language.clone(),
            requested: language.id().to_string(),
        }
    })?;
    if file_language != language {
        return Err(NormalizeError::LanguageMismatch {
            file: file.language.clone(),
            requested: language.id().to_string(),
        });
    }

    let mut warnings = Vec::new();
    if let Some(lines) = corpus {
        for group in &mut file.groups {
            group.target = None;
        }
        let selection = select_canonical_by_frequency(&file.groups, lines.iter())?;
        for &index in &selection.unobserved {
            let group = &selection.groups[index];
            warnings.push(format!(
                "group {{{}}} never occurs in the corpus; target defaults to {}",
                group_label(group),
                family_label(group.target.expect("selection fills targets")),
            ));
        }
        file.groups = selection.groups;
    }

    let mut table = file.compile()?;
    table.warnings = warnings;
    Ok(table)
}
