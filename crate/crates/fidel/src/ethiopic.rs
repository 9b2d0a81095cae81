//! Structural model of the Ge'ez script as encoded by Unicode.
//!
//! The main Ethiopic block arranges syllables in rows of 8 codepoints: one row
//! per base consonant ("family"), one slot per vowel form ("order"). Families
//! are numbered from U+1200, so `family * 8 + order` recovers the codepoint.
//! Supplement and extended blocks keep the same 8-slot row geometry relative
//! to U+1200 and are handled by the same arithmetic.

use std::fmt;

use thiserror::Error;

/// First codepoint of the Ethiopic block; origin of the family numbering.
pub const SCRIPT_BASE: u32 = 0x1200;

/// Last syllable codepoint of the main block (U+1200..=U+135A, with gaps).
const MAIN_SYLLABLE_END: u32 = 0x135A;

/// Reserved (unassigned) slots inside the main block's syllable range.
/// Mostly order-1/6/7 slots of the labiovelar rows. Mirrors the Unicode
/// code chart; cross-checked against the standard library's Unicode tables
/// in the test suite.
const MAIN_BLOCK_GAPS: [u32; 21] = [
    0x1249, 0x124E, 0x124F, 0x1257, 0x1259, 0x125E, 0x125F, 0x1289, 0x128E, 0x128F, 0x12B1,
    0x12B6, 0x12B7, 0x12BF, 0x12C1, 0x12C6, 0x12C7, 0x12D7, 0x1311, 0x1316, 0x1317,
];

/// Ethiopic Supplement, Extended, Extended-A, Extended-B blocks. Syllables in
/// these blocks are recognized but carry family indices past the main block.
const EXTENDED_BLOCKS: [(u32, u32); 4] = [
    (0x1380, 0x139F),
    (0x2D80, 0x2DDF),
    (0xAB00, 0xAB2F),
    (0x1E7E0, 0x1E7FF),
];

const PUNCT_START: u32 = 0x1360; // ፠ section mark .. ፨ paragraph separator
const PUNCT_END: u32 = 0x1368;
const DIGIT_START: u32 = 0x1369; // ፩ .. ፼
const DIGIT_END: u32 = 0x137C;

/// A decomposed Ethiopic syllable: base-consonant row and vowel slot.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Syllable {
    /// 0-based row index from U+1200 (one row per 8 codepoints).
    pub family: u32,
    /// Vowel slot within the row, 0..=7.
    pub order: u8,
}

impl Syllable {
    /// Recompose into the character. Inverse of [`decompose`].
    pub fn to_char(&self) -> Result<char, ComposeError> {
        compose(self.family, self.order)
    }
}

impl fmt::Display for Syllable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "family {} order {}", self.family, self.order)
    }
}

/// Errors from [`compose`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ComposeError {
    #[error("family {family} order {order} is outside the Ethiopic syllable ranges")]
    OutOfRange { family: u32, order: u8 },
    #[error("family {family} order {order} is a reserved (unassigned) slot")]
    Unassigned { family: u32, order: u8 },
}

/// Coarse character classes used by the text pipeline.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CharClass {
    /// An assigned Ethiopic syllable (any block).
    Syllable,
    /// One of the nine Ethiopic punctuation marks U+1360..=U+1368.
    EthiopicPunctuation,
    /// An Ethiopic numeral U+1369..=U+137C.
    EthiopicDigit,
    /// Everything else.
    Other,
}

fn in_extended_block(cp: u32) -> bool {
    EXTENDED_BLOCKS.iter().any(|&(lo, hi)| (lo..=hi).contains(&cp))
}

/// True for every assigned Ethiopic syllable codepoint.
pub fn is_syllable(ch: char) -> bool {
    let cp = ch as u32;
    if (SCRIPT_BASE..=MAIN_SYLLABLE_END).contains(&cp) {
        !MAIN_BLOCK_GAPS.contains(&cp)
    } else if in_extended_block(cp) {
        // Extended blocks contain only syllables (Lo), tonal marks (So), and
        // reserved slots; the alphabetic check separates syllables out.
        ch.is_alphabetic()
    } else {
        false
    }
}

/// Split a character into its consonant family and vowel order.
/// Returns `None` for anything that is not an assigned Ethiopic syllable.
pub fn decompose(ch: char) -> Option<Syllable> {
    if !is_syllable(ch) {
        return None;
    }
    let offset = ch as u32 - SCRIPT_BASE;
    Some(Syllable {
        family: offset / 8,
        order: (offset % 8) as u8,
    })
}

/// Rebuild the character at `family * 8 + order` from the script base.
pub fn compose(family: u32, order: u8) -> Result<char, ComposeError> {
    if order > 7 {
        return Err(ComposeError::OutOfRange { family, order });
    }
    let cp = SCRIPT_BASE + family * 8 + u32::from(order);
    let in_main_rows = cp < PUNCT_START; // rows U+1200..U+135F
    if !in_main_rows && !in_extended_block(cp) {
        return Err(ComposeError::OutOfRange { family, order });
    }
    match char::from_u32(cp) {
        Some(ch) if is_syllable(ch) => Ok(ch),
        _ => Err(ComposeError::Unassigned { family, order }),
    }
}

/// Classify a character. Total over all of Unicode; the four classes are
/// disjoint by construction.
pub fn classify(ch: char) -> CharClass {
    let cp = ch as u32;
    if is_syllable(ch) {
        CharClass::Syllable
    } else if (PUNCT_START..=PUNCT_END).contains(&cp) {
        CharClass::EthiopicPunctuation
    } else if (DIGIT_START..=DIGIT_END).contains(&cp) {
        CharClass::EthiopicDigit
    } else {
        CharClass::Other
    }
}

/// Family index of a character, if it is an assigned syllable.
pub fn family_of(ch: char) -> Option<u32> {
    decompose(ch).map(|s| s.family)
}

/// Iterator over every assigned syllable codepoint of the main block.
pub fn main_block_syllables() -> impl Iterator<Item = char> {
    (SCRIPT_BASE..=MAIN_SYLLABLE_END)
        .filter(|cp| !MAIN_BLOCK_GAPS.contains(cp))
        .map(|cp| char::from_u32(cp).expect("main block codepoints are valid scalars"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decompose_ha_base() {
        assert_eq!(decompose('ሀ'), Some(Syllable { family: 0, order: 0 }));
    }

    #[test]
    fn decompose_lu_second_slot_of_la_row() {
        let la = decompose('ለ').unwrap();
        assert_eq!(decompose('ሉ'), Some(Syllable { family: la.family, order: 1 }));
    }

    #[test]
    fn decompose_rejects_latin() {
        assert_eq!(decompose('a'), None);
    }

    #[test]
    fn decompose_rejects_ethiopic_punctuation_and_marks() {
        assert_eq!(decompose('።'), None);
        assert_eq!(decompose('\u{135D}'), None); // combining gemination mark
        assert_eq!(decompose('፩'), None);
    }

    #[test]
    fn compose_ha_base() {
        assert_eq!(compose(0, 0), Ok('ሀ'));
    }

    #[test]
    fn compose_reserved_labiovelar_slot() {
        // U+1249, order 1 of the ቈ row
        let qwa = decompose('ቈ').unwrap();
        assert_eq!(
            compose(qwa.family, 1),
            Err(ComposeError::Unassigned { family: qwa.family, order: 1 })
        );
    }

    #[test]
    fn compose_out_of_range() {
        assert!(matches!(compose(0, 8), Err(ComposeError::OutOfRange { .. })));
        // row 44 is the punctuation row, not a syllable row
        assert!(matches!(compose(44, 0), Err(ComposeError::OutOfRange { .. })));
        assert!(matches!(compose(1 << 20, 0), Err(ComposeError::OutOfRange { .. })));
    }

    #[test]
    fn roundtrip_main_block() {
        for ch in main_block_syllables() {
            let syl = decompose(ch).expect("main block syllable decomposes");
            assert_eq!(compose(syl.family, syl.order), Ok(ch));
        }
    }

    #[test]
    fn gap_table_matches_std_unicode_tables() {
        // Independent route: every assigned syllable in the main range is
        // alphabetic (Lo) and every gap is unassigned (not alphabetic).
        for cp in SCRIPT_BASE..=MAIN_SYLLABLE_END {
            let ch = char::from_u32(cp).unwrap();
            assert_eq!(
                is_syllable(ch),
                ch.is_alphabetic(),
                "disagreement at U+{cp:04X}"
            );
        }
    }

    #[test]
    fn classify_examples() {
        assert_eq!(classify('።'), CharClass::EthiopicPunctuation);
        assert_eq!(classify('፡'), CharClass::EthiopicPunctuation);
        assert_eq!(classify('ሀ'), CharClass::Syllable);
        assert_eq!(classify('.'), CharClass::Other);
        assert_eq!(classify('፱'), CharClass::EthiopicDigit);
        assert_eq!(classify(' '), CharClass::Other);
    }

    #[test]
    fn classify_is_a_partition_over_the_script_blocks() {
        // every codepoint in the main block lands in exactly one class; the
        // enum makes disjointness structural, so just check totality at the
        // interesting boundaries.
        for cp in 0x1200..=0x13FF {
            if let Some(ch) = char::from_u32(cp) {
                let _ = classify(ch);
            }
        }
    }

    #[test]
    fn supplement_block_classified_as_syllable() {
        // U+1380 SEBATBEIT MWA is a syllable; U+1390 tonal mark is not.
        assert_eq!(classify('\u{1380}'), CharClass::Syllable);
        assert_eq!(classify('\u{1390}'), CharClass::Other);
        let syl = decompose('\u{1380}').unwrap();
        assert_eq!(syl.family, 48);
        assert_eq!(compose(syl.family, syl.order), Ok('\u{1380}'));
    }
}
