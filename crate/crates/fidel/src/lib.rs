//! Text-processing toolkit for languages written in the Ge'ez (Ethiopic) script.
//!
//! The crate models the script's family/order structure, builds and applies
//! homophone-normalization schemes, computes corpus-level BLEU and ChrF with a
//! punctuation-stripping convention, and provides parallel-corpus filtering,
//! splitting, and coverage diagnostics for machine-translation evaluation.

pub mod alphabet;
pub mod corpus;
pub mod ethiopic;
pub mod metrics;
pub mod normalize;
pub mod score;

pub use alphabet::{foreign_chars, Language, LanguageAlphabet};
pub use ethiopic::{classify, compose, decompose, CharClass, Syllable};
pub use normalize::{build_scheme, SchemeKind, SchemeTable};
pub use score::{compare_report, score_run, ReportFormat, ScoreComparison, ScoreOptions};
