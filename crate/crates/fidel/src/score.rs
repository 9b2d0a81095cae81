//! Post-inference normalization scoring: per-scheme BLEU/ChrF comparison.
//!
//! A scoring run strips punctuation once, then for every scheme normalizes
//! hypothesis and reference (both sides by default), tokenizes, and computes
//! corpus BLEU and ChrF. The identity scheme is always present as the
//! baseline and all deltas are against it. Reports carry the full parameter
//! block, scheme content hashes, and a deterministic run id so numbers can
//! be audited and reproduced.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::metrics::{
    corpus_bleu, corpus_chrf, strip_punctuation, BleuReport, ChrfParams, ChrfReport,
    MetricsError, Smoothing,
};
use crate::normalize::SchemeTable;

/// Which side of each pair a scheme rewrites. `Both` is the evaluation
/// convention; the single-sided variants exist for diagnosis only.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NormalizeSide {
    #[default]
    Both,
    Hyp,
    Ref,
}

impl fmt::Display for NormalizeSide {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NormalizeSide::Both => "both",
            NormalizeSide::Hyp => "hyp",
            NormalizeSide::Ref => "ref",
        })
    }
}

impl FromStr for NormalizeSide {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "both" => Ok(NormalizeSide::Both),
            "hyp" | "hypothesis" => Ok(NormalizeSide::Hyp),
            "ref" | "reference" => Ok(NormalizeSide::Ref),
            other => Err(format!("unknown side {other:?} (expected both, hyp, or ref)")),
        }
    }
}

/// Errors from scoring runs.
#[derive(Debug, Error)]
pub enum ScoreError {
    #[error("line count mismatch: {hyps} hypothesis line(s), {refs} reference line(s)")]
    LineCountMismatch { hyps: usize, refs: usize },
    #[error("scheme {scheme} failed validation; refusing to score with it")]
    InvalidScheme { scheme: String },
    #[error(transparent)]
    Metrics(#[from] MetricsError),
}

/// Scoring configuration.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ScoreOptions {
    pub smoothing: Smoothing,
    pub chrf: ChrfParams,
    pub side: NormalizeSide,
}

/// Identity of one scheme in the parameter block.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SchemeDescriptor {
    pub scheme: String,
    pub language: String,
    pub content_hash: String,
}

/// The audited parameters of a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreParams {
    pub smoothing: Smoothing,
    pub chrf_beta: f64,
    pub chrf_char_order: usize,
    pub chrf_word_order: usize,
    pub normalize_side: NormalizeSide,
    pub schemes: Vec<SchemeDescriptor>,
}

/// One scheme's scores and deltas against the identity baseline.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SchemeScore {
    pub scheme: String,
    pub bleu: BleuReport,
    pub chrf: ChrfReport,
    pub bleu_delta: f64,
    pub chrf_delta: f64,
}

/// A full per-scheme comparison; the identity entry is always first.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreComparison {
    pub run_id: String,
    pub params: ScoreParams,
    pub entries: Vec<SchemeScore>,
}

fn run_id(hyps: &[String], refs: &[String], params: &ScoreParams) -> String {
    let mut hasher = Sha256::new();
    hasher.update(params.smoothing.to_string().as_bytes());
    hasher.update([0]);
    hasher.update(params.chrf_beta.to_le_bytes());
    hasher.update(params.chrf_char_order.to_le_bytes());
    hasher.update(params.chrf_word_order.to_le_bytes());
    hasher.update(params.normalize_side.to_string().as_bytes());
    hasher.update([0]);
    for descriptor in &params.schemes {
        hasher.update(descriptor.content_hash.as_bytes());
        hasher.update([1]);
    }
    for line in hyps {
        hasher.update(line.as_bytes());
        hasher.update([2]);
    }
    for line in refs {
        hasher.update(line.as_bytes());
        hasher.update([3]);
    }
    hex::encode(hasher.finalize())
}

/// Score a run under every scheme. The pipeline per scheme is
/// strip_punctuation, normalize (per `options.side`), tokenize inside the
/// metrics, then corpus BLEU and ChrF.
///
/// An identity baseline is always computed first; identity tables in
/// `schemes` are skipped rather than scored twice.
pub fn score_run(
    hyps: &[String],
    refs: &[String],
    schemes: &[SchemeTable],
    options: ScoreOptions,
) -> Result<ScoreComparison, ScoreError> {
    if hyps.len() != refs.len() {
        return Err(ScoreError::LineCountMismatch {
            hyps: hyps.len(),
            refs: refs.len(),
        });
    }
    for scheme in schemes {
        if !scheme.validate().is_empty() {
            return Err(ScoreError::InvalidScheme {
                scheme: scheme.kind().to_string(),
            });
        }
    }

    let language = schemes
        .first()
        .map(|s| s.language().to_string())
        .unwrap_or_else(|| "any".to_string());
    let baseline_table = SchemeTable::identity(&language);
    let mut tables: Vec<&SchemeTable> = vec![&baseline_table];
    tables.extend(schemes.iter().filter(|s| !s.char_rules().is_empty() || !s.seq_rules().is_empty()));

    let stripped: Vec<(String, String)> = hyps
        .iter()
        .zip(refs)
        .map(|(h, r)| (strip_punctuation(h), strip_punctuation(r)))
        .collect();

    let mut entries = Vec::with_capacity(tables.len());
    let mut descriptors = Vec::with_capacity(tables.len());
    for table in &tables {
        descriptors.push(SchemeDescriptor {
            scheme: table.kind().to_string(),
            language: table.language().to_string(),
            content_hash: table.content_hash(),
        });
        let pairs: Vec<(String, String)> = stripped
            .iter()
            .map(|(h, r)| match options.side {
                NormalizeSide::Both => (table.apply(h), table.apply(r)),
                NormalizeSide::Hyp => (table.apply(h), r.clone()),
                NormalizeSide::Ref => (h.clone(), table.apply(r)),
            })
            .collect();
        let bleu = corpus_bleu(&pairs, options.smoothing)?;
        let chrf = corpus_chrf(&pairs, options.chrf)?;
        entries.push(SchemeScore {
            scheme: table.kind().to_string(),
            bleu,
            chrf,
            bleu_delta: 0.0,
            chrf_delta: 0.0,
        });
    }

    let base_bleu = entries[0].bleu.score;
    let base_chrf = entries[0].chrf.score;
    for entry in &mut entries {
        entry.bleu_delta = entry.bleu.score - base_bleu;
        entry.chrf_delta = entry.chrf.score - base_chrf;
    }

    let params = ScoreParams {
        smoothing: options.smoothing,
        chrf_beta: options.chrf.beta,
        chrf_char_order: options.chrf.char_order,
        chrf_word_order: options.chrf.word_order,
        normalize_side: options.side,
        schemes: descriptors,
    };
    Ok(ScoreComparison {
        run_id: run_id(hyps, refs, &params),
        params,
        entries,
    })
}

/// Output encodings for [`compare_report`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ReportFormat {
    #[default]
    Table,
    Csv,
    Json,
}

impl FromStr for ReportFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "table" | "table-text" | "text" => Ok(ReportFormat::Table),
            "csv" => Ok(ReportFormat::Csv),
            "json" | "structured" => Ok(ReportFormat::Json),
            other => Err(format!("unknown format {other:?} (expected table, csv, or json)")),
        }
    }
}

/// Render a comparison. Row order is bit-stable: identity first, then the
/// schemes in the order they were given.
pub fn compare_report(comparison: &ScoreComparison, format: ReportFormat) -> String {
    match format {
        ReportFormat::Json => {
            serde_json::to_string_pretty(comparison).expect("comparison serializes")
        }
        ReportFormat::Csv => {
            let mut out = String::from(
                "scheme,bleu,bleu_delta,chrf,chrf_delta,brevity_penalty,hyp_len,ref_len,chrf_precision,chrf_recall\n",
            );
            for entry in &comparison.entries {
                out.push_str(&format!(
                    "{},{},{},{},{},{},{},{},{},{}\n",
                    entry.scheme,
                    entry.bleu.score,
                    entry.bleu_delta,
                    entry.chrf.score,
                    entry.chrf_delta,
                    entry.bleu.brevity_penalty,
                    entry.bleu.hyp_len,
                    entry.bleu.ref_len,
                    entry.chrf.precision,
                    entry.chrf.recall,
                ));
            }
            out
        }
        ReportFormat::Table => {
            let scheme_width = comparison
                .entries
                .iter()
                .map(|e| e.scheme.len())
                .chain(["scheme".len()])
                .max()
                .unwrap_or(6);
            let mut out = format!(
                "run {}\nsmoothing={} chrf(beta={}, char_order={}, word_order={}) side={}\n",
                &comparison.run_id[..16.min(comparison.run_id.len())],
                comparison.params.smoothing,
                comparison.params.chrf_beta,
                comparison.params.chrf_char_order,
                comparison.params.chrf_word_order,
                comparison.params.normalize_side,
            );
            out.push_str(&format!(
                "{:<scheme_width$}  {:>9}  {:>9}  {:>9}  {:>9}\n",
                "scheme", "bleu", "delta", "chrf", "delta"
            ));
            for entry in &comparison.entries {
                out.push_str(&format!(
                    "{:<scheme_width$}  {:>9.4}  {:>+9.4}  {:>9.4}  {:>+9.4}\n",
                    entry.scheme,
                    entry.bleu.score,
                    entry.bleu_delta,
                    entry.chrf.score,
                    entry.chrf_delta,
                ));
            }
            out
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::Language;
    use crate::normalize::{build_scheme, SchemeKind};

    fn lines(items: &[&str]) -> Vec<String> {
        items.iter().map(|s| s.to_string()).collect()
    }

    fn amharic_schemes() -> Vec<SchemeTable> {
        vec![
            build_scheme(SchemeKind::HOnly, Language::Amharic, None, None).unwrap(),
            build_scheme(SchemeKind::Hsl, Language::Amharic, None, None).unwrap(),
        ]
    }

    #[test]
    fn identical_texts_score_100_everywhere() {
        // four tokens per line so every BLEU order has mass
        let text = lines(&["ሰላም ለዓለም ነው ዛሬ።", "ቋንቋ ኃይል ነው ሁሌ።"]);
        let comparison =
            score_run(&text, &text, &amharic_schemes(), ScoreOptions::default()).unwrap();
        assert_eq!(comparison.entries.len(), 3);
        assert_eq!(comparison.entries[0].scheme, "identity");
        for entry in &comparison.entries {
            assert_eq!(entry.bleu.score, 100.0);
            assert_eq!(entry.chrf.score, 100.0);
            assert_eq!(entry.bleu_delta, 0.0);
            assert_eq!(entry.chrf_delta, 0.0);
        }
    }

    #[test]
    fn homophone_swaps_recover_under_h_only() {
        // hypothesis and reference differ only in same-order homophone
        // spellings (ዓ/ኣ and አ/ዐ), which h-only merges family-wise
        let hyps = lines(&["ዓይን ውሃ ጠጣ ዛሬ", "አለም ሰፊ ናት ጣም"]);
        let refs = lines(&["ኣይን ውሃ ጠጣ ዛሬ", "ዐለም ሰፊ ናት ጣም"]);
        let options = ScoreOptions {
            smoothing: Smoothing::None,
            ..ScoreOptions::default()
        };
        let comparison = score_run(&hyps, &refs, &amharic_schemes(), options).unwrap();
        let identity = &comparison.entries[0];
        let h_only = &comparison.entries[1];
        assert!(identity.bleu.score < 100.0);
        assert_eq!(h_only.bleu.score, 100.0);
        assert!(h_only.bleu_delta > 0.0);
        assert!(h_only.chrf_delta > 0.0);
    }

    #[test]
    fn single_sided_normalization_is_diagnostic_only() {
        let hyps = lines(&["ሰላም ውሃ ጠጣ ዛሬ"]);
        let refs = lines(&["ሠላም ውሃ ጠጣ ዛሬ"]);
        let scheme = vec![build_scheme(SchemeKind::HOnly, Language::Amharic, None, None).unwrap()];
        let both = score_run(&hyps, &refs, &scheme, ScoreOptions::default()).unwrap();
        let hyp_only = score_run(
            &hyps,
            &refs,
            &scheme,
            ScoreOptions {
                side: NormalizeSide::Hyp,
                ..ScoreOptions::default()
            },
        )
        .unwrap();
        assert_eq!(both.entries[1].bleu.score, 100.0);
        // the reference spelling ሠላም is only rewritten when the reference
        // side is normalized, so hypothesis-only normalization mismatches
        assert!(hyp_only.entries[1].bleu.score < 100.0);
        assert_ne!(both.run_id, hyp_only.run_id);
        assert_eq!(both.params.normalize_side, NormalizeSide::Both);
        assert_eq!(hyp_only.params.normalize_side, NormalizeSide::Hyp);
    }

    #[test]
    fn mismatched_line_counts_are_rejected() {
        let hyps = lines(&["a", "b"]);
        let refs = lines(&["a"]);
        assert!(matches!(
            score_run(&hyps, &refs, &[], ScoreOptions::default()),
            Err(ScoreError::LineCountMismatch { hyps: 2, refs: 1 })
        ));
    }

    #[test]
    fn runs_are_deterministic() {
        let hyps = lines(&["ዓይን ውሃ ጠጣ"]);
        let refs = lines(&["ኣይን ውሃ ጠጣ"]);
        let a = score_run(&hyps, &refs, &amharic_schemes(), ScoreOptions::default()).unwrap();
        let b = score_run(&hyps, &refs, &amharic_schemes(), ScoreOptions::default()).unwrap();
        assert_eq!(a, b);
        assert_eq!(
            compare_report(&a, ReportFormat::Table),
            compare_report(&b, ReportFormat::Table)
        );
        let c = score_run(&refs, &hyps, &amharic_schemes(), ScoreOptions::default()).unwrap();
        assert_ne!(a.run_id, c.run_id);
    }

    #[test]
    fn json_report_round_trips() {
        let hyps = lines(&["ዓይን ውሃ", "ሰላም ለሁሉ"]);
        let refs = lines(&["ኣይን ውሃ", "ሰላም ለሁሉ"]);
        let comparison =
            score_run(&hyps, &refs, &amharic_schemes(), ScoreOptions::default()).unwrap();
        let json = compare_report(&comparison, ReportFormat::Json);
        let parsed: ScoreComparison = serde_json::from_str(&json).unwrap();
        assert_eq!(parsed, comparison);
    }

    #[test]
    fn csv_report_shape() {
        let hyps = lines(&["ዓይን"]);
        let refs = lines(&["ኣይን"]);
        let comparison =
            score_run(&hyps, &refs, &amharic_schemes(), ScoreOptions::default()).unwrap();
        let csv = compare_report(&comparison, ReportFormat::Csv);
        let rows: Vec<&str> = csv.trim_end().lines().collect();
        assert_eq!(rows.len(), 1 + comparison.entries.len());
        assert!(rows[0].starts_with("scheme,bleu,bleu_delta"));
        assert!(rows[1].starts_with("identity,"));
    }

    #[test]
    fn identity_tables_in_input_are_not_scored_twice() {
        let hyps = lines(&["ሀለ"]);
        let refs = lines(&["ሀለ"]);
        let schemes = vec![
            SchemeTable::identity("amharic"),
            build_scheme(SchemeKind::HOnly, Language::Amharic, None, None).unwrap(),
        ];
        let comparison = score_run(&hyps, &refs, &schemes, ScoreOptions::default()).unwrap();
        let names: Vec<&str> = comparison.entries.iter().map(|e| e.scheme.as_str()).collect();
        assert_eq!(names, vec!["identity", "h-only"]);
    }
}
