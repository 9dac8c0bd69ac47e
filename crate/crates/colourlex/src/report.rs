//! Consolidated JSON report and the table TSV mirrors.

use std::collections::BTreeMap;
use std::path::Path;

use num::rational::Ratio;
use num::ToPrimitive;
use serde::{Serialize, Serializer};

use crate::aggregation::SenseDivergence;
use crate::agreement::{ColourDistribution, MajorityHistogram};
use crate::category::CategoryCensus;
use crate::colour::Colour;
use crate::emotion::EmotionSignature;
use crate::error::{Error, Result};
use crate::ratio::{decimal1, to_f64};

pub(crate) fn serialize_ratio<S: Serializer>(r: &Ratio<i64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_f64(to_f64(*r))
}

#[derive(Debug, Clone, Serialize)]
pub struct ChanceBaseline {
    pub n_annotators: usize,
    pub n_colours: usize,
    /// Exact probability as "numerator/denominator".
    pub exact: String,
    pub value: f64,
}

impl ChanceBaseline {
    pub fn new(n_annotators: usize, n_colours: usize, exact: &num::BigRational) -> ChanceBaseline {
        ChanceBaseline {
            n_annotators,
            n_colours,
            exact: format!("{}/{}", exact.numer(), exact.denom()),
            value: exact.to_f64().unwrap_or(f64::NAN),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BkOrderSection {
    pub ordering: Vec<Colour>,
    pub tau: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct HistogramSection {
    pub share: BTreeMap<usize, f64>,
    pub cumulative_ge2: f64,
    pub cumulative_ge3: f64,
}

impl HistogramSection {
    pub fn from_histogram(h: &MajorityHistogram) -> HistogramSection {
        HistogramSection {
            share: h.share().iter().map(|(&s, &p)| (s, to_f64(p))).collect(),
            cumulative_ge2: to_f64(h.cumulative_ge2()),
            cumulative_ge3: to_f64(h.cumulative_ge3()),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct AmbiguitySection {
    pub n_ambiguous: usize,
    pub n_divergent: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct CorrelationSection {
    pub n: usize,
    pub pearson: Option<f64>,
    pub spearman: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SignatureSection {
    pub label: String,
    pub n_terms: usize,
    pub n_uncovered: usize,
    pub top2: [Colour; 2],
    pub percentages: BTreeMap<Colour, f64>,
}

impl SignatureSection {
    pub fn from_signature(s: &EmotionSignature) -> SignatureSection {
        SignatureSection {
            label: s.label.name().to_string(),
            n_terms: s.n_terms,
            n_uncovered: s.n_uncovered,
            top2: [s.top2.0, s.top2.1],
            percentages: s.percentages.iter().map(|(&c, &p)| (c, to_f64(p))).collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CategoriesSection {
    #[serde(flatten)]
    pub census: CategoryCensus,
    pub strong_threshold: f64,
}

/// The consolidated analysis report. Sections without inputs are omitted.
#[derive(Debug, Clone, Default, Serialize)]
pub struct AnalysisReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gate: Option<serde_json::Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub overall: Option<BTreeMap<Colour, f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub voted: Option<BTreeMap<Colour, f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub majority_histogram: Option<HistogramSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub chance_baseline: Option<ChanceBaseline>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bk_tau: Option<BkOrderSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ambiguity: Option<AmbiguitySection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub categories: Option<CategoriesSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub imageability_correlation: Option<CorrelationSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub emotions: Option<Vec<SignatureSection>>,
}

pub fn distribution_map(dist: &ColourDistribution) -> BTreeMap<Colour, f64> {
    dist.percentages().iter().map(|(&c, &p)| (c, to_f64(p))).collect()
}

pub fn write_report(report: &AnalysisReport, path: &Path) -> Result<()> {
    let mut text = serde_json::to_string_pretty(report)
        .map_err(|e| Error::InvalidArgument(format!("report serialization failed: {e}")))?;
    text.push('\n');
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

fn write_text(path: &Path, lines: &[String]) -> Result<()> {
    let mut text = lines.join("\n");
    text.push('\n');
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

fn colour_header(first: &str) -> String {
    let names: Vec<&str> = Colour::ALL.iter().map(|c| c.name()).collect();
    format!("{first}\t{}", names.join("\t"))
}

/// Mirror of the per-colour percentage table: one row per available
/// distribution, one decimal per cell.
pub fn write_distribution_table(
    overall: Option<&ColourDistribution>,
    voted: Option<&ColourDistribution>,
    path: &Path,
) -> Result<()> {
    let mut lines = vec![colour_header("row")];
    for (name, dist) in [("overall", overall), ("voted", voted)] {
        if let Some(dist) = dist {
            let cells: Vec<String> = Colour::ALL
                .iter()
                .map(|&c| decimal1(dist.percentage(c)))
                .collect();
            lines.push(format!("{name}\t{}", cells.join("\t")));
        }
    }
    write_text(path, &lines)
}

/// Mirror of the majority-class table: share per class size plus the
/// cumulative >=2 and >=3 columns.
pub fn write_histogram_table(histogram: &MajorityHistogram, path: &Path) -> Result<()> {
    let sizes: Vec<usize> = histogram.share().keys().copied().collect();
    let mut header: Vec<String> = sizes.iter().map(|s| s.to_string()).collect();
    header.push(">=2".into());
    header.push(">=3".into());
    let mut cells: Vec<String> = sizes
        .iter()
        .map(|&s| decimal1(histogram.share_of(s)))
        .collect();
    cells.push(decimal1(histogram.cumulative_ge2()));
    cells.push(decimal1(histogram.cumulative_ge3()));
    write_text(path, &[header.join("\t"), cells.join("\t")])
}

/// Emotion signature table in label order; the two leading colours per row
/// are starred.
pub fn write_signature_table(signatures: &[EmotionSignature], path: &Path) -> Result<()> {
    let mut lines = vec![format!("{}\tn_terms", colour_header("label"))];
    for s in signatures {
        let cells: Vec<String> = Colour::ALL
            .iter()
            .map(|&c| {
                let value = decimal1(s.percentages[&c]);
                if c == s.top2.0 || c == s.top2.1 {
                    format!("*{value}")
                } else {
                    value
                }
            })
            .collect();
        lines.push(format!("{}\t{}\t{}", s.label.name(), cells.join("\t"), s.n_terms));
    }
    write_text(path, &lines)
}

/// Category census counts as a one-row table.
pub fn write_census_table(census: &CategoryCensus, threshold: Ratio<i64>, path: &Path) -> Result<()> {
    write_text(
        path,
        &[
            "n_categories\tn_eligible\tn_at_floor\tn_above_chance\tn_strong\tstrong_threshold"
                .to_string(),
            format!(
                "{}\t{}\t{}\t{}\t{}\t{}",
                census.n_categories,
                census.n_eligible,
                census.n_at_floor,
                census.n_above_chance,
                census.n_strong,
                crate::ratio::decimal4(threshold)
            ),
        ],
    )
}

/// Divergent ambiguous words, one row per sense.
pub fn write_divergence_table(divergence: &SenseDivergence, path: &Path) -> Result<()> {
    let mut lines = vec!["word\tsynonym\tcolour".to_string()];
    for word in &divergence.divergent {
        for (synonym, colour) in &word.senses {
            lines.push(format!("{}\t{}\t{}", word.word, synonym, colour.name()));
        }
    }
    write_text(path, &lines)
}
