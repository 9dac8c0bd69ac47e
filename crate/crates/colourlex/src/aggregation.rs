//! The aggregation pipeline: discard gold-question failures, enforce the
//! minimum-annotation threshold, build the lexicon, and analyse ambiguous
//! words whose senses diverge in colour.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use num::rational::Ratio;
use num::Zero;
use serde::Serialize;

use crate::colour::Colour;
use crate::error::{Error, Result};
use crate::lexicon::{tally_votes, AnnotationRecord, LexiconEntry, TermSense};

/// Counters describing what the quality gate kept and dropped.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GateReport {
    pub total_records: usize,
    pub discarded_q1: usize,
    #[serde(serialize_with = "crate::report::serialize_ratio")]
    pub discard_rate: Ratio<i64>,
    pub terms_dropped_low_support: usize,
    #[serde(serialize_with = "crate::report::serialize_ratio")]
    pub mean_valid_annotations_per_kept_term: Ratio<i64>,
}

impl GateReport {
    fn zeroed() -> GateReport {
        GateReport {
            total_records: 0,
            discarded_q1: 0,
            discard_rate: Ratio::zero(),
            terms_dropped_low_support: 0,
            mean_valid_annotations_per_kept_term: Ratio::zero(),
        }
    }
}

/// Drop records whose word-choice answer misses the gold key.
pub fn filter_valid(
    records: &[AnnotationRecord],
    key: &BTreeMap<TermSense, String>,
) -> Result<(Vec<AnnotationRecord>, GateReport)> {
    let mut valid = Vec::with_capacity(records.len());
    let mut discarded = 0usize;
    for record in records {
        let correct = key
            .get(&record.term)
            .ok_or_else(|| Error::NoAnswerKey(record.term.to_string()))?;
        if record.q1_choice == *correct {
            valid.push(record.clone());
        } else {
            discarded += 1;
        }
    }
    let mut report = GateReport::zeroed();
    report.total_records = records.len();
    report.discarded_q1 = discarded;
    if !records.is_empty() {
        report.discard_rate = Ratio::new(discarded as i64, records.len() as i64);
    }
    Ok((valid, report))
}

/// Group valid records by term, in (word, synonym) order.
pub fn group_by_term(
    records: &[AnnotationRecord],
) -> BTreeMap<TermSense, Vec<AnnotationRecord>> {
    let mut groups: BTreeMap<TermSense, Vec<AnnotationRecord>> = BTreeMap::new();
    for record in records {
        groups.entry(record.term.clone()).or_default().push(record.clone());
    }
    groups
}

/// Majority-vote the valid records into lexicon entries, dropping terms with
/// fewer than `min_annotations` valid votes.
pub fn build_lexicon(
    valid: &[AnnotationRecord],
    min_annotations: usize,
) -> Result<(Vec<LexiconEntry>, GateReport)> {
    if min_annotations < 1 {
        return Err(Error::InvalidArgument(
            "min_annotations must be at least 1".into(),
        ));
    }
    let mut report = GateReport::zeroed();
    report.total_records = valid.len();
    let mut entries = Vec::new();
    let mut kept_votes = 0usize;
    for (_, group) in group_by_term(valid) {
        if group.len() < min_annotations {
            report.terms_dropped_low_support += 1;
            continue;
        }
        kept_votes += group.len();
        entries.push(LexiconEntry::from_tally(&tally_votes(&group)?));
    }
    if !entries.is_empty() {
        report.mean_valid_annotations_per_kept_term =
            Ratio::new(kept_votes as i64, entries.len() as i64);
    }
    Ok((entries, report))
}

/// Why a term was left out of the lexicon.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RejectReason {
    Q1FailedAll,
    LowSupport,
}

impl RejectReason {
    pub fn name(self) -> &'static str {
        match self {
            RejectReason::Q1FailedAll => "q1_failed_all",
            RejectReason::LowSupport => "low_support",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RejectedTerm {
    pub term: TermSense,
    pub reason: RejectReason,
}

/// Gate and aggregate in one pass, also producing the reject audit list.
pub struct AggregateOutcome {
    pub lexicon: Vec<LexiconEntry>,
    pub rejects: Vec<RejectedTerm>,
    pub report: GateReport,
    /// Valid records grouped per kept term, for downstream agreement stats.
    pub valid: Vec<AnnotationRecord>,
}

pub fn aggregate(
    records: &[AnnotationRecord],
    key: &BTreeMap<TermSense, String>,
    min_annotations: usize,
) -> Result<AggregateOutcome> {
    let (valid, q1_report) = filter_valid(records, key)?;
    let (lexicon, support_report) = build_lexicon(&valid, min_annotations)?;

    let kept: BTreeSet<&TermSense> = lexicon.iter().map(LexiconEntry::term).collect();
    let valid_terms: BTreeSet<&TermSense> = valid.iter().map(|r| &r.term).collect();
    let mut rejects = Vec::new();
    let seen_terms: BTreeSet<&TermSense> = records.iter().map(|r| &r.term).collect();
    for term in seen_terms {
        if kept.contains(term) {
            continue;
        }
        let reason = if valid_terms.contains(term) {
            RejectReason::LowSupport
        } else {
            RejectReason::Q1FailedAll
        };
        rejects.push(RejectedTerm {
            term: term.clone(),
            reason,
        });
    }

    let report = GateReport {
        total_records: q1_report.total_records,
        discarded_q1: q1_report.discarded_q1,
        discard_rate: q1_report.discard_rate,
        terms_dropped_low_support: support_report.terms_dropped_low_support,
        mean_valid_annotations_per_kept_term: support_report
            .mean_valid_annotations_per_kept_term,
    };
    Ok(AggregateOutcome {
        lexicon,
        rejects,
        report,
        valid,
    })
}

/// Write the reject audit file: `word<TAB>synonym<TAB>reason`.
pub fn write_rejects(rejects: &[RejectedTerm], path: &Path) -> Result<()> {
    let mut lines: Vec<String> = rejects
        .iter()
        .map(|r| {
            format!(
                "{}\t{}\t{}",
                r.term.word(),
                r.term.synonym(),
                r.reason.name()
            )
        })
        .collect();
    lines.sort();
    let mut text = lines.join("\n");
    if !lines.is_empty() {
        text.push('\n');
    }
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

/// One ambiguous word whose senses disagree in colour after tie-breaking.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DivergentWord {
    pub word: String,
    /// (synonym, tie-broken colour) per sense, in synonym order.
    pub senses: Vec<(String, Colour)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SenseDivergence {
    /// Words with two or more senses in the lexicon.
    pub n_ambiguous: usize,
    /// Ambiguous words whose senses map to two or more distinct colours.
    pub n_divergent: usize,
    pub divergent: Vec<DivergentWord>,
}

/// Find ambiguous words whose senses carry different colours. Entries are
/// reduced to single colours with the seed before comparison.
pub fn sense_divergence(lexicon: &[LexiconEntry], seed: u64) -> SenseDivergence {
    let mut by_word: BTreeMap<&str, Vec<&LexiconEntry>> = BTreeMap::new();
    for entry in lexicon {
        by_word.entry(entry.term().word()).or_default().push(entry);
    }
    let mut n_ambiguous = 0;
    let mut divergent = Vec::new();
    for (word, entries) in by_word {
        if entries.len() < 2 {
            continue;
        }
        n_ambiguous += 1;
        let senses: Vec<(String, Colour)> = entries
            .iter()
            .map(|e| (e.term().synonym().to_string(), e.tie_broken(seed)))
            .collect();
        let distinct: BTreeSet<Colour> = senses.iter().map(|(_, c)| *c).collect();
        if distinct.len() >= 2 {
            divergent.push(DivergentWord {
                word: word.to_string(),
                senses,
            });
        }
    }
    SenseDivergence {
        n_ambiguous,
        n_divergent: divergent.len(),
        divergent,
    }
}
