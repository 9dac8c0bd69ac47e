//! Colour signatures of emotion and polarity word sets: join the emotion
//! lexicon against the colour lexicon and report the colour distribution per
//! label.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num::rational::Ratio;
use serde::Serialize;

use crate::colour::Colour;
use crate::error::{Error, Result};
use crate::lexicon::{modal_colour, LexiconEntry};

/// Eight basic emotions plus the two polarities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EmotionLabel {
    Anger,
    Anticipation,
    Disgust,
    Fear,
    Joy,
    Sadness,
    Surprise,
    Trust,
    Negative,
    Positive,
}

impl EmotionLabel {
    /// Fixed reporting order: emotions alphabetically, then the polarities.
    pub const ALL: [EmotionLabel; 10] = [
        EmotionLabel::Anger,
        EmotionLabel::Anticipation,
        EmotionLabel::Disgust,
        EmotionLabel::Fear,
        EmotionLabel::Joy,
        EmotionLabel::Sadness,
        EmotionLabel::Surprise,
        EmotionLabel::Trust,
        EmotionLabel::Negative,
        EmotionLabel::Positive,
    ];

    pub fn name(self) -> &'static str {
        match self {
            EmotionLabel::Anger => "anger",
            EmotionLabel::Anticipation => "anticipation",
            EmotionLabel::Disgust => "disgust",
            EmotionLabel::Fear => "fear",
            EmotionLabel::Joy => "joy",
            EmotionLabel::Sadness => "sadness",
            EmotionLabel::Surprise => "surprise",
            EmotionLabel::Trust => "trust",
            EmotionLabel::Negative => "negative",
            EmotionLabel::Positive => "positive",
        }
    }

    pub fn parse(token: &str) -> Result<EmotionLabel> {
        let lower = token.trim().to_lowercase();
        EmotionLabel::ALL
            .into_iter()
            .find(|label| label.name() == lower)
            .ok_or_else(|| Error::UnknownLabel(token.to_string()))
    }
}

impl fmt::Display for EmotionLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One `word<TAB>label<TAB>flag` row of the emotion lexicon.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmotionAssociation {
    pub word: String,
    pub label: EmotionLabel,
    pub flagged: bool,
}

/// What counts once in a signature: each lexicon sense entry, or each word.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JoinUnit {
    Sense,
    Word,
}

impl JoinUnit {
    pub fn parse(token: &str) -> Result<JoinUnit> {
        match token.trim().to_lowercase().as_str() {
            "sense" => Ok(JoinUnit::Sense),
            "word" => Ok(JoinUnit::Word),
            other => Err(Error::InvalidArgument(format!(
                "join unit must be 'sense' or 'word', got '{other}'"
            ))),
        }
    }
}

/// Colour distribution over the terms carrying one emotion or polarity label.
#[derive(Debug, Clone)]
pub struct EmotionSignature {
    pub label: EmotionLabel,
    pub n_terms: usize,
    /// Labeled words absent from the colour lexicon (coverage loss).
    pub n_uncovered: usize,
    pub percentages: BTreeMap<Colour, Ratio<i64>>,
    pub top2: (Colour, Colour),
}

fn lexicon_by_word<'a>(lexicon: &'a [LexiconEntry]) -> BTreeMap<&'a str, Vec<&'a LexiconEntry>> {
    let mut index: BTreeMap<&str, Vec<&LexiconEntry>> = BTreeMap::new();
    for entry in lexicon {
        index.entry(entry.term().word()).or_default().push(entry);
    }
    index
}

/// Build the colour signature for one label.
pub fn colour_signature(
    label: EmotionLabel,
    associations: &[EmotionAssociation],
    lexicon: &[LexiconEntry],
    join_unit: JoinUnit,
    seed: u64,
) -> Result<EmotionSignature> {
    let words: BTreeSet<&str> = associations
        .iter()
        .filter(|a| a.flagged && a.label == label)
        .map(|a| a.word.as_str())
        .collect();
    let index = lexicon_by_word(lexicon);

    let mut counts: BTreeMap<Colour, usize> = BTreeMap::new();
    let mut n_terms = 0usize;
    let mut n_uncovered = 0usize;
    for word in words {
        let Some(entries) = index.get(word) else {
            n_uncovered += 1;
            continue;
        };
        match join_unit {
            JoinUnit::Sense => {
                for entry in entries {
                    *counts.entry(entry.tie_broken(seed)).or_insert(0) += 1;
                    n_terms += 1;
                }
            }
            JoinUnit::Word => {
                let votes: Vec<Colour> = entries.iter().map(|e| e.tie_broken(seed)).collect();
                let colour = modal_colour(&votes, seed, &format!("emotion-word:{word}"))?;
                *counts.entry(colour).or_insert(0) += 1;
                n_terms += 1;
            }
        }
    }
    if n_terms == 0 {
        return Err(Error::NoTermsForLabel(label.name().to_string()));
    }

    let percentages: BTreeMap<Colour, Ratio<i64>> = Colour::ALL
        .into_iter()
        .map(|c| {
            let count = counts.get(&c).copied().unwrap_or(0);
            (c, Ratio::new(100 * count as i64, n_terms as i64))
        })
        .collect();
    let mut ordered: Vec<Colour> = Colour::ALL.to_vec();
    // descending percentage, Berlin-Kay rank breaking exact ties
    ordered.sort_by(|a, b| percentages[b].cmp(&percentages[a]).then(a.cmp(b)));
    let top2 = (ordered[0], ordered[1]);

    Ok(EmotionSignature {
        label,
        n_terms,
        n_uncovered,
        percentages,
        top2,
    })
}

/// Signatures for all ten labels in fixed order. Labels with no covered terms
/// are omitted with a warning.
pub fn signature_table(
    associations: &[EmotionAssociation],
    lexicon: &[LexiconEntry],
    join_unit: JoinUnit,
    seed: u64,
) -> Vec<EmotionSignature> {
    let mut signatures = Vec::new();
    for label in EmotionLabel::ALL {
        match colour_signature(label, associations, lexicon, join_unit, seed) {
            Ok(signature) => signatures.push(signature),
            Err(e) => log::warn!("skipping signature row: {e}"),
        }
    }
    signatures
}
