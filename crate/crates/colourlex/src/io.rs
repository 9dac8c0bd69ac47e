//! Loaders and writers for every external data file.
//!
//! All formats are TSV, UTF-8, LF. Lines that are empty or start with `#`
//! are skipped. Loaders report the first offending line number; loading is
//! order-independent.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::Path;

use num::rational::Ratio;

use crate::colour::Colour;
use crate::emotion::{EmotionAssociation, EmotionLabel};
use crate::error::{Error, Result};
use crate::lexicon::{AnnotationRecord, LexiconEntry, TermSense};
use crate::ratio::{decimal4, parse_decimal};
use crate::thesaurus::{Thesaurus, ThesaurusCategory};

/// Imageability ratings run from 100 (very hard to visualize) to 700.
pub const IMAGEABILITY_MIN: u32 = 100;
pub const IMAGEABILITY_MAX: u32 = 700;

/// Split a file into (line_number, fields) rows, checking the field count.
fn read_rows(path: &Path, expected_fields: usize) -> Result<Vec<(usize, Vec<String>)>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut rows = Vec::new();
    for (index, line) in text.lines().enumerate() {
        let number = index + 1;
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<String> = line.split('\t').map(str::to_string).collect();
        if fields.len() != expected_fields {
            return Err(Error::malformed(
                path,
                number,
                format!(
                    "malformed row: expected {expected_fields} fields, got {}",
                    fields.len()
                ),
            ));
        }
        rows.push((number, fields));
    }
    Ok(rows)
}

fn write_lines(path: &Path, lines: &[String]) -> Result<()> {
    let mut text = lines.join("\n");
    if !lines.is_empty() {
        text.push('\n');
    }
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

/// Load `category_id<TAB>head<TAB>word` rows into a thesaurus.
/// Duplicate (category, word) rows are deduplicated; an empty file is an error.
pub fn load_thesaurus(path: &Path) -> Result<Thesaurus> {
    let rows = read_rows(path, 3)?;
    if rows.is_empty() {
        return Err(Error::malformed(path, 1, "empty thesaurus file"));
    }
    let mut heads: BTreeMap<String, (String, usize)> = BTreeMap::new();
    let mut words: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
    for (number, fields) in rows {
        let id = fields[0].trim().to_string();
        let head = fields[1].trim().to_lowercase();
        let word = fields[2].trim().to_lowercase();
        if id.is_empty() || head.is_empty() || word.is_empty() {
            return Err(Error::malformed(path, number, "malformed row: empty field"));
        }
        match heads.get(&id) {
            None => {
                heads.insert(id.clone(), (head, number));
            }
            Some((existing, _)) if *existing != head => {
                return Err(Error::malformed(
                    path,
                    number,
                    format!("conflicting head '{head}' for category '{id}' (was '{existing}')"),
                ));
            }
            Some(_) => {}
        }
        words.entry(id).or_default().insert(word);
    }
    Thesaurus::from_categories(words.into_iter().map(|(id, words)| {
        let head = heads.remove(&id).expect("head recorded per id").0;
        ThesaurusCategory { id, head, words }
    }))
}

/// Load `annotator_id<TAB>word<TAB>synonym<TAB>q1_choice<TAB>q2_colour` rows.
/// Rows identical in all fields are rejected: a worker cannot vote twice on
/// one task.
pub fn load_annotations(path: &Path) -> Result<Vec<AnnotationRecord>> {
    let rows = read_rows(path, 5)?;
    let mut seen: BTreeSet<(String, String, String, String, Colour)> = BTreeSet::new();
    let mut records = Vec::with_capacity(rows.len());
    for (number, fields) in rows {
        let term = TermSense::new(&fields[1], &fields[2])
            .map_err(|e| Error::malformed(path, number, e.to_string()))?;
        let colour = Colour::parse(&fields[4])
            .map_err(|e| Error::malformed(path, number, e.to_string()))?;
        let record = AnnotationRecord::new(fields[0].trim(), term, &fields[3], colour);
        let key = (
            record.annotator_id.clone(),
            record.term.word().to_string(),
            record.term.synonym().to_string(),
            record.q1_choice.clone(),
            record.q2_colour,
        );
        if !seen.insert(key) {
            return Err(Error::malformed(path, number, "duplicate annotation row"));
        }
        records.push(record);
    }
    Ok(records)
}

/// Load `word<TAB>rating` imageability rows. An empty file yields an empty
/// mapping with a warning rather than an error.
pub fn load_imageability(path: &Path) -> Result<BTreeMap<String, u32>> {
    let rows = read_rows(path, 2)?;
    if rows.is_empty() {
        log::warn!("{}: imageability file has no rows", path.display());
    }
    let mut ratings = BTreeMap::new();
    for (number, fields) in rows {
        let word = fields[0].trim().to_lowercase();
        let rating: u32 = fields[1].trim().parse().map_err(|_| {
            Error::malformed(path, number, format!("malformed rating '{}'", fields[1]))
        })?;
        if !(IMAGEABILITY_MIN..=IMAGEABILITY_MAX).contains(&rating) {
            return Err(Error::malformed(
                path,
                number,
                format!("rating out of range: {rating} not in [{IMAGEABILITY_MIN}, {IMAGEABILITY_MAX}]"),
            ));
        }
        if ratings.insert(word.clone(), rating).is_some() {
            return Err(Error::malformed(
                path,
                number,
                format!("duplicate word '{word}'"),
            ));
        }
    }
    Ok(ratings)
}

/// Load `word<TAB>label<TAB>flag` emotion lexicon rows. Flag-0 rows are kept
/// but inert for signature analysis.
pub fn load_emotion_lexicon(path: &Path) -> Result<Vec<EmotionAssociation>> {
    let rows = read_rows(path, 3)?;
    let mut associations = Vec::with_capacity(rows.len());
    for (number, fields) in rows {
        let word = fields[0].trim().to_lowercase();
        let label = EmotionLabel::parse(&fields[1])
            .map_err(|e| Error::malformed(path, number, e.to_string()))?;
        let flagged = match fields[2].trim() {
            "0" => false,
            "1" => true,
            other => {
                return Err(Error::malformed(
                    path,
                    number,
                    format!("malformed flag '{other}': expected 0 or 1"),
                ))
            }
        };
        associations.push(EmotionAssociation {
            word,
            label,
            flagged,
        });
    }
    Ok(associations)
}

/// Load `word<TAB>synonym` term pairs for task generation.
pub fn load_terms(path: &Path) -> Result<Vec<TermSense>> {
    let rows = read_rows(path, 2)?;
    let mut seen = BTreeSet::new();
    let mut terms = Vec::with_capacity(rows.len());
    for (number, fields) in rows {
        let term = TermSense::new(&fields[0], &fields[1])
            .map_err(|e| Error::malformed(path, number, e.to_string()))?;
        if !seen.insert(term.clone()) {
            return Err(Error::malformed(
                path,
                number,
                format!("duplicate term '{term}'"),
            ));
        }
        terms.push(term);
    }
    Ok(terms)
}

/// Write lexicon entries as `word<TAB>synonym<TAB>colour<TAB>confidence` with
/// one row per tied colour, confidence at exactly four fractional digits,
/// rows sorted by (word, synonym, colour name).
pub fn write_lexicon(entries: &[LexiconEntry], path: &Path) -> Result<()> {
    let (zero, one) = (Ratio::from_integer(0), Ratio::from_integer(1));
    let mut lines = Vec::new();
    for entry in entries {
        if entry.confidence() <= zero || entry.confidence() > one {
            return Err(Error::InvalidArgument(format!(
                "confidence {} outside (0, 1] for {}",
                entry.confidence(),
                entry.term()
            )));
        }
        for &colour in entry.colours() {
            lines.push(format!(
                "{}\t{}\t{}\t{}",
                entry.term().word(),
                entry.term().synonym(),
                colour.name(),
                decimal4(entry.confidence())
            ));
        }
    }
    lines.sort();
    write_lines(path, &lines)
}

/// Read a lexicon file back into entries, grouping tied-colour rows.
pub fn read_lexicon(path: &Path) -> Result<Vec<LexiconEntry>> {
    let rows = read_rows(path, 4)?;
    let mut grouped: BTreeMap<TermSense, (BTreeSet<Colour>, Ratio<i64>, usize)> = BTreeMap::new();
    for (number, fields) in rows {
        let term = TermSense::new(&fields[0], &fields[1])
            .map_err(|e| Error::malformed(path, number, e.to_string()))?;
        let colour = Colour::parse(&fields[2])
            .map_err(|e| Error::malformed(path, number, e.to_string()))?;
        let text = fields[3].trim();
        if text.split_once('.').map(|(_, frac)| frac.len()) != Some(4) {
            return Err(Error::malformed(
                path,
                number,
                format!("malformed confidence '{text}': expected four fractional digits"),
            ));
        }
        let confidence = parse_decimal(text)
            .map_err(|e| Error::malformed(path, number, e.to_string()))?;
        if confidence <= Ratio::from_integer(0) || confidence > Ratio::from_integer(1) {
            return Err(Error::malformed(
                path,
                number,
                format!("confidence {text} outside (0, 1]"),
            ));
        }
        match grouped.get_mut(&term) {
            None => {
                let mut colours = BTreeSet::new();
                colours.insert(colour);
                grouped.insert(term, (colours, confidence, number));
            }
            Some((colours, existing, _)) => {
                if *existing != confidence {
                    return Err(Error::malformed(
                        path,
                        number,
                        format!("inconsistent confidence for entry '{term}'"),
                    ));
                }
                if !colours.insert(colour) {
                    return Err(Error::malformed(
                        path,
                        number,
                        format!("duplicate colour row for entry '{term}'"),
                    ));
                }
            }
        }
    }
    grouped
        .into_iter()
        .map(|(term, (colours, confidence, _))| LexiconEntry::new(term, colours, confidence))
        .collect()
}

/// Write annotation records in the standard annotation TSV layout.
pub fn write_annotations(records: &[AnnotationRecord], path: &Path) -> Result<()> {
    let lines: Vec<String> = records
        .iter()
        .map(|r| {
            format!(
                "{}\t{}\t{}\t{}\t{}",
                r.annotator_id,
                r.term.word(),
                r.term.synonym(),
                r.q1_choice,
                r.q2_colour.name()
            )
        })
        .collect();
    write_lines(path, &lines)
}
