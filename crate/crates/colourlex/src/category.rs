//! Category-level analyses: how strongly a thesaurus category's lexicon words
//! share one colour, and whether that strength tracks imageability.

use std::collections::BTreeMap;
use std::path::Path;

use num::rational::Ratio;

use crate::colour::Colour;
use crate::error::{Error, Result};
use crate::lexicon::{modal_colour, LexiconEntry};
use crate::ratio::{decimal4, to_f64};
use crate::stats::{pearson, spearman};
use crate::thesaurus::{Thesaurus, ThesaurusCategory};

/// A category qualifies only when at least this many of its words appear in
/// the colour lexicon.
pub const MIN_LEXICON_WORDS: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CategoryColourStats {
    pub category_id: String,
    pub n_lexicon_words: usize,
    pub top_colour: Colour,
    /// Modal-colour count over lexicon words, in (0, 1].
    pub strength: Ratio<i64>,
    /// Mean imageability of the category's lexicon words, when rated.
    pub imageability: Option<Ratio<i64>>,
}

/// A category word appears in the lexicon when some entry pairs it with a
/// synonym from the same category, pinning the sense to this category.
/// Returns (word, qualifying entries) per covered word.
fn lexicon_words<'a>(
    category: &ThesaurusCategory,
    lexicon: &'a [LexiconEntry],
) -> BTreeMap<&'a str, Vec<&'a LexiconEntry>> {
    let mut covered: BTreeMap<&str, Vec<&LexiconEntry>> = BTreeMap::new();
    for entry in lexicon {
        if category.words.contains(entry.term().word())
            && category.words.contains(entry.term().synonym())
        {
            covered.entry(entry.term().word()).or_default().push(entry);
        }
    }
    covered
}

/// One colour per covered word: each qualifying sense contributes its
/// tie-broken colour, and the word's modal colour wins (ties seeded).
fn word_colour(word: &str, entries: &[&LexiconEntry], seed: u64) -> Colour {
    let votes: Vec<Colour> = entries.iter().map(|e| e.tie_broken(seed)).collect();
    modal_colour(&votes, seed, &format!("category-word:{word}"))
        .expect("covered words have at least one entry")
}

/// Strength of a category's colour association: the share of its lexicon
/// words agreeing on the modal colour. `None` when fewer than four words
/// appear in the lexicon.
pub fn category_strength(
    category: &ThesaurusCategory,
    lexicon: &[LexiconEntry],
    seed: u64,
) -> Option<CategoryColourStats> {
    let covered = lexicon_words(category, lexicon);
    if covered.len() < MIN_LEXICON_WORDS {
        return None;
    }
    let colours: Vec<Colour> = covered
        .iter()
        .map(|(word, entries)| word_colour(word, entries, seed))
        .collect();
    let mut counts: BTreeMap<Colour, usize> = BTreeMap::new();
    for &c in &colours {
        *counts.entry(c).or_insert(0) += 1;
    }
    let top_colour = modal_colour(
        &colours,
        seed,
        &format!("category:{}", category.id),
    )
    .expect("eligible categories have colours");
    let modal_count = counts[&top_colour];
    Some(CategoryColourStats {
        category_id: category.id.clone(),
        n_lexicon_words: covered.len(),
        top_colour,
        strength: Ratio::new(modal_count as i64, covered.len() as i64),
        imageability: None,
    })
}

/// Mean imageability over the category words that appear in the colour
/// lexicon; `None` when no such word is rated.
pub fn category_imageability(
    category: &ThesaurusCategory,
    ratings: &BTreeMap<String, u32>,
    lexicon: &[LexiconEntry],
) -> Option<Ratio<i64>> {
    let covered = lexicon_words(category, lexicon);
    let rated: Vec<i64> = covered
        .keys()
        .filter_map(|word| ratings.get(*word).map(|&r| i64::from(r)))
        .collect();
    if rated.is_empty() {
        return None;
    }
    Some(Ratio::new(rated.iter().sum(), rated.len() as i64))
}

/// Stats for every eligible category, in id order, with imageability means
/// attached when ratings are supplied.
pub fn eligible_category_stats(
    thesaurus: &Thesaurus,
    lexicon: &[LexiconEntry],
    ratings: Option<&BTreeMap<String, u32>>,
    seed: u64,
) -> Vec<CategoryColourStats> {
    thesaurus
        .categories()
        .filter_map(|category| {
            let mut stats = category_strength(category, lexicon, seed)?;
            if let Some(ratings) = ratings {
                stats.imageability = category_imageability(category, ratings, lexicon);
            }
            Some(stats)
        })
        .collect()
}

/// Census of category association strengths.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct CategoryCensus {
    pub n_categories: usize,
    pub n_eligible: usize,
    /// Eligible categories at exactly 0.25 with exactly four lexicon words.
    pub n_at_floor: usize,
    /// Strength strictly above the 0.25 chance floor.
    pub n_above_chance: usize,
    /// Strength at or above the strong threshold.
    pub n_strong: usize,
}

pub fn strength_census(
    thesaurus: &Thesaurus,
    lexicon: &[LexiconEntry],
    strong_threshold: Ratio<i64>,
    seed: u64,
) -> CategoryCensus {
    let stats = eligible_category_stats(thesaurus, lexicon, None, seed);
    census_of(&stats, thesaurus.len(), strong_threshold)
}

pub fn census_of(
    stats: &[CategoryColourStats],
    n_categories: usize,
    strong_threshold: Ratio<i64>,
) -> CategoryCensus {
    let floor = Ratio::new(1, 4);
    CategoryCensus {
        n_categories,
        n_eligible: stats.len(),
        n_at_floor: stats
            .iter()
            .filter(|s| s.strength == floor && s.n_lexicon_words == MIN_LEXICON_WORDS)
            .count(),
        n_above_chance: stats.iter().filter(|s| s.strength > floor).count(),
        n_strong: stats
            .iter()
            .filter(|s| s.strength >= strong_threshold)
            .count(),
    }
}

/// Write the scatter rows (`category_id imageability strength top_colour`)
/// for categories with an imageability mean, sorted by id, with a header.
pub fn scatter_export(stats: &[CategoryColourStats], path: &Path) -> Result<()> {
    let mut lines = vec!["category_id\timageability\tstrength\ttop_colour".to_string()];
    let mut rows: Vec<&CategoryColourStats> = stats
        .iter()
        .filter(|s| s.imageability.is_some())
        .collect();
    rows.sort_by(|a, b| a.category_id.cmp(&b.category_id));
    for s in rows {
        lines.push(format!(
            "{}\t{}\t{}\t{}",
            s.category_id,
            decimal4(s.imageability.expect("filtered to rated rows")),
            decimal4(s.strength),
            s.top_colour.name()
        ));
    }
    let mut text = lines.join("\n");
    text.push('\n');
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

/// Pearson and Spearman correlation between category imageability and colour
/// association strength, over exactly the rows exported to the scatter file.
pub fn imageability_correlation(stats: &[CategoryColourStats]) -> Result<(f64, f64, usize)> {
    let pairs: Vec<(f64, f64)> = stats
        .iter()
        .filter_map(|s| s.imageability.map(|img| (to_f64(img), to_f64(s.strength))))
        .collect();
    let xs: Vec<f64> = pairs.iter().map(|p| p.0).collect();
    let ys: Vec<f64> = pairs.iter().map(|p| p.1).collect();
    Ok((pearson(&xs, &ys)?, spearman(&xs, &ys)?, pairs.len()))
}
