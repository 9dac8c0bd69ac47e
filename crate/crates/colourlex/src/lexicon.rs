//! Core domain types and the vote mathematics: tallying, majority vote,
//! confidence scores, and seeded tie-breaking.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num::rational::Ratio;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::colour::Colour;
use crate::error::{Error, Result};
use crate::seed::derive_seed;

/// A word together with the near-synonym that pins its intended sense.
///
/// `(word, synonym)` is the unique key for lexicon entries and task grouping.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TermSense {
    word: String,
    synonym: String,
}

impl TermSense {
    /// Tokens are canonicalized to lowercase; the word and its guiding
    /// synonym must differ.
    pub fn new(word: &str, synonym: &str) -> Result<TermSense> {
        let word = word.trim().to_lowercase();
        let synonym = synonym.trim().to_lowercase();
        if word.is_empty() || synonym.is_empty() {
            return Err(Error::InvalidArgument(
                "term word and synonym must be non-empty".into(),
            ));
        }
        if word == synonym {
            return Err(Error::InvalidArgument(format!(
                "term word and synonym must differ, got '{word}' twice"
            )));
        }
        Ok(TermSense { word, synonym })
    }

    pub fn word(&self) -> &str {
        &self.word
    }

    pub fn synonym(&self) -> &str {
        &self.synonym
    }
}

impl fmt::Display for TermSense {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.word, self.synonym)
    }
}

/// One worker's response to one task: the word-choice answer and the colour.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnnotationRecord {
    pub annotator_id: String,
    pub term: TermSense,
    pub q1_choice: String,
    pub q2_colour: Colour,
}

impl AnnotationRecord {
    pub fn new(
        annotator_id: &str,
        term: TermSense,
        q1_choice: &str,
        q2_colour: Colour,
    ) -> AnnotationRecord {
        AnnotationRecord {
            annotator_id: annotator_id.to_string(),
            term,
            q1_choice: q1_choice.trim().to_lowercase(),
            q2_colour,
        }
    }
}

/// Vote counts for one term.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VoteTally {
    term: TermSense,
    counts: BTreeMap<Colour, usize>,
    total: usize,
}

impl VoteTally {
    pub fn term(&self) -> &TermSense {
        &self.term
    }

    pub fn counts(&self) -> &BTreeMap<Colour, usize> {
        &self.counts
    }

    pub fn total(&self) -> usize {
        self.total
    }

    /// Size of the majority class.
    pub fn max_count(&self) -> usize {
        self.counts.values().copied().max().unwrap_or(0)
    }
}

/// Count the colour votes of one term's records.
pub fn tally_votes(records: &[AnnotationRecord]) -> Result<VoteTally> {
    let first = records.first().ok_or(Error::NoVotes)?;
    let term = first.term.clone();
    let mut counts: BTreeMap<Colour, usize> = BTreeMap::new();
    for record in records {
        if record.term != term {
            return Err(Error::HeterogeneousGroup {
                expected: term.to_string(),
                found: record.term.to_string(),
            });
        }
        *counts.entry(record.q2_colour).or_insert(0) += 1;
    }
    Ok(VoteTally {
        term,
        counts,
        total: records.len(),
    })
}

/// All colours achieving the maximal vote count; ties are preserved.
pub fn majority_colours(tally: &VoteTally) -> BTreeSet<Colour> {
    let max = tally.max_count();
    tally
        .counts
        .iter()
        .filter(|(_, &n)| n == max)
        .map(|(&c, _)| c)
        .collect()
}

/// Votes for a majority colour over total votes, as an exact rational.
pub fn confidence_score(tally: &VoteTally) -> Ratio<i64> {
    Ratio::new(tally.max_count() as i64, tally.total as i64)
}

/// Pick one colour uniformly at random from a tied set, deterministically
/// under the given seed. Singleton sets return their member without
/// consuming randomness.
pub fn break_tie(colours: &BTreeSet<Colour>, seed: u64) -> Result<Colour> {
    let first = *colours.iter().next().ok_or(Error::EmptyTie)?;
    if colours.len() == 1 {
        return Ok(first);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let index = rng.random_range(0..colours.len());
    Ok(*colours.iter().nth(index).expect("index in range"))
}

/// One lexicon entry: a term, the majority colour(s), and the confidence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LexiconEntry {
    term: TermSense,
    colours: BTreeSet<Colour>,
    confidence: Ratio<i64>,
}

impl LexiconEntry {
    pub fn new(term: TermSense, colours: BTreeSet<Colour>, confidence: Ratio<i64>) -> Result<Self> {
        if colours.is_empty() {
            return Err(Error::InvalidArgument(format!(
                "lexicon entry for {term} has no colours"
            )));
        }
        let (zero, one) = (Ratio::from_integer(0), Ratio::from_integer(1));
        if confidence <= zero || confidence > one {
            return Err(Error::InvalidArgument(format!(
                "confidence {confidence} outside (0, 1]"
            )));
        }
        Ok(LexiconEntry {
            term,
            colours,
            confidence,
        })
    }

    /// Majority vote over a term's tally.
    pub fn from_tally(tally: &VoteTally) -> LexiconEntry {
        LexiconEntry {
            term: tally.term.clone(),
            colours: majority_colours(tally),
            confidence: confidence_score(tally),
        }
    }

    pub fn term(&self) -> &TermSense {
        &self.term
    }

    pub fn colours(&self) -> &BTreeSet<Colour> {
        &self.colours
    }

    pub fn confidence(&self) -> Ratio<i64> {
        self.confidence
    }

    /// The entry's single colour for downstream analyses: ties are broken by
    /// a per-entry sub-seed, so one analysis seed breaks every entry the same
    /// way across all analyses.
    pub fn tie_broken(&self, seed: u64) -> Colour {
        let label = format!("tiebreak:{}\t{}", self.term.word, self.term.synonym);
        break_tie(&self.colours, derive_seed(seed, &label)).expect("entry colours are non-empty")
    }
}

/// Majority colour over a bag of already tie-broken entry colours, used when
/// a single word must contribute one colour (category and word-level joins).
/// Modal ties are broken by the labeled sub-seed.
pub fn modal_colour(votes: &[Colour], seed: u64, label: &str) -> Result<Colour> {
    if votes.is_empty() {
        return Err(Error::NoVotes);
    }
    let mut counts: BTreeMap<Colour, usize> = BTreeMap::new();
    for &c in votes {
        *counts.entry(c).or_insert(0) += 1;
    }
    let max = counts.values().copied().max().unwrap_or(0);
    let tied: BTreeSet<Colour> = counts
        .iter()
        .filter(|(_, &n)| n == max)
        .map(|(&c, _)| c)
        .collect();
    break_tie(&tied, derive_seed(seed, label))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn term() -> TermSense {
        TermSense::new("sleep", "nap").unwrap()
    }

    fn records(colours: &[Colour]) -> Vec<AnnotationRecord> {
        colours
            .iter()
            .enumerate()
            .map(|(i, &c)| AnnotationRecord::new(&format!("a{i}"), term(), "nap", c))
            .collect()
    }

    #[test]
    fn tally_counts_votes() {
        use Colour::*;
        let tally = tally_votes(&records(&[Blue, Blue, Blue, Black, Grey])).unwrap();
        assert_eq!(tally.total(), 5);
        assert_eq!(tally.counts()[&Blue], 3);
        assert_eq!(tally.counts()[&Black], 1);
        assert_eq!(tally.counts()[&Grey], 1);
    }

    #[test]
    fn tally_singleton() {
        let tally = tally_votes(&records(&[Colour::Red])).unwrap();
        assert_eq!(tally.total(), 1);
        assert_eq!(tally.counts()[&Colour::Red], 1);
    }

    #[test]
    fn tally_even_split() {
        use Colour::*;
        let tally = tally_votes(&records(&[Red, Black, Red, Black])).unwrap();
        assert_eq!(tally.total(), 4);
        assert_eq!(tally.counts()[&Red], 2);
        assert_eq!(tally.counts()[&Black], 2);
    }

    #[test]
    fn tally_rejects_empty_and_mixed_groups() {
        assert!(matches!(tally_votes(&[]), Err(Error::NoVotes)));
        let mut mixed = records(&[Colour::Red]);
        mixed.push(AnnotationRecord::new(
            "a9",
            TermSense::new("bunk", "nonsense").unwrap(),
            "nonsense",
            Colour::Grey,
        ));
        assert!(matches!(
            tally_votes(&mixed),
            Err(Error::HeterogeneousGroup { .. })
        ));
    }

    #[test]
    fn majority_unique_tie_and_unanimous() {
        use Colour::*;
        let t = tally_votes(&records(&[Blue, Blue, Blue, Black, Grey])).unwrap();
        assert_eq!(majority_colours(&t).into_iter().collect::<Vec<_>>(), [Blue]);

        let t = tally_votes(&records(&[Red, Black, Red, Black, Grey])).unwrap();
        assert_eq!(
            majority_colours(&t).into_iter().collect::<Vec<_>>(),
            [Black, Red]
        );

        let t = tally_votes(&records(&[Green; 5])).unwrap();
        assert_eq!(
            majority_colours(&t).into_iter().collect::<Vec<_>>(),
            [Green]
        );
    }

    #[test]
    fn confidence_examples() {
        use Colour::*;
        let t = tally_votes(&records(&[Blue, Blue, Blue, Black, Grey])).unwrap();
        assert_eq!(confidence_score(&t), Ratio::new(3, 5));

        let t = tally_votes(&records(&[Green; 5])).unwrap();
        assert_eq!(confidence_score(&t), Ratio::from_integer(1));

        let t = tally_votes(&records(&[Red, Black, Red, Black, Grey])).unwrap();
        assert_eq!(confidence_score(&t), Ratio::new(2, 5));
    }

    #[test]
    fn break_tie_singleton_ignores_seed() {
        let set: BTreeSet<Colour> = [Colour::Green].into_iter().collect();
        for seed in [0u64, 1, 99999] {
            assert_eq!(break_tie(&set, seed).unwrap(), Colour::Green);
        }
    }

    #[test]
    fn break_tie_is_pure_in_set_and_seed() {
        let set: BTreeSet<Colour> = [Colour::Red, Colour::Black].into_iter().collect();
        for seed in 0..50u64 {
            let first = break_tie(&set, seed).unwrap();
            assert_eq!(break_tie(&set, seed).unwrap(), first);
        }
    }

    #[test]
    fn break_tie_rejects_empty_set() {
        assert!(matches!(
            break_tie(&BTreeSet::new(), 7),
            Err(Error::EmptyTie)
        ));
    }

    // Uniformity oracle: over many seeds a two-way tie should split close to
    // evenly. 10_000 draws at p = 0.5 have a standard deviation of 0.005, so
    // the [0.47, 0.53] band is six sigmas wide.
    #[test]
    fn break_tie_is_close_to_uniform_over_seeds() {
        let set: BTreeSet<Colour> = [Colour::Red, Colour::Black].into_iter().collect();
        let n = 10_000;
        let reds = (0..n)
            .filter(|&seed| break_tie(&set, seed).unwrap() == Colour::Red)
            .count();
        let frequency = reds as f64 / n as f64;
        assert!(
            (0.47..=0.53).contains(&frequency),
            "red frequency {frequency} outside [0.47, 0.53]"
        );
    }

    #[test]
    fn entry_from_tally_keeps_ties() {
        use Colour::*;
        let t = tally_votes(&records(&[Red, Black, Red, Black, Grey])).unwrap();
        let entry = LexiconEntry::from_tally(&t);
        assert_eq!(entry.colours().len(), 2);
        assert_eq!(entry.confidence(), Ratio::new(2, 5));
        let broken = entry.tie_broken(3);
        assert!(entry.colours().contains(&broken));
        assert_eq!(entry.tie_broken(3), broken);
    }

    #[test]
    fn entry_validation() {
        assert!(LexiconEntry::new(term(), BTreeSet::new(), Ratio::new(1, 2)).is_err());
        let colours: BTreeSet<Colour> = [Colour::Blue].into_iter().collect();
        assert!(LexiconEntry::new(term(), colours.clone(), Ratio::new(6, 5)).is_err());
        assert!(LexiconEntry::new(term(), colours.clone(), Ratio::new(0, 5)).is_err());
        assert!(LexiconEntry::new(term(), colours, Ratio::new(1, 5)).is_ok());
    }

    #[test]
    fn term_sense_rejects_degenerate_keys() {
        assert!(TermSense::new("sleep", "sleep").is_err());
        assert!(TermSense::new("", "nap").is_err());
        let t = TermSense::new(" Sleep", "NAP ").unwrap();
        assert_eq!(t.word(), "sleep");
        assert_eq!(t.synonym(), "nap");
    }
}
