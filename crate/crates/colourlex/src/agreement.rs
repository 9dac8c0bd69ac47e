//! Agreement analyses over the annotations and the lexicon: colour
//! distributions, majority-class histogram, the independence chance baseline,
//! and the comparison against the Berlin-Kay order.

use std::collections::BTreeMap;

use num::rational::Ratio;
use num::{BigInt, BigRational, Zero};

use crate::colour::Colour;
use crate::error::{Error, Result};
use crate::lexicon::{AnnotationRecord, LexiconEntry, VoteTally};
use crate::ratio::round_to_places;

/// Percentage of terms (or annotations) associated with each colour.
/// Computed distributions sum to exactly 100; `from_percentages` also accepts
/// externally rounded rows (e.g. published tables) whose sum may drift.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColourDistribution {
    percentages: BTreeMap<Colour, Ratio<i64>>,
}

impl ColourDistribution {
    pub fn from_counts(counts: &BTreeMap<Colour, usize>, total: usize) -> Result<Self> {
        if total == 0 {
            return Err(Error::InvalidArgument(
                "cannot build a distribution over zero items".into(),
            ));
        }
        let percentages = Colour::ALL
            .into_iter()
            .map(|c| {
                let count = counts.get(&c).copied().unwrap_or(0);
                (c, Ratio::new(100 * count as i64, total as i64))
            })
            .collect();
        Ok(ColourDistribution { percentages })
    }

    /// Build from explicit per-colour percentages. All 11 colours must be
    /// present and non-negative.
    pub fn from_percentages(percentages: BTreeMap<Colour, Ratio<i64>>) -> Result<Self> {
        for colour in Colour::ALL {
            match percentages.get(&colour) {
                None => {
                    return Err(Error::InvalidArgument(format!(
                        "missing colour '{colour}' in distribution"
                    )))
                }
                Some(p) if *p < Ratio::zero() => {
                    return Err(Error::InvalidArgument(format!(
                        "negative percentage for '{colour}'"
                    )))
                }
                Some(_) => {}
            }
        }
        Ok(ColourDistribution { percentages })
    }

    pub fn percentage(&self, colour: Colour) -> Ratio<i64> {
        self.percentages[&colour]
    }

    pub fn percentages(&self) -> &BTreeMap<Colour, Ratio<i64>> {
        &self.percentages
    }

    pub fn total(&self) -> Ratio<i64> {
        self.percentages.values().sum()
    }
}

/// Percentage of annotations naming each colour.
pub fn overall_distribution(records: &[AnnotationRecord]) -> Result<ColourDistribution> {
    if records.is_empty() {
        return Err(Error::InvalidArgument("no annotation records".into()));
    }
    let mut counts: BTreeMap<Colour, usize> = BTreeMap::new();
    for record in records {
        *counts.entry(record.q2_colour).or_insert(0) += 1;
    }
    ColourDistribution::from_counts(&counts, records.len())
}

/// Percentage of lexicon entries whose tie-broken colour is each colour.
pub fn voted_distribution(lexicon: &[LexiconEntry], seed: u64) -> Result<ColourDistribution> {
    if lexicon.is_empty() {
        return Err(Error::InvalidArgument("empty lexicon".into()));
    }
    let mut counts: BTreeMap<Colour, usize> = BTreeMap::new();
    for entry in lexicon {
        *counts.entry(entry.tie_broken(seed)).or_insert(0) += 1;
    }
    ColourDistribution::from_counts(&counts, lexicon.len())
}

/// Share of terms whose majority class has each size.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MajorityHistogram {
    share: BTreeMap<usize, Ratio<i64>>,
    cumulative_ge2: Ratio<i64>,
    cumulative_ge3: Ratio<i64>,
}

impl MajorityHistogram {
    pub fn share(&self) -> &BTreeMap<usize, Ratio<i64>> {
        &self.share
    }

    pub fn share_of(&self, class_size: usize) -> Ratio<i64> {
        self.share.get(&class_size).copied().unwrap_or_else(Ratio::zero)
    }

    pub fn cumulative_ge2(&self) -> Ratio<i64> {
        self.cumulative_ge2
    }

    pub fn cumulative_ge3(&self) -> Ratio<i64> {
        self.cumulative_ge3
    }
}

/// Distribution of majority class sizes over per-term tallies.
pub fn majority_histogram(tallies: &[VoteTally]) -> Result<MajorityHistogram> {
    if tallies.is_empty() {
        return Err(Error::InvalidArgument("no vote tallies".into()));
    }
    let max_size = tallies.iter().map(VoteTally::total).max().unwrap_or(1);
    let mut counts: BTreeMap<usize, usize> = (1..=max_size).map(|s| (s, 0)).collect();
    for tally in tallies {
        *counts.entry(tally.max_count()).or_insert(0) += 1;
    }
    let total = tallies.len() as i64;
    let share: BTreeMap<usize, Ratio<i64>> = counts
        .into_iter()
        .map(|(size, count)| (size, Ratio::new(100 * count as i64, total)))
        .collect();
    let hundred = Ratio::from_integer(100);
    let share1 = share.get(&1).copied().unwrap_or_else(Ratio::zero);
    let share2 = share.get(&2).copied().unwrap_or_else(Ratio::zero);
    Ok(MajorityHistogram {
        cumulative_ge2: hundred - share1,
        cumulative_ge3: hundred - share1 - share2,
        share,
    })
}

/// Probability that independent uniform annotators all pick distinct colours:
/// the product of (n_colours - i) / n_colours for i in 1..n_annotators.
/// Zero when annotators outnumber colours.
pub fn chance_all_distinct(n_annotators: usize, n_colours: usize) -> Result<BigRational> {
    if n_annotators == 0 || n_colours == 0 {
        return Err(Error::InvalidArgument(
            "annotator and colour counts must be positive".into(),
        ));
    }
    let n = BigInt::from(n_colours);
    let mut probability = BigRational::from_integer(BigInt::from(1));
    for i in 1..n_annotators {
        if i >= n_colours {
            return Ok(BigRational::zero());
        }
        probability *= BigRational::new(&n - BigInt::from(i), n.clone());
    }
    Ok(probability)
}

/// Colours sorted by descending display-rounded percentage (ties broken by
/// Berlin-Kay rank), plus the Kendall tau of that ordering against the
/// Berlin-Kay order.
pub fn bk_order_agreement(dist: &ColourDistribution) -> (Vec<Colour>, Ratio<i64>) {
    let mut ordering: Vec<Colour> = Colour::ALL.to_vec();
    ordering.sort_by(|a, b| {
        let pa = round_to_places(dist.percentage(*a), 1);
        let pb = round_to_places(dist.percentage(*b), 1);
        pb.cmp(&pa).then(a.cmp(b))
    });
    let tau = kendall_tau_vs_bk(&ordering);
    (ordering, tau)
}

/// Kendall tau between a strict colour ordering and the Berlin-Kay order.
fn kendall_tau_vs_bk(ordering: &[Colour]) -> Ratio<i64> {
    let position: BTreeMap<Colour, usize> = ordering
        .iter()
        .enumerate()
        .map(|(i, &c)| (c, i))
        .collect();
    let n = ordering.len() as i64;
    let mut concordant = 0i64;
    let mut discordant = 0i64;
    for (i, &a) in Colour::ALL.iter().enumerate() {
        for &b in &Colour::ALL[i + 1..] {
            // BK rank of a precedes b; compare against the given ordering
            if position[&a] < position[&b] {
                concordant += 1;
            } else {
                discordant += 1;
            }
        }
    }
    Ratio::new(concordant - discordant, n * (n - 1) / 2)
}
