//! Synthetic annotator population with known ground truth, so the whole
//! pipeline can be validated end to end without real crowd data.
//!
//! Each vote follows a two-factor response model: the annotator produces the
//! latent colour with probability fidelity x strength, and otherwise picks
//! uniformly among the remaining colours (or among all eleven for terms with
//! no latent colour). Worker noise and genuinely weak association stay
//! separate knobs.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use num::rational::Ratio;
use rand::seq::{index, SliceRandom};
use rand::Rng;

use crate::colour::Colour;
use crate::error::{Error, Result};
use crate::lexicon::{AnnotationRecord, LexiconEntry, TermSense};
use crate::questionnaire::WordChoiceTask;
use crate::seed::rng_for;

#[derive(Debug, Clone, PartialEq)]
pub struct AnnotatorProfile {
    pub annotator_id: String,
    pub q1_error_rate: f64,
    pub colour_fidelity: f64,
}

impl AnnotatorProfile {
    pub fn new(annotator_id: &str, q1_error_rate: f64, colour_fidelity: f64) -> Result<Self> {
        for (name, value) in [
            ("q1_error_rate", q1_error_rate),
            ("colour_fidelity", colour_fidelity),
        ] {
            if !(0.0..=1.0).contains(&value) || value.is_nan() {
                return Err(Error::InvalidArgument(format!(
                    "{name} must be a probability in [0, 1], got {value}"
                )));
            }
        }
        Ok(AnnotatorProfile {
            annotator_id: annotator_id.to_string(),
            q1_error_rate,
            colour_fidelity,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LatentTerm {
    pub term: TermSense,
    /// `None` models a term with no colour association at all.
    pub true_colour: Option<Colour>,
    pub association_strength: f64,
}

impl LatentTerm {
    pub fn new(
        term: TermSense,
        true_colour: Option<Colour>,
        association_strength: f64,
    ) -> Result<Self> {
        if !(0.0..=1.0).contains(&association_strength) || association_strength.is_nan() {
            return Err(Error::InvalidArgument(format!(
                "association_strength must be a probability in [0, 1], got {association_strength}"
            )));
        }
        Ok(LatentTerm {
            term,
            true_colour,
            association_strength,
        })
    }
}

pub struct SimOutput {
    pub records: Vec<AnnotationRecord>,
    pub tasks: Vec<WordChoiceTask>,
    pub key: BTreeMap<TermSense, String>,
}

/// Shared distractor token pool: every latent term's tokens, padded with
/// fixed fillers so that sampling five distinct tokens always leaves three
/// that avoid the current term's own word and synonym.
fn distractor_pool(latent: &[LatentTerm]) -> Vec<String> {
    let mut pool: BTreeSet<String> = latent
        .iter()
        .flat_map(|l| [l.term.word().to_string(), l.term.synonym().to_string()])
        .collect();
    for filler in [
        "filler-one",
        "filler-two",
        "filler-three",
        "filler-four",
        "filler-five",
    ] {
        if pool.len() >= 5 {
            break;
        }
        pool.insert(filler.to_string());
    }
    pool.into_iter().collect()
}

/// Simulate the crowd: every term is answered by `annotators_per_term`
/// distinct annotators, assigned round-robin after a seeded shuffle.
/// Byte-identical output for identical inputs and seed.
pub fn simulate(
    latent: &[LatentTerm],
    profiles: &[AnnotatorProfile],
    annotators_per_term: usize,
    seed: u64,
) -> Result<SimOutput> {
    if annotators_per_term < 1 {
        return Err(Error::InvalidArgument(
            "annotators_per_term must be at least 1".into(),
        ));
    }
    if annotators_per_term > profiles.len() {
        return Err(Error::InvalidArgument(format!(
            "need at least {annotators_per_term} profiles for distinct annotators per term, got {}",
            profiles.len()
        )));
    }
    {
        let mut ids = BTreeSet::new();
        for profile in profiles {
            if !ids.insert(&profile.annotator_id) {
                return Err(Error::InvalidArgument(format!(
                    "duplicate annotator id '{}'",
                    profile.annotator_id
                )));
            }
        }
    }

    let mut order: Vec<usize> = (0..profiles.len()).collect();
    order.shuffle(&mut rng_for(seed, "sim:assignment"));
    let pool = distractor_pool(latent);

    let mut records = Vec::with_capacity(latent.len() * annotators_per_term);
    let mut tasks = Vec::with_capacity(latent.len());
    let mut key = BTreeMap::new();
    for (term_index, latent_term) in latent.iter().enumerate() {
        let term = &latent_term.term;
        if key
            .insert(term.clone(), term.synonym().to_string())
            .is_some()
        {
            return Err(Error::DuplicateTerm(term.to_string()));
        }

        // five distinct candidates leave three after excluding the term's own
        // word and synonym
        let mut task_rng = rng_for(seed, &format!("sim:task:{term}"));
        let picks = index::sample(&mut task_rng, pool.len(), 5.min(pool.len()));
        let distractors: [String; 3] = picks
            .iter()
            .map(|i| pool[i].clone())
            .filter(|token| token != term.word() && token != term.synonym())
            .take(3)
            .collect::<Vec<String>>()
            .try_into()
            .expect("pool padded to yield three distractors");
        let mut options = [
            term.synonym().to_string(),
            distractors[0].clone(),
            distractors[1].clone(),
            distractors[2].clone(),
        ];
        options.shuffle(&mut task_rng);
        let mut colour_options = Colour::ALL.to_vec();
        colour_options.shuffle(&mut task_rng);
        tasks.push(WordChoiceTask {
            term: term.clone(),
            options,
            correct: term.synonym().to_string(),
            colour_options,
        });

        // votes
        let mut vote_rng = rng_for(seed, &format!("sim:votes:{term}"));
        for slot in 0..annotators_per_term {
            let profile = &profiles[order[(term_index * annotators_per_term + slot) % order.len()]];
            let q1_choice = if vote_rng.random::<f64>() < profile.q1_error_rate {
                distractors[vote_rng.random_range(0..3)].clone()
            } else {
                term.synonym().to_string()
            };
            let colour = match latent_term.true_colour {
                Some(true_colour) => {
                    let p = profile.colour_fidelity * latent_term.association_strength;
                    if vote_rng.random::<f64>() < p {
                        true_colour
                    } else {
                        let others: Vec<Colour> = Colour::ALL
                            .into_iter()
                            .filter(|&c| c != true_colour)
                            .collect();
                        others[vote_rng.random_range(0..others.len())]
                    }
                }
                None => Colour::ALL[vote_rng.random_range(0..Colour::ALL.len())],
            };
            records.push(AnnotationRecord::new(
                &profile.annotator_id,
                term.clone(),
                &q1_choice,
                colour,
            ));
        }
    }
    Ok(SimOutput {
        records,
        tasks,
        key,
    })
}

/// How well the built lexicon recovered the latent truth.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecoveryReport {
    /// Entries in the built lexicon.
    pub n_kept: usize,
    /// Kept entries whose latent term has a true colour.
    pub n_scored: usize,
    /// Scored entries whose majority colour set contains the true colour.
    pub n_recovered: usize,
    /// n_recovered / n_scored; absent when nothing is scored.
    pub recovery_rate: Option<Ratio<i64>>,
    /// confusion[latent][c] counts scored entries with latent colour `latent`
    /// whose majority set contains `c`; tied sets count once per member.
    pub confusion: BTreeMap<Colour, BTreeMap<Colour, usize>>,
}

pub fn recovery_report(latent: &[LatentTerm], lexicon: &[LexiconEntry]) -> RecoveryReport {
    let truth: BTreeMap<&TermSense, Option<Colour>> = latent
        .iter()
        .map(|l| (&l.term, l.true_colour))
        .collect();
    let mut n_scored = 0usize;
    let mut n_recovered = 0usize;
    let mut confusion: BTreeMap<Colour, BTreeMap<Colour, usize>> = BTreeMap::new();
    for entry in lexicon {
        let Some(Some(true_colour)) = truth.get(entry.term()).copied() else {
            continue;
        };
        n_scored += 1;
        if entry.colours().contains(&true_colour) {
            n_recovered += 1;
        }
        let row = confusion.entry(true_colour).or_default();
        for &c in entry.colours() {
            *row.entry(c).or_insert(0) += 1;
        }
    }
    let recovery_rate = if n_scored > 0 {
        Some(Ratio::new(n_recovered as i64, n_scored as i64))
    } else {
        log::warn!("recovery rate undefined: no scored terms in the lexicon");
        None
    };
    RecoveryReport {
        n_kept: lexicon.len(),
        n_scored,
        n_recovered,
        recovery_rate,
        confusion,
    }
}

/// Load latent terms: `word<TAB>synonym<TAB>colour<TAB>strength`, with `-`
/// as the colour of no-association terms.
pub fn load_latent_terms(path: &Path) -> Result<Vec<LatentTerm>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut terms = Vec::new();
    let mut seen = BTreeSet::new();
    for (i, line) in text.lines().enumerate() {
        let number = i + 1;
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 4 {
            return Err(Error::malformed(
                path,
                number,
                format!("malformed row: expected 4 fields, got {}", fields.len()),
            ));
        }
        let term = TermSense::new(fields[0], fields[1])
            .map_err(|e| Error::malformed(path, number, e.to_string()))?;
        if !seen.insert(term.clone()) {
            return Err(Error::malformed(
                path,
                number,
                format!("duplicate term '{term}'"),
            ));
        }
        let true_colour = match fields[2].trim() {
            "-" | "none" => None,
            token => Some(
                Colour::parse(token).map_err(|e| Error::malformed(path, number, e.to_string()))?,
            ),
        };
        let strength: f64 = fields[3]
            .trim()
            .parse()
            .map_err(|_| Error::malformed(path, number, format!("malformed strength '{}'", fields[3])))?;
        let latent = LatentTerm::new(term, true_colour, strength)
            .map_err(|e| Error::malformed(path, number, e.to_string()))?;
        terms.push(latent);
    }
    Ok(terms)
}

/// Load annotator profiles: `annotator_id<TAB>q1_error_rate<TAB>colour_fidelity`.
pub fn load_profiles(path: &Path) -> Result<Vec<AnnotatorProfile>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut profiles = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let number = i + 1;
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 3 {
            return Err(Error::malformed(
                path,
                number,
                format!("malformed row: expected 3 fields, got {}", fields.len()),
            ));
        }
        let parse_probability = |text: &str| -> Result<f64> {
            text.trim()
                .parse::<f64>()
                .map_err(|_| Error::malformed(path, number, format!("malformed probability '{text}'")))
        };
        let profile = AnnotatorProfile::new(
            fields[0].trim(),
            parse_probability(fields[1])?,
            parse_probability(fields[2])?,
        )
        .map_err(|e| Error::malformed(path, number, e.to_string()))?;
        profiles.push(profile);
    }
    Ok(profiles)
}
