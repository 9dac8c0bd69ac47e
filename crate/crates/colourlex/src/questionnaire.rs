//! Annotation task generation: a word-choice gold question whose correct
//! answer is the sense-pinning near-synonym, plus a shuffled colour question.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use rand::seq::index;
use rand::seq::SliceRandom;

use crate::colour::Colour;
use crate::error::{Error, Result};
use crate::lexicon::TermSense;
use crate::seed::rng_for;
use crate::thesaurus::Thesaurus;

/// Number of distractor options alongside the near-synonym.
pub const DISTRACTOR_COUNT: usize = 3;

/// One two-question annotation task.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WordChoiceTask {
    pub term: TermSense,
    /// The near-synonym and three distractors, in presentation order.
    pub options: [String; 4],
    /// Always equals `term.synonym()`.
    pub correct: String,
    /// The 11 colour options in presentation order.
    pub colour_options: Vec<Colour>,
}

impl WordChoiceTask {
    fn validate(&self) -> Result<()> {
        if self.correct != self.term.synonym() {
            return Err(Error::InvalidArgument(format!(
                "task for {}: correct answer must be the near-synonym",
                self.term
            )));
        }
        let distinct: BTreeSet<&str> = self.options.iter().map(String::as_str).collect();
        if distinct.len() != 4 || !distinct.contains(self.correct.as_str()) {
            return Err(Error::InvalidArgument(format!(
                "task for {}: options must be 4 distinct tokens including the correct answer",
                self.term
            )));
        }
        if self.options.iter().any(|o| o == self.term.word()) {
            return Err(Error::InvalidArgument(format!(
                "task for {}: the target word cannot be an option",
                self.term
            )));
        }
        let colours: BTreeSet<Colour> = self.colour_options.iter().copied().collect();
        if self.colour_options.len() != 11 || colours.len() != 11 {
            return Err(Error::InvalidArgument(format!(
                "task for {}: colour options must be a permutation of the 11 colours",
                self.term
            )));
        }
        Ok(())
    }
}

/// Generate the task for one term. Distractors are sampled uniformly from
/// words sharing no category with the target word; option and colour orders
/// are seeded shuffles. Deterministic in (term, thesaurus, seed).
pub fn generate_task(
    term: &TermSense,
    thesaurus: &Thesaurus,
    seed: u64,
) -> Result<WordChoiceTask> {
    if !thesaurus.co_categorized(term.word(), term.synonym()) {
        return Err(Error::InvalidSenseKey {
            word: term.word().to_string(),
            synonym: term.synonym().to_string(),
        });
    }
    // excludes every word co-categorized with the target, hence also the
    // target and the near-synonym
    let pool = thesaurus.distractor_pool(term.word());
    if pool.len() < DISTRACTOR_COUNT {
        return Err(Error::InsufficientDistractors {
            needed: DISTRACTOR_COUNT,
            available: pool.len(),
        });
    }

    let mut rng = rng_for(seed, &format!("task:{}\t{}", term.word(), term.synonym()));
    let picks = index::sample(&mut rng, pool.len(), DISTRACTOR_COUNT);
    let mut options = [
        term.synonym().to_string(),
        pool[picks.index(0)].to_string(),
        pool[picks.index(1)].to_string(),
        pool[picks.index(2)].to_string(),
    ];
    options.shuffle(&mut rng);
    let mut colour_options = Colour::ALL.to_vec();
    colour_options.shuffle(&mut rng);

    let task = WordChoiceTask {
        term: term.clone(),
        options,
        correct: term.synonym().to_string(),
        colour_options,
    };
    task.validate()?;
    Ok(task)
}

/// Generate tasks for a whole term list.
pub fn generate_tasks(
    terms: &[TermSense],
    thesaurus: &Thesaurus,
    seed: u64,
) -> Result<Vec<WordChoiceTask>> {
    terms
        .iter()
        .map(|term| generate_task(term, thesaurus, seed))
        .collect()
}

/// The gold answers, keyed by term.
pub fn answer_key(tasks: &[WordChoiceTask]) -> Result<BTreeMap<TermSense, String>> {
    let mut key = BTreeMap::new();
    for task in tasks {
        if key
            .insert(task.term.clone(), task.correct.clone())
            .is_some()
        {
            return Err(Error::DuplicateTerm(task.term.to_string()));
        }
    }
    Ok(key)
}

/// Write tasks as `word synonym opt1..opt4 correct colour_order` TSV rows,
/// with colour_order the 11 shuffled names joined by commas. Consumers strip
/// the `correct` column before showing tasks to humans.
pub fn export_tasks(tasks: &[WordChoiceTask], path: &Path) -> Result<()> {
    let lines: Vec<String> = tasks
        .iter()
        .map(|task| {
            let colour_order: Vec<&str> =
                task.colour_options.iter().map(|c| c.name()).collect();
            format!(
                "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
                task.term.word(),
                task.term.synonym(),
                task.options[0],
                task.options[1],
                task.options[2],
                task.options[3],
                task.correct,
                colour_order.join(",")
            )
        })
        .collect();
    let mut text = lines.join("\n");
    if !lines.is_empty() {
        text.push('\n');
    }
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

/// Read a task file back, revalidating every invariant.
pub fn import_tasks(path: &Path) -> Result<Vec<WordChoiceTask>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut tasks = Vec::new();
    for (index, line) in text.lines().enumerate() {
        let number = index + 1;
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 8 {
            return Err(Error::malformed(
                path,
                number,
                format!("malformed row: expected 8 fields, got {}", fields.len()),
            ));
        }
        let term = TermSense::new(fields[0], fields[1])
            .map_err(|e| Error::malformed(path, number, e.to_string()))?;
        let colour_options = fields[7]
            .split(',')
            .map(Colour::parse)
            .collect::<Result<Vec<Colour>>>()
            .map_err(|e| Error::malformed(path, number, e.to_string()))?;
        let task = WordChoiceTask {
            term,
            options: [
                fields[2].to_string(),
                fields[3].to_string(),
                fields[4].to_string(),
                fields[5].to_string(),
            ],
            correct: fields[6].to_string(),
            colour_options,
        };
        task.validate()
            .map_err(|e| Error::malformed(path, number, e.to_string()))?;
        tasks.push(task);
    }
    Ok(tasks)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::thesaurus::ThesaurusCategory;
    use tempfile::NamedTempFile;

    fn sample_thesaurus() -> Thesaurus {
        let category = |id: &str, head: &str, words: &[&str]| ThesaurusCategory {
            id: id.into(),
            head: head.into(),
            words: words.iter().map(|w| w.to_string()).collect(),
        };
        Thesaurus::from_categories([
            category("c1", "sleep", &["sleep", "nap", "doze", "slumber"]),
            category("c2", "trees", &["tree", "olive", "oak"]),
            category("c3", "vehicles", &["car", "truck"]),
        ])
        .unwrap()
    }

    fn sleep_nap() -> TermSense {
        TermSense::new("sleep", "nap").unwrap()
    }

    #[test]
    fn generated_task_satisfies_all_invariants() {
        let thesaurus = sample_thesaurus();
        let task = generate_task(&sleep_nap(), &thesaurus, 7).unwrap();
        assert_eq!(task.correct, "nap");
        assert!(task.options.contains(&"nap".to_string()));
        // exactly one option shares a category with the target word
        let co = task
            .options
            .iter()
            .filter(|o| thesaurus.co_categorized("sleep", o))
            .count();
        assert_eq!(co, 1);
        for option in &task.options {
            assert_ne!(option, "sleep");
            assert_ne!(option, "doze");
            assert_ne!(option, "slumber");
        }
    }

    #[test]
    fn generation_is_deterministic() {
        let thesaurus = sample_thesaurus();
        let a = generate_task(&sleep_nap(), &thesaurus, 42).unwrap();
        let b = generate_task(&sleep_nap(), &thesaurus, 42).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn non_co_categorized_synonym_is_rejected() {
        let thesaurus = sample_thesaurus();
        let term = TermSense::new("sleep", "tree").unwrap();
        assert!(matches!(
            generate_task(&term, &thesaurus, 1),
            Err(Error::InvalidSenseKey { .. })
        ));
    }

    #[test]
    fn too_small_thesaurus_cannot_supply_distractors() {
        let only_own_category = Thesaurus::from_categories([ThesaurusCategory {
            id: "c1".into(),
            head: "sleep".into(),
            words: ["sleep", "nap"].iter().map(|w| w.to_string()).collect(),
        }])
        .unwrap();
        assert!(matches!(
            generate_task(&sleep_nap(), &only_own_category, 1),
            Err(Error::InsufficientDistractors { .. })
        ));
    }

    #[test]
    fn answer_key_maps_terms_and_rejects_collisions() {
        let thesaurus = sample_thesaurus();
        let task = generate_task(&sleep_nap(), &thesaurus, 3).unwrap();
        let key = answer_key(std::slice::from_ref(&task)).unwrap();
        assert_eq!(key[&sleep_nap()], "nap");
        assert!(answer_key(&[]).unwrap().is_empty());
        assert!(matches!(
            answer_key(&[task.clone(), task]),
            Err(Error::DuplicateTerm(_))
        ));
    }

    #[test]
    fn export_import_round_trips() {
        let thesaurus = sample_thesaurus();
        let terms = [
            sleep_nap(),
            TermSense::new("doze", "slumber").unwrap(),
        ];
        let tasks = generate_tasks(&terms, &thesaurus, 99).unwrap();
        let f = NamedTempFile::new().unwrap();
        export_tasks(&tasks, f.path()).unwrap();
        let text = std::fs::read_to_string(f.path()).unwrap();
        let first = text.lines().next().unwrap();
        assert_eq!(first.split('\t').count(), 8);
        assert_eq!(import_tasks(f.path()).unwrap(), tasks);
    }

    #[test]
    fn exported_colour_order_is_a_permutation() {
        let thesaurus = sample_thesaurus();
        let task = generate_task(&sleep_nap(), &thesaurus, 11).unwrap();
        let distinct: BTreeSet<Colour> = task.colour_options.iter().copied().collect();
        assert_eq!(distinct.len(), 11);
    }

    // Shuffle fairness: with 4000 per-term streams the correct answer should
    // land in each of the four slots about a quarter of the time. The 0.03
    // band is over four sigmas at this sample size.
    #[test]
    fn correct_answer_slot_is_uniform() {
        let thesaurus = sample_thesaurus();
        let term = sleep_nap();
        let n = 4000u64;
        let mut slot_counts = [0usize; 4];
        for seed in 0..n {
            let task = generate_task(&term, &thesaurus, seed).unwrap();
            let slot = task
                .options
                .iter()
                .position(|o| *o == task.correct)
                .unwrap();
            slot_counts[slot] += 1;
        }
        for count in slot_counts {
            let frequency = count as f64 / n as f64;
            assert!(
                (0.22..=0.28).contains(&frequency),
                "slot frequency {frequency} outside 0.25 +/- 0.03"
            );
        }
    }

    #[test]
    fn distractors_never_repeat_within_a_task() {
        let thesaurus = sample_thesaurus();
        for seed in 0..200 {
            let task = generate_task(&sleep_nap(), &thesaurus, seed).unwrap();
            let distinct: BTreeSet<&str> = task.options.iter().map(String::as_str).collect();
            assert_eq!(distinct.len(), 4);
        }
    }
}
