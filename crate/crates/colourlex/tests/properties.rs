//! Property-based invariants over the vote mathematics, the loaders, and the
//! distribution normalization contracts.

use std::collections::BTreeMap;
use std::io::Write as _;

use num::rational::Ratio;
use num::Signed;
use proptest::prelude::*;
use tempfile::NamedTempFile;

use colourlex::aggregation::{build_lexicon, filter_valid, group_by_term, sense_divergence};
use colourlex::agreement::{majority_histogram, overall_distribution, voted_distribution};
use colourlex::category::category_strength;
use colourlex::emotion::{colour_signature, EmotionAssociation, EmotionLabel, JoinUnit};
use colourlex::io::{load_thesaurus, read_lexicon, write_lexicon};
use colourlex::lexicon::{
    confidence_score, majority_colours, tally_votes, AnnotationRecord, LexiconEntry, TermSense,
};
use colourlex::ratio::round_to_places;
use colourlex::thesaurus::ThesaurusCategory;
use colourlex::Colour;

fn colour_strategy() -> impl Strategy<Value = Colour> {
    (0..11usize).prop_map(|i| Colour::ALL[i])
}

fn votes_strategy(max: usize) -> impl Strategy<Value = Vec<Colour>> {
    proptest::collection::vec(colour_strategy(), 1..=max)
}

fn records_for(word_index: usize, votes: &[Colour]) -> Vec<AnnotationRecord> {
    let term = TermSense::new(&format!("w{word_index}"), &format!("s{word_index}")).unwrap();
    votes
        .iter()
        .enumerate()
        .map(|(i, &c)| AnnotationRecord::new(&format!("a{i}"), term.clone(), term.synonym(), c))
        .collect()
}

proptest! {
    // Confidence lies in [1/total, 1], equals 1 exactly on unanimity, and the
    // majority set is precisely the argmax set.
    #[test]
    fn vote_math_invariants(votes in votes_strategy(9)) {
        let records = records_for(0, &votes);
        let tally = tally_votes(&records).unwrap();
        let total = tally.total() as i64;
        prop_assert_eq!(tally.counts().values().sum::<usize>(), votes.len());

        let confidence = confidence_score(&tally);
        prop_assert!(confidence >= Ratio::new(1, total));
        prop_assert!(confidence <= Ratio::from_integer(1));
        let unanimous = tally.counts().len() == 1;
        prop_assert_eq!(confidence == Ratio::from_integer(1), unanimous);

        let majority = majority_colours(&tally);
        let max = tally.max_count();
        for (&colour, &count) in tally.counts() {
            prop_assert_eq!(majority.contains(&colour), count == max);
        }
        let shared = tally.counts().values().filter(|&&n| n == max).count() > 1;
        prop_assert_eq!(majority.len() >= 2, shared);
    }

    // Tie-breaking always lands inside the tied set and is stable per seed.
    #[test]
    fn tie_break_is_member_and_stable(votes in votes_strategy(7), seed in any::<u64>()) {
        let records = records_for(0, &votes);
        let entry = LexiconEntry::from_tally(&tally_votes(&records).unwrap());
        let colour = entry.tie_broken(seed);
        prop_assert!(entry.colours().contains(&colour));
        prop_assert_eq!(entry.tie_broken(seed), colour);
    }

    // write -> read preserves terms and colours exactly, and confidence up to
    // four-digit rounding.
    #[test]
    fn lexicon_round_trips_through_the_file(
        vote_sets in proptest::collection::vec(votes_strategy(7), 1..12)
    ) {
        let entries: Vec<LexiconEntry> = vote_sets
            .iter()
            .enumerate()
            .map(|(i, votes)| LexiconEntry::from_tally(&tally_votes(&records_for(i, votes)).unwrap()))
            .collect();
        let file = NamedTempFile::new().unwrap();
        write_lexicon(&entries, file.path()).unwrap();
        let reread = read_lexicon(file.path()).unwrap();
        prop_assert_eq!(reread.len(), entries.len());
        let by_term: BTreeMap<_, _> = entries.iter().map(|e| (e.term().clone(), e)).collect();
        for entry in &reread {
            let original = by_term[entry.term()];
            prop_assert_eq!(entry.colours(), original.colours());
            prop_assert_eq!(entry.confidence(), round_to_places(original.confidence(), 4));
        }

        // and a canonical file round-trips byte-identically
        let rewritten = NamedTempFile::new().unwrap();
        write_lexicon(&reread, rewritten.path()).unwrap();
        prop_assert_eq!(
            std::fs::read(file.path()).unwrap(),
            std::fs::read(rewritten.path()).unwrap()
        );
    }

    // Permuting thesaurus rows never changes the loaded structure.
    #[test]
    fn thesaurus_loading_is_order_independent(shuffle in proptest::collection::vec(any::<u16>(), 6)) {
        let mut rows = vec![
            "c1\tsleep\tsleep".to_string(),
            "c1\tsleep\tnap".to_string(),
            "c1\tsleep\tdoze".to_string(),
            "c2\ttrees\ttree".to_string(),
            "c2\ttrees\tolive".to_string(),
            "c2\ttrees\tnap".to_string(),
        ];
        let baseline = {
            let mut f = NamedTempFile::new().unwrap();
            writeln!(f, "{}", rows.join("\n")).unwrap();
            load_thesaurus(f.path()).unwrap()
        };
        // deterministic permutation from the generated keys
        let mut keyed: Vec<(u16, String)> = shuffle.into_iter().zip(rows.drain(..)).collect();
        keyed.sort();
        let permuted: Vec<String> = keyed.into_iter().map(|(_, row)| row).collect();
        let mut f = NamedTempFile::new().unwrap();
        writeln!(f, "{}", permuted.join("\n")).unwrap();
        prop_assert_eq!(load_thesaurus(f.path()).unwrap(), baseline);
    }

    // Overall and voted distributions and the majority histogram all sum to
    // exactly 100 as rationals, and to 100 +/- 0.2 after one-decimal rounding.
    #[test]
    fn distributions_normalize(
        vote_sets in proptest::collection::vec(votes_strategy(5), 1..20)
    ) {
        let mut all_records = Vec::new();
        let mut tallies = Vec::new();
        let mut entries = Vec::new();
        for (i, votes) in vote_sets.iter().enumerate() {
            let records = records_for(i, votes);
            let tally = tally_votes(&records).unwrap();
            entries.push(LexiconEntry::from_tally(&tally));
            tallies.push(tally);
            all_records.extend(records);
        }

        let overall = overall_distribution(&all_records).unwrap();
        prop_assert_eq!(overall.total(), Ratio::from_integer(100));
        let voted = voted_distribution(&entries, 7).unwrap();
        prop_assert_eq!(voted.total(), Ratio::from_integer(100));
        let histogram = majority_histogram(&tallies).unwrap();
        prop_assert_eq!(histogram.share().values().sum::<Ratio<i64>>(), Ratio::from_integer(100));

        // each of the 11 cells moves by at most 0.05 under half-even
        // rounding, so the displayed sum can drift by at most 0.55
        for distribution in [&overall, &voted] {
            let rounded: Ratio<i64> = distribution
                .percentages()
                .values()
                .map(|&p| round_to_places(p, 1))
                .sum();
            let drift = (rounded - Ratio::from_integer(100)).abs();
            prop_assert!(drift <= Ratio::new(55, 100), "rounded sum drift {drift}");
        }
    }

    // Filtering already-valid records changes nothing.
    #[test]
    fn filter_valid_is_idempotent(vote_sets in proptest::collection::vec(votes_strategy(5), 1..8)) {
        let mut records = Vec::new();
        let mut key = BTreeMap::new();
        for (i, votes) in vote_sets.iter().enumerate() {
            let group = records_for(i, votes);
            key.insert(group[0].term.clone(), group[0].term.synonym().to_string());
            records.extend(group);
        }
        // flip some answers to wrong ones
        for record in records.iter_mut().step_by(3) {
            record.q1_choice = "wrong".into();
        }
        let (valid, _) = filter_valid(&records, &key).unwrap();
        let (again, report) = filter_valid(&valid, &key).unwrap();
        prop_assert_eq!(&again, &valid);
        prop_assert_eq!(report.discarded_q1, 0);
    }

    // Ambiguity counting: divergent <= ambiguous <= distinct words, under any
    // assignment of sense colours.
    #[test]
    fn sense_divergence_inequalities(
        sense_colours in proptest::collection::vec((0..6usize, colour_strategy()), 1..25),
        seed in any::<u64>(),
    ) {
        let mut entries = Vec::new();
        let mut used = std::collections::BTreeSet::new();
        for (i, (word_index, colour)) in sense_colours.iter().enumerate() {
            let term = TermSense::new(&format!("w{word_index}"), &format!("s{i}")).unwrap();
            if !used.insert(term.clone()) {
                continue;
            }
            entries.push(
                LexiconEntry::new(term, [*colour].into_iter().collect(), Ratio::new(3, 5)).unwrap(),
            );
        }
        let words: std::collections::BTreeSet<&str> =
            entries.iter().map(|e| e.term().word()).collect();
        let divergence = sense_divergence(&entries, seed);
        prop_assert!(divergence.n_divergent <= divergence.n_ambiguous);
        prop_assert!(divergence.n_ambiguous <= words.len());
        prop_assert_eq!(divergence.n_divergent, divergence.divergent.len());
    }

    // Eligible categories always score within [1/n, 1].
    #[test]
    fn category_strength_bounds(word_colours in proptest::collection::vec(colour_strategy(), 4..10)) {
        let n = word_colours.len();
        let words: Vec<String> = (0..n).map(|i| format!("w{i}")).collect();
        let category = ThesaurusCategory {
            id: "c".into(),
            head: words[0].clone(),
            words: words.iter().cloned().collect(),
        };
        let entries: Vec<LexiconEntry> = word_colours
            .iter()
            .enumerate()
            .map(|(i, &colour)| {
                let synonym = &words[(i + 1) % n];
                LexiconEntry::new(
                    TermSense::new(&words[i], synonym).unwrap(),
                    [colour].into_iter().collect(),
                    Ratio::new(4, 5),
                )
                .unwrap()
            })
            .collect();
        let stats = category_strength(&category, &entries, 3).unwrap();
        prop_assert_eq!(stats.n_lexicon_words, n);
        prop_assert!(stats.strength >= Ratio::new(1, n as i64));
        prop_assert!(stats.strength <= Ratio::from_integer(1));
    }

    // Every signature's percentages sum to exactly 100, in both join modes.
    #[test]
    fn signature_percentages_normalize(
        word_colours in proptest::collection::vec(colour_strategy(), 1..15),
        word_mode in any::<bool>(),
        seed in any::<u64>(),
    ) {
        let entries: Vec<LexiconEntry> = word_colours
            .iter()
            .enumerate()
            .map(|(i, &colour)| {
                LexiconEntry::new(
                    TermSense::new(&format!("w{i}"), &format!("s{i}")).unwrap(),
                    [colour].into_iter().collect(),
                    Ratio::new(3, 5),
                )
                .unwrap()
            })
            .collect();
        let associations: Vec<EmotionAssociation> = (0..word_colours.len())
            .map(|i| EmotionAssociation {
                word: format!("w{i}"),
                label: EmotionLabel::Joy,
                flagged: true,
            })
            .collect();
        let join = if word_mode { JoinUnit::Word } else { JoinUnit::Sense };
        let signature =
            colour_signature(EmotionLabel::Joy, &associations, &entries, join, seed).unwrap();
        prop_assert_eq!(
            signature.percentages.values().sum::<Ratio<i64>>(),
            Ratio::from_integer(100)
        );
        let rounded: Ratio<i64> = signature
            .percentages
            .values()
            .map(|&p| round_to_places(p, 1))
            .sum();
        let drift = (rounded - Ratio::from_integer(100)).abs();
        prop_assert!(drift <= Ratio::new(55, 100));
    }

    // Grouping is insensitive to record order.
    #[test]
    fn grouping_is_order_independent(
        vote_sets in proptest::collection::vec(votes_strategy(5), 1..8),
        seed in any::<u64>(),
    ) {
        let mut records = Vec::new();
        for (i, votes) in vote_sets.iter().enumerate() {
            records.extend(records_for(i, votes));
        }
        let baseline = group_by_term(&records);
        // deterministic shuffle of the record order
        let mut rng = colourlex::seed::rng_for(seed, "test:grouping");
        use rand::seq::SliceRandom;
        records.shuffle(&mut rng);
        let grouped = group_by_term(&records);
        prop_assert_eq!(grouped.keys().collect::<Vec<_>>(), baseline.keys().collect::<Vec<_>>());
        for (term, group) in &grouped {
            let mut sorted: Vec<_> = group.iter().map(|r| (&r.annotator_id, r.q2_colour)).collect();
            sorted.sort();
            let mut base: Vec<_> = baseline[term].iter().map(|r| (&r.annotator_id, r.q2_colour)).collect();
            base.sort();
            prop_assert_eq!(sorted, base);
        }
    }

    // build_lexicon never emits an entry with fewer votes than the floor, so
    // confidence is always at least 1/votes >= 1/5 under five annotators.
    #[test]
    fn built_entries_respect_the_support_floor(
        vote_sets in proptest::collection::vec(votes_strategy(5), 1..12),
        min in 1..5usize,
    ) {
        let mut records = Vec::new();
        for (i, votes) in vote_sets.iter().enumerate() {
            records.extend(records_for(i, votes));
        }
        let (entries, _) = build_lexicon(&records, min).unwrap();
        let groups = group_by_term(&records);
        for entry in &entries {
            let votes = groups[entry.term()].len();
            prop_assert!(votes >= min);
            prop_assert!(entry.confidence() >= Ratio::new(1, votes as i64));
        }
    }
}
