//! Command-line entry point: one binary, four pipeline stages communicating
//! only through the documented TSV/JSON files.

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use num::rational::Ratio;

use crate::aggregation::{aggregate, group_by_term, sense_divergence};
use crate::agreement::{
    bk_order_agreement, chance_all_distinct, majority_histogram, overall_distribution,
    voted_distribution,
};
use crate::category::{census_of, eligible_category_stats, imageability_correlation, scatter_export};
use crate::emotion::{signature_table, JoinUnit};
use crate::error::{Error, Result};
use crate::lexicon::tally_votes;
use crate::questionnaire::{answer_key, export_tasks, generate_tasks, import_tasks};
use crate::ratio::{parse_decimal, to_f64};
use crate::report::{
    distribution_map, write_census_table, write_distribution_table, write_divergence_table,
    write_histogram_table, write_report, write_signature_table, AmbiguitySection, AnalysisReport,
    BkOrderSection, CategoriesSection, ChanceBaseline, CorrelationSection, HistogramSection,
    SignatureSection,
};
use crate::io;
use crate::seed::derive_seed;
use crate::sim::{load_latent_terms, load_profiles, simulate};

#[derive(Debug, Parser)]
#[command(
    name = "colourlex",
    version,
    about = "Word-colour association lexicon pipeline"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum JoinUnitArg {
    Sense,
    Word,
}

impl From<JoinUnitArg> for JoinUnit {
    fn from(arg: JoinUnitArg) -> JoinUnit {
        match arg {
            JoinUnitArg::Sense => JoinUnit::Sense,
            JoinUnitArg::Word => JoinUnit::Word,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate annotation tasks from a thesaurus and a term list.
    GenTasks {
        #[arg(long)]
        thesaurus: PathBuf,
        /// Term pairs, `word<TAB>synonym` per row.
        #[arg(long)]
        terms: PathBuf,
        /// Output task TSV.
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        seed: u64,
    },
    /// Gate annotations against the task answer key and build the lexicon.
    Build {
        #[arg(long)]
        annotations: PathBuf,
        /// Task file carrying the answer key in its seventh column.
        #[arg(long)]
        tasks: PathBuf,
        #[arg(long)]
        out_lexicon: PathBuf,
        #[arg(long)]
        out_rejects: PathBuf,
        /// Where to write the Q1-surviving records for later analysis.
        #[arg(long)]
        out_valid: Option<PathBuf>,
        /// Where to write the gate report JSON; stdout when omitted.
        #[arg(long)]
        out_gate: Option<PathBuf>,
        /// Minimum valid annotations per kept term.
        #[arg(long, default_value_t = 3)]
        min_annotations: usize,
        /// Accepted for interface uniformity; the gate is deterministic.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run all analyses over a built lexicon and write the report.
    Analyze {
        #[arg(long)]
        lexicon: PathBuf,
        /// Valid (gate-surviving) annotation records.
        #[arg(long)]
        annotations: Option<PathBuf>,
        #[arg(long)]
        thesaurus: Option<PathBuf>,
        #[arg(long)]
        imageability: Option<PathBuf>,
        #[arg(long)]
        emotions: Option<PathBuf>,
        /// Gate report JSON from `build`, inlined into the report.
        #[arg(long)]
        gate: Option<PathBuf>,
        /// Output report JSON.
        #[arg(long)]
        report: PathBuf,
        /// Directory for table TSVs; defaults to the report's directory.
        #[arg(long)]
        tables_dir: Option<PathBuf>,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 5)]
        annotators_per_term: usize,
        /// Strength at or above which a category counts as strong.
        #[arg(long, default_value = "0.5")]
        strong_threshold: String,
        #[arg(long, value_enum, default_value_t = JoinUnitArg::Sense)]
        join_unit: JoinUnitArg,
    },
    /// Synthesize crowd annotations from latent terms and annotator profiles.
    Simulate {
        /// Latent truth, `word<TAB>synonym<TAB>colour|-<TAB>strength` per row.
        #[arg(long)]
        latent: PathBuf,
        /// Profiles, `annotator_id<TAB>q1_error_rate<TAB>colour_fidelity`.
        #[arg(long)]
        profiles: PathBuf,
        #[arg(long)]
        out_annotations: PathBuf,
        #[arg(long)]
        out_tasks: PathBuf,
        #[arg(long, default_value_t = 5)]
        annotators_per_term: usize,
        #[arg(long)]
        seed: u64,
    },
}

/// Every `Error` stems from user-supplied inputs, paths, or flags, so all map
/// to the input-error exit code. Internal failures are panics, mapped to 1 in
/// `main`.
pub fn exit_code(_error: &Error) -> i32 {
    2
}

pub fn execute(cli: Cli) -> Result<()> {
    match cli.command {
        Command::GenTasks {
            thesaurus,
            terms,
            out,
            seed,
        } => cmd_gen_tasks(&thesaurus, &terms, &out, seed),
        Command::Build {
            annotations,
            tasks,
            out_lexicon,
            out_rejects,
            out_valid,
            out_gate,
            min_annotations,
            seed: _,
        } => cmd_build(
            &annotations,
            &tasks,
            &out_lexicon,
            &out_rejects,
            out_valid.as_deref(),
            out_gate.as_deref(),
            min_annotations,
        ),
        Command::Analyze {
            lexicon,
            annotations,
            thesaurus,
            imageability,
            emotions,
            gate,
            report,
            tables_dir,
            seed,
            annotators_per_term,
            strong_threshold,
            join_unit,
        } => cmd_analyze(AnalyzeArgs {
            lexicon,
            annotations,
            thesaurus,
            imageability,
            emotions,
            gate,
            report,
            tables_dir,
            seed,
            annotators_per_term,
            strong_threshold,
            join_unit: join_unit.into(),
        }),
        Command::Simulate {
            latent,
            profiles,
            out_annotations,
            out_tasks,
            annotators_per_term,
            seed,
        } => cmd_simulate(
            &latent,
            &profiles,
            &out_annotations,
            &out_tasks,
            annotators_per_term,
            seed,
        ),
    }
}

fn cmd_gen_tasks(thesaurus: &Path, terms: &Path, out: &Path, seed: u64) -> Result<()> {
    let thesaurus = io::load_thesaurus(thesaurus)?;
    let terms = io::load_terms(terms)?;
    let tasks = generate_tasks(&terms, &thesaurus, derive_seed(seed, "gen-tasks"))?;
    export_tasks(&tasks, out)?;
    log::info!("wrote {} tasks to {}", tasks.len(), out.display());
    Ok(())
}

fn cmd_build(
    annotations: &Path,
    tasks: &Path,
    out_lexicon: &Path,
    out_rejects: &Path,
    out_valid: Option<&Path>,
    out_gate: Option<&Path>,
    min_annotations: usize,
) -> Result<()> {
    let records = io::load_annotations(annotations)?;
    let tasks = import_tasks(tasks)?;
    let key = answer_key(&tasks)?;
    let outcome = aggregate(&records, &key, min_annotations)?;
    io::write_lexicon(&outcome.lexicon, out_lexicon)?;
    crate::aggregation::write_rejects(&outcome.rejects, out_rejects)?;
    if let Some(path) = out_valid {
        io::write_annotations(&outcome.valid, path)?;
    }
    let mut gate_json = serde_json::to_string_pretty(&outcome.report)
        .map_err(|e| Error::InvalidArgument(format!("gate report serialization failed: {e}")))?;
    gate_json.push('\n');
    match out_gate {
        Some(path) => std::fs::write(path, gate_json).map_err(|e| Error::io(path, e))?,
        None => print!("{gate_json}"),
    }
    log::info!(
        "kept {} entries; discarded {} of {} records at the gold question",
        outcome.lexicon.len(),
        outcome.report.discarded_q1,
        outcome.report.total_records
    );
    Ok(())
}

struct AnalyzeArgs {
    lexicon: PathBuf,
    annotations: Option<PathBuf>,
    thesaurus: Option<PathBuf>,
    imageability: Option<PathBuf>,
    emotions: Option<PathBuf>,
    gate: Option<PathBuf>,
    report: PathBuf,
    tables_dir: Option<PathBuf>,
    seed: u64,
    annotators_per_term: usize,
    strong_threshold: String,
    join_unit: JoinUnit,
}

fn cmd_analyze(args: AnalyzeArgs) -> Result<()> {
    let lexicon = io::read_lexicon(&args.lexicon)?;
    let strong_threshold: Ratio<i64> = parse_decimal(&args.strong_threshold)?;
    let tables_dir = match &args.tables_dir {
        Some(dir) => dir.clone(),
        None => args
            .report
            .parent()
            .filter(|p| !p.as_os_str().is_empty())
            .map(Path::to_path_buf)
            .unwrap_or_else(|| PathBuf::from(".")),
    };
    std::fs::create_dir_all(&tables_dir).map_err(|e| Error::io(&tables_dir, e))?;
    // one tie-break stream for every analysis, as one run breaks ties once
    let analysis_seed = derive_seed(args.seed, "analyze");

    let mut report = AnalysisReport::default();

    if let Some(path) = &args.gate {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let value: serde_json::Value = serde_json::from_str(&text)
            .map_err(|e| Error::InvalidArgument(format!("{}: invalid gate JSON: {e}", path.display())))?;
        report.gate = Some(value);
    } else {
        log::warn!("no --gate file; report will lack the `gate` section");
    }

    // sections over the valid annotation records
    let mut overall = None;
    if let Some(path) = &args.annotations {
        let records = io::load_annotations(path)?;
        let dist = overall_distribution(&records)?;
        report.overall = Some(distribution_map(&dist));
        overall = Some(dist);

        let kept: std::collections::BTreeSet<_> =
            lexicon.iter().map(|e| e.term().clone()).collect();
        let tallies: Vec<_> = group_by_term(&records)
            .into_iter()
            .filter(|(term, _)| kept.contains(term))
            .map(|(_, group)| tally_votes(&group))
            .collect::<Result<_>>()?;
        if tallies.is_empty() {
            log::warn!("no annotation groups match lexicon terms; skipping histogram");
        } else {
            let histogram = majority_histogram(&tallies)?;
            write_histogram_table(&histogram, &tables_dir.join("majority_histogram.tsv"))?;
            report.majority_histogram = Some(HistogramSection::from_histogram(&histogram));
        }
    } else {
        log::warn!("no --annotations file; skipping overall distribution and histogram");
    }

    // sections over the lexicon alone
    let voted = voted_distribution(&lexicon, analysis_seed)?;
    report.voted = Some(distribution_map(&voted));
    let (ordering, tau) = bk_order_agreement(&voted);
    report.bk_tau = Some(BkOrderSection {
        ordering,
        tau: to_f64(tau),
    });
    write_distribution_table(overall.as_ref(), Some(&voted), &tables_dir.join("table1.tsv"))?;

    let chance = chance_all_distinct(args.annotators_per_term, 11)?;
    report.chance_baseline = Some(ChanceBaseline::new(args.annotators_per_term, 11, &chance));

    let divergence = sense_divergence(&lexicon, analysis_seed);
    write_divergence_table(&divergence, &tables_dir.join("divergence.tsv"))?;
    report.ambiguity = Some(AmbiguitySection {
        n_ambiguous: divergence.n_ambiguous,
        n_divergent: divergence.n_divergent,
    });

    // category sections
    if let Some(path) = &args.thesaurus {
        let thesaurus = io::load_thesaurus(path)?;
        let ratings = match &args.imageability {
            Some(path) => Some(io::load_imageability(path)?),
            None => None,
        };
        let stats =
            eligible_category_stats(&thesaurus, &lexicon, ratings.as_ref(), analysis_seed);
        let census = census_of(&stats, thesaurus.len(), strong_threshold);
        write_census_table(&census, strong_threshold, &tables_dir.join("census.tsv"))?;
        report.categories = Some(CategoriesSection {
            census,
            strong_threshold: to_f64(strong_threshold),
        });

        if ratings.is_some() {
            scatter_export(&stats, &tables_dir.join("scatter.tsv"))?;
            match imageability_correlation(&stats) {
                Ok((pearson, spearman, n)) => {
                    report.imageability_correlation = Some(CorrelationSection {
                        n,
                        pearson: Some(pearson),
                        spearman: Some(spearman),
                    });
                }
                Err(e) => {
                    log::warn!("imageability correlation undefined: {e}");
                    let n = stats.iter().filter(|s| s.imageability.is_some()).count();
                    report.imageability_correlation = Some(CorrelationSection {
                        n,
                        pearson: None,
                        spearman: None,
                    });
                }
            }
        } else {
            log::warn!("no --imageability file; skipping scatter and correlation");
        }
    } else {
        log::warn!("no --thesaurus file; skipping category sections");
    }

    // emotion signatures
    if let Some(path) = &args.emotions {
        let associations = io::load_emotion_lexicon(path)?;
        let signatures = signature_table(&associations, &lexicon, args.join_unit, analysis_seed);
        if signatures.is_empty() {
            log::warn!("emotion lexicon shares no words with the colour lexicon");
        }
        write_signature_table(&signatures, &tables_dir.join("signatures.tsv"))?;
        report.emotions = Some(signatures.iter().map(SignatureSection::from_signature).collect());
    } else {
        log::warn!("no --emotions file; report will lack the `emotions` section");
    }

    write_report(&report, &args.report)?;
    log::info!("wrote report to {}", args.report.display());
    Ok(())
}

fn cmd_simulate(
    latent: &Path,
    profiles: &Path,
    out_annotations: &Path,
    out_tasks: &Path,
    annotators_per_term: usize,
    seed: u64,
) -> Result<()> {
    let latent = load_latent_terms(latent)?;
    let profiles = load_profiles(profiles)?;
    let output = simulate(
        &latent,
        &profiles,
        annotators_per_term,
        derive_seed(seed, "simulate"),
    )?;
    io::write_annotations(&output.records, out_annotations)?;
    export_tasks(&output.tasks, out_tasks)?;
    log::info!(
        "simulated {} records over {} terms",
        output.records.len(),
        latent.len()
    );
    Ok(())
}

