//! A toolkit for building and analysing a word-colour association lexicon.
//!
//! The pipeline has four stages, each replayable in isolation via TSV/JSON
//! files:
//!
//! 1. [`questionnaire`] generates two-question annotation tasks: a gold
//!    word-choice question whose answer is the sense-pinning near-synonym,
//!    and a colour question over the eleven basic colour terms.
//! 2. [`aggregation`] gates crowd responses on the gold question, drops
//!    under-annotated terms, and majority-votes the rest into a lexicon of
//!    `(word, synonym) -> colour(s), confidence` entries.
//! 3. [`agreement`], [`category`], and [`emotion`] analyse the result:
//!    colour distributions against the Berlin-Kay order, majority-class
//!    histograms and the independence chance baseline, category association
//!    strength and its correlation with imageability, and colour signatures
//!    of emotion words.
//! 4. [`sim`] synthesizes a crowd with known ground truth so the whole
//!    pipeline can be validated without real annotators.
//!
//! All statistics are exact rationals until the reporting boundary; all
//! randomness is derived from labeled sub-seeds of a single root seed.

pub mod aggregation;
pub mod agreement;
pub mod category;
pub mod cli;
pub mod colour;
pub mod emotion;
pub mod error;
pub mod io;
pub mod lexicon;
pub mod questionnaire;
pub mod ratio;
pub mod report;
pub mod seed;
pub mod sim;
pub mod stats;
pub mod thesaurus;

pub use colour::Colour;
pub use error::{Error, Result};
pub use lexicon::{AnnotationRecord, LexiconEntry, TermSense, VoteTally};
