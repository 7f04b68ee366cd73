//! Personalized multi-tap keypad layouts.
//!
//! Given a personal text archive, the crate picks frequent multigrams,
//! evolves an arrangement of letters and multigrams on a 10-key phone keypad
//! that minimizes a typing-cost model, and provides the statistics and
//! session scoring used to compare layouts.
//!
//! ```no_run
//! use keypad_layout::prelude::*;
//!
//! let corpus = normalize("see you at the station tonight :)", &CharsetPolicy::default()).unwrap();
//! let abc = abc_baseline();
//! let cost = evaluate(&abc, &corpus, &FitnessWeights::two_thumb()).unwrap();
//! println!("ABC cost {:.3}", cost.total);
//! ```

pub mod cli;
pub mod corpus;
pub mod error;
pub mod keypad;
pub mod layout_ga;
pub mod multigram;
pub mod session;
pub mod stats;
pub mod typing;

pub use error::{Error, Result};

pub mod prelude {
    pub use crate::corpus::{ngram_counts, normalize, rank_candidates, top_candidates, CharsetPolicy, NormalizedCorpus};
    pub use crate::keypad::{abc_baseline, hand_of, key_distance, valid_slots, HandClass, KeySlot, Layout, Symbol};
    pub use crate::layout_ga::{
        between, between_crossover, multi_trial_optimize, mutate_genome, steady_state_run, Baselines, GaParams,
        Genome, MutationKind, SymbolTable, TrialReport,
    };
    pub use crate::multigram::{rank_shift_fitness, select_multigrams, MultigramSet, SelectionParams};
    pub use crate::session::{levenshtein, score_session, SessionFile, SessionRecord};
    pub use crate::stats::{summarize, wilcoxon_rank_sum};
    pub use crate::typing::{deprecated_set, evaluate, segment, Evaluator, FitnessBreakdown, FitnessWeights, Metric};
}
