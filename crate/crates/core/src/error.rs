use std::path::PathBuf;

use thiserror::Error;

use crate::keypad::Violation;

#[derive(Debug, Error)]
pub enum Error {
    #[error("corpus is empty after normalization")]
    EmptyCorpus,

    #[error("need at least {needed} distinct bigrams/trigrams, corpus has {found}")]
    InsufficientCandidates { needed: usize, found: usize },

    #[error("segmentation covers no characters")]
    EmptySegmentation,

    #[error("sample is empty")]
    EmptySample,

    #[error("invalid session record: {0}")]
    InvalidRecord(String),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("layout violates {} constraint(s): {}", .0.len(), join_violations(.0))]
    InvalidLayout(Vec<Violation>),

    #[error("malformed file {path}: {reason}")]
    Malformed { path: PathBuf, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn join_violations(v: &[Violation]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
