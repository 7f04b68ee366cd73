//! Scoring of recorded typing sessions.
//!
//! Speed is characters per minute over the target text, with one second added
//! per unit of edit distance between target and typed text.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Seconds charged per unit of edit distance.
pub const TYPO_PENALTY_SECONDS: f64 = 1.0;

/// Unit-cost Levenshtein distance over Unicode scalar values.
pub fn levenshtein(a: &str, b: &str) -> usize {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    let mut row: Vec<usize> = (0..=b.len()).collect();
    for (i, ca) in a.iter().enumerate() {
        let mut diag = row[0];
        row[0] = i + 1;
        for (j, cb) in b.iter().enumerate() {
            let sub = diag + usize::from(ca != cb);
            diag = row[j + 1];
            row[j + 1] = sub.min(row[j] + 1).min(diag + 1);
        }
    }
    row[b.len()]
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SessionRecord {
    pub target: String,
    pub typed: String,
    pub elapsed_ms: i64,
    #[serde(default)]
    pub layout_id: String,
    #[serde(default)]
    pub timestamp: Option<String>,
    #[serde(default)]
    pub subject_id: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SessionScore {
    pub edit_distance: usize,
    pub effective_seconds: f64,
    pub cpm: f64,
}

pub fn score_session(rec: &SessionRecord) -> Result<SessionScore> {
    if rec.elapsed_ms <= 0 {
        return Err(Error::InvalidRecord(format!("elapsed_ms must be positive, got {}", rec.elapsed_ms)));
    }
    if rec.target.is_empty() {
        return Err(Error::InvalidRecord("empty target text".into()));
    }
    let edit_distance = levenshtein(&rec.target, &rec.typed);
    let effective_seconds = rec.elapsed_ms as f64 / 1000.0 + edit_distance as f64 * TYPO_PENALTY_SECONDS;
    let cpm = 60.0 * rec.target.chars().count() as f64 / effective_seconds;
    Ok(SessionScore { edit_distance, effective_seconds, cpm })
}

/// One message inside a session file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SessionEntry {
    pub target: String,
    pub typed: String,
    pub elapsed_ms: i64,
    #[serde(default)]
    pub timestamp: Option<String>,
}

/// The document the trainer exports: all messages typed by one subject on
/// one layout.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SessionFile {
    pub layout_id: String,
    pub subject_id: String,
    pub sessions: Vec<SessionEntry>,
}

impl SessionFile {
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)?;
        serde_json::from_str(&text).map_err(|e| Error::Malformed { path: path.to_owned(), reason: e.to_string() })
    }

    pub fn records(&self) -> impl Iterator<Item = SessionRecord> + '_ {
        self.sessions.iter().map(|e| SessionRecord {
            target: e.target.clone(),
            typed: e.typed.clone(),
            elapsed_ms: e.elapsed_ms,
            layout_id: self.layout_id.clone(),
            timestamp: e.timestamp.clone(),
            subject_id: self.subject_id.clone(),
        })
    }

    pub fn score(&self) -> Result<SessionReport> {
        let messages = self.records().map(|r| score_session(&r)).collect::<Result<Vec<_>>>()?;
        let mean_cpm = if messages.is_empty() {
            None
        } else {
            Some(messages.iter().map(|s| s.cpm).sum::<f64>() / messages.len() as f64)
        };
        Ok(SessionReport {
            layout_id: self.layout_id.clone(),
            subject_id: self.subject_id.clone(),
            messages,
            mean_cpm,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SessionReport {
    pub layout_id: String,
    pub subject_id: String,
    pub messages: Vec<SessionScore>,
    pub mean_cpm: Option<f64>,
}
