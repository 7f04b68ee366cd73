//! Score a trainer session file: edit distance, penalized time and CPM.
//!
//! cargo run --example score_sessions [-- sessions.json]

use keypad_layout::prelude::*;

fn main() -> keypad_layout::Result<()> {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/tests/fixtures/sessions_abc.json").into());
    let file = SessionFile::load(&path)?;
    println!("layout {}, subject {}", file.layout_id, file.subject_id);
    for record in file.records() {
        let s = score_session(&record)?;
        println!("  {:<24} d={}  {:>6.2} s  {:>6.2} CPM", format!("{:?}", record.target), s.edit_distance, s.effective_seconds, s.cpm);
    }
    if let Some(mean) = file.score()?.mean_cpm {
        println!("mean {mean:.2} CPM");
    }
    println!("levenshtein(kitten, sitting) = {}", levenshtein("kitten", "sitting"));
    Ok(())
}
