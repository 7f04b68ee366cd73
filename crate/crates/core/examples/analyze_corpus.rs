//! N-gram statistics of a text archive and its multigram candidate pool.
//!
//! cargo run --example analyze_corpus [-- path/to/corpus.txt]

use keypad_layout::corpus::{ngram_counts, top_candidates};
use keypad_layout::prelude::*;

fn main() -> keypad_layout::Result<()> {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/data/casual_english.txt").into());
    let corpus = normalize(&std::fs::read_to_string(&path)?, &CharsetPolicy::default())?;

    println!("{path}");
    println!("  sha256 {}", corpus.source_digest());
    println!("  {} characters, {} without spaces, {} words", corpus.char_count_all(), corpus.char_count_layout(), corpus.words().count());

    let unigrams = ngram_counts(&corpus, 1);
    let mut letters: Vec<_> = unigrams.entries.iter().collect();
    letters.sort_by(|a, b| b.1.cmp(a.1).then(a.0.cmp(b.0)));
    let top: Vec<String> = letters.iter().take(12).map(|(c, n)| format!("{c}:{n}")).collect();
    println!("  most frequent characters: {}", top.join(" "));

    println!("\n rank  gram  count");
    for c in top_candidates(&corpus, 20)? {
        println!(" {:>4}  {:<4} {:>6}", c.rank, c.text, c.count);
    }
    Ok(())
}
