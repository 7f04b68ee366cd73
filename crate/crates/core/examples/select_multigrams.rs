//! Pick the 14 multigrams that most reshape the letter-frequency ranking.
//!
//! cargo run --release --example select_multigrams [-- corpus.txt [seed]]

use keypad_layout::multigram::run_selection;
use keypad_layout::prelude::*;

fn main() -> keypad_layout::Result<()> {
    let mut args = std::env::args().skip(1);
    let path = args.next().unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/data/casual_english.txt").into());
    let seed = args.next().and_then(|s| s.parse().ok()).unwrap_or(0);
    let corpus = normalize(&std::fs::read_to_string(path)?, &CharsetPolicy::default())?;

    let params = SelectionParams { seed, ..Default::default() };
    let run = run_selection(&corpus, &params)?;
    for step in [0, 10, 100, params.iterations - 1] {
        println!("iteration {step:>4}: best rank shift {}", run.history[step]);
    }
    println!("{} distinct sets scored", run.evaluations);
    println!("selected: {}", run.best.members.join(" "));
    Ok(())
}
