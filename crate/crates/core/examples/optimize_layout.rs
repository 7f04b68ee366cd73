//! Multi-trial layout optimization, with and without multigrams, against the
//! random and ABC baselines.
//!
//! cargo run --release --example optimize_layout [-- corpus.txt [trials]]

use keypad_layout::prelude::*;

fn main() -> keypad_layout::Result<()> {
    let mut args = std::env::args().skip(1);
    let path = args.next().unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/data/casual_english.txt").into());
    let trials = args.next().and_then(|s| s.parse().ok()).unwrap_or(4);
    let corpus = normalize(&std::fs::read_to_string(path)?, &CharsetPolicy::default())?;

    let set = select_multigrams(&corpus, &SelectionParams::default())?;
    let params = GaParams { trials, seed: 1, ..Default::default() };
    let baselines = Baselines { random: true, abc: true };

    println!("{:<6} | {:<5} | {:<22} | {:<22}", "", "ABC", "Random best / avg", "Optimized best / avg");
    let mut best = None;
    for (name, table) in [("With", SymbolTable::with_multigrams(&set)?), ("W/O", SymbolTable::letters_only())] {
        let opt = multi_trial_optimize(&corpus, &table, &params, baselines, None)?;
        let r = &opt.report;
        println!(
            "{name:<6} | {:<5.2} | {:<22} | {:<22}",
            r.abc.map_or(f64::NAN, |a| a.total),
            r.random.map_or(String::new(), |s| s.table_cell()),
            r.optimized.table_cell()
        );
        best.get_or_insert(opt.best_layout);
    }

    let layout = best.expect("ran with multigrams");
    let dead = deprecated_set(&layout);
    println!("\nbest layout with multigrams (* = deprecated):");
    for row in 1..=4u8 {
        let keys: Vec<String> = (1..=3u8)
            .map(|col| {
                let strokes: Vec<String> = (1..=4u8)
                    .map(|stroke| {
                        let slot = KeySlot::new(row, col, stroke);
                        match layout.placements().iter().find(|p| p.slot == slot) {
                            Some(p) if dead.contains(&p.symbol) => format!("{}*", p.symbol.as_str()),
                            Some(p) => p.symbol.as_str().to_owned(),
                            None => ".".into(),
                        }
                    })
                    .collect();
                format!("{:<16}", strokes.join(" "))
            })
            .collect();
        println!("  {}", keys.join("| "));
    }
    Ok(())
}
