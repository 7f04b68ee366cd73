//! Rank-sum test of optimized costs with and without multigrams.
//!
//! cargo run --release --example significance

use keypad_layout::prelude::*;
use keypad_layout::stats::summarize;

fn main() -> keypad_layout::Result<()> {
    let corpus = normalize(
        &std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/data/casual_english.txt"))?,
        &CharsetPolicy::default(),
    )?;
    let set = select_multigrams(&corpus, &SelectionParams::default())?;
    let params = GaParams { trials: 8, evaluations: 20_000, seed: 42, ..Default::default() };
    let off = Baselines::default();

    let with = multi_trial_optimize(&corpus, &SymbolTable::with_multigrams(&set)?, &params, off, None)?.report.best_totals();
    let without = multi_trial_optimize(&corpus, &SymbolTable::letters_only(), &params, off, None)?.report.best_totals();
    println!("with multigrams    {}", summarize(&with)?.table_cell());
    println!("without multigrams {}", summarize(&without)?.table_cell());

    let r = wilcoxon_rank_sum(&without, &with)?;
    println!("m = {}, n = {}", r.m, r.n);
    println!("W = {}, E(W) = {}, sd(W) = {:.2}, Z = {:.3}, P(Z > z) = {:.2e}", r.w, r.e_w, r.sigma_w, r.z_w, r.p_one_sided);
    Ok(())
}
