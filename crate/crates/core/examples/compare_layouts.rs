//! Cost breakdown of the ABC layout against a random and a hand-tuned layout.
//!
//! cargo run --example compare_layouts

use keypad_layout::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> keypad_layout::Result<()> {
    let corpus = normalize(
        &std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/data/casual_english.txt"))?,
        &CharsetPolicy::default(),
    )?;
    let table = SymbolTable::letters_only();
    let random = table.to_layout(&Genome::random(&mut ChaCha8Rng::seed_from_u64(3)));

    // most frequent letters on stroke 1, alternating sides
    let order = "etoaihnsrldumywcgfbpkvjxqz";
    let keys = [(1, 1), (1, 3), (2, 1), (2, 3), (3, 1), (3, 3), (1, 2), (2, 2), (3, 2), (4, 2)];
    let tuned = Layout::from_placements(
        order.chars().enumerate().map(|(i, c)| (Symbol::letter(c), KeySlot::new(keys[i % 10].0, keys[i % 10].1, (i / 10 + 1) as u8))),
    );
    tuned.validate().map_err(keypad_layout::Error::InvalidLayout)?;

    for w in [FitnessWeights::two_thumb(), FitnessWeights::moradi()] {
        println!("{} metric", w.variant.name());
        println!("  {:<8} | {}", "layout", FitnessBreakdown::TABLE_HEADER);
        for (name, l) in [("abc", abc_baseline()), ("random", random.clone()), ("tuned", tuned.clone())] {
            let b = evaluate(&l, &corpus, &w)?;
            println!("  {:<8} | {}  (distance {:.5})", name, b.table_row(), b.f4);
        }
    }
    Ok(())
}
