//! How a sentence is split into key presses, and what each cost term counts.
//!
//! cargo run --example segmentation

use keypad_layout::prelude::*;

fn main() -> keypad_layout::Result<()> {
    let mut placements: Vec<(Symbol, KeySlot)> =
        abc_baseline().placements().iter().map(|p| (p.symbol.clone(), p.slot)).collect();
    placements.push((Symbol::new("the"), KeySlot::new(1, 1, 1)));
    placements.push((Symbol::new("th"), KeySlot::new(1, 1, 2)));
    placements.push((Symbol::new("ing"), KeySlot::new(1, 1, 3)));
    placements.push((Symbol::new("he"), KeySlot::new(1, 1, 4)));
    let layout = Layout::from_placements(placements);

    let corpus = normalize("They think the thing is here.", &CharsetPolicy::default())?;
    let seg = segment(&corpus, &layout);
    println!("text: {:?}", corpus.text());
    for item in &seg.items {
        println!(
            "  {:<4} {}{}  {:?}",
            item.symbol.as_str(),
            item.slot,
            if item.run_start { "  (new run)" } else { "" },
            hand_of(item.slot)
        );
    }
    println!("skipped: {:?}", seg.breaks);
    println!("deprecated: {:?}", deprecated_set(&layout));

    let b = evaluate(&layout, &corpus, &FitnessWeights::two_thumb())?;
    println!("C = {}; {}", seg.covered_chars, FitnessBreakdown::TABLE_HEADER);
    println!("        {}", b.table_row());
    Ok(())
}
