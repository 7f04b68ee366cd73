//! Between-crossover and the five mutations on random genomes.
//!
//! cargo run --release --example genetic_operators

use keypad_layout::keypad::SLOT_COUNT;
use keypad_layout::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let pairs = 20_000;
    let (mut fallbacks, mut with_fallback, mut max_iter) = (0, 0, 0);
    for _ in 0..pairs {
        let (a, b) = (Genome::random(&mut rng), Genome::random(&mut rng));
        let (child, trace) = between_crossover(&a, &b, &mut rng);
        assert!(child.is_permutation());
        fallbacks += trace.fallback_used();
        with_fallback += usize::from(trace.fallback_used() > 0);
        max_iter = max_iter.max(trace.selection_iterations);
    }
    println!("{pairs} crossovers");
    println!("  genes placed by fallback: {fallbacks} of {} ({:.4}%)", pairs * SLOT_COUNT, 100.0 * fallbacks as f64 / (pairs * SLOT_COUNT) as f64);
    println!("  children with any fallback: {with_fallback}");
    println!("  max selection iterations: {max_iter}");

    let g = Genome::random(&mut rng);
    for kind in MutationKind::ALL {
        let mut m = g;
        mutate_genome(&mut m, kind, &mut rng);
        let moved = g.occupants().iter().zip(m.occupants()).filter(|(x, y)| x != y).count();
        println!("  {kind:?}: {moved} genes moved");
    }
}
