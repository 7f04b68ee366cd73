//! Write and read layout files, the format shared with the typing trainer.
//!
//! cargo run --example layout_files

use keypad_layout::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> keypad_layout::Result<()> {
    let set = MultigramSet {
        members: ["an", "at", "ha", "he", "in", "ing", "me", "ng", "ou", "th", "the", "to", "yo", "you"].map(String::from).to_vec(),
        fitness: f64::NAN,
    };
    let table = SymbolTable::with_multigrams(&set)?;
    let mut layout = table.to_layout(&Genome::random(&mut ChaCha8Rng::seed_from_u64(5)));
    let dead = deprecated_set(&layout);
    layout.set_deprecated_flags(&dead);
    layout.charset = CharsetPolicy::default().specials_string();

    let path = std::env::temp_dir().join("keypad_example_layout.json");
    layout.save(&path)?;
    let back = Layout::load(&path)?;
    assert_eq!(back, layout);
    println!("wrote {} ({} symbols, {} deprecated)", path.display(), back.len(), dead.len());

    let broken = back.to_json()?.replacen("\"row\": 1", "\"row\": 4", 1);
    match Layout::from_json(&broken) {
        Err(e) => println!("edited copy rejected: {e}"),
        Ok(_) => println!("edited copy still valid"),
    }
    Ok(())
}
