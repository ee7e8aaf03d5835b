//! Loads a game file (by-size or explicit coalitions), reduces it to per-size
//! worths and prints the prediction report as JSON.
//!
//!     cargo run --example game_from_json -- crates/core/examples/games/kannai_explicit.json

use std::path::PathBuf;

use coalition_evo::cli::GameInput;
use coalition_evo::{predict, BellTable, DEFAULT_SYMMETRY_TOLERANCE, DEFAULT_TIE_TOLERANCE};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| {
            PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("examples/games/kannai_explicit.json")
        });
    let game = GameInput::load(&path)?;
    let worth = game
        .worth_input()?
        .to_symmetric(DEFAULT_SYMMETRY_TOLERANCE)?;
    println!("per-size worths {:?}", worth.by_size());
    let report = predict(&worth, &BellTable::new(worth.m()), DEFAULT_TIE_TOLERANCE)?;
    println!("{}", serde_json::to_string_pretty(&report)?);
    Ok(())
}
