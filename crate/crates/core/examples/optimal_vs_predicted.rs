//! Compares the welfare-maximising structure (exhaustive search) with the
//! coalition size the distance rule predicts, for a few symmetric games.
//!
//!     cargo run --example optimal_vs_predicted

use coalition_evo::{
    optimal_structure, predict, BellTable, CharacteristicFunction, EnumerationCap, SymmetricWorth,
    DEFAULT_TIE_TOLERANCE,
};

fn main() -> Result<(), coalition_evo::CoalitionError> {
    let games: [(&str, Vec<f64>); 4] = [
        ("pairs pay", vec![0.0, 1.0, 1.0]),
        ("superadditive", vec![1.0, 4.0, 9.0, 16.0]),
        ("congested", vec![1.0, 2.5, 3.0, 3.2, 3.3]),
        ("additive", vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0]),
    ];
    for (label, by_size) in games {
        let worth = SymmetricWorth::new(by_size)?;
        let bell = BellTable::new(worth.m());
        let best = optimal_structure(
            &CharacteristicFunction::from_symmetric(&worth)?,
            EnumerationCap::DEFAULT,
        )?;
        let report = predict(&worth, &bell, DEFAULT_TIE_TOLERANCE)?;
        println!(
            "{label:<14} m={}  optimum {:?} worth {:.2}  | predicted size {} (argmin {:?}){}",
            worth.m(),
            best.blocks,
            best.total_worth,
            report.chosen_size,
            report.argmin_set,
            report.note.map(|n| format!("  [{n}]")).unwrap_or_default()
        );
    }
    Ok(())
}
