//! Closed forms stay exact far beyond what enumeration can reach: predicts for
//! 150 outsiders, where B_150 has more than 180 digits.
//!
//!     cargo run --release --example large_population

use coalition_evo::predictor::hyperplane_system;
use coalition_evo::{predict_with_system, BellTable, SymmetricWorth, DEFAULT_TIE_TOLERANCE};

fn main() -> Result<(), coalition_evo::CoalitionError> {
    let m = 150;
    let bell = BellTable::new(m);
    println!("B_{m} has {} digits", bell.get(m).to_str_radix(10).len());
    let system = hyperplane_system(m, &bell);

    // economies of scale that saturate around size 12
    let worth = SymmetricWorth::new(
        (1..=m)
            .map(|k| k as f64 * (1.0 - (-(k as f64) / 12.0).exp()))
            .collect(),
    )?;
    let report = predict_with_system(&worth, &system, &bell, DEFAULT_TIE_TOLERANCE)?;
    println!("average worth {:.6}", report.average_worth);
    let mut ranked: Vec<(usize, f64)> = report
        .distances
        .iter()
        .copied()
        .enumerate()
        .map(|(i, d)| (i + 1, d))
        .collect();
    ranked.sort_by(|a, b| a.1.total_cmp(&b.1));
    println!("closest planes:");
    for (k, d) in ranked.iter().take(5) {
        println!("  size {k:>3}: distance {d:.6}");
    }
    println!(
        "predicted size {}{}",
        report.chosen_size,
        report.note.map(|n| format!(" ({n})")).unwrap_or_default()
    );
    Ok(())
}
