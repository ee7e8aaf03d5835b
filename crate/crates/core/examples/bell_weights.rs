//! Bell numbers and the coalition-size counts behind the average worth.
//!
//!     cargo run --example bell_weights -- 6

use coalition_evo::{partition_stats, BellTable};

fn main() {
    let m: usize = std::env::args()
        .nth(1)
        .and_then(|a| a.parse().ok())
        .unwrap_or(5);
    let bell = BellTable::new(m.max(30));
    println!("Bell numbers:");
    for i in 0..=m.max(30) {
        if i <= m || i % 5 == 0 {
            println!("  B_{i:<3} = {}", bell.get(i));
        }
    }

    let stats = partition_stats(m, &bell);
    println!("\n{m} outsiders, {} coalition structures", bell.get(m));
    println!("  k   w_k (size-k coalitions)   c_k (structures with agent 0 in a size-k coalition)");
    for k in 1..=m {
        println!(
            "  {k:<3} {:<25} {}",
            stats.multiplicity[k - 1],
            stats.choice_counts[k - 1]
        );
    }
}
