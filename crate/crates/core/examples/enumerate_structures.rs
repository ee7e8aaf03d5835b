//! Lists every coalition structure of `m` outsiders, labelled a, b, c, …
//!
//!     cargo run --example enumerate_structures -- 4

use coalition_evo::{enumerate_partitions, EnumerationCap};

fn main() -> Result<(), coalition_evo::CoalitionError> {
    let m: usize = std::env::args()
        .nth(1)
        .and_then(|a| a.parse().ok())
        .unwrap_or(3);
    let name = |agent: usize| char::from(b'a' + (agent % 26) as u8);
    for (i, partition) in enumerate_partitions(m, EnumerationCap::from_env())?.enumerate() {
        let blocks: Vec<String> = partition
            .blocks()
            .iter()
            .map(|b| {
                format!(
                    "{{{}}}",
                    b.iter()
                        .map(|&a| name(a).to_string())
                        .collect::<Vec<_>>()
                        .join(",")
                )
            })
            .collect();
        println!(
            "{:>4}  [{}]  {}   agent a in a coalition of size {}",
            i + 1,
            partition,
            blocks.join(" "),
            partition.block_size_of(0)
        );
    }
    Ok(())
}
