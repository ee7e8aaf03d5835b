//! Runs both replicator variants from the structure-uniform start and prints
//! a coarse trajectory for each, plus the rest-point diagnostics at the end.
//!
//!     cargo run --example replicator_modes

use coalition_evo::{
    initial_frequencies, integrate, rest_point_check, BellTable, DynamicsConfig, DynamicsMode,
    SymmetricWorth,
};

fn main() -> Result<(), coalition_evo::CoalitionError> {
    let bell = BellTable::new(3);
    let worth = SymmetricWorth::new(vec![0.0, 1.0, 1.0])?;
    let start = initial_frequencies(3, &bell);

    for mode in [
        DynamicsMode::PaperConstantAverage,
        DynamicsMode::FrequencyWeighted,
    ] {
        let config = DynamicsConfig {
            mode,
            step_size: 0.01,
            horizon: 40.0,
            record_every: 500,
        };
        let trajectory = integrate(&start, &worth, &config, &bell)?;
        println!("mode {mode}:");
        for state in &trajectory.states {
            println!(
                "  t={:>5.1}  x={:.6?}  sum={:.4}",
                state.time,
                state.frequencies,
                state.simplex_sum()
            );
        }
        let check = rest_point_check(trajectory.final_state(), &worth, mode, &bell, 1e-6)?;
        println!("  rest point: {}", check.is_rest_point);
        for s in &check.strategies {
            println!(
                "    size {}: {:?}, payoff gap {:+.4}",
                s.size, s.status, s.payoff_gap
            );
        }
        if let Some(drift) = trajectory.max_step_drift {
            println!("  largest per-step simplex drift {drift:.2e}");
        }
    }
    Ok(())
}
