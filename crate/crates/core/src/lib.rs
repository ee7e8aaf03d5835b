//! Evolutionary prediction of the coalition structure formed by the outsiders
//! of a deviating coalition.
//!
//! When a set `S` of agents leaves the grand coalition, the remaining
//! `m = n - s` outsiders reorganise into one of `B_m` coalition structures
//! (`B_m` is the `m`-th Bell number). Assuming interchangeable agents, an
//! outsider's choice reduces to the *size* of the coalition it joins. This crate
//! provides:
//!
//! * exact Bell numbers, binomials and set-partition enumeration ([`combinatorics`]);
//! * characteristic functions and their symmetric per-size reduction ([`worth`]);
//! * the Bell-weighted average worth, the equilibrium hyperplane system and the
//!   minimum-distance prediction rule ([`predictor`]);
//! * replicator dynamics over the size-grouped strategies ([`replicator`]);
//! * brute-force ground truth at desk scale ([`oracle`]);
//! * a JSON-speaking command line front end ([`cli`]).
//!
//! ```
//! use coalition_evo::{BellTable, SymmetricWorth, predict, DEFAULT_TIE_TOLERANCE};
//!
//! let bell = BellTable::new(3);
//! let worth = SymmetricWorth::new(vec![0.0, 1.0, 1.0]).unwrap();
//! let report = predict(&worth, &bell, DEFAULT_TIE_TOLERANCE).unwrap();
//! assert_eq!(report.chosen_size, 3);
//! ```

pub mod cli;
pub mod combinatorics;
mod error;
pub mod oracle;
pub mod predictor;
pub mod replicator;
pub mod worth;

pub use combinatorics::{
    binomial, enumerate_partitions, partition_stats, BellTable, EnumerationCap, PartitionCursor,
    PartitionStats, Partitions, SetPartition,
};
pub use error::{CoalitionError, Result};
pub use oracle::{
    brute_force_average, brute_force_multiplicities, optimal_structure, verify, OptimalStructure,
    VerificationReport,
};
pub use predictor::{
    average_worth, distances, hyperplane_system, predict, predict_with_system, residuals,
    HyperplaneSystem, PredictionReport, DEFAULT_TIE_TOLERANCE,
};
pub use replicator::{
    initial_frequencies, integrate, rest_point_check, uniform_over_groups, vector_field,
    DynamicsConfig, DynamicsMode, ReplicatorState, RestPointReport, Trajectory,
};
pub use worth::{
    per_capita, reduce_to_symmetric, CharacteristicFunction, SymmetricWorth, WorthInput,
    DEFAULT_SYMMETRY_TOLERANCE,
};
