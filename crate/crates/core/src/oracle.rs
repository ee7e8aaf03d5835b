//! Brute-force ground truth by walking every coalition structure.
//!
//! Everything here enumerates all `B_m` partitions, so it is limited by the
//! [`EnumerationCap`]. The closed forms in [`crate::combinatorics`] and
//! [`crate::predictor`] are checked against these scans by [`verify`].

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::combinatorics::{
    partition_stats, BellTable, EnumerationCap, PartitionCursor, PartitionStats, SetPartition,
};
use crate::error::{CoalitionError, Result};
use crate::predictor::{average_worth, distances, hyperplane_system};
use crate::worth::{CharacteristicFunction, SymmetricWorth};

/// Relative agreement required between brute-force and closed-form values.
pub const ORACLE_TOLERANCE: f64 = 1e-12;

/// Neumaier-compensated running sum.
#[derive(Debug, Default, Clone, Copy)]
struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    fn add(&mut self, value: f64) {
        let t = self.sum + value;
        if self.sum.abs() >= value.abs() {
            self.compensation += (self.sum - t) + value;
        } else {
            self.compensation += (value - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

fn cursor(m: usize, cap: EnumerationCap) -> Result<PartitionCursor> {
    if m == 0 {
        return Err(CoalitionError::InvalidInput("m must be at least 1".into()));
    }
    cap.check(m)?;
    Ok(PartitionCursor::new(m))
}

/// Mean over all structures of the structure's per-agent worth
/// `Σ_blocks v(|block|) / m`.
pub fn brute_force_average(worth: &SymmetricWorth, cap: EnumerationCap) -> Result<f64> {
    let m = worth.m();
    let mut cursor = cursor(m, cap)?;
    let v = worth.by_size();
    let mut total = CompensatedSum::default();
    let mut structures = 0u64;
    while cursor.advance() {
        let structure: f64 = cursor.block_sizes().iter().map(|&size| v[size - 1]).sum();
        total.add(structure / m as f64);
        structures += 1;
    }
    Ok(total.value() / structures as f64)
}

/// Counts coalition sizes over all structures: every block (multiplicity) and
/// the block holding agent 0 (choice counts).
pub fn brute_force_multiplicities(m: usize, cap: EnumerationCap) -> Result<PartitionStats> {
    let mut cursor = cursor(m, cap)?;
    let mut multiplicity = vec![0u64; m];
    let mut choice_counts = vec![0u64; m];
    while cursor.advance() {
        let sizes = cursor.block_sizes();
        for &size in sizes {
            multiplicity[size - 1] += 1;
        }
        choice_counts[sizes[0] - 1] += 1;
    }
    Ok(PartitionStats {
        m,
        multiplicity: multiplicity.into_iter().map(BigUint::from).collect(),
        choice_counts: choice_counts.into_iter().map(BigUint::from).collect(),
    })
}

/// Best coalition structure found by exhaustive search.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OptimalStructure {
    pub partition: SetPartition,
    pub blocks: Vec<Vec<usize>>,
    pub total_worth: f64,
    pub structures_scanned: u64,
}

/// Structure maximising the summed worth of its coalitions; ties go to the
/// first maximiser in enumeration order.
pub fn optimal_structure(
    cf: &CharacteristicFunction,
    cap: EnumerationCap,
) -> Result<OptimalStructure> {
    let m = cf.m();
    let mut cursor = cursor(m, cap)?;
    let mut masks = vec![0u32; m];
    let mut best: Option<(f64, SetPartition)> = None;
    let mut scanned = 0u64;
    while cursor.advance() {
        scanned += 1;
        masks.iter_mut().for_each(|mask| *mask = 0);
        for (agent, &label) in cursor.labels().iter().enumerate() {
            masks[label] |= 1 << agent;
        }
        let total: f64 = masks[..cursor.num_blocks()]
            .iter()
            .map(|&mask| cf.worth(mask))
            .sum();
        if best.as_ref().is_none_or(|(value, _)| total > *value) {
            best = Some((total, cursor.to_partition()));
        }
    }
    let (total_worth, partition) = best.expect("at least one partition");
    Ok(OptimalStructure {
        blocks: partition.blocks(),
        partition,
        total_worth,
        structures_scanned: scanned,
    })
}

/// `|a - b| <= tol · max(|a|, |b|, scale)`; `scale` is the magnitude of the
/// terms that were summed, so near-cancellations are judged against it.
pub fn agrees(a: f64, b: f64, scale: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(scale)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

/// Outcome of [`verify`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub m: usize,
    pub trials: usize,
    pub seed: u64,
    pub structures: String,
    pub passed: bool,
    pub checks: Vec<CheckOutcome>,
}

/// Random worth vector, uniform on `[-1, 1]` per size.
pub fn random_worth<R: Rng>(m: usize, rng: &mut R) -> SymmetricWorth {
    SymmetricWorth::new((0..m).map(|_| rng.gen_range(-1.0..=1.0)).collect())
        .expect("finite random worths")
}

/// Checks every closed form against enumeration for `m` outsiders, using
/// `trials` seeded random worth vectors for the floating-point identities.
pub fn verify(
    m: usize,
    trials: usize,
    seed: u64,
    cap: EnumerationCap,
) -> Result<VerificationReport> {
    let bell = BellTable::new(m);
    let closed = partition_stats(m, &bell);
    let counted = brute_force_multiplicities(m, cap)?;
    let mut checks = Vec::new();
    let mut push = |name: &str, passed: bool, detail: String| {
        checks.push(CheckOutcome {
            name: name.to_string(),
            passed,
            detail,
        });
    };

    let structures: u64 = counted
        .choice_counts
        .iter()
        .map(|c| c.to_u64().unwrap_or(u64::MAX))
        .sum();
    push(
        "structure_count",
        BigUint::from(structures) == *bell.get(m),
        format!("enumerated {structures}, B_{m} = {}", bell.get(m)),
    );
    push(
        "multiplicity",
        counted.multiplicity == closed.multiplicity,
        format!(
            "enumerated {:?}, closed form {:?}",
            decimal(&counted.multiplicity),
            decimal(&closed.multiplicity)
        ),
    );
    push(
        "choice_counts",
        counted.choice_counts == closed.choice_counts,
        format!(
            "enumerated {:?}, closed form {:?}",
            decimal(&counted.choice_counts),
            decimal(&closed.choice_counts)
        ),
    );
    let weighted: BigUint = closed
        .multiplicity
        .iter()
        .enumerate()
        .map(|(i, w)| w * (i + 1))
        .sum();
    let choice_total: BigUint = closed.choice_counts.iter().sum();
    push(
        "weight_identities",
        weighted == bell.get(m) * m
            && &choice_total == bell.get(m)
            && closed.multiplicity[m - 1] == BigUint::from(1u8),
        format!(
            "sum k*w_k = {weighted}, sum c_k = {choice_total}, w_m = {}",
            closed.multiplicity[m - 1]
        ),
    );

    let system = hyperplane_system(m, &bell);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut average_failures = 0;
    let mut residual_failures = 0;
    let mut distance_failures = 0;
    let mut worst_average = 0.0f64;
    for _ in 0..trials {
        let worth = random_worth(m, &mut rng);
        let scale: f64 = worth.by_size().iter().map(|v| v.abs()).sum::<f64>() / m as f64;
        let closed_average = average_worth(&worth, &bell);
        let brute = brute_force_average(&worth, cap)?;
        worst_average = worst_average.max((closed_average - brute).abs());
        if !agrees(closed_average, brute, scale, ORACLE_TOLERANCE) {
            average_failures += 1;
        }
        let per_capita = worth.per_capita_vector();
        for k in 1..=m {
            let row = system.evaluate(k, worth.by_size());
            let direct = per_capita[k - 1] - closed_average;
            let row_scale: f64 = system.coefficients()[k - 1]
                .iter()
                .zip(worth.by_size())
                .map(|(a, v)| (a * v).abs())
                .sum();
            if !agrees(row, direct, row_scale, ORACLE_TOLERANCE) {
                residual_failures += 1;
            }
        }
        if !system.is_degenerate() {
            let d = distances(&worth, &system)?;
            for k in 1..=m {
                let expected =
                    (per_capita[k - 1] - closed_average).abs() / system.row_norms()[k - 1];
                let row_scale: f64 = system.coefficients()[k - 1]
                    .iter()
                    .zip(worth.by_size())
                    .map(|(a, v)| (a * v).abs())
                    .sum::<f64>()
                    / system.row_norms()[k - 1];
                if !agrees(d[k - 1], expected, row_scale, ORACLE_TOLERANCE) {
                    distance_failures += 1;
                }
            }
        }
    }
    push(
        "average_worth",
        average_failures == 0,
        format!("{average_failures} of {trials} trials disagree; largest gap {worst_average:e}"),
    );
    push(
        "residual_identity",
        residual_failures == 0,
        format!("{residual_failures} of {} rows disagree", trials * m),
    );
    push(
        "distance_consistency",
        distance_failures == 0,
        format!("{distance_failures} distances disagree"),
    );

    let passed = checks.iter().all(|c| c.passed);
    Ok(VerificationReport {
        m,
        trials,
        seed,
        structures: bell.get(m).to_str_radix(10),
        passed,
        checks,
    })
}

fn decimal(values: &[BigUint]) -> Vec<String> {
    values
        .iter()
        .map(|v| {
            if v.is_zero() {
                "0".into()
            } else {
                v.to_str_radix(10)
            }
        })
        .collect()
}
