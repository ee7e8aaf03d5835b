//! Exact integer combinatorics over the outsiders: Bell numbers, binomials,
//! set-partition enumeration and the closed-form coalition-size counts.
//!
//! A set partition of `m` agents is stored as a restricted-growth string:
//! `labels[i]` is the block of agent `i`, `labels[0] = 0`, and every label is at
//! most one more than the largest label before it. Each partition has exactly
//! one such encoding, so partition equality is sequence equality.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{CoalitionError, Result};

/// Bell numbers `B_0..=B_max_index`, exact.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BellTable {
    values: Vec<BigUint>,
}

impl BellTable {
    /// Builds the table with the Bell triangle: each row starts with the last
    /// entry of the previous row, and every further entry adds the entry above-left.
    pub fn new(max_index: usize) -> Self {
        let mut values = Vec::with_capacity(max_index + 1);
        let mut row: Vec<BigUint> = vec![BigUint::one()];
        values.push(BigUint::one());
        for _ in 0..max_index {
            let mut next = Vec::with_capacity(row.len() + 1);
            next.push(row[row.len() - 1].clone());
            for above in &row {
                let value = next[next.len() - 1].clone() + above;
                next.push(value);
            }
            values.push(next[0].clone());
            row = next;
        }
        BellTable { values }
    }

    pub fn max_index(&self) -> usize {
        self.values.len() - 1
    }

    /// `B_i`. Panics when `i > max_index`.
    pub fn get(&self, i: usize) -> &BigUint {
        &self.values[i]
    }

    pub fn values(&self) -> &[BigUint] {
        &self.values
    }

    pub fn covers(&self, m: usize) -> bool {
        m <= self.max_index()
    }

    pub(crate) fn require(&self, m: usize) {
        assert!(
            self.covers(m),
            "Bell table covers indices up to {}, but B_{} is required",
            self.max_index(),
            m
        );
    }
}

/// `C(n, k)`, zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        // exact at every step: acc = C(n - k + i + 1, i + 1) after the division
        acc *= n - k + i + 1;
        acc /= i + 1;
    }
    acc
}

/// Largest number of outsiders the enumerating routines will accept.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumerationCap(pub usize);

impl EnumerationCap {
    pub const DEFAULT: EnumerationCap = EnumerationCap(12);
    /// Environment variable consulted by [`EnumerationCap::from_env`].
    pub const ENV_VAR: &'static str = "COALITION_EVO_ENUM_CAP";

    /// The default cap unless `COALITION_EVO_ENUM_CAP` holds a valid integer.
    pub fn from_env() -> Self {
        std::env::var(Self::ENV_VAR)
            .ok()
            .and_then(|raw| raw.trim().parse().ok())
            .map(EnumerationCap)
            .unwrap_or_default()
    }

    pub fn check(self, m: usize) -> Result<()> {
        if m > self.0 {
            let bell = BellTable::new(m).get(m).clone();
            return Err(CoalitionError::EnumerationTooLarge {
                m,
                cap: self.0,
                bell,
            });
        }
        Ok(())
    }
}

impl Default for EnumerationCap {
    fn default() -> Self {
        Self::DEFAULT
    }
}

/// One coalition structure of the `m` outsiders.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct SetPartition {
    labels: Vec<usize>,
}

impl SetPartition {
    /// Validates a restricted-growth string.
    pub fn from_labels(labels: Vec<usize>) -> Result<Self> {
        if labels.is_empty() {
            return Err(CoalitionError::InvalidInput(
                "a partition needs at least one agent".into(),
            ));
        }
        let mut max_seen: Option<usize> = None;
        for (i, &label) in labels.iter().enumerate() {
            let limit = max_seen.map_or(0, |mx| mx + 1);
            if label > limit {
                return Err(CoalitionError::InvalidInput(format!(
                    "label {label} at position {i} breaks restricted growth (limit {limit})"
                )));
            }
            max_seen = Some(max_seen.map_or(label, |mx| mx.max(label)));
        }
        Ok(SetPartition { labels })
    }

    pub fn m(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn num_blocks(&self) -> usize {
        self.labels.iter().max().map_or(0, |mx| mx + 1)
    }

    /// Members of each block, blocks in order of first appearance.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut blocks = vec![Vec::new(); self.num_blocks()];
        for (agent, &label) in self.labels.iter().enumerate() {
            blocks[label].push(agent);
        }
        blocks
    }

    pub fn block_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.num_blocks()];
        for &label in &self.labels {
            sizes[label] += 1;
        }
        sizes
    }

    /// Size of the coalition containing `agent`.
    pub fn block_size_of(&self, agent: usize) -> usize {
        let label = self.labels[agent];
        self.labels.iter().filter(|&&l| l == label).count()
    }
}

impl fmt::Display for SetPartition {
    /// Restricted-growth form, e.g. `0 0 1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, label) in self.labels.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{label}")?;
        }
        Ok(())
    }
}

/// Allocation-free walk over the partitions of `m` agents in lexicographic
/// restricted-growth order. Block sizes are maintained incrementally.
#[derive(Debug, Clone)]
pub struct PartitionCursor {
    labels: Vec<usize>,
    prefix_max: Vec<usize>,
    sizes: Vec<usize>,
    started: bool,
}

impl PartitionCursor {
    /// Panics when `m == 0`; use [`enumerate_partitions`] for checked construction.
    pub fn new(m: usize) -> Self {
        assert!(m >= 1, "a partition cursor needs at least one agent");
        let mut sizes = vec![0; m];
        sizes[0] = m;
        PartitionCursor {
            labels: vec![0; m],
            prefix_max: vec![0; m],
            sizes,
            started: false,
        }
    }

    /// Advances to the next partition; `false` once all have been visited.
    pub fn advance(&mut self) -> bool {
        if !self.started {
            self.started = true;
            return true;
        }
        let m = self.labels.len();
        let Some(pivot) = (1..m)
            .rev()
            .find(|&i| self.labels[i] <= self.prefix_max[i - 1])
        else {
            return false;
        };
        let old = self.labels[pivot];
        self.sizes[old] -= 1;
        self.labels[pivot] = old + 1;
        self.sizes[old + 1] += 1;
        self.prefix_max[pivot] = self.prefix_max[pivot - 1].max(old + 1);
        for j in pivot + 1..m {
            let old = self.labels[j];
            self.sizes[old] -= 1;
            self.sizes[0] += 1;
            self.labels[j] = 0;
            self.prefix_max[j] = self.prefix_max[pivot];
        }
        true
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn num_blocks(&self) -> usize {
        self.prefix_max[self.labels.len() - 1] + 1
    }

    /// Sizes of blocks `0..num_blocks()`.
    pub fn block_sizes(&self) -> &[usize] {
        &self.sizes[..self.num_blocks()]
    }

    pub fn to_partition(&self) -> SetPartition {
        SetPartition {
            labels: self.labels.clone(),
        }
    }
}

/// Iterator form of [`PartitionCursor`].
#[derive(Debug, Clone)]
pub struct Partitions {
    cursor: PartitionCursor,
}

impl Iterator for Partitions {
    type Item = SetPartition;

    fn next(&mut self) -> Option<SetPartition> {
        self.cursor.advance().then(|| self.cursor.to_partition())
    }
}

/// All `B_m` partitions of `m` agents, lexicographic in restricted-growth form.
pub fn enumerate_partitions(m: usize, cap: EnumerationCap) -> Result<Partitions> {
    if m == 0 {
        return Err(CoalitionError::InvalidInput("m must be at least 1".into()));
    }
    cap.check(m)?;
    Ok(Partitions {
        cursor: PartitionCursor::new(m),
    })
}

/// Coalition-size counts over all structures of `m` outsiders.
///
/// `multiplicity[k - 1]` is the number of size-`k` coalitions appearing across
/// all `B_m` structures; `choice_counts[k - 1]` the number of structures in
/// which a fixed agent sits in a size-`k` coalition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PartitionStats {
    pub m: usize,
    #[serde(serialize_with = "serialize_decimal_vec")]
    pub multiplicity: Vec<BigUint>,
    #[serde(serialize_with = "serialize_decimal_vec")]
    pub choice_counts: Vec<BigUint>,
}

pub(crate) fn serialize_decimal_vec<S: serde::Serializer>(
    values: &[BigUint],
    serializer: S,
) -> std::result::Result<S::Ok, S::Error> {
    serializer.collect_seq(values.iter().map(|v| v.to_str_radix(10)))
}

/// Closed forms `w_k = C(m,k)·B_{m-k}` and `c_k = C(m-1,k-1)·B_{m-k}`.
///
/// Panics when `m == 0` or `bell` does not reach `B_m`.
pub fn partition_stats(m: usize, bell: &BellTable) -> PartitionStats {
    assert!(m >= 1, "partition statistics need at least one agent");
    bell.require(m);
    let mu = m as u64;
    let multiplicity = (1..=m)
        .map(|k| binomial(mu, k as u64) * bell.get(m - k))
        .collect();
    let choice_counts = (1..=m)
        .map(|k| binomial(mu - 1, k as u64 - 1) * bell.get(m - k))
        .collect();
    PartitionStats {
        m,
        multiplicity,
        choice_counts,
    }
}
