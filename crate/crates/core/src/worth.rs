//! Worths of outsider coalitions.
//!
//! A [`CharacteristicFunction`] assigns a worth to every non-empty subset of the
//! `m` outsiders. With interchangeable agents it collapses to a
//! [`SymmetricWorth`], one worth per coalition size.

use serde::{Deserialize, Serialize};

use crate::error::{CoalitionError, Result};

/// Default relative tolerance for [`reduce_to_symmetric`].
pub const DEFAULT_SYMMETRY_TOLERANCE: f64 = 1e-9;

/// Largest `m` for which a full characteristic function is stored.
pub const MAX_EXPLICIT_AGENTS: usize = 20;

/// Per-size worths `(v(1), …, v(m))`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SymmetricWorth {
    by_size: Vec<f64>,
}

impl SymmetricWorth {
    pub fn new(by_size: Vec<f64>) -> Result<Self> {
        if by_size.is_empty() {
            return Err(CoalitionError::InvalidInput(
                "by_size must list at least one worth".into(),
            ));
        }
        if let Some(k) = by_size.iter().position(|v| !v.is_finite()) {
            return Err(CoalitionError::InvalidInput(format!(
                "worth of size {} is not finite",
                k + 1
            )));
        }
        Ok(SymmetricWorth { by_size })
    }

    /// `v(k) = c·k`: every coalition size pays `c` per member.
    pub fn constant_per_capita(m: usize, c: f64) -> Result<Self> {
        Self::new((1..=m).map(|k| c * k as f64).collect())
    }

    pub fn m(&self) -> usize {
        self.by_size.len()
    }

    pub fn by_size(&self) -> &[f64] {
        &self.by_size
    }

    /// `v(k)` for `1 <= k <= m`.
    pub fn get(&self, k: usize) -> Result<f64> {
        self.check_index(k)?;
        Ok(self.by_size[k - 1])
    }

    pub fn per_capita(&self, k: usize) -> Result<f64> {
        self.check_index(k)?;
        Ok(self.by_size[k - 1] / k as f64)
    }

    /// `(v(1)/1, …, v(m)/m)`.
    pub fn per_capita_vector(&self) -> Vec<f64> {
        self.by_size
            .iter()
            .enumerate()
            .map(|(i, v)| v / (i + 1) as f64)
            .collect()
    }

    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::new(self.by_size.iter().map(|v| v * factor).collect())
    }

    fn check_index(&self, k: usize) -> Result<()> {
        if k == 0 || k > self.m() {
            return Err(CoalitionError::IndexOutOfRange { k, m: self.m() });
        }
        Ok(())
    }
}

/// Share of `v(k)` received by each member of a size-`k` coalition.
pub fn per_capita(worth: &SymmetricWorth, k: usize) -> Result<f64> {
    worth.per_capita(k)
}

/// Worths of all non-empty subsets of `{0, …, m-1}`, indexed by bitmask.
#[derive(Debug, Clone, PartialEq)]
pub struct CharacteristicFunction {
    m: usize,
    // index 0 (empty coalition) is unused
    worths: Vec<f64>,
}

impl CharacteristicFunction {
    pub fn from_fn(m: usize, mut worth: impl FnMut(u32) -> f64) -> Result<Self> {
        check_agent_count(m)?;
        let mut worths = vec![0.0; 1 << m];
        for mask in 1..(1u32 << m) {
            let v = worth(mask);
            if !v.is_finite() {
                return Err(CoalitionError::InvalidInput(format!(
                    "worth of coalition {:?} is not finite",
                    members_of(mask)
                )));
            }
            worths[mask as usize] = v;
        }
        Ok(CharacteristicFunction { m, worths })
    }

    /// Every size-`k` coalition gets `v(k)`.
    pub fn from_symmetric(worth: &SymmetricWorth) -> Result<Self> {
        Self::from_fn(worth.m(), |mask| {
            worth.by_size()[mask.count_ones() as usize - 1]
        })
    }

    /// Builds from an explicit list; every non-empty subset must appear once.
    pub fn from_coalitions<I>(m: usize, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<usize>, f64)>,
    {
        check_agent_count(m)?;
        let mut worths: Vec<Option<f64>> = vec![None; 1 << m];
        for (members, worth) in entries {
            let mask = mask_of(m, &members)?;
            if !worth.is_finite() {
                return Err(CoalitionError::InvalidInput(format!(
                    "worth of coalition {members:?} is not finite"
                )));
            }
            if worths[mask as usize].replace(worth).is_some() {
                return Err(CoalitionError::InvalidInput(format!(
                    "coalition {:?} listed more than once",
                    members_of(mask)
                )));
            }
        }
        if let Some(missing) = (1..worths.len()).find(|&mask| worths[mask].is_none()) {
            return Err(CoalitionError::InvalidInput(format!(
                "coalition {:?} has no worth ({} of {} coalitions listed)",
                members_of(missing as u32),
                worths.iter().skip(1).filter(|w| w.is_some()).count(),
                worths.len() - 1
            )));
        }
        Ok(CharacteristicFunction {
            m,
            worths: worths.into_iter().map(|w| w.unwrap_or(0.0)).collect(),
        })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Panics on the empty mask or a mask outside the agent set.
    pub fn worth(&self, mask: u32) -> f64 {
        assert!(
            mask != 0 && (mask as usize) < self.worths.len(),
            "mask {mask:#b} out of range"
        );
        self.worths[mask as usize]
    }

    pub fn worth_of(&self, members: &[usize]) -> Result<f64> {
        Ok(self.worths[mask_of(self.m, members)? as usize])
    }
}

fn check_agent_count(m: usize) -> Result<()> {
    if m == 0 || m > MAX_EXPLICIT_AGENTS {
        return Err(CoalitionError::InvalidInput(format!(
            "explicit characteristic functions need 1..={MAX_EXPLICIT_AGENTS} agents, got {m}"
        )));
    }
    Ok(())
}

fn mask_of(m: usize, members: &[usize]) -> Result<u32> {
    if members.is_empty() {
        return Err(CoalitionError::InvalidInput(
            "coalitions must be non-empty".into(),
        ));
    }
    let mut mask = 0u32;
    for &agent in members {
        if agent >= m {
            return Err(CoalitionError::InvalidInput(format!(
                "agent {agent} outside 0..{m}"
            )));
        }
        if mask & (1 << agent) != 0 {
            return Err(CoalitionError::InvalidInput(format!(
                "agent {agent} repeated in coalition {members:?}"
            )));
        }
        mask |= 1 << agent;
    }
    Ok(mask)
}

pub(crate) fn members_of(mask: u32) -> Vec<usize> {
    (0..32).filter(|i| mask & (1 << i) != 0).collect()
}

/// Collapses a characteristic function to per-size worths.
///
/// Within each size class the extreme worths must satisfy
/// `|a - b| <= tolerance · max(1, |a|, |b|)`; the class mean becomes `v(k)`.
pub fn reduce_to_symmetric(cf: &CharacteristicFunction, tolerance: f64) -> Result<SymmetricWorth> {
    if !(tolerance >= 0.0) {
        return Err(CoalitionError::InvalidInput(format!(
            "tolerance {tolerance} must be non-negative"
        )));
    }
    let m = cf.m();
    // (sum, count, (min, argmin), (max, argmax)) per size
    let mut classes: Vec<(f64, usize, (f64, u32), (f64, u32))> =
        vec![(0.0, 0, (f64::INFINITY, 0), (f64::NEG_INFINITY, 0)); m];
    for mask in 1..(1u32 << m) {
        let v = cf.worth(mask);
        let class = &mut classes[mask.count_ones() as usize - 1];
        class.0 += v;
        class.1 += 1;
        if v < class.2 .0 {
            class.2 = (v, mask);
        }
        if v > class.3 .0 {
            class.3 = (v, mask);
        }
    }
    let mut by_size = Vec::with_capacity(m);
    for (i, &(sum, count, (lo, lo_mask), (hi, hi_mask))) in classes.iter().enumerate() {
        let gap = hi - lo;
        if gap > tolerance * 1f64.max(lo.abs()).max(hi.abs()) {
            return Err(CoalitionError::SymmetryViolation {
                size: i + 1,
                first: members_of(lo_mask.min(hi_mask)),
                second: members_of(lo_mask.max(hi_mask)),
                gap,
                tolerance,
            });
        }
        // an exactly uniform class keeps its value bit-for-bit
        by_size.push(if gap == 0.0 { lo } else { sum / count as f64 });
    }
    SymmetricWorth::new(by_size)
}

/// One explicit coalition in the JSON game schema.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoalitionEntry {
    pub members: Vec<usize>,
    pub worth: f64,
}

/// JSON worth schema: `{"m", "by_size"}` or `{"m", "coalitions"}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WorthInput {
    pub m: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub by_size: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coalitions: Option<Vec<CoalitionEntry>>,
}

impl WorthInput {
    pub fn to_characteristic_function(&self) -> Result<CharacteristicFunction> {
        match (&self.by_size, &self.coalitions) {
            (Some(_), None) => CharacteristicFunction::from_symmetric(&self.to_symmetric(0.0)?),
            (None, Some(entries)) => CharacteristicFunction::from_coalitions(
                self.m,
                entries.iter().map(|e| (e.members.clone(), e.worth)),
            ),
            _ => Err(CoalitionError::InvalidInput(
                "exactly one of by_size or coalitions must be given".into(),
            )),
        }
    }

    /// Per-size worths; explicit coalition lists go through [`reduce_to_symmetric`].
    pub fn to_symmetric(&self, tolerance: f64) -> Result<SymmetricWorth> {
        match (&self.by_size, &self.coalitions) {
            (Some(by_size), None) => {
                if by_size.len() != self.m {
                    return Err(CoalitionError::DimensionMismatch {
                        expected: self.m,
                        found: by_size.len(),
                    });
                }
                SymmetricWorth::new(by_size.clone())
            }
            (None, Some(_)) => reduce_to_symmetric(&self.to_characteristic_function()?, tolerance),
            _ => Err(CoalitionError::InvalidInput(
                "exactly one of by_size or coalitions must be given".into(),
            )),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kannai() -> CharacteristicFunction {
        CharacteristicFunction::from_fn(3, |mask| if mask.count_ones() == 1 { 0.0 } else { 1.0 })
            .unwrap()
    }

    #[test]
    fn kannai_reduces_to_sizes() {
        let sym = reduce_to_symmetric(&kannai(), DEFAULT_SYMMETRY_TOLERANCE).unwrap();
        assert_eq!(sym.by_size(), &[0.0, 1.0, 1.0]);
    }

    #[test]
    fn single_agent_reduces() {
        let cf = CharacteristicFunction::from_coalitions(1, vec![(vec![0], 7.0)]).unwrap();
        assert_eq!(reduce_to_symmetric(&cf, 0.0).unwrap().by_size(), &[7.0]);
    }

    #[test]
    fn asymmetric_pair_is_rejected() {
        let cf = CharacteristicFunction::from_coalitions(
            2,
            vec![(vec![0], 0.0), (vec![1], 1.0), (vec![0, 1], 3.0)],
        )
        .unwrap();
        match reduce_to_symmetric(&cf, 0.5).unwrap_err() {
            CoalitionError::SymmetryViolation {
                size,
                first,
                second,
                gap,
                ..
            } => {
                assert_eq!(size, 1);
                assert_eq!((first, second), (vec![0], vec![1]));
                assert_eq!(gap, 1.0);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn small_spread_is_averaged() {
        let cf = CharacteristicFunction::from_coalitions(
            2,
            vec![(vec![0], 1.0), (vec![1], 1.0 + 1e-12), (vec![1, 0], 2.0)],
        )
        .unwrap();
        let sym = reduce_to_symmetric(&cf, 1e-9).unwrap();
        assert!((sym.by_size()[0] - (1.0 + 0.5e-12)).abs() < 1e-15);
    }

    #[test]
    fn coalition_list_validation() {
        assert!(CharacteristicFunction::from_coalitions(2, vec![(vec![0], 1.0)]).is_err());
        assert!(
            CharacteristicFunction::from_coalitions(1, vec![(vec![0], 1.0), (vec![0], 2.0)])
                .is_err()
        );
        assert!(CharacteristicFunction::from_coalitions(1, vec![(vec![1], 1.0)]).is_err());
        assert!(CharacteristicFunction::from_coalitions(2, vec![(vec![0, 0], 1.0)]).is_err());
        assert!(CharacteristicFunction::from_coalitions(1, vec![(vec![0], f64::NAN)]).is_err());
        assert!(CharacteristicFunction::from_fn(0, |_| 0.0).is_err());
    }

    #[test]
    fn per_capita_values() {
        let w = SymmetricWorth::new(vec![0.0, 1.0, 1.0]).unwrap();
        assert_eq!(per_capita(&w, 3).unwrap(), 1.0 / 3.0);
        assert_eq!(per_capita(&w, 1).unwrap(), 0.0);
        assert_eq!(w.per_capita_vector(), vec![0.0, 0.5, 1.0 / 3.0]);
        assert_eq!(
            per_capita(&w, 4).unwrap_err(),
            CoalitionError::IndexOutOfRange { k: 4, m: 3 }
        );
        assert!(per_capita(&w, 0).is_err());
    }

    #[test]
    fn worth_validation() {
        assert!(SymmetricWorth::new(vec![]).is_err());
        assert!(SymmetricWorth::new(vec![1.0, f64::INFINITY]).is_err());
        assert!(SymmetricWorth::new(vec![-2.0, 0.0]).is_ok());
    }

    #[test]
    fn json_schemas() {
        let by_size: WorthInput =
            serde_json::from_str(r#"{"m": 3, "by_size": [0, 1, 1]}"#).unwrap();
        assert_eq!(
            by_size.to_symmetric(0.0).unwrap().by_size(),
            &[0.0, 1.0, 1.0]
        );

        let explicit: WorthInput = serde_json::from_str(
            r#"{"m": 2, "coalitions": [
                {"members": [0], "worth": 2}, {"members": [1], "worth": 2},
                {"members": [0, 1], "worth": 5}]}"#,
        )
        .unwrap();
        assert_eq!(explicit.to_symmetric(1e-9).unwrap().by_size(), &[2.0, 5.0]);

        let wrong_len: WorthInput = serde_json::from_str(r#"{"m": 2, "by_size": [1]}"#).unwrap();
        assert!(wrong_len.to_symmetric(0.0).is_err());
        let neither: WorthInput = serde_json::from_str(r#"{"m": 2}"#).unwrap();
        assert!(neither.to_symmetric(0.0).is_err());
    }
}
