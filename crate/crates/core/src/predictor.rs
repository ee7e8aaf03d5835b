//! Average worth, the equilibrium hyperplane system and the minimum-distance
//! prediction of the coalition size a representative outsider joins.
//!
//! With `w_j = C(m,j)·B_{m-j}` and `ω_j = w_j / (m·B_m)`, the population average
//! per-agent worth is `ṽ = Σ_j ω_j·v(j)`. An outsider in a size-`k` coalition
//! earns `v(k)/k`, so the `k`-th equilibrium condition `v(k)/k - ṽ = 0` is the
//! hyperplane with coefficients
//!
//! ```text
//! a_kk = 1/k - ω_k        a_kj = -ω_j  (j ≠ k)
//! ```
//!
//! The predicted size is the plane nearest (in Euclidean distance) to the
//! worth vector.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::combinatorics::{binomial, BellTable};
use crate::error::{CoalitionError, Result};
use crate::worth::SymmetricWorth;

/// Absolute tolerance on distances when collecting the argmin set.
pub const DEFAULT_TIE_TOLERANCE: f64 = 1e-9;

fn ratio_to_f64(r: &BigRational) -> f64 {
    r.to_f64().expect("finite rational converts to f64")
}

/// Exact `ω_j = C(m,j)·B_{m-j} / (m·B_m)` for `j = 1..=m`.
pub fn normalized_weights(m: usize, bell: &BellTable) -> Vec<BigRational> {
    assert!(m >= 1, "at least one outsider is required");
    bell.require(m);
    let denominator = BigInt::from(bell.get(m) * m);
    (1..=m)
        .map(|j| {
            let w = binomial(m as u64, j as u64) * bell.get(m - j);
            BigRational::new(BigInt::from(w), denominator.clone())
        })
        .collect()
}

/// `ṽ`, the mean per-agent worth over all `B_m` coalition structures.
///
/// The weights are exact ratios; only their final values are rounded.
pub fn average_worth(worth: &SymmetricWorth, bell: &BellTable) -> f64 {
    normalized_weights(worth.m(), bell)
        .iter()
        .zip(worth.by_size())
        .map(|(w, v)| ratio_to_f64(w) * v)
        .sum()
}

/// `ε_k = v(k)/k - ṽ` for `k = 1..=m`.
pub fn residuals(worth: &SymmetricWorth, bell: &BellTable) -> Vec<f64> {
    let average = average_worth(worth, bell);
    worth
        .per_capita_vector()
        .into_iter()
        .map(|p| p - average)
        .collect()
}

/// The `m` equilibrium hyperplanes in `(v(1), …, v(m))` space.
#[derive(Debug, Clone, PartialEq)]
pub struct HyperplaneSystem {
    m: usize,
    bell_m: BigUint,
    weights: Vec<BigUint>,
    omega: Vec<BigRational>,
    diagonal: Vec<BigRational>,
    coefficients: Vec<Vec<f64>>,
    row_norms: Vec<f64>,
}

impl HyperplaneSystem {
    pub fn m(&self) -> usize {
        self.m
    }

    /// Row `k - 1` holds the coefficients of plane `k`.
    pub fn coefficients(&self) -> &[Vec<f64>] {
        &self.coefficients
    }

    /// Exact `a_kj`, `1 <= k, j <= m`.
    pub fn exact_coefficient(&self, k: usize, j: usize) -> BigRational {
        if k == j {
            self.diagonal[k - 1].clone()
        } else {
            -self.omega[j - 1].clone()
        }
    }

    /// All exact rows; `m²` big rationals, so meant for small `m`.
    pub fn exact_coefficients(&self) -> Vec<Vec<BigRational>> {
        (1..=self.m)
            .map(|k| (1..=self.m).map(|j| self.exact_coefficient(k, j)).collect())
            .collect()
    }

    /// Multiplicities `w_j = C(m,j)·B_{m-j}`.
    pub fn weights(&self) -> &[BigUint] {
        &self.weights
    }

    /// Common denominator `m·B_m` of the cross terms.
    pub fn denominator(&self) -> BigUint {
        &self.bell_m * self.m
    }

    pub fn row_norms(&self) -> &[f64] {
        &self.row_norms
    }

    /// Only `m = 1` is degenerate: `v(1)/1 - v(1)` vanishes identically.
    pub fn is_degenerate(&self) -> bool {
        self.row_norms.contains(&0.0)
    }

    /// Signed value of plane `k`'s linear form at `point`.
    pub fn evaluate(&self, k: usize, point: &[f64]) -> f64 {
        self.coefficients[k - 1]
            .iter()
            .zip(point)
            .map(|(a, p)| a * p)
            .sum()
    }
}

impl Serialize for HyperplaneSystem {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let exact: Vec<Vec<String>> = self
            .exact_coefficients()
            .iter()
            .map(|row| row.iter().map(ToString::to_string).collect())
            .collect();
        let mut s = serializer.serialize_struct("HyperplaneSystem", 8)?;
        s.serialize_field("m", &self.m)?;
        s.serialize_field("bell", &self.bell_m.to_str_radix(10))?;
        s.serialize_field("denominator", &self.denominator().to_str_radix(10))?;
        s.serialize_field(
            "weights",
            &self
                .weights
                .iter()
                .map(|w| w.to_str_radix(10))
                .collect::<Vec<_>>(),
        )?;
        s.serialize_field("coefficients_exact", &exact)?;
        s.serialize_field("coefficients", &self.coefficients)?;
        s.serialize_field("row_norms", &self.row_norms)?;
        s.serialize_field("degenerate", &self.is_degenerate())?;
        s.end()
    }
}

/// Builds the plane coefficients exactly, then rounds each entry once. Row
/// norms come from the exact squared norm
/// `‖a_k‖² = Σ_j ω_j² - ω_k² + (1/k - ω_k)²`.
pub fn hyperplane_system(m: usize, bell: &BellTable) -> HyperplaneSystem {
    let omega = normalized_weights(m, bell);
    let diagonal: Vec<BigRational> = omega
        .iter()
        .enumerate()
        .map(|(i, w)| BigRational::new(BigInt::from(1), BigInt::from(i + 1)) - w)
        .collect();
    let omega_f64: Vec<f64> = omega.iter().map(ratio_to_f64).collect();
    let coefficients = (0..m)
        .map(|k| {
            let mut row: Vec<f64> = omega_f64.iter().map(|w| -w).collect();
            row[k] = ratio_to_f64(&diagonal[k]);
            row
        })
        .collect();
    let omega_squared: BigRational = omega.iter().map(|w| w * w).sum();
    let row_norms = (0..m)
        .map(|k| {
            let squared = &omega_squared - &omega[k] * &omega[k] + &diagonal[k] * &diagonal[k];
            if squared.is_zero() {
                0.0
            } else {
                ratio_to_f64(&squared).sqrt()
            }
        })
        .collect();
    let weights = (1..=m)
        .map(|j| binomial(m as u64, j as u64) * bell.get(m - j))
        .collect();
    HyperplaneSystem {
        m,
        bell_m: bell.get(m).clone(),
        weights,
        omega,
        diagonal,
        coefficients,
        row_norms,
    }
}

/// Euclidean distances `d_k = |a_k · p| / ‖a_k‖` from `point` to every plane.
pub fn distances(point: &SymmetricWorth, system: &HyperplaneSystem) -> Result<Vec<f64>> {
    if point.m() != system.m() {
        return Err(CoalitionError::DimensionMismatch {
            expected: system.m(),
            found: point.m(),
        });
    }
    if system.is_degenerate() {
        return Err(CoalitionError::DegenerateSystem);
    }
    Ok((1..=system.m())
        .map(|k| system.evaluate(k, point.by_size()).abs() / system.row_norms[k - 1])
        .collect())
}

/// Outcome of the minimum-distance rule.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PredictionReport {
    pub m: usize,
    pub average_worth: f64,
    /// `ε_k = v(k)/k - ṽ`, by `k` ascending.
    pub residuals: Vec<f64>,
    /// Distance to plane `k`, by `k` ascending.
    pub distances: Vec<f64>,
    /// Sizes within the tie tolerance of the minimum distance, ascending.
    pub argmin_set: Vec<usize>,
    /// Smallest member of `argmin_set`.
    pub chosen_size: usize,
    pub degenerate: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

/// Predicts the coalition size a representative outsider joins.
///
/// For `m = 1` the report is flagged degenerate with distance `0` and size `1`.
pub fn predict(
    point: &SymmetricWorth,
    bell: &BellTable,
    tie_tolerance: f64,
) -> Result<PredictionReport> {
    let system = hyperplane_system(point.m(), bell);
    predict_with_system(point, &system, bell, tie_tolerance)
}

/// [`predict`] reusing a prebuilt system.
pub fn predict_with_system(
    point: &SymmetricWorth,
    system: &HyperplaneSystem,
    bell: &BellTable,
    tie_tolerance: f64,
) -> Result<PredictionReport> {
    if !(tie_tolerance >= 0.0) || !tie_tolerance.is_finite() {
        return Err(CoalitionError::InvalidInput(format!(
            "tie tolerance {tie_tolerance} must be a non-negative finite number"
        )));
    }
    let m = point.m();
    let average = average_worth(point, bell);
    let residuals: Vec<f64> = point
        .per_capita_vector()
        .into_iter()
        .map(|p| p - average)
        .collect();
    let (distances, degenerate) = match distances(point, system) {
        Ok(d) => (d, false),
        Err(CoalitionError::DegenerateSystem) => (vec![0.0; m], true),
        Err(e) => return Err(e),
    };
    let min = distances.iter().copied().fold(f64::INFINITY, f64::min);
    let argmin_set: Vec<usize> = (1..=m)
        .filter(|&k| distances[k - 1] <= min + tie_tolerance)
        .collect();
    let chosen_size = argmin_set[0];
    let note = if degenerate {
        Some("single outsider: every plane is trivially satisfied".to_string())
    } else if !m.is_multiple_of(chosen_size) {
        Some(format!(
            "non-partitionable size: {chosen_size} does not divide m = {m}"
        ))
    } else {
        None
    };
    Ok(PredictionReport {
        m,
        average_worth: average,
        residuals,
        distances,
        argmin_set,
        chosen_size,
        degenerate,
        note,
    })
}
