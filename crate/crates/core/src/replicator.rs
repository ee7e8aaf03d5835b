//! Replicator dynamics over the size-grouped strategies of an outsider.
//!
//! Strategy `k` ("join a size-`k` coalition") pays `v(k)/k`. Its frequency
//! evolves as `dx_k/dt = x_k·(v(k)/k - average)`, where the average is either
//! the frequency-independent Bell-weighted `ṽ` ([`DynamicsMode::PaperConstantAverage`])
//! or the population mean `Σ_j x_j·v(j)/j` ([`DynamicsMode::FrequencyWeighted`]).
//! In the first mode the simplex is not invariant and frequencies are reported raw.

use std::fmt;
use std::io::{self, Write};
use std::str::FromStr;

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::combinatorics::{partition_stats, BellTable};
use crate::error::{CoalitionError, Result};
use crate::predictor::average_worth;
use crate::worth::SymmetricWorth;

/// Allowed `|Σ x_k - 1|` for states in frequency-weighted mode.
pub const SIMPLEX_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DynamicsMode {
    /// Average fixed at the Bell-weighted `ṽ`.
    #[default]
    PaperConstantAverage,
    /// Average taken over the current frequencies.
    FrequencyWeighted,
}

impl FromStr for DynamicsMode {
    type Err = CoalitionError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "paper" | "paper_constant_average" => Ok(DynamicsMode::PaperConstantAverage),
            "weighted" | "frequency_weighted" => Ok(DynamicsMode::FrequencyWeighted),
            other => Err(CoalitionError::InvalidInput(format!(
                "unknown dynamics mode {other:?} (expected paper or weighted)"
            ))),
        }
    }
}

impl fmt::Display for DynamicsMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DynamicsMode::PaperConstantAverage => "paper",
            DynamicsMode::FrequencyWeighted => "weighted",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DynamicsConfig {
    pub mode: DynamicsMode,
    pub step_size: f64,
    pub horizon: f64,
    pub record_every: usize,
}

impl Default for DynamicsConfig {
    fn default() -> Self {
        DynamicsConfig {
            mode: DynamicsMode::PaperConstantAverage,
            step_size: 0.01,
            horizon: 10.0,
            record_every: 1,
        }
    }
}

impl DynamicsConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.step_size > 0.0 && self.step_size.is_finite()) {
            return Err(CoalitionError::InvalidConfig(format!(
                "step size {} must be positive",
                self.step_size
            )));
        }
        if !(self.horizon > 0.0 && self.horizon.is_finite()) {
            return Err(CoalitionError::InvalidConfig(format!(
                "horizon {} must be positive",
                self.horizon
            )));
        }
        if self.step_size >= self.horizon {
            return Err(CoalitionError::InvalidConfig(format!(
                "step size {} must be below the horizon {}",
                self.step_size, self.horizon
            )));
        }
        if self.record_every == 0 {
            return Err(CoalitionError::InvalidConfig(
                "record_every must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

/// Strategy frequencies at one instant; `frequencies[k - 1]` is `x_k`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReplicatorState {
    #[serde(rename = "t")]
    pub time: f64,
    #[serde(rename = "x")]
    pub frequencies: Vec<f64>,
}

impl ReplicatorState {
    pub fn new(time: f64, frequencies: Vec<f64>) -> Result<Self> {
        if !(time >= 0.0 && time.is_finite()) {
            return Err(CoalitionError::InvalidInput(format!(
                "time {time} must be non-negative"
            )));
        }
        if frequencies.is_empty() {
            return Err(CoalitionError::InvalidInput(
                "a state needs at least one strategy".into(),
            ));
        }
        if let Some(i) = frequencies
            .iter()
            .position(|x| !(x.is_finite() && *x >= 0.0))
        {
            return Err(CoalitionError::InvalidInput(format!(
                "frequency x_{} = {} must be finite and non-negative",
                i + 1,
                frequencies[i]
            )));
        }
        Ok(ReplicatorState { time, frequencies })
    }

    pub fn m(&self) -> usize {
        self.frequencies.len()
    }

    pub fn simplex_sum(&self) -> f64 {
        self.frequencies.iter().sum()
    }
}

/// Uniform distribution over all `B_m` raw choices, grouped by coalition size:
/// `x_k = C(m-1,k-1)·B_{m-k} / B_m`.
pub fn initial_frequencies(m: usize, bell: &BellTable) -> ReplicatorState {
    let stats = partition_stats(m, bell);
    let total = num_rational::BigRational::from_integer(bell.get(m).clone().into());
    let frequencies = stats
        .choice_counts
        .iter()
        .map(|c| {
            let ratio = num_rational::BigRational::from_integer(c.clone().into()) / &total;
            ratio.to_f64().expect("frequency in [0, 1]")
        })
        .collect();
    ReplicatorState {
        time: 0.0,
        frequencies,
    }
}

/// `x_k = 1/m` for every size.
pub fn uniform_over_groups(m: usize) -> ReplicatorState {
    assert!(m >= 1, "at least one strategy is required");
    ReplicatorState {
        time: 0.0,
        frequencies: vec![1.0 / m as f64; m],
    }
}

/// Per-capita payoffs plus, in paper mode, the fixed average.
#[derive(Debug, Clone)]
struct Payoffs {
    per_capita: Vec<f64>,
    fixed_average: Option<f64>,
}

impl Payoffs {
    fn new(worth: &SymmetricWorth, mode: DynamicsMode, bell: &BellTable) -> Self {
        let fixed_average = match mode {
            DynamicsMode::PaperConstantAverage => Some(average_worth(worth, bell)),
            DynamicsMode::FrequencyWeighted => None,
        };
        Payoffs {
            per_capita: worth.per_capita_vector(),
            fixed_average,
        }
    }

    fn average(&self, x: &[f64]) -> f64 {
        self.fixed_average
            .unwrap_or_else(|| x.iter().zip(&self.per_capita).map(|(x, p)| x * p).sum())
    }

    fn gaps(&self, x: &[f64]) -> Vec<f64> {
        let average = self.average(x);
        self.per_capita.iter().map(|p| p - average).collect()
    }

    fn field(&self, x: &[f64], out: &mut [f64]) {
        let average = self.average(x);
        for ((o, xk), p) in out.iter_mut().zip(x).zip(&self.per_capita) {
            *o = xk * (p - average);
        }
    }
}

fn check_dimensions(state: &ReplicatorState, worth: &SymmetricWorth) -> Result<()> {
    if state.m() != worth.m() {
        return Err(CoalitionError::DimensionMismatch {
            expected: worth.m(),
            found: state.m(),
        });
    }
    Ok(())
}

/// `dx_k/dt` at `state`.
pub fn vector_field(
    state: &ReplicatorState,
    worth: &SymmetricWorth,
    mode: DynamicsMode,
    bell: &BellTable,
) -> Result<Vec<f64>> {
    check_dimensions(state, worth)?;
    let payoffs = Payoffs::new(worth, mode, bell);
    let mut out = vec![0.0; state.m()];
    payoffs.field(&state.frequencies, &mut out);
    Ok(out)
}

/// Classical fourth-order Runge-Kutta step with reusable stage buffers.
#[derive(Debug, Clone)]
struct Rk4 {
    k1: Vec<f64>,
    k2: Vec<f64>,
    k3: Vec<f64>,
    k4: Vec<f64>,
    scratch: Vec<f64>,
}

impl Rk4 {
    fn new(dim: usize) -> Self {
        Rk4 {
            k1: vec![0.0; dim],
            k2: vec![0.0; dim],
            k3: vec![0.0; dim],
            k4: vec![0.0; dim],
            scratch: vec![0.0; dim],
        }
    }

    fn step(&mut self, h: f64, payoffs: &Payoffs, x: &mut [f64]) {
        payoffs.field(x, &mut self.k1);
        for i in 0..x.len() {
            self.scratch[i] = x[i] + 0.5 * h * self.k1[i];
        }
        payoffs.field(&self.scratch, &mut self.k2);
        for i in 0..x.len() {
            self.scratch[i] = x[i] + 0.5 * h * self.k2[i];
        }
        payoffs.field(&self.scratch, &mut self.k3);
        for i in 0..x.len() {
            self.scratch[i] = x[i] + h * self.k3[i];
        }
        payoffs.field(&self.scratch, &mut self.k4);
        for i in 0..x.len() {
            x[i] += h / 6.0 * (self.k1[i] + 2.0 * self.k2[i] + 2.0 * self.k3[i] + self.k4[i]);
        }
    }
}

/// Recorded run of the dynamics.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trajectory {
    pub config: DynamicsConfig,
    /// Strictly increasing in time; the first is the start, the last the horizon.
    pub states: Vec<ReplicatorState>,
    /// `payoff_k - average` at the final state.
    pub terminal_residuals: Vec<f64>,
    pub steps: usize,
    /// Steps in which at least one frequency went negative and was clamped to 0.
    pub clamped_steps: usize,
    /// Frequency-weighted mode: largest `|Σ x_k - 1|` seen before renormalising.
    pub max_step_drift: Option<f64>,
}

impl Trajectory {
    pub fn final_state(&self) -> &ReplicatorState {
        self.states
            .last()
            .expect("trajectory holds at least the start state")
    }

    /// One `{"t": .., "x": [..]}` object per recorded state.
    pub fn write_json_lines<W: Write>(&self, mut out: W) -> io::Result<()> {
        for state in &self.states {
            serde_json::to_writer(&mut out, state)?;
            out.write_all(b"\n")?;
        }
        Ok(())
    }
}

/// Integrates from `start` (taken as `t = 0`) to `config.horizon` with fixed steps.
///
/// Negative frequencies are clamped to zero; the run aborts once more than 1% of
/// the planned steps needed clamping, or if a frequency becomes non-finite.
pub fn integrate(
    start: &ReplicatorState,
    worth: &SymmetricWorth,
    config: &DynamicsConfig,
    bell: &BellTable,
) -> Result<Trajectory> {
    config.validate()?;
    check_dimensions(start, worth)?;
    if config.mode == DynamicsMode::FrequencyWeighted
        && (start.simplex_sum() - 1.0).abs() > SIMPLEX_TOLERANCE
    {
        return Err(CoalitionError::InvalidInput(format!(
            "frequency-weighted dynamics need a start on the simplex (sum {})",
            start.simplex_sum()
        )));
    }

    let h = config.step_size;
    let full_steps = (config.horizon / h * (1.0 + 1e-12)).floor() as usize;
    let remainder = config.horizon - full_steps as f64 * h;
    let partial = remainder > 1e-12 * config.horizon;
    let steps = full_steps + usize::from(partial);
    let clamp_limit = steps / 100;

    let payoffs = Payoffs::new(worth, config.mode, bell);
    let mut rk = Rk4::new(start.m());
    let mut x = start.frequencies.clone();
    let mut states = vec![ReplicatorState {
        time: 0.0,
        frequencies: x.clone(),
    }];
    let mut clamped_steps = 0;
    let mut max_step_drift = match config.mode {
        DynamicsMode::FrequencyWeighted => Some(0.0f64),
        DynamicsMode::PaperConstantAverage => None,
    };

    for step in 1..=steps {
        let (dt, time) = if step <= full_steps {
            (
                h,
                if step == steps {
                    config.horizon
                } else {
                    step as f64 * h
                },
            )
        } else {
            (remainder, config.horizon)
        };
        rk.step(dt, &payoffs, &mut x);

        if let Some(index) = x.iter().position(|v| !v.is_finite()) {
            return Err(CoalitionError::NonFiniteState {
                time,
                index: index + 1,
            });
        }
        let mut clamped = false;
        for v in x.iter_mut().filter(|v| **v < 0.0) {
            *v = 0.0;
            clamped = true;
        }
        if clamped {
            clamped_steps += 1;
            if clamped_steps > clamp_limit {
                return Err(CoalitionError::ExcessiveClamping {
                    clamped: clamped_steps,
                    steps,
                });
            }
        }
        if let Some(drift) = max_step_drift.as_mut() {
            let sum: f64 = x.iter().sum();
            *drift = drift.max((sum - 1.0).abs());
            if sum <= 0.0 {
                return Err(CoalitionError::NonFiniteState { time, index: 0 });
            }
            x.iter_mut().for_each(|v| *v /= sum);
        }

        if step % config.record_every == 0 || step == steps {
            states.push(ReplicatorState {
                time,
                frequencies: x.clone(),
            });
        }
    }

    let terminal_residuals = payoffs.gaps(&x);
    Ok(Trajectory {
        config: *config,
        states,
        terminal_residuals,
        steps,
        clamped_steps,
        max_step_drift,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StrategyStatus {
    /// `x_k = 0`.
    Extinct,
    /// Payoff within tolerance of the average.
    Equilibrated,
    /// Present and still growing or shrinking.
    Active,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StrategyCheck {
    pub size: usize,
    pub frequency: f64,
    /// `payoff_k - average`.
    pub payoff_gap: f64,
    /// `x_k·(payoff_k - average)`.
    pub growth: f64,
    pub status: StrategyStatus,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RestPointReport {
    pub is_rest_point: bool,
    pub strategies: Vec<StrategyCheck>,
}

/// `state` is a rest point iff every `|x_k·(payoff_k - average)| <= tolerance`.
pub fn rest_point_check(
    state: &ReplicatorState,
    worth: &SymmetricWorth,
    mode: DynamicsMode,
    bell: &BellTable,
    tolerance: f64,
) -> Result<RestPointReport> {
    check_dimensions(state, worth)?;
    if !(tolerance > 0.0) {
        return Err(CoalitionError::InvalidInput(format!(
            "tolerance {tolerance} must be positive"
        )));
    }
    let payoffs = Payoffs::new(worth, mode, bell);
    let gaps = payoffs.gaps(&state.frequencies);
    let strategies: Vec<StrategyCheck> = state
        .frequencies
        .iter()
        .zip(gaps)
        .enumerate()
        .map(|(i, (&frequency, payoff_gap))| {
            let status = if frequency == 0.0 {
                StrategyStatus::Extinct
            } else if payoff_gap.abs() <= tolerance {
                StrategyStatus::Equilibrated
            } else {
                StrategyStatus::Active
            };
            StrategyCheck {
                size: i + 1,
                frequency,
                payoff_gap,
                growth: frequency * payoff_gap,
                status,
            }
        })
        .collect();
    let is_rest_point = strategies.iter().all(|s| s.growth.abs() <= tolerance);
    Ok(RestPointReport {
        is_rest_point,
        strategies,
    })
}
