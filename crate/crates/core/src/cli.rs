//! Command line front end. All reports are JSON on standard output; failures
//! are a single JSON line `{"error": <exit code>, "message": ...}` on standard error.
//!
//! Exit codes: 0 success, 2 invalid input, 3 symmetry violation, 4 enumeration
//! cap exceeded, 5 oracle mismatch.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::combinatorics::{enumerate_partitions, partition_stats, BellTable, EnumerationCap};
use crate::error::CoalitionError;
use crate::oracle::{optimal_structure, verify};
use crate::predictor::{average_worth, hyperplane_system, predict, DEFAULT_TIE_TOLERANCE};
use crate::replicator::{
    initial_frequencies, integrate, uniform_over_groups, DynamicsConfig, DynamicsMode,
};
use crate::worth::{
    CharacteristicFunction, CoalitionEntry, SymmetricWorth, WorthInput, DEFAULT_SYMMETRY_TOLERANCE,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID_INPUT: i32 = 2;
pub const EXIT_SYMMETRY: i32 = 3;
pub const EXIT_ENUMERATION_CAP: i32 = 4;
pub const EXIT_ORACLE_MISMATCH: i32 = 5;

#[derive(Debug, Parser)]
#[command(
    name = "coalition-evo",
    version,
    about = "Predict the coalition structure formed by outsider agents"
)]
struct Cli {
    /// Largest m accepted by enumerating commands (default 12, or COALITION_EVO_ENUM_CAP)
    #[arg(long, global = true)]
    cap: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Minimum-distance prediction of the coalition size an outsider joins
    Predict {
        game: PathBuf,
        #[arg(long = "tie-tol", default_value_t = DEFAULT_TIE_TOLERANCE)]
        tie_tol: f64,
        #[arg(long = "sym-tol", default_value_t = DEFAULT_SYMMETRY_TOLERANCE)]
        sym_tol: f64,
    },
    /// Equilibrium hyperplane coefficients for m outsiders
    Planes {
        #[arg(long)]
        m: usize,
    },
    /// Bell-weighted average worth of the outsiders
    Average {
        game: PathBuf,
        #[arg(long = "sym-tol", default_value_t = DEFAULT_SYMMETRY_TOLERANCE)]
        sym_tol: f64,
    },
    /// Replicator dynamics trajectory as JSON lines
    Simulate {
        game: PathBuf,
        #[arg(long, value_enum, default_value_t = ModeArg::Paper)]
        mode: ModeArg,
        #[arg(long, default_value_t = 0.01)]
        step: f64,
        #[arg(long, default_value_t = 10.0)]
        horizon: f64,
        #[arg(long = "record-every", default_value_t = 1)]
        record_every: usize,
        #[arg(long, value_enum, default_value_t = InitArg::Structures)]
        init: InitArg,
        #[arg(long = "sym-tol", default_value_t = DEFAULT_SYMMETRY_TOLERANCE)]
        sym_tol: f64,
    },
    /// Every coalition structure of m outsiders, one restricted-growth string per line
    Enumerate {
        #[arg(long)]
        m: usize,
    },
    /// Closed-form coalition-size counts
    Stats {
        #[arg(long)]
        m: usize,
    },
    /// Check closed forms against brute-force enumeration
    Verify {
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Exhaustive optimal coalition structure next to the predicted size
    Optimal {
        game: PathBuf,
        #[arg(long = "tie-tol", default_value_t = DEFAULT_TIE_TOLERANCE)]
        tie_tol: f64,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeArg {
    Paper,
    Weighted,
}

impl From<ModeArg> for DynamicsMode {
    fn from(mode: ModeArg) -> Self {
        match mode {
            ModeArg::Paper => DynamicsMode::PaperConstantAverage,
            ModeArg::Weighted => DynamicsMode::FrequencyWeighted,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum InitArg {
    /// Uniform over all coalition structures
    Structures,
    /// Uniform over coalition sizes
    Groups,
}

/// Game file: the worth schema plus optional `n` and `s`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GameInput {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub by_size: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coalitions: Option<Vec<CoalitionEntry>>,
}

impl GameInput {
    /// Number of outsiders, from `m` or from `n - s`.
    pub fn outsiders(&self) -> Result<usize, CoalitionError> {
        let from_ns = match (self.n, self.s) {
            (Some(n), Some(s)) => {
                if s < 1 || n <= s {
                    return Err(CoalitionError::InvalidInput(format!(
                        "need n > s >= 1, got n = {n}, s = {s}"
                    )));
                }
                Some(n - s)
            }
            (None, None) => None,
            _ => {
                return Err(CoalitionError::InvalidInput(
                    "n and s must be given together".into(),
                ))
            }
        };
        match (self.m, from_ns) {
            (Some(m), Some(diff)) if m != diff => Err(CoalitionError::InvalidInput(format!(
                "m = {m} disagrees with n - s = {diff}"
            ))),
            (Some(0), _) => Err(CoalitionError::InvalidInput("m must be at least 1".into())),
            (Some(m), _) | (None, Some(m)) => Ok(m),
            (None, None) => Err(CoalitionError::InvalidInput(
                "either m or both n and s are required".into(),
            )),
        }
    }

    pub fn worth_input(&self) -> Result<WorthInput, CoalitionError> {
        Ok(WorthInput {
            m: self.outsiders()?,
            by_size: self.by_size.clone(),
            coalitions: self.coalitions.clone(),
        })
    }

    pub fn load(path: &Path) -> Result<Self, CoalitionError> {
        let text = fs::read_to_string(path).map_err(|e| {
            CoalitionError::InvalidInput(format!("cannot read {}: {e}", path.display()))
        })?;
        serde_json::from_str(&text).map_err(|e| {
            CoalitionError::InvalidInput(format!("malformed game file {}: {e}", path.display()))
        })
    }
}

enum Failure {
    Domain(CoalitionError),
    OracleMismatch(String),
    Io(std::io::Error),
}

impl From<CoalitionError> for Failure {
    fn from(e: CoalitionError) -> Self {
        Failure::Domain(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e)
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Io(e.into())
    }
}

impl Failure {
    fn exit_code(&self) -> i32 {
        match self {
            Failure::Domain(CoalitionError::SymmetryViolation { .. }) => EXIT_SYMMETRY,
            Failure::Domain(CoalitionError::EnumerationTooLarge { .. }) => EXIT_ENUMERATION_CAP,
            Failure::Domain(_) => EXIT_INVALID_INPUT,
            Failure::OracleMismatch(_) => EXIT_ORACLE_MISMATCH,
            Failure::Io(_) => 1,
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Domain(e) => e.to_string(),
            Failure::OracleMismatch(m) => m.clone(),
            Failure::Io(e) => e.to_string(),
        }
    }
}

fn write_json<T: Serialize, W: Write>(out: &mut W, value: &T) -> Result<(), Failure> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    out.write_all(b"\n")?;
    Ok(())
}

fn load_symmetric(path: &Path, tolerance: f64) -> Result<SymmetricWorth, Failure> {
    Ok(GameInput::load(path)?
        .worth_input()?
        .to_symmetric(tolerance)?)
}

fn execute<W: Write>(cli: Cli, out: &mut W) -> Result<(), Failure> {
    let cap = cli
        .cap
        .map(EnumerationCap)
        .unwrap_or_else(EnumerationCap::from_env);
    match cli.command {
        Command::Predict {
            game,
            tie_tol,
            sym_tol,
        } => {
            let worth = load_symmetric(&game, sym_tol)?;
            let report = predict(&worth, &BellTable::new(worth.m()), tie_tol)?;
            write_json(out, &report)
        }
        Command::Planes { m } => {
            if m == 0 {
                return Err(CoalitionError::InvalidInput("m must be at least 1".into()).into());
            }
            write_json(out, &hyperplane_system(m, &BellTable::new(m)))
        }
        Command::Average { game, sym_tol } => {
            let worth = load_symmetric(&game, sym_tol)?;
            let v_tilde = average_worth(&worth, &BellTable::new(worth.m()));
            write_json(out, &json!({ "v_tilde": v_tilde }))
        }
        Command::Simulate {
            game,
            mode,
            step,
            horizon,
            record_every,
            init,
            sym_tol,
        } => {
            let worth = load_symmetric(&game, sym_tol)?;
            let bell = BellTable::new(worth.m());
            let start = match init {
                InitArg::Structures => initial_frequencies(worth.m(), &bell),
                InitArg::Groups => uniform_over_groups(worth.m()),
            };
            let config = DynamicsConfig {
                mode: mode.into(),
                step_size: step,
                horizon,
                record_every,
            };
            let trajectory = integrate(&start, &worth, &config, &bell)?;
            trajectory.write_json_lines(&mut *out)?;
            Ok(())
        }
        Command::Enumerate { m } => {
            for partition in enumerate_partitions(m, cap)? {
                writeln!(out, "{partition}")?;
            }
            Ok(())
        }
        Command::Stats { m } => {
            if m == 0 {
                return Err(CoalitionError::InvalidInput("m must be at least 1".into()).into());
            }
            write_json(out, &partition_stats(m, &BellTable::new(m)))
        }
        Command::Verify { m, trials, seed } => {
            let report = verify(m, trials, seed, cap)?;
            write_json(out, &report)?;
            if report.passed {
                Ok(())
            } else {
                let failed: Vec<&str> = report
                    .checks
                    .iter()
                    .filter(|c| !c.passed)
                    .map(|c| c.name.as_str())
                    .collect();
                Err(Failure::OracleMismatch(format!(
                    "oracle mismatch for m = {m}: {}",
                    failed.join(", ")
                )))
            }
        }
        Command::Optimal { game, tie_tol } => {
            let input = GameInput::load(&game)?.worth_input()?;
            let cf: CharacteristicFunction = input.to_characteristic_function()?;
            let best = optimal_structure(&cf, cap)?;
            let prediction = match input.to_symmetric(DEFAULT_SYMMETRY_TOLERANCE) {
                Ok(worth) => {
                    Some(predict(&worth, &BellTable::new(worth.m()), tie_tol)?.chosen_size)
                }
                Err(CoalitionError::SymmetryViolation { .. }) => None,
                Err(e) => return Err(e.into()),
            };
            write_json(
                out,
                &json!({ "optimal": best, "predicted_size": prediction }),
            )
        }
    }
}

/// Runs the command line `args` (program name first), writing reports to `out`
/// and errors to `err`. Returns the process exit code.
pub fn run<I, T, W, E>(args: I, out: &mut W, err: &mut E) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
    W: Write,
    E: Write,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = write!(out, "{e}");
            return EXIT_OK;
        }
        Err(e) => {
            let message = e.to_string();
            let first = message.lines().next().unwrap_or("invalid arguments");
            let _ = writeln!(
                err,
                "{}",
                json!({ "error": EXIT_INVALID_INPUT, "message": first })
            );
            return EXIT_INVALID_INPUT;
        }
    };
    match execute(cli, out).and_then(|()| out.flush().map_err(Failure::from)) {
        Ok(()) => EXIT_OK,
        Err(failure) => {
            let code = failure.exit_code();
            let _ = writeln!(
                err,
                "{}",
                json!({ "error": code, "message": failure.message() })
            );
            code
        }
    }
}
