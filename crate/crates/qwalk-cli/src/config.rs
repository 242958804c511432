//! Experiment configuration: a single JSON document, with CLI flags
//! overriding individual fields and per-mode defaults filling the rest.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use qwalk_core::analytic::DEFAULT_N0;
use qwalk_core::{CoinSchedule, Complex64, WalkerState};

use crate::runner::CliError;

/// Experiment modes exposed as CLI subcommands.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Evolve,
    Snapshot,
    Sweep,
    AnalyticCompare,
    Identities,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Mode::Evolve => "evolve",
            Mode::Snapshot => "snapshot",
            Mode::Sweep => "sweep",
            Mode::AnalyticCompare => "analytic-compare",
            Mode::Identities => "identities",
        };
        f.write_str(name)
    }
}

/// Coin-schedule specification as it appears in config files, e.g.
/// `{"kind":"powerlaw","alpha":0.3}`. The table variant points at a
/// one-column CSV of angles in radians.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ScheduleSpec {
    #[serde(rename = "powerlaw")]
    PowerLaw { alpha: f64 },
    Constant { theta: f64 },
    Linear { gamma: f64 },
    Table { path: PathBuf },
}

impl ScheduleSpec {
    /// Materialize the schedule; the table variant reads its angle file.
    pub fn build(&self) -> Result<CoinSchedule, CliError> {
        let schedule = match self {
            ScheduleSpec::PowerLaw { alpha } => CoinSchedule::power_law(*alpha)?,
            ScheduleSpec::Constant { theta } => CoinSchedule::constant(*theta),
            ScheduleSpec::Linear { gamma } => CoinSchedule::linear(*gamma)?,
            ScheduleSpec::Table { path } => {
                let text = std::fs::read_to_string(path).map_err(|e| {
                    CliError::Io(format!("cannot read angle table {}: {e}", path.display()))
                })?;
                CoinSchedule::table(qwalk_core::io::parse_angle_table(&text)?)?
            }
        };
        Ok(schedule)
    }
}

/// Walker starting point: one site and its chirality pair, components as
/// `[re, im]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InitialCondition {
    pub site: i64,
    pub a: [f64; 2],
    pub b: [f64; 2],
}

impl Default for InitialCondition {
    /// The symmetric choice (1, i)/sqrt(2) at the origin.
    fn default() -> Self {
        InitialCondition {
            site: 0,
            a: [FRAC_1_SQRT_2, 0.0],
            b: [0.0, FRAC_1_SQRT_2],
        }
    }
}

impl InitialCondition {
    pub fn build(&self) -> Result<WalkerState, CliError> {
        Ok(WalkerState::new_localized(
            self.site,
            Complex64::new(self.a[0], self.a[1]),
            Complex64::new(self.b[0], self.b[1]),
        )?)
    }
}

/// On-disk configuration; every field optional so partial documents work.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<Mode>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schedule: Option<ScheduleSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alphas: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_max: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n0: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub record_every: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial: Option<InitialCondition>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out_dir: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text)
            .map_err(|e| CliError::Validation(format!("config: {e}"))) // serde_json includes line/column
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }
}

/// Field overrides taken from the command line.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub alphas: Option<Vec<f64>>,
    pub steps: Option<u64>,
    pub n0: Option<u64>,
    pub record_every: Option<u64>,
    pub out: Option<PathBuf>,
}

/// Fully resolved, validated run parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct ResolvedConfig {
    pub mode: Mode,
    pub schedule: Option<ScheduleSpec>,
    pub alphas: Vec<f64>,
    pub n_max: u64,
    pub n0: u64,
    pub record_every: u64,
    pub initial: InitialCondition,
    pub out_dir: PathBuf,
}

fn default_alphas(mode: Mode) -> Vec<f64> {
    match mode {
        Mode::Sweep => (0..=9).map(|i| i as f64 / 10.0).collect(),
        Mode::Snapshot => vec![0.0, 0.3, 1.0, 2.0],
        Mode::AnalyticCompare => vec![0.3],
        Mode::Evolve | Mode::Identities => Vec::new(),
    }
}

fn default_n_max(mode: Mode) -> u64 {
    match mode {
        Mode::Snapshot => 5_000,
        _ => 10_000,
    }
}

/// Merge config, overrides, and per-mode defaults, then validate.
pub fn resolve(
    mode: Mode,
    config: ExperimentConfig,
    overrides: Overrides,
) -> Result<ResolvedConfig, CliError> {
    if let Some(declared) = config.mode {
        if declared != mode {
            return Err(CliError::Validation(format!(
                "config declares mode \"{declared}\" but the {mode} subcommand was invoked"
            )));
        }
    }

    let resolved = ResolvedConfig {
        mode,
        schedule: config.schedule,
        alphas: overrides
            .alphas
            .or(config.alphas)
            .unwrap_or_else(|| default_alphas(mode)),
        n_max: overrides.steps.or(config.n_max).unwrap_or(default_n_max(mode)),
        n0: overrides.n0.or(config.n0).unwrap_or(DEFAULT_N0),
        record_every: overrides
            .record_every
            .or(config.record_every)
            .unwrap_or(10),
        initial: config.initial.unwrap_or_default(),
        out_dir: overrides
            .out
            .or(config.out_dir)
            .unwrap_or_else(|| PathBuf::from("out")),
    };
    validate(&resolved)?;
    Ok(resolved)
}

fn validate(cfg: &ResolvedConfig) -> Result<(), CliError> {
    if cfg.n0 < 1 {
        return Err(CliError::Validation("n0 must be >= 1".into()));
    }
    if cfg.n_max < cfg.n0 {
        return Err(CliError::Validation(format!(
            "n_max = {} must be >= n0 = {}",
            cfg.n_max, cfg.n0
        )));
    }
    if cfg.record_every < 1 {
        return Err(CliError::Validation("record_every must be >= 1".into()));
    }
    for &a in &cfg.alphas {
        if !a.is_finite() || a < 0.0 {
            return Err(CliError::Validation(format!(
                "alpha values must be finite and >= 0, got {a}"
            )));
        }
    }
    let norm = cfg.initial.a[0] * cfg.initial.a[0]
        + cfg.initial.a[1] * cfg.initial.a[1]
        + cfg.initial.b[0] * cfg.initial.b[0]
        + cfg.initial.b[1] * cfg.initial.b[1];
    if (norm - 1.0).abs() > 1e-12 {
        return Err(CliError::Validation(format!(
            "initial amplitudes must be normalized: |a|^2 + |b|^2 = {norm}"
        )));
    }
    match cfg.mode {
        Mode::Sweep | Mode::Snapshot => {
            if cfg.alphas.is_empty() {
                return Err(CliError::Validation("alpha list must not be empty".into()));
            }
        }
        Mode::AnalyticCompare => {
            let alpha = *cfg.alphas.first().ok_or_else(|| {
                CliError::Validation("analytic-compare needs one alpha".into())
            })?;
            if alpha >= 1.0 {
                return Err(CliError::Validation(format!(
                    "analytic-compare needs alpha < 1 (unbounded effective time), got {alpha}"
                )));
            }
        }
        Mode::Evolve | Mode::Identities => {}
    }
    Ok(())
}
