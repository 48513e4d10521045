//! Experiment configuration: strict JSON parsing, per-experiment defaults,
//! and resolution of the partition size from the horizon.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::environments::{load_replay_csv, ReplayRecord};
use crate::error::{Error, Result};
use crate::policies::{Algorithm, WeightSchedule};

/// The scale factors swept by the `sweep` subcommand.
pub const SCALE_SWEEP_FACTORS: [f64; 7] = [
    1.0,
    1.0 / 5.0,
    1.0 / 10.0,
    1.0 / 15.0,
    1.0 / 20.0,
    1.0 / 25.0,
    1.0 / 30.0,
];

pub const DEFAULT_BASE_SEED: u64 = 42;
pub const DEFAULT_CHECKPOINTS: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    SyntheticGaussian,
    Multichannel,
    Replay,
    Periodic,
}

impl ExperimentKind {
    pub fn name(&self) -> &'static str {
        match self {
            ExperimentKind::SyntheticGaussian => "synthetic_gaussian",
            ExperimentKind::Multichannel => "multichannel",
            ExperimentKind::Replay => "replay",
            ExperimentKind::Periodic => "periodic",
        }
    }
}

/// Which exponent picks the default partition size.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    /// `m = ceil(T^(1/(3 alpha + d)))`: both regrets sublinear.
    #[default]
    TwoDOptimal,
    /// `m = ceil(T^(1/(2 alpha + d)))`: best Pareto-regret growth at the
    /// cost of a linear non-dominant regret.
    ParetoOptimal,
}

/// On-disk configuration. Every field except `experiment` is optional;
/// unknown keys are rejected so hyperparameter typos cannot pass silently.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    #[serde(default)]
    pub horizon: Option<u64>,
    #[serde(default)]
    pub runs: Option<u32>,
    #[serde(default)]
    pub base_seed: Option<u64>,
    #[serde(default)]
    pub algorithms: Option<Vec<Algorithm>>,
    #[serde(default)]
    pub hyperparams: HyperParamsConfig,
    #[serde(default)]
    pub mode: Option<Mode>,
    #[serde(default)]
    pub environment: EnvironmentBlock,
    #[serde(default)]
    pub output_dir: Option<PathBuf>,
    #[serde(default)]
    pub dump_rounds: Option<bool>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HyperParamsConfig {
    #[serde(default)]
    pub l: Option<f64>,
    #[serde(default)]
    pub alpha: Option<f64>,
    #[serde(default)]
    pub beta: Option<f64>,
    #[serde(default)]
    pub m: Option<usize>,
    #[serde(default)]
    pub scale: Option<f64>,
    #[serde(default)]
    pub scale_sweep: Option<bool>,
    #[serde(default)]
    pub scalarized_schedule: Option<WeightSchedule>,
}

/// Environment-specific settings; each key is only legal for the experiment
/// it belongs to.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnvironmentBlock {
    /// replay: CSV with header `x1,...,xd,click`. Absent -> surrogate.
    #[serde(default)]
    pub replay_file: Option<PathBuf>,
    /// replay surrogate: overall click rate in (0,1).
    #[serde(default)]
    pub click_rate: Option<f64>,
    /// replay surrogate: context dimension.
    #[serde(default)]
    pub replay_dims: Option<usize>,
    /// periodic: rounds per modulation period.
    #[serde(default)]
    pub period: Option<u64>,
}

/// Replay data source after resolution.
#[derive(Debug, Clone, Serialize, PartialEq)]
#[serde(rename_all = "snake_case")]
pub enum ReplaySource {
    File { path: PathBuf },
    Surrogate { click_rate: f64, dims: usize },
}

/// Fully-resolved configuration; serialized into the output directory as
/// `resolved_config.json`.
#[derive(Debug, Clone, Serialize)]
pub struct ResolvedConfig {
    pub experiment: ExperimentKind,
    pub horizon: u64,
    pub runs: u32,
    pub base_seed: u64,
    pub algorithms: Vec<Algorithm>,
    pub l: f64,
    pub alpha: f64,
    pub beta: f64,
    pub m: usize,
    pub scale: f64,
    pub scale_sweep: bool,
    pub scalarized_schedule: WeightSchedule,
    pub mode: Mode,
    pub context_dims: usize,
    pub num_arms: usize,
    pub checkpoints: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub replay: Option<ReplaySource>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub period: Option<u64>,
    pub output_dir: PathBuf,
    pub dump_rounds: bool,
    /// Records loaded once for file-based replay; shared across runs.
    #[serde(skip)]
    pub replay_records: Option<Arc<Vec<ReplayRecord>>>,
}

impl ResolvedConfig {
    pub fn hyperparams(&self) -> crate::core::HyperParams {
        crate::core::HyperParams {
            holder_l: self.l,
            alpha: self.alpha,
            m: self.m,
            beta: self.beta,
            horizon: self.horizon,
            num_arms: self.num_arms,
            scale: self.scale,
        }
    }

    /// Same configuration with a different uncertainty scale.
    pub fn with_scale(&self, scale: f64) -> Self {
        Self {
            scale,
            scale_sweep: false,
            ..self.clone()
        }
    }
}

/// Smallest integer `m >= 1` with `m^exponent >= horizon`, robust to the
/// `powf` rounding that would otherwise turn exact roots like `1e5^(1/5)`
/// into 10.000000000000002.
pub fn partition_size(horizon: u64, exponent: f64) -> usize {
    let t = horizon as f64;
    let mut m = t.powf(1.0 / exponent).ceil().max(1.0) as usize;
    let reaches = |m: usize| (m as f64).powf(exponent) >= t * (1.0 - 1e-9);
    while m > 1 && reaches(m - 1) {
        m -= 1;
    }
    while !reaches(m) {
        m += 1;
    }
    m
}

fn default_horizon(kind: ExperimentKind) -> u64 {
    match kind {
        ExperimentKind::Multichannel => 1_000_000,
        _ => 100_000,
    }
}

fn default_runs(kind: ExperimentKind) -> u32 {
    match kind {
        ExperimentKind::SyntheticGaussian => 100,
        _ => 20,
    }
}

fn default_beta(kind: ExperimentKind) -> f64 {
    match kind {
        ExperimentKind::Replay => 0.1,
        _ => 1.0,
    }
}

/// Reads, parses and resolves a configuration file.
pub fn parse_config(path: &Path) -> Result<ResolvedConfig> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
    let raw: ExperimentConfig = serde_json::from_str(&text)
        .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
    resolve(raw)
}

/// Applies per-experiment defaults and validates every invariant.
pub fn resolve(raw: ExperimentConfig) -> Result<ResolvedConfig> {
    let kind = raw.experiment;
    let horizon = raw.horizon.unwrap_or_else(|| default_horizon(kind));
    if horizon == 0 {
        return Err(Error::Config("horizon must be >= 1".into()));
    }
    let runs = raw.runs.unwrap_or_else(|| default_runs(kind));
    if runs == 0 {
        return Err(Error::Config("runs must be >= 1".into()));
    }
    let base_seed = raw.base_seed.unwrap_or(DEFAULT_BASE_SEED);
    let algorithms = raw.algorithms.unwrap_or_else(|| Algorithm::ALL.to_vec());
    if algorithms.is_empty() {
        return Err(Error::Config("algorithms must not be empty".into()));
    }
    {
        let mut seen = std::collections::HashSet::new();
        for a in &algorithms {
            if !seen.insert(*a) {
                return Err(Error::Config(format!("duplicate algorithm {:?}", a.name())));
            }
        }
    }

    let h = &raw.hyperparams;
    let l = h.l.unwrap_or(1.0);
    let alpha = h.alpha.unwrap_or(1.0);
    let beta = h.beta.unwrap_or_else(|| default_beta(kind));
    let scale = h.scale.unwrap_or(1.0);
    let scale_sweep = h.scale_sweep.unwrap_or(false);
    let schedule = h.scalarized_schedule.unwrap_or_default();
    if !(l.is_finite() && l > 0.0) {
        return Err(Error::Config(format!("hyperparams.l must be > 0, got {l}")));
    }
    if !(alpha.is_finite() && 0.0 < alpha && alpha <= 1.0) {
        return Err(Error::Config(format!(
            "hyperparams.alpha must lie in (0,1], got {alpha}"
        )));
    }
    if !(beta.is_finite() && beta > 0.0) {
        return Err(Error::Config(format!(
            "hyperparams.beta must be > 0, got {beta}"
        )));
    }
    if !(scale.is_finite() && 0.0 < scale && scale <= 1.0) {
        return Err(Error::Config(format!(
            "hyperparams.scale must lie in (0,1], got {scale}"
        )));
    }

    // environment-block keys are only legal for their own experiment
    let env = &raw.environment;
    if kind != ExperimentKind::Replay
        && (env.replay_file.is_some() || env.click_rate.is_some() || env.replay_dims.is_some())
    {
        return Err(Error::Config(format!(
            "replay_file/click_rate/replay_dims only apply to the replay experiment, not {}",
            kind.name()
        )));
    }
    if kind != ExperimentKind::Periodic && env.period.is_some() {
        return Err(Error::Config(
            "environment.period only applies to the periodic experiment".into(),
        ));
    }

    let mut replay = None;
    let mut replay_records = None;
    let mut period = None;
    let (context_dims, num_arms) = match kind {
        ExperimentKind::SyntheticGaussian => (2, 4),
        ExperimentKind::Multichannel => (
            2,
            crate::environments::CHANNEL_RATES.len() * crate::environments::NUM_CHANNELS,
        ),
        ExperimentKind::Periodic => {
            let p = env.period.unwrap_or(10_000);
            if p < 2 {
                return Err(Error::Config(format!(
                    "environment.period must be >= 2, got {p}"
                )));
            }
            period = Some(p);
            (3, 4) // synthetic surface plus the time coordinate
        }
        ExperimentKind::Replay => {
            if let Some(path) = &env.replay_file {
                if env.click_rate.is_some() || env.replay_dims.is_some() {
                    return Err(Error::Config(
                        "click_rate/replay_dims are surrogate settings; remove them when replay_file is set"
                            .into(),
                    ));
                }
                let records = load_replay_csv(path)?;
                if (records.len() as u64) < horizon {
                    return Err(Error::Config(format!(
                        "replay file {} has {} rounds, horizon needs {horizon}",
                        path.display(),
                        records.len()
                    )));
                }
                let dims = records[0].context.len();
                replay = Some(ReplaySource::File { path: path.clone() });
                replay_records = Some(Arc::new(records));
                (dims, 2)
            } else {
                let click_rate = env.click_rate.unwrap_or(0.0407);
                if !(click_rate.is_finite() && 0.0 < click_rate && click_rate < 1.0) {
                    return Err(Error::Config(format!(
                        "environment.click_rate must lie in (0,1), got {click_rate}"
                    )));
                }
                let dims = env.replay_dims.unwrap_or(4);
                if dims == 0 {
                    return Err(Error::Config("environment.replay_dims must be >= 1".into()));
                }
                replay = Some(ReplaySource::Surrogate { click_rate, dims });
                (dims, 2)
            }
        }
    };

    let mode = raw.mode.unwrap_or_default();
    let m = match h.m {
        Some(m) if m >= 1 => m,
        Some(m) => {
            return Err(Error::Config(format!(
                "hyperparams.m must be >= 1, got {m}"
            )));
        }
        None => {
            let exponent = match mode {
                Mode::TwoDOptimal => 3.0 * alpha + context_dims as f64,
                Mode::ParetoOptimal => 2.0 * alpha + context_dims as f64,
            };
            partition_size(horizon, exponent)
        }
    };
    crate::core::PartitionSpec::new(context_dims, m).map_err(|e| Error::Config(e.to_string()))?;

    Ok(ResolvedConfig {
        experiment: kind,
        horizon,
        runs,
        base_seed,
        algorithms,
        l,
        alpha,
        beta,
        m,
        scale,
        scale_sweep,
        scalarized_schedule: schedule,
        mode,
        context_dims,
        num_arms,
        checkpoints: DEFAULT_CHECKPOINTS,
        replay,
        period,
        output_dir: raw.output_dir.unwrap_or_else(|| PathBuf::from("out")),
        dump_rounds: raw.dump_rounds.unwrap_or(false),
        replay_records,
    })
}
