//! Display-decision replay: two actions per round, "display" pays the
//! recorded click in the dominant objective and nothing in the second,
//! "skip" always pays `(0, 1)`. Rounds come from a record stream, either a
//! CSV file (`x1,...,xd,click`) or a synthetic click-model surrogate.

use std::path::Path;
use std::sync::Arc;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::core::{Context, ExpectedRewards, RewardVector};
use crate::environments::Environment;
use crate::error::{Error, Result};

pub const ARM_DISPLAY: usize = 0;
pub const ARM_SKIP: usize = 1;

/// One logged round.
#[derive(Debug, Clone, PartialEq)]
pub struct ReplayRecord {
    pub context: Vec<f64>,
    pub click: bool,
}

/// Ground-truth click probability used only by the regret oracle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ClickModel {
    /// Flat rate; the estimate used for externally supplied logs.
    Constant(f64),
    /// Surrogate model `p(x) = rate * (1 + x_1) / 1.5`, whose average over a
    /// uniform first coordinate is exactly `rate`.
    FirstCoordinate { rate: f64 },
}

impl ClickModel {
    pub fn probability(&self, x: &Context) -> f64 {
        match self {
            ClickModel::Constant(p) => *p,
            ClickModel::FirstCoordinate { rate } => rate * (1.0 + x.coords()[0]) / 1.5,
        }
    }
}

pub struct ReplayEnv {
    records: Arc<Vec<ReplayRecord>>,
    click_model: ClickModel,
    d: usize,
    current: usize,
}

impl ReplayEnv {
    /// Replays explicit records; fails if fewer records than `horizon`.
    pub fn new(
        records: Arc<Vec<ReplayRecord>>,
        click_model: ClickModel,
        horizon: u64,
    ) -> Result<Self> {
        if records.is_empty() {
            return Err(Error::Config("replay records are empty".into()));
        }
        if (records.len() as u64) < horizon {
            return Err(Error::Config(format!(
                "replay file exhausted before the horizon: {} records < {horizon} rounds",
                records.len()
            )));
        }
        let d = records[0].context.len();
        if d == 0 || records.iter().any(|r| r.context.len() != d) {
            return Err(Error::Config(
                "replay records have inconsistent dimensions".into(),
            ));
        }
        Ok(Self {
            records,
            click_model,
            d,
            current: 0,
        })
    }

    /// Synthetic surrogate: uniform contexts, clicks drawn from the
    /// first-coordinate model at the given overall rate.
    pub fn surrogate(horizon: u64, d: usize, rate: f64, seed: u64) -> Result<Self> {
        if !(rate.is_finite() && 0.0 < rate && rate < 1.0) {
            return Err(Error::Config(format!(
                "surrogate click rate must lie in (0,1), got {rate}"
            )));
        }
        if d == 0 {
            return Err(Error::Config("surrogate dimension must be >= 1".into()));
        }
        let model = ClickModel::FirstCoordinate { rate };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let records: Vec<ReplayRecord> = (0..horizon)
            .map(|_| {
                let context: Vec<f64> = (0..d).map(|_| rng.random()).collect();
                let x = Context::new(context.clone()).expect("in range");
                let click = rng.random::<f64>() < model.probability(&x);
                ReplayRecord { context, click }
            })
            .collect();
        Self::new(Arc::new(records), model, horizon)
    }

    /// Loads `x1,...,xd,click` rows. The oracle's click model is the overall
    /// empirical click rate; external logs carry no per-context ground
    /// truth, and the regret numbers for them are indicative only.
    pub fn from_csv(path: &Path, horizon: u64) -> Result<Self> {
        let records = load_replay_csv(path)?;
        let clicks = records.iter().filter(|r| r.click).count();
        let rate = clicks as f64 / records.len() as f64;
        Self::new(Arc::new(records), ClickModel::Constant(rate), horizon)
    }

    pub fn records(&self) -> &[ReplayRecord] {
        &self.records
    }
}

/// Parses the replay CSV schema: header `x1,...,xd,click`, floats in
/// `[0,1]`, click in `{0,1}`.
pub fn load_replay_csv(path: &Path) -> Result<Vec<ReplayRecord>> {
    let mut reader = csv::Reader::from_path(path)
        .map_err(|e| Error::Config(format!("cannot read replay file {}: {e}", path.display())))?;
    let headers = reader
        .headers()
        .map_err(|e| Error::Config(format!("bad replay header: {e}")))?
        .clone();
    let d = headers.len().saturating_sub(1);
    if d == 0 || headers.iter().next_back() != Some("click") {
        return Err(Error::Config(
            "replay header must be x1,...,xd,click".into(),
        ));
    }
    for (i, h) in headers.iter().take(d).enumerate() {
        if h != format!("x{}", i + 1) {
            return Err(Error::Config(format!(
                "replay header column {} is {h:?}, expected \"x{}\"",
                i + 1,
                i + 1
            )));
        }
    }
    let mut records = Vec::new();
    for (line, row) in reader.records().enumerate() {
        let row = row.map_err(|e| Error::Config(format!("replay row {}: {e}", line + 2)))?;
        if row.len() != d + 1 {
            return Err(Error::Config(format!(
                "replay row {} has {} fields, expected {}",
                line + 2,
                row.len(),
                d + 1
            )));
        }
        let mut context = Vec::with_capacity(d);
        for i in 0..d {
            let v: f64 = row[i]
                .parse()
                .map_err(|e| Error::Config(format!("replay row {} field {}: {e}", line + 2, i)))?;
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::Config(format!(
                    "replay row {} coordinate {v} outside [0,1]",
                    line + 2
                )));
            }
            context.push(v);
        }
        let click = match &row[d] {
            "0" => false,
            "1" => true,
            other => {
                return Err(Error::Config(format!(
                    "replay row {} click must be 0 or 1, got {other:?}",
                    line + 2
                )))
            }
        };
        records.push(ReplayRecord { context, click });
    }
    if records.is_empty() {
        return Err(Error::Config("replay file has no data rows".into()));
    }
    Ok(records)
}

impl Environment for ReplayEnv {
    fn next_context(&mut self, t: u64) -> Context {
        let idx = (t - 1) as usize;
        assert!(
            idx < self.records.len(),
            "replay stream exhausted at round {t}"
        );
        self.current = idx;
        Context::new(self.records[idx].context.clone()).expect("validated on load")
    }

    fn sample_reward(&self, _x: &Context, arm: usize, _rng: &mut dyn RngCore) -> RewardVector {
        let click = f64::from(u8::from(self.records[self.current].click));
        match arm {
            ARM_DISPLAY => RewardVector::new(click, 0.0),
            ARM_SKIP => RewardVector::new(0.0, 1.0),
            _ => panic!("replay has two arms, got {arm}"),
        }
        .expect("finite")
    }

    fn true_means(&self, x: &Context) -> ExpectedRewards {
        let p = self.click_model.probability(x);
        ExpectedRewards::new(vec![[p, 0.0], [0.0, 1.0]]).expect("finite")
    }

    fn dims(&self) -> usize {
        self.d
    }

    fn num_arms(&self) -> usize {
        2
    }

    fn tie_tolerance(&self) -> f64 {
        0.0
    }

    fn holder_constants(&self) -> (f64, f64) {
        // click models vary by at most rate/1.5 per unit distance
        (1.0, 1.0)
    }
}
