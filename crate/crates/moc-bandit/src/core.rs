//! Shared domain types: contexts, reward vectors, the uniform hypercube
//! partition of the context set, and per-(arm, cell) statistics.

use std::collections::HashMap;

use crate::error::{Error, Result};

/// Largest dense statistics table: above `m^d * K` entries the table falls
/// back to a sparse map.
pub const DENSE_TABLE_LIMIT: usize = 1 << 24;

/// A context point in `[0,1]^d`.
#[derive(Debug, Clone, PartialEq)]
pub struct Context {
    coords: Vec<f64>,
}

impl Context {
    /// Validates dimension >= 1 and every coordinate in `[0,1]`.
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::InvalidInput("context needs dimension >= 1".into()));
        }
        for (i, c) in coords.iter().enumerate() {
            if !c.is_finite() || !(0.0..=1.0).contains(c) {
                return Err(Error::InvalidInput(format!(
                    "context coordinate {i} = {c} outside [0,1]"
                )));
            }
        }
        Ok(Self { coords })
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    /// Copy of this context with one more trailing coordinate.
    pub fn extended(&self, extra: f64) -> Result<Self> {
        let mut coords = self.coords.clone();
        coords.push(extra);
        Self::new(coords)
    }

    /// Copy of the first `d` coordinates.
    pub fn truncated(&self, d: usize) -> Result<Self> {
        if d == 0 || d > self.dim() {
            return Err(Error::InvalidInput(format!(
                "cannot truncate a {}-dimensional context to {d}",
                self.dim()
            )));
        }
        Self::new(self.coords[..d].to_vec())
    }
}

/// Observed two-dimensional reward. Construction enforces finiteness, so the
/// running-mean update below cannot be poisoned by NaN or infinities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RewardVector {
    pub dominant: f64,
    pub nondominant: f64,
}

impl RewardVector {
    pub fn new(dominant: f64, nondominant: f64) -> Result<Self> {
        if !dominant.is_finite() || !nondominant.is_finite() {
            return Err(Error::InvalidInput(format!(
                "reward components must be finite, got ({dominant}, {nondominant})"
            )));
        }
        Ok(Self {
            dominant,
            nondominant,
        })
    }
}

/// Ground-truth expected reward vectors, one `[dominant, nondominant]` pair
/// per arm. Produced by environments, consumed by the oracles.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpectedRewards {
    per_arm: Vec<[f64; 2]>,
}

impl ExpectedRewards {
    pub fn new(per_arm: Vec<[f64; 2]>) -> Result<Self> {
        if per_arm.is_empty() {
            return Err(Error::InvalidInput("need at least one arm".into()));
        }
        for (a, v) in per_arm.iter().enumerate() {
            if !v[0].is_finite() || !v[1].is_finite() {
                return Err(Error::InvalidInput(format!(
                    "expected reward of arm {a} is not finite: ({}, {})",
                    v[0], v[1]
                )));
            }
        }
        Ok(Self { per_arm })
    }

    pub fn num_arms(&self) -> usize {
        self.per_arm.len()
    }

    pub fn arm(&self, a: usize) -> [f64; 2] {
        self.per_arm[a]
    }

    pub fn iter(&self) -> impl Iterator<Item = [f64; 2]> + '_ {
        self.per_arm.iter().copied()
    }
}

/// Uniform partition of `[0,1]^d` into `m^d` hypercubes with edge `1/m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PartitionSpec {
    d: usize,
    m: usize,
    num_cells: usize,
}

impl PartitionSpec {
    pub fn new(d: usize, m: usize) -> Result<Self> {
        if d == 0 || m == 0 {
            return Err(Error::InvalidInput(format!(
                "partition needs d >= 1 and m >= 1, got d={d}, m={m}"
            )));
        }
        let mut num_cells: usize = 1;
        for _ in 0..d {
            num_cells = num_cells.checked_mul(m).ok_or_else(|| {
                Error::InvalidInput(format!(
                    "cell count m^d = {m}^{d} overflows the index range"
                ))
            })?;
        }
        Ok(Self { d, m, num_cells })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn num_cells(&self) -> usize {
        self.num_cells
    }
}

/// Flat row-major address of one partition cell (last axis varies fastest).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CellIndex(pub usize);

impl CellIndex {
    pub fn from_axes(axes: &[usize], spec: &PartitionSpec) -> Result<Self> {
        if axes.len() != spec.d() {
            return Err(Error::InvalidInput(format!(
                "axis tuple has length {}, partition dimension is {}",
                axes.len(),
                spec.d()
            )));
        }
        let mut flat = 0usize;
        for &k in axes {
            if k >= spec.m() {
                return Err(Error::InvalidInput(format!(
                    "axis index {k} out of range for m = {}",
                    spec.m()
                )));
            }
            flat = flat * spec.m() + k;
        }
        Ok(Self(flat))
    }

    pub fn axes(&self, spec: &PartitionSpec) -> Vec<usize> {
        let mut axes = vec![0usize; spec.d()];
        let mut rest = self.0;
        for slot in axes.iter_mut().rev() {
            *slot = rest % spec.m();
            rest /= spec.m();
        }
        axes
    }
}

/// Finds the cell containing `x`. Cells are half-open boxes
/// `prod_i [k_i/m, (k_i+1)/m)` with the top face closed on the last cell of
/// each axis, so coordinate 1.0 maps to axis index `m-1`. Deterministic; the
/// alternative of randomizing boundary contexts would break golden-trace
/// reproducibility for a measure-zero gain.
pub fn locate(x: &Context, spec: &PartitionSpec) -> Result<CellIndex> {
    if x.dim() != spec.d() {
        return Err(Error::InvalidInput(format!(
            "context dimension {} does not match partition dimension {}",
            x.dim(),
            spec.d()
        )));
    }
    let m = spec.m();
    let mut flat = 0usize;
    for &c in x.coords() {
        let k = ((c * m as f64).floor() as usize).min(m - 1);
        flat = flat * m + k;
    }
    Ok(CellIndex(flat))
}

/// Counter and per-objective sample means for one (arm, cell) pair.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct CellStats {
    pub count: u64,
    pub mean_dominant: f64,
    pub mean_nondominant: f64,
}

impl CellStats {
    /// Running-mean recurrence `mean <- (mean * n + r) / (n + 1)`.
    ///
    /// Rewards are bounded in the shipped environments, so the plain
    /// recurrence keeps the means within `k * 2^-45` of the true average
    /// after `k` updates; Welford's method buys nothing here.
    pub fn update(&mut self, r: RewardVector) {
        let n = self.count as f64;
        self.mean_dominant = (self.mean_dominant * n + r.dominant) / (n + 1.0);
        self.mean_nondominant = (self.mean_nondominant * n + r.nondominant) / (n + 1.0);
        self.count += 1;
    }

    /// Value-style variant of [`CellStats::update`].
    pub fn updated(mut self, r: RewardVector) -> Self {
        self.update(r);
        self
    }
}

/// Per-(cell, arm) statistics table. Dense array when `m^d * K` is small
/// (the common case: every shipped experiment uses m <= 18), sparse map
/// otherwise.
#[derive(Debug, Clone)]
pub struct StatsTable {
    num_arms: usize,
    kind: TableKind,
}

#[derive(Debug, Clone)]
enum TableKind {
    Dense(Vec<CellStats>),
    Sparse(HashMap<(usize, usize), CellStats>),
}

impl StatsTable {
    pub fn new(spec: &PartitionSpec, num_arms: usize) -> Result<Self> {
        if num_arms == 0 {
            return Err(Error::InvalidInput("need at least one arm".into()));
        }
        let kind = match spec.num_cells().checked_mul(num_arms) {
            Some(entries) if entries <= DENSE_TABLE_LIMIT => {
                TableKind::Dense(vec![CellStats::default(); entries])
            }
            _ => TableKind::Sparse(HashMap::new()),
        };
        Ok(Self { num_arms, kind })
    }

    pub fn num_arms(&self) -> usize {
        self.num_arms
    }

    pub fn get(&self, cell: CellIndex, arm: usize) -> CellStats {
        debug_assert!(arm < self.num_arms);
        match &self.kind {
            TableKind::Dense(v) => v[cell.0 * self.num_arms + arm],
            TableKind::Sparse(map) => map.get(&(cell.0, arm)).copied().unwrap_or_default(),
        }
    }

    pub fn update(&mut self, cell: CellIndex, arm: usize, r: RewardVector) {
        debug_assert!(arm < self.num_arms);
        match &mut self.kind {
            TableKind::Dense(v) => v[cell.0 * self.num_arms + arm].update(r),
            TableKind::Sparse(map) => map.entry((cell.0, arm)).or_default().update(r),
        }
    }

    /// Total number of updates across all cells and arms.
    pub fn total_count(&self) -> u64 {
        match &self.kind {
            TableKind::Dense(v) => v.iter().map(|s| s.count).sum(),
            TableKind::Sparse(map) => map.values().map(|s| s.count).sum(),
        }
    }

    pub fn is_dense(&self) -> bool {
        matches!(self.kind, TableKind::Dense(_))
    }
}

/// Learner hyperparameters shared by the partition-based policies.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HyperParams {
    /// Smoothness constant relating context distance to mean-reward distance.
    pub holder_l: f64,
    /// Smoothness exponent in (0, 1].
    pub alpha: f64,
    /// Cells per axis.
    pub m: usize,
    /// Safety-margin multiplier for the explore/exploit branch.
    pub beta: f64,
    /// Number of rounds the learner is tuned for.
    pub horizon: u64,
    pub num_arms: usize,
    /// Uniform factor in (0, 1] applied to every confidence width.
    pub scale: f64,
}

impl HyperParams {
    pub fn validated(self) -> Result<Self> {
        if !(self.holder_l.is_finite() && self.holder_l > 0.0) {
            return Err(Error::InvalidInput(format!(
                "L must be > 0, got {}",
                self.holder_l
            )));
        }
        if !(self.alpha.is_finite() && 0.0 < self.alpha && self.alpha <= 1.0) {
            return Err(Error::InvalidInput(format!(
                "alpha must lie in (0,1], got {}",
                self.alpha
            )));
        }
        if self.m == 0 {
            return Err(Error::InvalidInput("m must be >= 1".into()));
        }
        if !(self.beta.is_finite() && self.beta > 0.0) {
            return Err(Error::InvalidInput(format!(
                "beta must be > 0, got {}",
                self.beta
            )));
        }
        if self.horizon == 0 {
            return Err(Error::InvalidInput("horizon must be >= 1".into()));
        }
        if self.num_arms == 0 {
            return Err(Error::InvalidInput("need at least one arm".into()));
        }
        if !(self.scale.is_finite() && 0.0 < self.scale && self.scale <= 1.0) {
            return Err(Error::InvalidInput(format!(
                "scale must lie in (0,1], got {}",
                self.scale
            )));
        }
        Ok(self)
    }

    /// Margin of tolerance `v = L * d^(alpha/2) * m^(-alpha)`: the
    /// non-vanishing slack left by partitioning the context set.
    pub fn margin_of_tolerance(&self, d: usize) -> f64 {
        margin_of_tolerance(self, d)
    }

    /// Log confidence constant `A = 1 + 2 ln(4 K m^d T^(3/2))` (natural log,
    /// matching the sub-Gaussian concentration bound it comes from).
    pub fn confidence_constant(&self, d: usize) -> f64 {
        let md = (self.m as f64).powi(d as i32);
        1.0 + 2.0 * (4.0 * self.num_arms as f64 * md * (self.horizon as f64).powf(1.5)).ln()
    }
}

/// Free-function form of the margin of tolerance.
pub fn margin_of_tolerance(h: &HyperParams, d: usize) -> f64 {
    h.holder_l * (d as f64).powf(h.alpha / 2.0) * (h.m as f64).powf(-h.alpha)
}
