//! Simulator for two-objective contextual bandits with a dominant objective.
//!
//! Each round the learner sees a context in `[0,1]^d`, picks one of `K` arms
//! and observes a two-dimensional reward. The first component (the dominant
//! objective) is maximized with priority; the second is maximized subject to
//! the first. The crate ships:
//!
//! - [`policies::MocMab`], a partition-based UCB learner for this setting,
//!   plus five UCB-family baselines behind one [`policies::Policy`] contract;
//! - exact lexicographic and Pareto oracles ([`pareto`]) used for regret
//!   accounting, never visible to learners;
//! - simulated environments with queryable ground-truth means
//!   ([`environments`]);
//! - a seeded, reproducible experiment engine ([`evaluation`]) with run-level
//!   parallelism (rayon, behind the default `parallel` feature; a sequential
//!   path is always available);
//! - a configuration-driven CLI (`moc-bandit run|sweep|validate`) emitting
//!   CSV traces, JSON summaries and SVG regret plots ([`config`], [`output`],
//!   [`cli`]).

pub mod cli;
pub mod config;
pub mod core;
pub mod environments;
pub mod error;
pub mod evaluation;
pub mod output;
pub mod pareto;
pub mod policies;
pub(crate) mod seeding;

pub use error::{Error, Result};
