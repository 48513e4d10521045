//! Command-line runner: `run` one experiment, `sweep` the uncertainty-scale
//! grid, `validate` a config without touching the filesystem.
//!
//! Exit codes: 0 success, 1 configuration error (before any simulation),
//! 2 runtime failure.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::config::{parse_config, ResolvedConfig, SCALE_SWEEP_FACTORS};
use crate::error::{Error, Result};
use crate::evaluation::{run_experiment, ExperimentResults};
use crate::output::emit_outputs;
use crate::policies::Algorithm;

#[derive(Debug, Parser)]
#[command(
    name = "moc-bandit",
    version,
    about = "Two-objective contextual bandit simulator"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Execute one experiment and write traces, summary and plots.
    Run(RunArgs),
    /// Run the uncertainty-scale sweep, one output subdirectory per factor.
    Sweep(SweepArgs),
    /// Parse and pre-flight a config without simulating or writing anything.
    Validate(ValidateArgs),
}

#[derive(Debug, Args)]
struct RunArgs {
    #[arg(long)]
    config: PathBuf,
    /// Overrides the config's base seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Overrides the config's output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads for run-level parallelism (default: all processors,
    /// `MOC_BANDIT_JOBS` as fallback).
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Debug, Args)]
struct ValidateArgs {
    #[arg(long)]
    config: PathBuf,
}

fn resolve_jobs(flag: Option<usize>) -> usize {
    flag.or_else(|| {
        std::env::var("MOC_BANDIT_JOBS")
            .ok()
            .and_then(|v| v.parse().ok())
    })
    .filter(|&j| j >= 1)
    .unwrap_or_else(|| {
        std::thread::available_parallelism()
            .map(|n| n.get())
            .unwrap_or(1)
    })
}

fn apply_overrides(cfg: &mut ResolvedConfig, seed: Option<u64>, out: Option<PathBuf>) {
    if let Some(s) = seed {
        cfg.base_seed = s;
    }
    if let Some(o) = out {
        cfg.output_dir = o;
    }
}

/// Creates the output directory and echoes the resolved config into it;
/// failing is a configuration error, caught before any simulation starts.
fn preflight_outputs(cfg: &ResolvedConfig, dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir)
        .map_err(|e| Error::Config(format!("output directory {}: {e}", dir.display())))?;
    let resolved = serde_json::to_string_pretty(cfg).expect("serializable") + "\n";
    std::fs::write(dir.join("resolved_config.json"), resolved)
        .map_err(|e| Error::Config(format!("output directory {}: {e}", dir.display())))?;
    Ok(())
}

fn print_result_lines(cfg: &ResolvedConfig, results: &ExperimentResults) {
    println!(
        "{}: T={} runs={} m={} scale={:.6} ({:.1}s)",
        cfg.experiment.name(),
        cfg.horizon,
        cfg.runs,
        cfg.m,
        cfg.scale,
        results.wall_clock_seconds
    );
    for agg in &results.aggregates {
        println!(
            "  {:<8} reg1={:<12.2} reg2={:<12.2} pareto={:<12.2} rw1={:.2} rw2={:.2}",
            agg.algorithm.name(),
            agg.final_reg1(),
            agg.final_reg2(),
            agg.final_pareto(),
            agg.final_cum_reward1(),
            agg.final_cum_reward2(),
        );
    }
}

#[derive(Debug, Serialize)]
struct SweepEntry {
    scale: f64,
    directory: String,
    final_reg1: Vec<(String, f64)>,
    final_reg2: Vec<(String, f64)>,
}

#[derive(Debug, Serialize)]
struct SweepSummary {
    factors: Vec<f64>,
    /// Scale minimizing the two-objective learner's final mean dominant
    /// regret (first algorithm's when the learner is not configured).
    selected_scale: f64,
    selected_directory: String,
    per_scale: Vec<SweepEntry>,
}

/// Runs the whole scale sweep; returns per-scale results plus the selected
/// scale. Library-level so tests and the acceptance suite reuse it.
pub fn run_sweep(
    cfg: &ResolvedConfig,
    jobs: usize,
) -> Result<(Vec<(f64, ExperimentResults)>, f64)> {
    let mut per_scale = Vec::with_capacity(SCALE_SWEEP_FACTORS.len());
    for &factor in &SCALE_SWEEP_FACTORS {
        let sub = cfg.with_scale(factor);
        per_scale.push((factor, run_experiment(&sub, jobs)?));
    }
    let target = if cfg.algorithms.contains(&Algorithm::Mocmab) {
        Algorithm::Mocmab
    } else {
        cfg.algorithms[0]
    };
    let selected = per_scale
        .iter()
        .min_by(|a, b| {
            let ra = a.1.aggregate(target).expect("configured").final_reg1();
            let rb = b.1.aggregate(target).expect("configured").final_reg1();
            ra.partial_cmp(&rb).expect("finite regrets")
        })
        .expect("non-empty sweep")
        .0;
    Ok((per_scale, selected))
}

/// Directory name for one sweep factor: scale_1over1, scale_1over5, ...
pub fn sweep_dir_name(factor: f64) -> String {
    let denominator = (1.0 / factor).round() as u32;
    format!("scale_1over{denominator}")
}

fn cmd_run(args: RunArgs) -> std::result::Result<(), i32> {
    let mut cfg = parse_config(&args.config).map_err(|e| fail(1, &e))?;
    apply_overrides(&mut cfg, args.seed, args.out);
    let jobs = resolve_jobs(args.jobs);
    if cfg.scale_sweep {
        return cmd_sweep_resolved(cfg, jobs);
    }
    preflight_outputs(&cfg, &cfg.output_dir.clone()).map_err(|e| fail(1, &e))?;
    let results = run_experiment(&cfg, jobs).map_err(|e| fail(2, &e))?;
    let files = emit_outputs(&results, &cfg, &cfg.output_dir).map_err(|e| fail(2, &e))?;
    print_result_lines(&cfg, &results);
    println!(
        "wrote {} files to {}",
        files.len(),
        cfg.output_dir.display()
    );
    Ok(())
}

fn cmd_sweep_resolved(cfg: ResolvedConfig, jobs: usize) -> std::result::Result<(), i32> {
    let root = cfg.output_dir.clone();
    // pre-flight every subdirectory before simulating anything
    for &factor in &SCALE_SWEEP_FACTORS {
        let sub = cfg.with_scale(factor);
        let dir = root.join(sweep_dir_name(factor));
        preflight_outputs(&sub, &dir).map_err(|e| fail(1, &e))?;
    }
    let (per_scale, selected) = run_sweep(&cfg, jobs).map_err(|e| fail(2, &e))?;
    let mut entries = Vec::new();
    for (factor, results) in &per_scale {
        let sub = cfg.with_scale(*factor);
        let dir = root.join(sweep_dir_name(*factor));
        emit_outputs(results, &sub, &dir).map_err(|e| fail(2, &e))?;
        print_result_lines(&sub, results);
        entries.push(SweepEntry {
            scale: *factor,
            directory: sweep_dir_name(*factor),
            final_reg1: results
                .aggregates
                .iter()
                .map(|a| (a.algorithm.name().to_string(), a.final_reg1()))
                .collect(),
            final_reg2: results
                .aggregates
                .iter()
                .map(|a| (a.algorithm.name().to_string(), a.final_reg2()))
                .collect(),
        });
    }
    let summary = SweepSummary {
        factors: SCALE_SWEEP_FACTORS.to_vec(),
        selected_scale: selected,
        selected_directory: sweep_dir_name(selected),
        per_scale: entries,
    };
    std::fs::write(
        root.join("sweep_summary.json"),
        serde_json::to_string_pretty(&summary).expect("serializable") + "\n",
    )
    .map_err(|e| fail(2, &Error::Io(e)))?;
    println!(
        "sweep selected scale {selected:.6} ({})",
        sweep_dir_name(selected)
    );
    Ok(())
}

fn cmd_sweep(args: SweepArgs) -> std::result::Result<(), i32> {
    let mut cfg = parse_config(&args.config).map_err(|e| fail(1, &e))?;
    apply_overrides(&mut cfg, args.seed, args.out);
    let jobs = resolve_jobs(args.jobs);
    cmd_sweep_resolved(cfg, jobs)
}

fn cmd_validate(args: ValidateArgs) -> std::result::Result<(), i32> {
    let cfg = parse_config(&args.config).map_err(|e| fail(1, &e))?;
    // read-only writability probe: the nearest existing ancestor of the
    // output directory must be a writable directory
    let mut probe = cfg.output_dir.as_path();
    loop {
        if probe.as_os_str().is_empty() {
            break; // relative path rooted at cwd
        }
        if probe.exists() {
            let meta = std::fs::metadata(probe)
                .map_err(|e| fail(1, &Error::Config(format!("output directory: {e}"))))?;
            if !meta.is_dir() || meta.permissions().readonly() {
                return Err(fail(
                    1,
                    &Error::Config(format!(
                        "output directory {} is not writable",
                        cfg.output_dir.display()
                    )),
                ));
            }
            break;
        }
        match probe.parent() {
            Some(p) => probe = p,
            None => break,
        }
    }
    println!(
        "ok: {} T={} runs={} m={} K={} d={}",
        cfg.experiment.name(),
        cfg.horizon,
        cfg.runs,
        cfg.m,
        cfg.num_arms,
        cfg.context_dims
    );
    Ok(())
}

fn fail(code: i32, err: &Error) -> i32 {
    eprintln!("error: {err}");
    code
}

/// Parses `argv` and executes the subcommand; returns the process exit code.
pub fn cli_main<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            // clap prints its own help/usage; --help and --version exit 0
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let outcome = match cli.command {
        Command::Run(args) => cmd_run(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Validate(args) => cmd_validate(args),
    };
    match outcome {
        Ok(()) => 0,
        Err(code) => code,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sweep_dir_names() {
        assert_eq!(sweep_dir_name(1.0), "scale_1over1");
        assert_eq!(sweep_dir_name(0.2), "scale_1over5");
        assert_eq!(sweep_dir_name(1.0 / 30.0), "scale_1over30");
    }

    #[test]
    fn jobs_fallback_prefers_flag() {
        assert_eq!(resolve_jobs(Some(3)), 3);
        assert!(resolve_jobs(None) >= 1);
    }
}
