//! Serialization of experiment results: per-algorithm CSV traces, a JSON
//! summary, and SVG regret plots.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::config::ResolvedConfig;
use crate::error::{Error, Result};
use crate::evaluation::{AlgorithmAggregate, EnvelopeParams, ExperimentResults};
use crate::policies::Algorithm;

mod svg;

pub use svg::LinePlot;

pub const TRACE_HEADER: &str =
    "t,reg1_mean,reg1_std,reg2_mean,reg2_std,pareto_mean,pareto_std,cumrw1_mean,cumrw2_mean";

#[derive(Debug, Serialize)]
pub struct AlgorithmSummary {
    pub algorithm: String,
    pub final_reg1: f64,
    pub final_reg2: f64,
    pub final_pareto: f64,
    pub final_cum_reward1: f64,
    pub final_cum_reward2: f64,
    pub sublinearity_reg1: f64,
    pub sublinearity_reg2: f64,
    pub sublinearity_pareto: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub envelope_violations: Option<u64>,
}

#[derive(Debug, Serialize)]
pub struct Summary {
    pub experiment: String,
    pub horizon: u64,
    pub runs: u32,
    pub base_seed: u64,
    pub m: usize,
    pub scale: f64,
    pub beta: f64,
    pub algorithms: Vec<AlgorithmSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub envelope: Option<EnvelopeParams>,
    pub wall_clock_seconds: f64,
}

fn algorithm_summary(agg: &AlgorithmAggregate) -> AlgorithmSummary {
    AlgorithmSummary {
        algorithm: agg.algorithm.name().to_string(),
        final_reg1: agg.final_reg1(),
        final_reg2: agg.final_reg2(),
        final_pareto: agg.final_pareto(),
        final_cum_reward1: agg.final_cum_reward1(),
        final_cum_reward2: agg.final_cum_reward2(),
        sublinearity_reg1: agg.sublinearity[0],
        sublinearity_reg2: agg.sublinearity[1],
        sublinearity_pareto: agg.sublinearity[2],
        envelope_violations: (agg.algorithm == Algorithm::Mocmab)
            .then_some(agg.envelope_violations),
    }
}

fn trace_csv(checkpoints: &[u64], agg: &AlgorithmAggregate) -> String {
    let mut out = String::with_capacity(checkpoints.len() * 96);
    out.push_str(TRACE_HEADER);
    out.push('\n');
    for (j, &t) in checkpoints.iter().enumerate() {
        out.push_str(&format!(
            "{t},{},{},{},{},{},{},{},{}\n",
            agg.reg1_mean[j],
            agg.reg1_std[j],
            agg.reg2_mean[j],
            agg.reg2_std[j],
            agg.pareto_mean[j],
            agg.pareto_std[j],
            agg.cum_reward1_mean[j],
            agg.cum_reward2_mean[j],
        ));
    }
    out
}

fn regret_plot(
    title: &str,
    results: &ExperimentResults,
    series_of: impl Fn(&AlgorithmAggregate) -> &Vec<f64>,
) -> LinePlot {
    LinePlot {
        title: title.to_string(),
        x_label: "round".to_string(),
        y_label: title.to_string(),
        series: results
            .aggregates
            .iter()
            .map(|agg| {
                (
                    agg.algorithm.name().to_string(),
                    results
                        .checkpoints
                        .iter()
                        .zip(series_of(agg))
                        .map(|(&t, &v)| (t as f64, v))
                        .collect(),
                )
            })
            .collect(),
    }
}

/// Writes `trace_<algorithm>.csv` per algorithm, `summary.json`, the three
/// SVG regret plots, and optional per-round dumps. Returns the file list.
pub fn emit_outputs(
    results: &ExperimentResults,
    cfg: &ResolvedConfig,
    dir: &Path,
) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let mut written = Vec::new();

    for agg in &results.aggregates {
        let path = dir.join(format!("trace_{}.csv", agg.algorithm.name()));
        fs::write(&path, trace_csv(&results.checkpoints, agg))?;
        written.push(path);
    }

    let summary = Summary {
        experiment: cfg.experiment.name().to_string(),
        horizon: cfg.horizon,
        runs: cfg.runs,
        base_seed: cfg.base_seed,
        m: cfg.m,
        scale: cfg.scale,
        beta: cfg.beta,
        algorithms: results.aggregates.iter().map(algorithm_summary).collect(),
        envelope: results.envelope,
        wall_clock_seconds: results.wall_clock_seconds,
    };
    let path = dir.join("summary.json");
    fs::write(
        &path,
        serde_json::to_string_pretty(&summary).expect("serializable") + "\n",
    )?;
    written.push(path);

    type Series = fn(&AlgorithmAggregate) -> &Vec<f64>;
    let plots: [(&str, &str, Series); 3] = [
        ("regret_dominant.svg", "cumulative dominant regret", |a| {
            &a.reg1_mean
        }),
        (
            "regret_nondominant.svg",
            "cumulative non-dominant regret",
            |a| &a.reg2_mean,
        ),
        ("pareto_regret.svg", "cumulative Pareto regret", |a| {
            &a.pareto_mean
        }),
    ];
    for (file, title, series) in plots {
        let path = dir.join(file);
        fs::write(&path, regret_plot(title, results, series).render())?;
        written.push(path);
    }

    if cfg.dump_rounds {
        for run in &results.runs {
            for p in &run.policies {
                if let Some(rows) = &p.rounds {
                    let path = dir.join(format!(
                        "rounds_run{}_{}.csv",
                        run.run_index,
                        p.algorithm.name()
                    ));
                    let mut f = std::io::BufWriter::new(fs::File::create(&path)?);
                    writeln!(f, "t,reg1,reg2,pareto")?;
                    for (t, row) in rows.iter().enumerate() {
                        writeln!(f, "{},{},{},{}", t + 1, row[0], row[1], row[2])?;
                    }
                    written.push(path);
                }
            }
        }
    }

    Ok(written)
}

/// Parses a trace CSV back into per-column series; inverse of the emitter.
pub fn parse_trace_csv(text: &str) -> Result<(Vec<u64>, Vec<Vec<f64>>)> {
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::Config("empty trace file".into()))?;
    if header != TRACE_HEADER {
        return Err(Error::Config(format!("unexpected trace header {header:?}")));
    }
    let mut ts = Vec::new();
    let mut cols: Vec<Vec<f64>> = vec![Vec::new(); 8];
    for (i, line) in lines.enumerate() {
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 9 {
            return Err(Error::Config(format!(
                "trace row {} has {} fields",
                i + 2,
                fields.len()
            )));
        }
        ts.push(
            fields[0]
                .parse()
                .map_err(|e| Error::Config(format!("trace row {}: {e}", i + 2)))?,
        );
        for (c, field) in fields[1..].iter().enumerate() {
            cols[c].push(
                field
                    .parse()
                    .map_err(|e| Error::Config(format!("trace row {}: {e}", i + 2)))?,
            );
        }
    }
    Ok((ts, cols))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{resolve, ExperimentConfig};
    use crate::evaluation::run_experiment;

    fn tiny_results() -> (ExperimentResults, ResolvedConfig) {
        let raw: ExperimentConfig = serde_json::from_str(
            "{\"experiment\": \"synthetic_gaussian\", \"horizon\": 120, \"runs\": 2, \
             \"algorithms\": [\"mocmab\", \"cd_ucb1\"], \"hyperparams\": {\"m\": 2}}",
        )
        .unwrap();
        let cfg = resolve(raw).unwrap();
        (run_experiment(&cfg, 1).unwrap(), cfg)
    }

    #[test]
    fn file_set_matches_the_contract() {
        let (results, cfg) = tiny_results();
        let dir = tempfile::tempdir().unwrap();
        let files = emit_outputs(&results, &cfg, dir.path()).unwrap();
        // 2 algorithms -> 2 trace CSVs + summary + 3 SVGs
        assert_eq!(files.len(), 6);
        assert!(dir.path().join("trace_mocmab.csv").exists());
        assert!(dir.path().join("trace_cd_ucb1.csv").exists());
        assert!(dir.path().join("summary.json").exists());
        assert!(dir.path().join("regret_dominant.svg").exists());
        assert!(dir.path().join("regret_nondominant.svg").exists());
        assert!(dir.path().join("pareto_regret.svg").exists());
    }

    #[test]
    fn csv_row_count_is_checkpoints_plus_header() {
        let (results, cfg) = tiny_results();
        let dir = tempfile::tempdir().unwrap();
        emit_outputs(&results, &cfg, dir.path()).unwrap();
        let text = std::fs::read_to_string(dir.path().join("trace_mocmab.csv")).unwrap();
        assert_eq!(text.lines().count(), results.checkpoints.len() + 1);
    }

    #[test]
    fn csv_round_trips_exactly() {
        let (results, cfg) = tiny_results();
        let dir = tempfile::tempdir().unwrap();
        emit_outputs(&results, &cfg, dir.path()).unwrap();
        let text = std::fs::read_to_string(dir.path().join("trace_mocmab.csv")).unwrap();
        let (ts, cols) = parse_trace_csv(&text).unwrap();
        let agg = &results.aggregates[0];
        assert_eq!(ts, results.checkpoints);
        assert_eq!(cols[0], agg.reg1_mean);
        assert_eq!(cols[1], agg.reg1_std);
        assert_eq!(cols[2], agg.reg2_mean);
        assert_eq!(cols[4], agg.pareto_mean);
        assert_eq!(cols[6], agg.cum_reward1_mean);
        assert_eq!(cols[7], agg.cum_reward2_mean);
    }

    #[test]
    fn summary_reports_envelope_only_for_the_learner() {
        let (results, cfg) = tiny_results();
        let dir = tempfile::tempdir().unwrap();
        emit_outputs(&results, &cfg, dir.path()).unwrap();
        let text = std::fs::read_to_string(dir.path().join("summary.json")).unwrap();
        let json: serde_json::Value = serde_json::from_str(&text).unwrap();
        let algs = json["algorithms"].as_array().unwrap();
        assert_eq!(algs[0]["algorithm"], "mocmab");
        assert!(algs[0]["envelope_violations"].is_u64());
        assert!(algs[1]["envelope_violations"].is_null());
    }
}
