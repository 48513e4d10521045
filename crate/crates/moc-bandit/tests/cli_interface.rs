//! End-to-end CLI behavior: exit codes, strict config rejection, the file
//! sets each subcommand produces, and validate's no-write guarantee.

use std::path::Path;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_moc-bandit"))
}

fn write_config(dir: &Path, body: &str) -> std::path::PathBuf {
    let path = dir.join("config.json");
    std::fs::write(&path, body).unwrap();
    path
}

const TINY: &str = "{\"experiment\": \"synthetic_gaussian\", \"horizon\": 300, \"runs\": 2, \
                    \"base_seed\": 5, \"algorithms\": [\"mocmab\", \"cd_ucb1\"], \
                    \"hyperparams\": {\"m\": 2, \"scale\": 0.2}}";

#[test]
fn validate_accepts_good_config_and_writes_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), TINY);
    let out = bin()
        .args(["validate", "--config"])
        .arg(&cfg)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("ok:"));
    // nothing new beside the config we wrote; in particular no "out" dir
    let entries: Vec<_> = std::fs::read_dir(dir.path())
        .unwrap()
        .map(|e| e.unwrap().file_name())
        .collect();
    assert_eq!(entries, vec![std::ffi::OsString::from("config.json")]);
    assert!(!Path::new("out").exists());
}

#[test]
fn validate_rejects_missing_file() {
    let out = bin()
        .args(["validate", "--config", "/nonexistent/nope.json"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("error"));
}

#[test]
fn unknown_config_key_is_named_in_the_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "{\"experiment\": \"synthetic_gaussian\", \"hyperparams\": {\"betta\": 1.0}}",
    );
    let out = bin()
        .args(["validate", "--config"])
        .arg(&cfg)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("betta"), "stderr was: {stderr}");
}

#[test]
fn run_with_unusable_output_dir_fails_before_simulating() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("blocker");
    std::fs::write(&blocker, "not a directory").unwrap();
    let cfg = write_config(dir.path(), TINY);
    let out = bin()
        .args(["run", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(blocker.join("sub"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1), "{out:?}");
    assert!(!blocker.join("sub").exists());
}

#[test]
fn run_writes_the_full_file_set() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), TINY);
    let out_dir = dir.path().join("results");
    let out = bin()
        .args(["run", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(&out_dir)
        .arg("--seed")
        .arg("777")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    for name in [
        "resolved_config.json",
        "trace_mocmab.csv",
        "trace_cd_ucb1.csv",
        "summary.json",
        "regret_dominant.svg",
        "regret_nondominant.svg",
        "pareto_regret.svg",
    ] {
        assert!(out_dir.join(name).exists(), "missing {name}");
    }
    // --seed override lands in the resolved echo
    let resolved: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(out_dir.join("resolved_config.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(resolved["base_seed"], 777);
    assert_eq!(resolved["experiment"], "synthetic_gaussian");
}

#[test]
fn sweep_writes_one_directory_per_factor() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), TINY);
    let out_dir = dir.path().join("sweep");
    let out = bin()
        .args(["sweep", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(&out_dir)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let mut subdirs: Vec<String> = std::fs::read_dir(&out_dir)
        .unwrap()
        .filter_map(|e| {
            let e = e.unwrap();
            e.file_type()
                .unwrap()
                .is_dir()
                .then(|| e.file_name().into_string().unwrap())
        })
        .collect();
    subdirs.sort();
    assert_eq!(subdirs.len(), 7, "{subdirs:?}");
    assert!(subdirs.iter().all(|d| d.starts_with("scale_1over")));
    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out_dir.join("sweep_summary.json")).unwrap())
            .unwrap();
    assert_eq!(summary["factors"].as_array().unwrap().len(), 7);
    assert!(summary["selected_scale"].is_f64());
    // every per-factor directory carries its own trace set
    for d in &subdirs {
        assert!(out_dir.join(d).join("trace_mocmab.csv").exists());
        assert!(out_dir.join(d).join("resolved_config.json").exists());
    }
}

#[test]
fn scale_sweep_flag_turns_run_into_a_sweep() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "{\"experiment\": \"synthetic_gaussian\", \"horizon\": 200, \"runs\": 1, \
         \"algorithms\": [\"mocmab\"], \
         \"hyperparams\": {\"m\": 2, \"scale_sweep\": true}}",
    );
    let out_dir = dir.path().join("swept");
    let out = bin()
        .args(["run", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(&out_dir)
        .env("MOC_BANDIT_JOBS", "2")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    assert!(out_dir.join("sweep_summary.json").exists());
    assert!(out_dir.join("scale_1over30").join("trace_mocmab.csv").exists());
}

#[test]
fn replay_file_runs_end_to_end() {
    let dir = tempfile::tempdir().unwrap();
    let mut csv = String::from("x1,x2,click\n");
    for i in 0..150 {
        let x = f64::from(i) / 150.0;
        csv.push_str(&format!("{x},{},{}\n", 1.0 - x, u8::from(i % 11 == 0)));
    }
    let data = dir.path().join("log.csv");
    std::fs::write(&data, csv).unwrap();
    let cfg = write_config(
        dir.path(),
        &format!(
            "{{\"experiment\": \"replay\", \"horizon\": 150, \"runs\": 2, \
             \"algorithms\": [\"mocmab\", \"cd_ucb1\"], \
             \"environment\": {{\"replay_file\": {:?}}}}}",
            data.to_str().unwrap()
        ),
    );
    let out_dir = dir.path().join("replay_out");
    let out = bin()
        .args(["run", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(&out_dir)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let resolved: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(out_dir.join("resolved_config.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(resolved["beta"], 0.1);
    assert_eq!(resolved["context_dims"], 2);
    assert!(out_dir.join("trace_mocmab.csv").exists());
}

#[test]
fn replay_file_shorter_than_horizon_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("log.csv");
    std::fs::write(&data, "x1,click\n0.5,0\n0.25,1\n").unwrap();
    let cfg = write_config(
        dir.path(),
        &format!(
            "{{\"experiment\": \"replay\", \"horizon\": 500, \
             \"environment\": {{\"replay_file\": {:?}}}}}",
            data.to_str().unwrap()
        ),
    );
    let out = bin()
        .args(["validate", "--config"])
        .arg(&cfg)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("horizon"));
}

#[test]
fn missing_subcommand_exits_nonzero() {
    let out = bin().output().unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn help_exits_zero() {
    let out = bin().arg("--help").output().unwrap();
    assert_eq!(out.status.code(), Some(0));
}
