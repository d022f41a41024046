//! End-to-end tests of the `sos` binary: exit codes, file outputs and
//! byte-level determinism.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn sos(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sos"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn tmp_dir(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("sos-cli-test-{name}-{}", std::process::id()));
    let _ = fs::remove_dir_all(&dir);
    fs::create_dir_all(&dir).unwrap();
    dir
}

/// A fast config: small grid, short runs.
fn write_small_config(dir: &Path) -> PathBuf {
    let path = dir.join("small.cfg");
    fs::write(
        &path,
        "# test config\n\
         grid_width = 16\n\
         grid_height = 16\n\
         population = 40\n\
         alpha = 0.02\n\
         beta = 0.002\n\
         max_ticks = 300\n",
    )
    .unwrap();
    path
}

#[test]
fn run_is_byte_deterministic() {
    let dir = tmp_dir("run-det");
    let cfg = write_small_config(&dir);
    let cfg = cfg.to_str().unwrap();

    let out1 = dir.join("a");
    let out2 = dir.join("b");
    for out in [&out1, &out2] {
        let res = sos(&[
            "run",
            "--config",
            cfg,
            "--seed",
            "7",
            "--out",
            out.to_str().unwrap(),
        ]);
        assert!(
            res.status.success(),
            "{}",
            String::from_utf8_lossy(&res.stderr)
        );
    }
    let a = fs::read(out1.join("run.csv")).unwrap();
    let b = fs::read(out2.join("run.csv")).unwrap();
    assert!(!a.is_empty());
    assert_eq!(a, b);
}

#[test]
fn run_writes_snapshots_on_the_grid() {
    let dir = tmp_dir("run-snap");
    let cfg = write_small_config(&dir);
    let out = dir.join("out");
    let res = sos(&[
        "run",
        "--config",
        cfg.to_str().unwrap(),
        "--seed",
        "3",
        "--snapshot-every",
        "50",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(res.status.success());

    let t0 = fs::read_to_string(out.join("snapshot_t0.csv")).unwrap();
    let mut lines = t0.lines();
    assert_eq!(
        lines.next().unwrap(),
        "agent_id,x,y,w,speaking,media_exposure"
    );
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 40);
    // balanced split: exactly half the rows are silent at tick 0
    let silent = rows
        .iter()
        .filter(|r| r.split(',').nth(4) == Some("0"))
        .count();
    assert_eq!(silent, 20);

    // final tick snapshot exists even off the 50-tick grid
    let run_csv = fs::read_to_string(out.join("run.csv")).unwrap();
    let last_tick = run_csv.lines().count() - 2; // header + tick 0
    assert!(out.join(format!("snapshot_t{last_tick}.csv")).exists());
}

#[test]
fn experiment_emits_summary_rows() {
    let dir = tmp_dir("experiment");
    let cfg = write_small_config(&dir);
    let out = dir.join("out");
    let res = sos(&[
        "experiment",
        "--config",
        cfg.to_str().unwrap(),
        "--reps",
        "5",
        "--base-seed",
        "11",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(
        res.status.success(),
        "{}",
        String::from_utf8_lossy(&res.stderr)
    );

    let summary = fs::read_to_string(out.join("summary.csv")).unwrap();
    let mut lines = summary.lines();
    assert_eq!(
        lines.next().unwrap(),
        "rep,seed,convergence_tick,non_converged,outcome,final_silent_fraction"
    );
    assert_eq!(lines.count(), 5);

    let experiment = fs::read_to_string(out.join("experiment.csv")).unwrap();
    assert!(experiment.starts_with("condition,stat_kind,statistic,df,exceeds_p001\n"));
}

#[test]
fn preset_bundle_and_unknown_name() {
    let dir = tmp_dir("preset");
    let out = dir.join("e5");
    // 2 reps keeps this fast; e5 has two conditions
    let res = sos(&[
        "preset",
        "--name",
        "e5",
        "--reps",
        "2",
        "--base-seed",
        "5",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(
        res.status.success(),
        "{}",
        String::from_utf8_lossy(&res.stderr)
    );
    assert!(out.join("summary_control.csv").exists());
    assert!(out.join("summary_experimental.csv").exists());
    assert!(out.join("experiment.csv").exists());

    let res = sos(&[
        "preset",
        "--name",
        "e9",
        "--out",
        dir.join("x").to_str().unwrap(),
    ]);
    assert!(!res.status.success());
    let err = String::from_utf8_lossy(&res.stderr);
    assert!(err.contains("unknown preset"), "stderr: {err}");
    assert_eq!(err.lines().count(), 1);
}

#[test]
fn sweep_writes_one_summary_per_value() {
    let dir = tmp_dir("sweep");
    let cfg = write_small_config(&dir);
    let out = dir.join("out");
    let res = sos(&[
        "sweep",
        "--config",
        cfg.to_str().unwrap(),
        "--vary",
        "alpha=0.01,0.04",
        "--reps",
        "4",
        "--base-seed",
        "2",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(
        res.status.success(),
        "{}",
        String::from_utf8_lossy(&res.stderr)
    );
    assert!(out.join("summary_alpha_0.01.csv").exists());
    assert!(out.join("summary_alpha_0.04.csv").exists());
    let experiment = fs::read_to_string(out.join("experiment.csv")).unwrap();
    assert!(experiment.lines().any(|l| l.contains("welch_t")));
}

#[test]
fn config_errors_are_single_line_diagnostics() {
    let dir = tmp_dir("bad-config");
    let path = dir.join("bad.cfg");
    fs::write(&path, "alpha = fast\n").unwrap();
    let res = sos(&[
        "run",
        "--config",
        path.to_str().unwrap(),
        "--out",
        dir.join("out").to_str().unwrap(),
    ]);
    assert!(!res.status.success());
    let err = String::from_utf8_lossy(&res.stderr);
    assert_eq!(err.lines().count(), 1, "stderr: {err}");
    assert!(err.contains("line 1"));
    assert!(err.contains("alpha"));
}

#[test]
fn unknown_subcommand_fails() {
    let res = sos(&["frobnicate"]);
    assert!(!res.status.success());
}
