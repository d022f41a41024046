//! `sos` — spiral-of-silence lattice simulator and batch experiment runner.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};

use sos_core::config::ValidatedConfig;
use sos_core::dynamics::run_sim_observed;
use sos_core::experiments::{
    growth_series, new_silent_series, preset, run_preset, run_replications, summarize, Analysis,
    ExperimentSummary, LabeledStat, PresetName,
};
use sos_core::io::{
    parse_config, set_key, write_experiment_csv, write_run_csv, write_snapshot_csv,
    write_summary_csv,
};
use sos_core::world::init_world;

#[derive(Parser)]
#[command(
    name = "sos",
    version,
    about = "Spiral-of-silence lattice model: single runs, replications, presets and sweeps"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate one run; writes run.csv (and snapshots with --snapshot-every)
    Run {
        /// Config file (`key = value` lines); defaults apply when omitted
        #[arg(long)]
        config: Option<PathBuf>,
        /// Overrides the config seed
        #[arg(long)]
        seed: Option<u64>,
        /// Write snapshot_t<k>.csv at tick 0, every K ticks, and the final tick
        #[arg(long, value_name = "K")]
        snapshot_every: Option<u32>,
        /// Output directory
        #[arg(long)]
        out: PathBuf,
    },
    /// Replicate one configuration; writes summary.csv and experiment.csv
    Experiment {
        #[arg(long)]
        config: Option<PathBuf>,
        /// Number of replications
        #[arg(long)]
        reps: u32,
        /// Seed of replication 0; replication i uses base_seed + i
        #[arg(long, default_value_t = 42)]
        base_seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run a shipped preset; writes one summary per condition plus experiment.csv
    Preset {
        /// Preset name, e1 through e8
        #[arg(long)]
        name: String,
        /// Replications per condition (default: the preset's own count)
        #[arg(long)]
        reps: Option<u32>,
        #[arg(long, default_value_t = 42)]
        base_seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Replicate while varying one scalar config key over a list of values
    Sweep {
        #[arg(long)]
        config: Option<PathBuf>,
        /// key=v1,v2,... — any config key, e.g. `vision_radius=2,4,6`
        #[arg(long)]
        vary: String,
        #[arg(long)]
        reps: u32,
        #[arg(long, default_value_t = 42)]
        base_seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn dispatch(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Run {
            config,
            seed,
            snapshot_every,
            out,
        } => cmd_run(config.as_deref(), seed, snapshot_every, &out),
        Command::Experiment {
            config,
            reps,
            base_seed,
            out,
        } => cmd_experiment(config.as_deref(), reps, base_seed, &out),
        Command::Preset {
            name,
            reps,
            base_seed,
            out,
        } => cmd_preset(&name, reps, base_seed, &out),
        Command::Sweep {
            config,
            vary,
            reps,
            base_seed,
            out,
        } => cmd_sweep(config.as_deref(), &vary, reps, base_seed, &out),
    }
}

fn load_config(path: Option<&Path>) -> Result<ValidatedConfig> {
    let text = match path {
        Some(p) => fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?,
        None => String::new(),
    };
    Ok(parse_config(&text)?)
}

fn create(out_dir: &Path, name: &str) -> Result<BufWriter<File>> {
    let path = out_dir.join(name);
    let file = File::create(&path).with_context(|| format!("cannot write {}", path.display()))?;
    Ok(BufWriter::new(file))
}

fn cmd_run(
    config: Option<&Path>,
    seed: Option<u64>,
    snapshot_every: Option<u32>,
    out: &Path,
) -> Result<()> {
    let config = load_config(config)?;
    let seed = seed.unwrap_or(config.seed);
    fs::create_dir_all(out).with_context(|| format!("cannot create {}", out.display()))?;

    let mut world = init_world(&config, seed);
    let mut snapshot_error = None;
    let mut last_snapshot = None;
    let result = run_sim_observed(&mut world, config.get(), |tick, w| {
        if snapshot_error.is_some() {
            return;
        }
        if let Some(k) = snapshot_every {
            if tick % k == 0 {
                match create(out, &format!("snapshot_t{tick}.csv")) {
                    Ok(mut file) => {
                        if let Err(e) = write_snapshot_csv(&mut file, w, config.threshold) {
                            snapshot_error = Some(e);
                        }
                        last_snapshot = Some(tick);
                    }
                    Err(e) => snapshot_error = Some(std::io::Error::other(e)),
                }
            }
        }
    });
    if let Some(e) = snapshot_error {
        bail!("writing snapshot: {e}");
    }
    // the end state is part of the record even off the snapshot grid
    if snapshot_every.is_some() && last_snapshot != Some(result.last_tick()) {
        let tick = result.last_tick();
        let mut file = create(out, &format!("snapshot_t{tick}.csv"))?;
        write_snapshot_csv(&mut file, &world, config.threshold)?;
    }

    let mut file = create(out, "run.csv")?;
    write_run_csv(&mut file, &result)?;
    file.flush()?;

    println!(
        "run: seed {seed}, {} ticks, convergence {}{}, outcome {}, final silent fraction {:.3}",
        result.last_tick(),
        result.convergence_tick,
        if result.non_converged {
            " (not reached)"
        } else {
            ""
        },
        result.outcome.as_str(),
        result.final_silent_fraction
    );
    Ok(())
}

fn print_summary(summary: &ExperimentSummary) {
    for c in &summary.conditions {
        let conv = match c.convergence_mean_sd {
            Some((mean, sd)) => format!("convergence {mean:.2} ± {sd:.2}"),
            None => "convergence n/a".to_string(),
        };
        println!(
            "{}: {} reps, {} converged, {}; outcomes silence/speaking/tie {}/{}/{}",
            c.label, c.reps, c.converged, conv, c.outcomes[0], c.outcomes[1], c.outcomes[2]
        );
    }
    for t in &summary.tests {
        println!(
            "{}: {} = {:.4}, df {}, exceeds 0.001 critical value: {}",
            t.label,
            t.stat.kind.as_str(),
            t.stat.statistic,
            t.stat.df,
            if t.exceeds_p001 { "yes" } else { "no" }
        );
    }
    for note in &summary.notes {
        println!("note: {note}");
    }
}

fn cmd_experiment(config: Option<&Path>, reps: u32, base_seed: u64, out: &Path) -> Result<()> {
    let config = load_config(config)?;
    fs::create_dir_all(out).with_context(|| format!("cannot create {}", out.display()))?;

    let mut set = run_replications(config.get(), reps, base_seed)?;
    set.label = "experiment".to_string();
    let sets = vec![set];

    let mut summary = summarize(&sets, Analysis::OutcomeDistribution)?;
    // growth and rate-decay rows are both well-defined for a single
    // condition; skip whichever is degenerate for this configuration
    match growth_series(&sets) {
        Ok((_, fit)) => summary.tests.push(LabeledStat {
            label: "growth".to_string(),
            stat: fit.stat(),
            exceeds_p001: fit.stat().exceeds_p001(),
        }),
        Err(e) => summary
            .notes
            .push(format!("growth regression skipped: {e}")),
    }
    match new_silent_series(&sets[0]) {
        Ok((_, stat)) => summary.tests.push(LabeledStat {
            label: "rate_decay".to_string(),
            stat,
            exceeds_p001: stat.exceeds_p001(),
        }),
        Err(e) => summary.notes.push(format!("rate decay skipped: {e}")),
    }

    let mut file = create(out, "summary.csv")?;
    write_summary_csv(&mut file, &sets[0])?;
    file.flush()?;
    let mut file = create(out, "experiment.csv")?;
    write_experiment_csv(&mut file, &summary)?;
    file.flush()?;

    print_summary(&summary);
    Ok(())
}

fn cmd_preset(name: &str, reps: Option<u32>, base_seed: u64, out: &Path) -> Result<()> {
    let name: PresetName = name.parse()?;
    let experiment = preset(name);
    let reps = reps.unwrap_or(experiment.default_reps);
    fs::create_dir_all(out).with_context(|| format!("cannot create {}", out.display()))?;

    let sets = run_preset(&experiment, reps, base_seed)?;
    let summary = summarize(&sets, experiment.analysis)?;

    for set in &sets {
        let mut file = create(out, &format!("summary_{}.csv", set.label))?;
        write_summary_csv(&mut file, set)?;
        file.flush()?;
    }
    let mut file = create(out, "experiment.csv")?;
    write_experiment_csv(&mut file, &summary)?;
    file.flush()?;

    println!("{}: {}", name.as_str(), experiment.title);
    print_summary(&summary);
    Ok(())
}

fn cmd_sweep(
    config: Option<&Path>,
    vary: &str,
    reps: u32,
    base_seed: u64,
    out: &Path,
) -> Result<()> {
    let base = load_config(config)?;
    let Some((key, values)) = vary.split_once('=') else {
        bail!("--vary expects key=v1,v2,..., got {vary:?}");
    };
    let key = key.trim();
    let values: Vec<&str> = values.split(',').map(str::trim).collect();
    if values.len() < 2 {
        bail!("--vary needs at least two values");
    }
    fs::create_dir_all(out).with_context(|| format!("cannot create {}", out.display()))?;

    let mut sets = Vec::new();
    for (i, value) in values.iter().enumerate() {
        let mut config = base.get().clone();
        set_key(&mut config, key, value).map_err(|e| anyhow::anyhow!("--vary {key}: {e}"))?;
        let seed = base_seed.wrapping_add(i as u64 * reps as u64);
        let mut set = run_replications(&config, reps, seed)?;
        set.label = format!("{key}_{value}");
        sets.push(set);
    }

    let summary = summarize(&sets, Analysis::ConvergenceComparison)?;
    for set in &sets {
        let mut file = create(out, &format!("summary_{}.csv", set.label))?;
        write_summary_csv(&mut file, set)?;
        file.flush()?;
    }
    let mut file = create(out, "experiment.csv")?;
    write_experiment_csv(&mut file, &summary)?;
    file.flush()?;

    print_summary(&summary);
    Ok(())
}
