//! Replicated batch runs, the eight boundary-condition presets and
//! cross-run aggregation.

use std::str::FromStr;

use thiserror::Error;

use crate::config::{ConfigError, ModelConfig, ValidatedConfig};
use crate::dynamics::{run_sim, Outcome, RunResult};
use crate::stats::{
    anova_oneway, linreg_r2, mean_sd, pearson_r, welch_t, LinRegFit, StatError, StatResult,
};
use crate::world::init_world;

/// K runs of one condition, reproducible from `(config, seeds[i])`.
#[derive(Debug, Clone, PartialEq)]
pub struct ReplicationSet {
    pub label: String,
    pub config: ModelConfig,
    pub seeds: Vec<u64>,
    pub results: Vec<RunResult>,
}

impl ReplicationSet {
    /// Convergence ticks of the converged runs only.
    pub fn convergence_samples(&self) -> Vec<f64> {
        self.results
            .iter()
            .filter(|r| !r.non_converged)
            .map(|r| r.convergence_tick as f64)
            .collect()
    }

    pub fn outcome_counts(&self) -> [u32; 3] {
        let mut counts = [0u32; 3];
        for r in &self.results {
            match r.outcome {
                Outcome::Silence => counts[0] += 1,
                Outcome::Speaking => counts[1] += 1,
                Outcome::Tie => counts[2] += 1,
            }
        }
        counts
    }
}

fn run_one(config: &ValidatedConfig, seed: u64) -> RunResult {
    let mut world = init_world(config, seed);
    run_sim(&mut world, config.get())
}

/// Runs `k` independent replications with seeds `base_seed..base_seed + k`.
/// Replications execute in parallel when the `parallel` feature is on; the
/// results are ordered by replication index either way, so aggregation does
/// not depend on thread count.
pub fn run_replications(
    config: &ModelConfig,
    k: u32,
    base_seed: u64,
) -> Result<ReplicationSet, ConfigError> {
    let validated = config.clone().validated()?;
    let seeds: Vec<u64> = (0..k as u64).map(|i| base_seed.wrapping_add(i)).collect();

    #[cfg(feature = "parallel")]
    let results: Vec<RunResult> = {
        use rayon::prelude::*;
        seeds.par_iter().map(|&s| run_one(&validated, s)).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let results: Vec<RunResult> = seeds.iter().map(|&s| run_one(&validated, s)).collect();

    Ok(ReplicationSet {
        label: String::new(),
        config: config.clone(),
        seeds,
        results,
    })
}

/// Single-threaded [`run_replications`], available regardless of features.
pub fn run_replications_serial(
    config: &ModelConfig,
    k: u32,
    base_seed: u64,
) -> Result<ReplicationSet, ConfigError> {
    let validated = config.clone().validated()?;
    let seeds: Vec<u64> = (0..k as u64).map(|i| base_seed.wrapping_add(i)).collect();
    let results = seeds.iter().map(|&s| run_one(&validated, s)).collect();
    Ok(ReplicationSet {
        label: String::new(),
        config: config.clone(),
        seeds,
        results,
    })
}

/// The eight shipped experiments.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PresetName {
    E1,
    E2,
    E3,
    E4,
    E5,
    E6,
    E7,
    E8,
}

impl PresetName {
    pub const ALL: [PresetName; 8] = [
        PresetName::E1,
        PresetName::E2,
        PresetName::E3,
        PresetName::E4,
        PresetName::E5,
        PresetName::E6,
        PresetName::E7,
        PresetName::E8,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            PresetName::E1 => "e1",
            PresetName::E2 => "e2",
            PresetName::E3 => "e3",
            PresetName::E4 => "e4",
            PresetName::E5 => "e5",
            PresetName::E6 => "e6",
            PresetName::E7 => "e7",
            PresetName::E8 => "e8",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
#[error("unknown preset {0:?} (expected e1..e8)")]
pub struct UnknownPreset(pub String);

impl FromStr for PresetName {
    type Err = UnknownPreset;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "e1" => Ok(PresetName::E1),
            "e2" => Ok(PresetName::E2),
            "e3" => Ok(PresetName::E3),
            "e4" => Ok(PresetName::E4),
            "e5" => Ok(PresetName::E5),
            "e6" => Ok(PresetName::E6),
            "e7" => Ok(PresetName::E7),
            "e8" => Ok(PresetName::E8),
            other => Err(UnknownPreset(other.to_string())),
        }
    }
}

/// Which cross-run test [`summarize`] runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Analysis {
    /// Outcome frequencies only.
    OutcomeDistribution,
    /// Welch t for two conditions, one-way ANOVA for three or more, on the
    /// convergence-tick samples.
    ConvergenceComparison,
    /// OLS of the pooled silent-count growth phase against tick.
    GrowthRegression,
    /// Pearson correlation of pooled per-tick silencing counts against tick.
    RateDecayCorrelation,
}

/// One parameterization inside an experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct Condition {
    pub label: String,
    pub config: ModelConfig,
}

/// A named experiment: one or more conditions plus the designated analysis.
#[derive(Debug, Clone, PartialEq)]
pub struct Experiment {
    pub name: PresetName,
    pub title: &'static str,
    pub conditions: Vec<Condition>,
    pub analysis: Analysis,
    pub default_reps: u32,
}

// Batch policy shared by every preset: the long stability window keeps the
// detector from firing inside chance gaps of the late crossing stream, and
// the tick budget covers the slowest preset (vision 2) without letting the
// group-dominated runs grow past f64 range.
const PRESET_MAX_TICKS: u32 = 3000;
const PRESET_STABILITY_WINDOW: u32 = 50;

fn preset_config(alpha: f64, beta: f64, population: u32, vision_radius: f64) -> ModelConfig {
    ModelConfig {
        alpha,
        beta,
        population,
        vision_radius,
        max_ticks: PRESET_MAX_TICKS,
        stability_window: PRESET_STABILITY_WINDOW,
        ..ModelConfig::default()
    }
}

fn condition(label: &str, config: ModelConfig) -> Condition {
    Condition {
        label: label.to_string(),
        config,
    }
}

/// Returns the experiment description for a preset name.
pub fn preset(name: PresetName) -> Experiment {
    match name {
        PresetName::E1 => Experiment {
            name,
            title: "media only: silent-count growth under a pure media climate",
            conditions: vec![condition("e1", preset_config(0.02, 0.0, 1000, 3.0))],
            analysis: Analysis::GrowthRegression,
            default_reps: 100,
        },
        PresetName::E2 => Experiment {
            name,
            title: "groups only: mixed outcomes and spatial clustering",
            conditions: vec![condition("e2", preset_config(0.0, 0.02, 1000, 3.0))],
            analysis: Analysis::OutcomeDistribution,
            default_reps: 100,
        },
        PresetName::E3 => Experiment {
            name,
            title: "strong media (alpha/beta = 10): silence dominates",
            conditions: vec![condition("e3", preset_config(0.02, 0.002, 1000, 3.0))],
            analysis: Analysis::OutcomeDistribution,
            default_reps: 100,
        },
        PresetName::E4 => Experiment {
            name,
            title: "strong groups (alpha/beta = 0.1): outcomes stay mixed",
            conditions: vec![condition("e4", preset_config(0.002, 0.02, 1000, 3.0))],
            analysis: Analysis::OutcomeDistribution,
            default_reps: 100,
        },
        PresetName::E5 => Experiment {
            name,
            title: "reinforcement: stronger groups under strong media converge faster",
            conditions: vec![
                condition("control", preset_config(0.002, 0.0001, 1000, 3.0)),
                condition("experimental", preset_config(0.002, 0.0005, 1000, 3.0)),
            ],
            analysis: Analysis::ConvergenceComparison,
            default_reps: 100,
        },
        PresetName::E6 => Experiment {
            name,
            title: "vision sweep: larger reference groups converge sooner",
            conditions: [2.0, 4.0, 6.0]
                .iter()
                .map(|&v| {
                    condition(
                        &format!("vision_{}", v as u32),
                        preset_config(0.002, 0.0001, 1000, v),
                    )
                })
                .collect(),
            analysis: Analysis::ConvergenceComparison,
            default_reps: 100,
        },
        PresetName::E7 => Experiment {
            name,
            title: "population sweep: larger populations converge sooner",
            conditions: [1000, 1500, 2000]
                .iter()
                .map(|&n| condition(&format!("n_{n}"), preset_config(0.002, 0.0001, n, 3.0)))
                .collect(),
            analysis: Analysis::ConvergenceComparison,
            default_reps: 100,
        },
        PresetName::E8 => Experiment {
            name,
            title: "rate decay: per-tick silencing shrinks over time (strong-media runs)",
            conditions: vec![condition("e8", preset_config(0.02, 0.002, 1000, 3.0))],
            analysis: Analysis::RateDecayCorrelation,
            default_reps: 100,
        },
    }
}

/// Per-condition aggregates of one replication set.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionSummary {
    pub label: String,
    pub reps: u32,
    pub converged: u32,
    pub non_converged: u32,
    /// Mean/sd of convergence ticks over converged runs; `None` when fewer
    /// than two runs converged.
    pub convergence_mean_sd: Option<(f64, f64)>,
    /// (Silence, Speaking, Tie) frequencies. Non-converged runs are counted
    /// here too, classified by final majority.
    pub outcomes: [u32; 3],
}

/// A test result tied to the condition (or pool) it was computed on.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledStat {
    pub label: String,
    pub stat: StatResult,
    pub exceeds_p001: bool,
}

/// Cross-run aggregation of one experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSummary {
    pub conditions: Vec<ConditionSummary>,
    pub tests: Vec<LabeledStat>,
    /// Metadata worth surfacing next to the numbers (df conventions, fit
    /// parameters).
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SummaryError {
    #[error("NoConvergedRuns: no run reached stability within max_ticks")]
    NoConvergedRuns,
    #[error("NoData: at least one replication set is required")]
    NoData,
    #[error(transparent)]
    Stat(#[from] StatError),
}

fn summarize_condition(set: &ReplicationSet) -> ConditionSummary {
    let samples = set.convergence_samples();
    ConditionSummary {
        label: set.label.clone(),
        reps: set.results.len() as u32,
        converged: samples.len() as u32,
        non_converged: (set.results.len() - samples.len()) as u32,
        convergence_mean_sd: mean_sd(&samples).ok(),
        outcomes: set.outcome_counts(),
    }
}

/// Aggregates one or more replication sets and runs the designated test.
///
/// Non-converged runs are excluded from convergence-time statistics but kept
/// in the outcome table.
pub fn summarize(
    sets: &[ReplicationSet],
    analysis: Analysis,
) -> Result<ExperimentSummary, SummaryError> {
    if sets.is_empty() {
        return Err(SummaryError::NoData);
    }
    if sets
        .iter()
        .all(|s| s.results.iter().all(|r| r.non_converged))
    {
        return Err(SummaryError::NoConvergedRuns);
    }

    let conditions: Vec<ConditionSummary> = sets.iter().map(summarize_condition).collect();
    let mut tests = Vec::new();
    let mut notes = Vec::new();

    match analysis {
        Analysis::OutcomeDistribution => {}
        Analysis::ConvergenceComparison => {
            let samples: Vec<Vec<f64>> = sets.iter().map(|s| s.convergence_samples()).collect();
            match sets.len() {
                1 => {}
                2 => {
                    let stat = welch_t(&samples[0], &samples[1])?;
                    tests.push(labeled(
                        format!("{}_vs_{}", sets[0].label, sets[1].label),
                        stat,
                    ));
                }
                _ => {
                    let stat = anova_oneway(&samples)?;
                    tests.push(labeled("anova".to_string(), stat));
                    notes.push(format!(
                        "anova df = (k-1, N-k) over converged runs: ({}, {})",
                        samples.len() - 1,
                        samples.iter().map(|s| s.len()).sum::<usize>() - samples.len(),
                    ));
                }
            }
        }
        Analysis::GrowthRegression => {
            let (pairs, fit) = growth_series(sets)?;
            notes.push(format!(
                "growth fit over {} pooled pairs: slope {:.4}, intercept {:.2}",
                pairs.len(),
                fit.slope,
                fit.intercept
            ));
            tests.push(labeled("pooled_growth".to_string(), fit.stat()));
        }
        Analysis::RateDecayCorrelation => {
            let mut xs = Vec::new();
            let mut ys = Vec::new();
            for set in sets {
                for result in &set.results {
                    for (t, &c) in result.new_silent.iter().enumerate() {
                        xs.push(t as f64);
                        ys.push(c as f64);
                    }
                }
            }
            let stat = pearson_r(&xs, &ys)?;
            tests.push(labeled("rate_decay".to_string(), stat));
        }
    }

    Ok(ExperimentSummary {
        conditions,
        tests,
        notes,
    })
}

fn labeled(label: String, stat: StatResult) -> LabeledStat {
    let exceeds_p001 = stat.exceeds_p001();
    LabeledStat {
        label,
        stat,
        exceeds_p001,
    }
}

/// Pools (tick, silent_count) pairs from every run, restricted to the growth
/// phase (silent fraction below 95%), and fits a line.
pub fn growth_series(
    sets: &[ReplicationSet],
) -> Result<(Vec<(u32, u32)>, LinRegFit), SummaryError> {
    let mut pairs = Vec::new();
    for set in sets {
        let cap = 0.95 * set.config.population as f64;
        for result in &set.results {
            for (t, &s) in result.silent_count.iter().enumerate() {
                if (s as f64) < cap {
                    pairs.push((t as u32, s));
                }
            }
        }
    }
    let xs: Vec<f64> = pairs.iter().map(|&(t, _)| t as f64).collect();
    let ys: Vec<f64> = pairs.iter().map(|&(_, s)| s as f64).collect();
    let fit = linreg_r2(&xs, &ys)?;
    Ok((pairs, fit))
}

/// Pools per-tick speaking→silent transition counts across the replications
/// of one set (one pair per rep per tick up to each run's end) and returns
/// the signed Pearson correlation with the tick index.
pub fn new_silent_series(set: &ReplicationSet) -> Result<(Vec<(u32, u32)>, StatResult), StatError> {
    let mut pairs = Vec::new();
    for result in &set.results {
        for (t, &c) in result.new_silent.iter().enumerate() {
            pairs.push((t as u32, c));
        }
    }
    let xs: Vec<f64> = pairs.iter().map(|&(t, _)| t as f64).collect();
    let ys: Vec<f64> = pairs.iter().map(|&(_, c)| c as f64).collect();
    let stat = pearson_r(&xs, &ys)?;
    Ok((pairs, stat))
}

/// Runs a whole preset: `reps` replications per condition, seeded
/// `base_seed + condition_index * reps + rep`.
pub fn run_preset(
    experiment: &Experiment,
    reps: u32,
    base_seed: u64,
) -> Result<Vec<ReplicationSet>, ConfigError> {
    let mut sets = Vec::with_capacity(experiment.conditions.len());
    for (i, cond) in experiment.conditions.iter().enumerate() {
        let seed = base_seed.wrapping_add(i as u64 * reps as u64);
        let mut set = run_replications(&cond.config, reps, seed)?;
        set.label = cond.label.clone();
        sets.push(set);
    }
    Ok(sets)
}
