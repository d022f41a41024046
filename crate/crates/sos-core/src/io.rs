//! Config-file parsing and the CSV output formats.
//!
//! Config files are line-based `key = value` text; `#` starts a comment,
//! keys are the `ModelConfig` field names in lower_snake_case, lists are
//! comma-separated. Unknown and duplicate keys are rejected; missing keys
//! take the documented defaults.
//!
//! All CSV output uses LF line endings and serializes reals with 9
//! significant digits (`{:.8e}`), so equal inputs produce byte-equal files.

use std::collections::HashSet;
use std::io::{self, Write};

use thiserror::Error;

use crate::config::{ConfigError, InitialSplit, ModelConfig, ValidatedConfig};
use crate::dynamics::RunResult;
use crate::experiments::{ExperimentSummary, ReplicationSet};
use crate::stats::Df;
use crate::world::WorldState;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseError {
    #[error("line {line}: expected `key = value`, got {text:?}")]
    Syntax { line: usize, text: String },
    #[error("line {line}: unknown key {key:?}")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: duplicate key {key:?}")]
    DuplicateKey { line: usize, key: String },
    #[error("line {line}: key {key:?}: expected {expected}, got {value:?}")]
    TypeMismatch {
        line: usize,
        key: String,
        expected: &'static str,
        value: String,
    },
    #[error(transparent)]
    Invalid(#[from] ConfigError),
}

/// A key/value pair that does not fit the config schema.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum KeyError {
    #[error("unknown key {0:?}")]
    Unknown(String),
    #[error("expected {expected}, got {value:?}")]
    Type {
        expected: &'static str,
        value: String,
    },
}

/// Applies one `key = value` assignment to a config. Used by the parser and
/// by the CLI's sweep override.
pub fn set_key(config: &mut ModelConfig, key: &str, value: &str) -> Result<(), KeyError> {
    let mismatch = |expected: &'static str| KeyError::Type {
        expected,
        value: value.to_string(),
    };
    match key {
        "grid_width" => config.grid_width = value.parse().map_err(|_| mismatch("integer"))?,
        "grid_height" => config.grid_height = value.parse().map_err(|_| mismatch("integer"))?,
        "population" => config.population = value.parse().map_err(|_| mismatch("integer"))?,
        "vision_radius" => config.vision_radius = value.parse().map_err(|_| mismatch("number"))?,
        "alpha" => config.alpha = value.parse().map_err(|_| mismatch("number"))?,
        "beta" => config.beta = value.parse().map_err(|_| mismatch("number"))?,
        "media_levels" => {
            config.media_levels = value
                .split(',')
                .map(|part| part.trim().parse::<u32>())
                .collect::<Result<_, _>>()
                .map_err(|_| mismatch("comma-separated non-negative integers"))?
        }
        "threshold" => config.threshold = value.parse().map_err(|_| mismatch("number"))?,
        "w_sd" => config.w_sd = value.parse().map_err(|_| mismatch("number"))?,
        "initial_split" => {
            config.initial_split = match value.to_ascii_lowercase().as_str() {
                "balanced" => InitialSplit::Balanced,
                "random" => InitialSplit::Random,
                _ => return Err(mismatch("`balanced` or `random`")),
            }
        }
        "max_ticks" => config.max_ticks = value.parse().map_err(|_| mismatch("integer"))?,
        "stability_window" => {
            config.stability_window = value.parse().map_err(|_| mismatch("integer"))?
        }
        "seed" => config.seed = value.parse().map_err(|_| mismatch("unsigned integer"))?,
        "clamp_w" => config.clamp_w = Some(value.parse().map_err(|_| mismatch("number"))?),
        _ => return Err(KeyError::Unknown(key.to_string())),
    }
    Ok(())
}

/// Parses config text, fills defaults for missing keys and validates the
/// result.
pub fn parse_config(text: &str) -> Result<ValidatedConfig, ParseError> {
    let mut config = ModelConfig::default();
    let mut seen: HashSet<String> = HashSet::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let Some((key, value)) = content.split_once('=') else {
            return Err(ParseError::Syntax {
                line,
                text: content.to_string(),
            });
        };
        let key = key.trim();
        let value = value.trim();
        if !seen.insert(key.to_string()) {
            return Err(ParseError::DuplicateKey {
                line,
                key: key.to_string(),
            });
        }
        set_key(&mut config, key, value).map_err(|e| match e {
            KeyError::Unknown(key) => ParseError::UnknownKey { line, key },
            KeyError::Type { expected, value } => ParseError::TypeMismatch {
                line,
                key: key.to_string(),
                expected,
                value,
            },
        })?;
    }

    Ok(config.validated()?)
}

/// Renders a config as parseable `key = value` text. `parse_config` on the
/// output reproduces the input exactly.
pub fn serialize_config(config: &ModelConfig) -> String {
    let mut out = String::new();
    let mut push = |key: &str, value: String| {
        out.push_str(key);
        out.push_str(" = ");
        out.push_str(&value);
        out.push('\n');
    };
    push("grid_width", config.grid_width.to_string());
    push("grid_height", config.grid_height.to_string());
    push("population", config.population.to_string());
    push("vision_radius", format_f64(config.vision_radius));
    push("alpha", format_f64(config.alpha));
    push("beta", format_f64(config.beta));
    push(
        "media_levels",
        config
            .media_levels
            .iter()
            .map(|l| l.to_string())
            .collect::<Vec<_>>()
            .join(","),
    );
    push("threshold", format_f64(config.threshold));
    push("w_sd", format_f64(config.w_sd));
    push("initial_split", config.initial_split.as_str().to_string());
    push("max_ticks", config.max_ticks.to_string());
    push("stability_window", config.stability_window.to_string());
    push("seed", config.seed.to_string());
    if let Some(c) = config.clamp_w {
        push("clamp_w", format_f64(c));
    }
    out
}

// Shortest f64 text that reparses to the same bits.
fn format_f64(v: f64) -> String {
    let s = format!("{v}");
    debug_assert_eq!(s.parse::<f64>().ok(), Some(v));
    s
}

/// 9 significant digits, the fixed real format of every CSV column.
pub fn fmt_real(v: f64) -> String {
    format!("{v:.8e}")
}

fn fmt_df(df: Df) -> String {
    match df {
        Df::One(d) => fmt_real(d),
        Df::Two(a, b) => format!("{}/{}", fmt_real(a), fmt_real(b)),
    }
}

/// run.csv: the per-tick series of a single run.
pub fn write_run_csv(out: &mut impl Write, result: &RunResult) -> io::Result<()> {
    writeln!(out, "tick,silent_count,new_silent,new_speaking,mean_w")?;
    for t in 0..result.silent_count.len() {
        writeln!(
            out,
            "{},{},{},{},{}",
            t,
            result.silent_count[t],
            result.new_silent[t],
            result.new_speaking[t],
            fmt_real(result.mean_w[t])
        )?;
    }
    Ok(())
}

/// summary.csv: one row per replication.
pub fn write_summary_csv(out: &mut impl Write, set: &ReplicationSet) -> io::Result<()> {
    writeln!(
        out,
        "rep,seed,convergence_tick,non_converged,outcome,final_silent_fraction"
    )?;
    for (rep, (seed, result)) in set.seeds.iter().zip(&set.results).enumerate() {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            rep,
            seed,
            result.convergence_tick,
            result.non_converged as u8,
            result.outcome.as_str(),
            fmt_real(result.final_silent_fraction)
        )?;
    }
    Ok(())
}

/// experiment.csv: one row per designated test.
pub fn write_experiment_csv(out: &mut impl Write, summary: &ExperimentSummary) -> io::Result<()> {
    writeln!(out, "condition,stat_kind,statistic,df,exceeds_p001")?;
    for test in &summary.tests {
        writeln!(
            out,
            "{},{},{},{},{}",
            test.label,
            test.stat.kind.as_str(),
            fmt_real(test.stat.statistic),
            fmt_df(test.stat.df),
            test.exceeds_p001 as u8
        )?;
    }
    Ok(())
}

/// snapshot_t<k>.csv: the full agent state at one tick, for cluster plots.
pub fn write_snapshot_csv(
    out: &mut impl Write,
    world: &WorldState,
    threshold: f64,
) -> io::Result<()> {
    writeln!(out, "agent_id,x,y,w,speaking,media_exposure")?;
    for (i, &(x, y)) in world.positions().iter().enumerate() {
        let w = world.w()[i];
        writeln!(
            out,
            "{},{},{},{},{},{}",
            i,
            x,
            y,
            fmt_real(w),
            (w > threshold) as u8,
            world.media_exposure(i)
        )?;
    }
    Ok(())
}
