//! The synchronous willingness update, convergence detection and outcome
//! classification.
//!
//! One tick applies, to every agent n at once,
//!
//! ```text
//! w'(n) = w(n) + alpha * media_term(n) + beta * group_term(n)
//! ```
//!
//! where `media_term` is the negated media exposure of n's patch (media
//! pressure always pushes toward the silent pole) and `group_term` is the sum
//! of the neighbors' current willingness. The update is double-buffered: every
//! new value is computed from the previous tick's buffer only, so agent
//! iteration order cannot matter.

use std::collections::VecDeque;

use crate::config::ModelConfig;
use crate::world::WorldState;

/// Where a finished run ended up, by final majority.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Silence,
    Speaking,
    Tie,
}

impl Outcome {
    pub fn from_fraction(final_silent_fraction: f64) -> Outcome {
        if final_silent_fraction > 0.5 {
            Outcome::Silence
        } else if final_silent_fraction < 0.5 {
            Outcome::Speaking
        } else {
            Outcome::Tie
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Outcome::Silence => "Silence",
            Outcome::Speaking => "Speaking",
            Outcome::Tie => "Tie",
        }
    }
}

/// Per-tick series and end-state summary of a single run.
///
/// All per-tick arrays share length `last simulated tick + 1`; index 0 holds
/// the initial state.
#[derive(Debug, Clone, PartialEq)]
pub struct RunResult {
    pub silent_count: Vec<u32>,
    /// Speaking→silent transitions at each tick (0 at tick 0).
    pub new_silent: Vec<u32>,
    /// Silent→speaking transitions at each tick (0 at tick 0).
    pub new_speaking: Vec<u32>,
    pub mean_w: Vec<f64>,
    /// First tick of the stable window, or `max_ticks` if stability was never
    /// reached.
    pub convergence_tick: u32,
    pub non_converged: bool,
    pub outcome: Outcome,
    pub final_silent_fraction: f64,
}

impl RunResult {
    pub fn last_tick(&self) -> u32 {
        (self.silent_count.len() - 1) as u32
    }
}

/// Signed media contribution for one agent: the negated exposure of its
/// patch. Hardcore sites (exposure 0) contribute nothing.
pub fn media_term(world: &WorldState, agent: usize) -> f64 {
    -(world.agent_media[agent] as f64)
}

/// Opinion climate of the reference group: the sum of the neighbors'
/// willingness on the current buffer. Empty reference groups sum to zero;
/// the agent itself is excluded.
pub fn group_term(world: &WorldState, agent: usize) -> f64 {
    world
        .neighbors(agent)
        .iter()
        .map(|&j| world.w[j as usize])
        .sum()
}

fn updated_w(world: &WorldState, config: &ModelConfig, agent: usize) -> f64 {
    // beta == 0 skips the neighbor walk; 0 * finite sum is identical anyway.
    let group = if config.beta != 0.0 {
        config.beta * group_term(world, agent)
    } else {
        0.0
    };
    let mut w = world.w[agent] + config.alpha * media_term(world, agent) + group;
    if let Some(c) = config.clamp_w {
        w = w.clamp(-c, c);
    }
    w
}

/// Advances the world one tick with the synchronous update.
pub fn step(world: &mut WorldState, config: &ModelConfig) {
    for i in 0..world.w.len() {
        world.back[i] = updated_w(world, config, i);
    }
    std::mem::swap(&mut world.w, &mut world.back);
    world.tick += 1;
}

/// True iff the speaking/silent partition has been identical over the last
/// `window` + 1 recorded ticks.
pub fn detect_stability(history: &VecDeque<Vec<bool>>, window: u32) -> bool {
    let needed = window as usize + 1;
    if history.len() < needed {
        return false;
    }
    let mut recent = history.iter().rev().take(needed);
    let last = recent.next().expect("nonempty");
    recent.all(|p| p == last)
}

/// Runs a freshly initialized world until the speaking partition is stable
/// for `stability_window` ticks or `max_ticks` is reached, recording the
/// per-tick series. `convergence_tick` is the first tick of the stable
/// window, not its end.
pub fn run_sim(world: &mut WorldState, config: &ModelConfig) -> RunResult {
    run_sim_observed(world, config, |_, _| {})
}

/// [`run_sim`] with a per-tick observer, called after every recorded tick
/// (including tick 0). Used for snapshot export.
pub fn run_sim_observed(
    world: &mut WorldState,
    config: &ModelConfig,
    mut observe: impl FnMut(u32, &WorldState),
) -> RunResult {
    let n = world.population() as u32;
    let threshold = config.threshold;
    let window = config.stability_window;

    let mut speaking = world.speaking(threshold);
    let mut silent_count = vec![n - count_true(&speaking)];
    let mut new_silent = vec![0u32];
    let mut new_speaking = vec![0u32];
    let mut mean_w = vec![world.mean_w()];

    // Only the last window+1 partitions can matter for stability.
    let mut history: VecDeque<Vec<bool>> = VecDeque::with_capacity(window as usize + 2);
    history.push_back(speaking.clone());
    observe(0, world);

    let mut convergence_tick = config.max_ticks;
    let mut non_converged = true;

    for t in 1..=config.max_ticks {
        step(world, config);
        let now = world.speaking(threshold);
        let mut to_silent = 0;
        let mut to_speaking = 0;
        for (before, after) in speaking.iter().zip(&now) {
            match (before, after) {
                (true, false) => to_silent += 1,
                (false, true) => to_speaking += 1,
                _ => {}
            }
        }
        silent_count.push(n - count_true(&now));
        new_silent.push(to_silent);
        new_speaking.push(to_speaking);
        mean_w.push(world.mean_w());
        speaking = now;

        history.push_back(speaking.clone());
        if history.len() > window as usize + 1 {
            history.pop_front();
        }
        observe(t, world);

        if detect_stability(&history, window) {
            convergence_tick = t - window;
            non_converged = false;
            break;
        }
    }

    let final_silent_fraction = *silent_count.last().expect("nonempty") as f64 / n as f64;
    RunResult {
        silent_count,
        new_silent,
        new_speaking,
        mean_w,
        convergence_tick,
        non_converged,
        outcome: Outcome::from_fraction(final_silent_fraction),
        final_silent_fraction,
    }
}

/// Classifies a finished run by its final silent majority.
pub fn classify_outcome(result: &RunResult) -> Outcome {
    Outcome::from_fraction(result.final_silent_fraction)
}

/// Mean over agents (with at least one neighbor) of the fraction of their
/// neighbors sharing their speaking state. ≈0.5 for a random half/half start,
/// →1 as opinion clusters freeze out.
pub fn same_state_fraction(world: &WorldState, threshold: f64) -> f64 {
    let speaking = world.speaking(threshold);
    let mut total = 0.0;
    let mut counted = 0usize;
    for i in 0..world.population() {
        let nbrs = world.neighbors(i);
        if nbrs.is_empty() {
            continue;
        }
        let same = nbrs
            .iter()
            .filter(|&&j| speaking[j as usize] == speaking[i])
            .count();
        total += same as f64 / nbrs.len() as f64;
        counted += 1;
    }
    total / counted as f64
}

fn count_true(bits: &[bool]) -> u32 {
    bits.iter().filter(|&&b| b).count() as u32
}
