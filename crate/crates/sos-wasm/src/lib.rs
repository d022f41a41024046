//! wasm-bindgen bindings for the browser demo: an interactive lattice view,
//! a run-to-convergence series, and a quick outcome-frequency explorer.

use wasm_bindgen::prelude::*;

use sos_core::config::{ModelConfig, ValidatedConfig};
use sos_core::dynamics::{run_sim, step};
use sos_core::experiments::run_replications_serial;
use sos_core::world::{init_world, WorldState};

fn demo_config(
    alpha: f64,
    beta: f64,
    vision: f64,
    population: u32,
    seed: u64,
) -> Result<ValidatedConfig, sos_core::config::ConfigError> {
    ModelConfig {
        alpha,
        beta,
        vision_radius: vision,
        population,
        seed,
        max_ticks: 2000,
        stability_window: 50,
        ..ModelConfig::default()
    }
    .validated()
}

// JsError construction only works on wasm targets, so errors are mapped at
// the boundary and never materialized in native tests.
fn to_js(e: impl std::fmt::Display) -> JsError {
    JsError::new(&e.to_string())
}

/// Interactive world on the default 50×50 torus.
#[wasm_bindgen]
pub struct LatticeSim {
    config: ModelConfig,
    world: WorldState,
}

#[wasm_bindgen]
impl LatticeSim {
    #[wasm_bindgen(constructor)]
    pub fn new(
        alpha: f64,
        beta: f64,
        vision: f64,
        population: u32,
        seed: u64,
    ) -> Result<LatticeSim, JsError> {
        let validated = demo_config(alpha, beta, vision, population, seed).map_err(to_js)?;
        let world = init_world(&validated, seed);
        Ok(LatticeSim {
            config: validated.into_inner(),
            world,
        })
    }

    /// Advances the simulation by `steps` ticks.
    pub fn tick(&mut self, steps: u32) {
        for _ in 0..steps {
            step(&mut self.world, &self.config);
        }
    }

    pub fn current_tick(&self) -> u32 {
        self.world.tick()
    }

    pub fn width(&self) -> u32 {
        self.config.grid_width
    }

    pub fn height(&self) -> u32 {
        self.config.grid_height
    }

    pub fn population(&self) -> u32 {
        self.world.population() as u32
    }

    pub fn silent_count(&self) -> u32 {
        self.world.silent_count(self.config.threshold)
    }

    pub fn mean_w(&self) -> f64 {
        self.world.mean_w()
    }

    /// Agent x coordinates, index-aligned with the other agent arrays.
    pub fn positions_x(&self) -> Vec<u32> {
        self.world.positions().iter().map(|&(x, _)| x).collect()
    }

    pub fn positions_y(&self) -> Vec<u32> {
        self.world.positions().iter().map(|&(_, y)| y).collect()
    }

    /// 1 where the agent currently speaks out, 0 where it is silent.
    pub fn speaking(&self) -> Vec<u8> {
        self.world
            .speaking(self.config.threshold)
            .into_iter()
            .map(u8::from)
            .collect()
    }

    pub fn willingness(&self) -> Vec<f64> {
        self.world.w().to_vec()
    }

    /// Row-major per-patch media exposure, for the background layer.
    pub fn media_grid(&self) -> Vec<u8> {
        self.world.media().iter().map(|&m| m as u8).collect()
    }
}

/// One full run compressed into its silent-count series.
#[wasm_bindgen]
pub struct RunSeries {
    silent_counts: Vec<u32>,
    convergence_tick: u32,
    non_converged: bool,
    outcome: String,
}

#[wasm_bindgen]
impl RunSeries {
    pub fn silent_counts(&self) -> Vec<u32> {
        self.silent_counts.clone()
    }

    pub fn convergence_tick(&self) -> u32 {
        self.convergence_tick
    }

    pub fn non_converged(&self) -> bool {
        self.non_converged
    }

    pub fn outcome(&self) -> String {
        self.outcome.clone()
    }
}

/// Runs one world to convergence and returns the silent-count curve.
#[wasm_bindgen]
pub fn convergence_series(
    alpha: f64,
    beta: f64,
    vision: f64,
    population: u32,
    seed: u64,
) -> Result<RunSeries, JsError> {
    let validated = demo_config(alpha, beta, vision, population, seed).map_err(to_js)?;
    let mut world = init_world(&validated, seed);
    let result = run_sim(&mut world, validated.get());
    Ok(RunSeries {
        silent_counts: result.silent_count,
        convergence_tick: result.convergence_tick,
        non_converged: result.non_converged,
        outcome: result.outcome.as_str().to_string(),
    })
}

/// Replicates a condition `reps` times and returns
/// `[silence, speaking, tie]` outcome counts.
#[wasm_bindgen]
pub fn outcome_frequencies(
    alpha: f64,
    beta: f64,
    vision: f64,
    population: u32,
    reps: u32,
    base_seed: u64,
) -> Result<Vec<u32>, JsError> {
    let validated = demo_config(alpha, beta, vision, population, base_seed).map_err(to_js)?;
    let set = run_replications_serial(validated.get(), reps, base_seed).map_err(to_js)?;
    Ok(set.outcome_counts().to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lattice_sim_steps_and_reports() {
        let mut sim = LatticeSim::new(0.02, 0.002, 3.0, 1000, 7).unwrap();
        assert_eq!(sim.silent_count(), 500);
        assert_eq!(sim.positions_x().len(), 1000);
        assert_eq!(sim.media_grid().len(), 2500);
        sim.tick(50);
        assert_eq!(sim.current_tick(), 50);
        assert!(sim.silent_count() > 500);
        assert!(sim.mean_w() < 0.0);
    }

    #[test]
    fn invalid_parameters_are_rejected() {
        assert!(demo_config(0.02, 0.002, 3.0, 5000, 7).is_err());
        assert!(demo_config(-1.0, 0.002, 3.0, 100, 7).is_err());
    }

    #[test]
    fn series_and_frequencies() {
        let series = convergence_series(0.02, 0.002, 3.0, 500, 3).unwrap();
        assert!(!series.non_converged());
        assert_eq!(series.outcome(), "Silence");
        assert_eq!(
            series.silent_counts().len() as u32,
            series.convergence_tick() + 50 + 1
        );

        let freqs = outcome_frequencies(0.02, 0.002, 3.0, 300, 5, 11).unwrap();
        assert_eq!(freqs.iter().sum::<u32>(), 5);
        assert_eq!(freqs[0], 5); // strong media: all silence
    }
}
