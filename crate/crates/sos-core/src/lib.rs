//! Agent-based spiral-of-silence model with a dual opinion climate.
//!
//! Agents sit on a torus lattice, one per patch. Each holds a continuous
//! willingness to express `w` and speaks out while `w` stays above the
//! opinion threshold. Every tick updates all agents synchronously:
//!
//! ```text
//! w'(n) = w(n) - alpha * media_exposure(n) + beta * sum of neighbor w
//! ```
//!
//! Media exposure is a static per-patch field (level 0 marks hardcore sites
//! outside media reach); the neighbor sum runs over the reference group, all
//! agents within the vision radius. A run converges once the speaking/silent
//! partition stays frozen for a configurable window of ticks.
//!
//! The crate ships the model itself ([`config`], [`world`], [`dynamics`]),
//! a batch harness with the shipped experiment presets ([`experiments`]),
//! from-scratch inferential statistics ([`stats`]) and the text/CSV formats
//! of the command-line tool ([`io`]).
//!
//! ```
//! use sos_core::prelude::*;
//!
//! let config = ModelConfig { alpha: 0.02, beta: 0.002, ..ModelConfig::default()
//! };
//! let validated = config.clone().validated().unwrap();
//! let mut world = init_world(&validated, 7);
//! let result = run_sim(&mut world, &config);
//! assert!(result.final_silent_fraction > 0.9);
//! ```

pub mod config;
pub mod dynamics;
pub mod experiments;
pub mod grid;
pub mod io;
pub mod stats;
pub mod world;

pub mod prelude {
    pub use crate::config::{
        validate_config, ConfigError, InitialSplit, ModelConfig, ValidatedConfig,
    };
    pub use crate::dynamics::{
        classify_outcome, detect_stability, group_term, media_term, run_sim, run_sim_observed,
        same_state_fraction, step, Outcome, RunResult,
    };
    pub use crate::experiments::{
        preset, run_preset, run_replications, summarize, Analysis, Experiment, PresetName,
        ReplicationSet,
    };
    pub use crate::grid::{neighbor_offsets, Torus};
    pub use crate::stats::{
        anova_oneway, linreg_r2, mean_sd, pearson_r, welch_t, Df, StatKind, StatResult,
    };
    pub use crate::world::{init_world, WorldState};
}
