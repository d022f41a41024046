//! Model configuration and its validation.

use thiserror::Error;

/// How initial willingness values are assigned.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum InitialSplit {
    /// Force an exact half/half start: draw magnitudes from |N(0, w_sd²)| and
    /// make a uniformly chosen ⌈N/2⌉ of them negative.
    #[default]
    Balanced,
    /// Plain N(0, w_sd²) draws.
    Random,
}

impl InitialSplit {
    pub fn as_str(self) -> &'static str {
        match self {
            InitialSplit::Balanced => "balanced",
            InitialSplit::Random => "random",
        }
    }
}

/// All model parameters and simulation policy knobs for one run.
///
/// The world is a `grid_width × grid_height` torus of patches holding at most
/// one agent each. `alpha` weights media influence, `beta` weights reference
/// group influence in the willingness update.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelConfig {
    pub grid_width: u32,
    pub grid_height: u32,
    /// Number of agents, at most one per patch.
    pub population: u32,
    /// Radius of vision in patch units; reference groups are all agents within
    /// this Euclidean torus distance.
    pub vision_radius: f64,
    /// Media influence coefficient.
    pub alpha: f64,
    /// Group influence coefficient.
    pub beta: f64,
    /// Per-patch media exposure is drawn uniformly from this list. A value of
    /// 0 marks a hardcore site (no direct media influence).
    pub media_levels: Vec<u32>,
    /// Opinion threshold: an agent speaks out iff w > threshold.
    pub threshold: f64,
    /// Standard deviation of the initial willingness distribution.
    pub w_sd: f64,
    pub initial_split: InitialSplit,
    pub max_ticks: u32,
    /// A run counts as converged once the speaking/silent partition has been
    /// identical for this many consecutive ticks.
    pub stability_window: u32,
    pub seed: u64,
    /// Optional symmetric clamp |w| ≤ clamp_w. Off by default; the update rule
    /// never bounds willingness on its own.
    pub clamp_w: Option<f64>,
}

impl Default for ModelConfig {
    fn default() -> Self {
        ModelConfig {
            grid_width: 50,
            grid_height: 50,
            population: 1000,
            vision_radius: 3.0,
            alpha: 0.02,
            beta: 0.02,
            media_levels: vec![0, 1, 2, 3, 4, 5],
            threshold: 0.0,
            w_sd: 1.0,
            initial_split: InitialSplit::Balanced,
            max_ticks: 1000,
            stability_window: 10,
            seed: 42,
            clamp_w: None,
        }
    }
}

impl ModelConfig {
    pub fn patch_count(&self) -> u64 {
        self.grid_width as u64 * self.grid_height as u64
    }

    /// Convenience: validate and wrap.
    pub fn validated(self) -> Result<ValidatedConfig, ConfigError> {
        validate_config(self)
    }
}

/// The first violated configuration invariant, by name.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("ZeroGridDimension: grid_width and grid_height must be positive")]
    ZeroGridDimension,
    #[error("InvalidPopulation: population must be at least 2, got {0}")]
    InvalidPopulation(u32),
    #[error("NonPositiveVision: vision_radius must be > 0, got {0}")]
    NonPositiveVision(f64),
    #[error("NegativeCoefficient: {name} must be ≥ 0 and finite, got {value}")]
    NegativeCoefficient { name: &'static str, value: f64 },
    #[error("OverpopulatedGrid: {population} agents do not fit on {patches} patches")]
    OverpopulatedGrid { population: u32, patches: u64 },
    #[error("VisionExceedsGrid: grid side {side} must exceed 2·{radius} + 1")]
    VisionExceedsGrid { side: u32, radius: f64 },
    #[error("EmptyMediaLevels: media_levels must contain at least one entry")]
    EmptyMediaLevels,
    #[error("NonPositiveWSd: w_sd must be > 0, got {0}")]
    NonPositiveWSd(f64),
    #[error("ZeroMaxTicks: max_ticks must be positive")]
    ZeroMaxTicks,
    #[error("ZeroStabilityWindow: stability_window must be positive")]
    ZeroStabilityWindow,
    #[error("NonPositiveClamp: clamp_w must be > 0 when set, got {0}")]
    NonPositiveClamp(f64),
    #[error("NonFiniteThreshold: threshold must be finite, got {0}")]
    NonFiniteThreshold(f64),
}

/// A configuration that passed [`validate_config`]. Construction is the proof.
#[derive(Debug, Clone, PartialEq)]
pub struct ValidatedConfig(ModelConfig);

impl ValidatedConfig {
    pub fn get(&self) -> &ModelConfig {
        &self.0
    }

    pub fn into_inner(self) -> ModelConfig {
        self.0
    }
}

impl std::ops::Deref for ValidatedConfig {
    type Target = ModelConfig;
    fn deref(&self) -> &ModelConfig {
        &self.0
    }
}

/// Checks every [`ModelConfig`] invariant and reports the first violation.
pub fn validate_config(config: ModelConfig) -> Result<ValidatedConfig, ConfigError> {
    if config.grid_width == 0 || config.grid_height == 0 {
        return Err(ConfigError::ZeroGridDimension);
    }
    if config.population < 2 {
        return Err(ConfigError::InvalidPopulation(config.population));
    }
    if !config.vision_radius.is_finite() || config.vision_radius <= 0.0 {
        return Err(ConfigError::NonPositiveVision(config.vision_radius));
    }
    for (name, value) in [("alpha", config.alpha), ("beta", config.beta)] {
        if !value.is_finite() || value < 0.0 {
            return Err(ConfigError::NegativeCoefficient { name, value });
        }
    }
    if config.population as u64 > config.patch_count() {
        return Err(ConfigError::OverpopulatedGrid {
            population: config.population,
            patches: config.patch_count(),
        });
    }
    // One agent per patch plus this bound keeps neighborhoods free of
    // self-wrap: no offset can reach the origin patch around the torus.
    let min_side = 2.0 * config.vision_radius + 1.0;
    for side in [config.grid_width, config.grid_height] {
        if side as f64 <= min_side {
            return Err(ConfigError::VisionExceedsGrid {
                side,
                radius: config.vision_radius,
            });
        }
    }
    if config.media_levels.is_empty() {
        return Err(ConfigError::EmptyMediaLevels);
    }
    if !config.w_sd.is_finite() || config.w_sd <= 0.0 {
        return Err(ConfigError::NonPositiveWSd(config.w_sd));
    }
    if config.max_ticks == 0 {
        return Err(ConfigError::ZeroMaxTicks);
    }
    if config.stability_window == 0 {
        return Err(ConfigError::ZeroStabilityWindow);
    }
    if let Some(c) = config.clamp_w {
        if !c.is_finite() || c <= 0.0 {
            return Err(ConfigError::NonPositiveClamp(c));
        }
    }
    if !config.threshold.is_finite() {
        return Err(ConfigError::NonFiniteThreshold(config.threshold));
    }
    Ok(ValidatedConfig(config))
}
