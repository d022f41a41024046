//! World construction: seeded initialization of willingness, media field,
//! agent placement and neighbor lists.

use rand::seq::{index, SliceRandom};
use rand::Rng;
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, Normal};

use crate::config::{ConfigError, InitialSplit, ValidatedConfig};
use crate::grid::{neighbor_offsets, Torus};

/// Complete state of one simulated world.
///
/// Positions, the media field and the neighbor lists are fixed at
/// construction; only `tick` and the willingness buffer change afterwards.
#[derive(Debug, Clone, PartialEq)]
pub struct WorldState {
    pub(crate) tick: u32,
    pub(crate) w: Vec<f64>,
    pub(crate) positions: Vec<(u32, u32)>,
    /// Row-major per-patch media exposure.
    pub(crate) media: Vec<u32>,
    pub(crate) torus: Torus,
    /// Media exposure of each agent's own patch.
    pub(crate) agent_media: Vec<u32>,
    // Neighbor lists in CSR form: ids of agents within vision radius of agent
    // i are nbr_ids[nbr_start[i]..nbr_start[i+1]], self excluded.
    pub(crate) nbr_start: Vec<u32>,
    pub(crate) nbr_ids: Vec<u32>,
    /// Back buffer for the synchronous update.
    pub(crate) back: Vec<f64>,
}

impl WorldState {
    pub fn tick(&self) -> u32 {
        self.tick
    }

    pub fn population(&self) -> usize {
        self.w.len()
    }

    /// Current willingness-to-express values.
    pub fn w(&self) -> &[f64] {
        &self.w
    }

    /// Mutable willingness buffer, for planting hand-built scenarios.
    pub fn w_mut(&mut self) -> &mut [f64] {
        &mut self.w
    }

    pub fn positions(&self) -> &[(u32, u32)] {
        &self.positions
    }

    /// Row-major per-patch media exposure grid.
    pub fn media(&self) -> &[u32] {
        &self.media
    }

    pub fn torus(&self) -> Torus {
        self.torus
    }

    /// Media exposure on the patch agent `i` stands on.
    pub fn media_exposure(&self, agent: usize) -> u32 {
        self.agent_media[agent]
    }

    /// Indices of the agents in `agent`'s reference group.
    pub fn neighbors(&self, agent: usize) -> &[u32] {
        let lo = self.nbr_start[agent] as usize;
        let hi = self.nbr_start[agent + 1] as usize;
        &self.nbr_ids[lo..hi]
    }

    /// speaking(i) ⟺ w(i) > threshold; w = threshold counts as silent.
    pub fn speaking(&self, threshold: f64) -> Vec<bool> {
        self.w.iter().map(|&w| is_speaking(w, threshold)).collect()
    }

    /// Silent is the exact complement of speaking.
    pub fn silent_count(&self, threshold: f64) -> u32 {
        self.w
            .iter()
            .filter(|&&w| !is_speaking(w, threshold))
            .count() as u32
    }

    pub fn mean_w(&self) -> f64 {
        self.w.iter().sum::<f64>() / self.w.len() as f64
    }
}

fn is_speaking(w: f64, threshold: f64) -> bool {
    w > threshold
}

/// Draws `n` initial willingness values.
///
/// Under [`InitialSplit::Balanced`] the magnitudes come from |N(0, w_sd²)|
/// (zero draws are rejected) and a uniformly chosen ⌈n/2⌉ of them are negated,
/// so exactly ⌈n/2⌉ values are ≤ 0 and ⌊n/2⌋ are > 0. Under
/// [`InitialSplit::Random`] the values are plain N(0, w_sd²) draws.
pub fn sample_initial_w(
    rng: &mut ChaCha12Rng,
    n: u32,
    w_sd: f64,
    split: InitialSplit,
) -> Result<Vec<f64>, ConfigError> {
    if n < 2 {
        return Err(ConfigError::InvalidPopulation(n));
    }
    let normal = Normal::new(0.0, w_sd).expect("w_sd validated positive");
    let n = n as usize;
    match split {
        InitialSplit::Balanced => {
            let mut w: Vec<f64> = (0..n)
                .map(|_| loop {
                    let magnitude = normal.sample(rng).abs();
                    if magnitude > 0.0 {
                        break magnitude;
                    }
                })
                .collect();
            let negatives = n.div_ceil(2);
            for i in index::sample(rng, n, negatives) {
                w[i] = -w[i];
            }
            Ok(w)
        }
        InitialSplit::Random => Ok((0..n).map(|_| normal.sample(rng)).collect()),
    }
}

/// Assigns each patch an independent uniform draw from `media_levels`,
/// row-major. Patches that draw 0 are hardcore sites.
pub fn assign_media(rng: &mut ChaCha12Rng, config: &ValidatedConfig) -> Vec<u32> {
    let levels = &config.media_levels;
    (0..config.patch_count())
        .map(|_| levels[rng.random_range(0..levels.len())])
        .collect()
}

/// Samples `population` distinct patches uniformly without replacement;
/// agent `i` stands on the `i`-th sampled patch.
pub fn place_agents(rng: &mut ChaCha12Rng, config: &ValidatedConfig) -> Vec<(u32, u32)> {
    let torus = Torus::new(config.grid_width, config.grid_height);
    let mut patches: Vec<u32> = (0..torus.patch_count() as u32).collect();
    let (chosen, _) = patches.partial_shuffle(rng, config.population as usize);
    chosen.iter().map(|&p| torus.coords(p as usize)).collect()
}

/// Builds a world from a validated configuration and a seed.
///
/// All randomness comes from one ChaCha12 generator seeded with `seed`, drawn
/// in this fixed order: (1) willingness values, (2) media grid, (3) agent
/// placement. Equal (config, seed) pairs therefore produce bit-identical
/// worlds. Neighbor lists are precomputed from [`neighbor_offsets`].
pub fn init_world(config: &ValidatedConfig, seed: u64) -> WorldState {
    use rand::SeedableRng;
    let mut rng = ChaCha12Rng::seed_from_u64(seed);

    let w = sample_initial_w(
        &mut rng,
        config.population,
        config.w_sd,
        config.initial_split,
    )
    .expect("population validated ≥ 2");
    let media = assign_media(&mut rng, config);
    let positions = place_agents(&mut rng, config);

    let torus = Torus::new(config.grid_width, config.grid_height);
    let n = positions.len();

    let mut occupant = vec![u32::MAX; torus.patch_count()];
    for (i, &(x, y)) in positions.iter().enumerate() {
        occupant[torus.index(x, y)] = i as u32;
    }

    let offsets = neighbor_offsets(config.vision_radius);
    let mut nbr_start = Vec::with_capacity(n + 1);
    let mut nbr_ids = Vec::new();
    nbr_start.push(0u32);
    for &(x, y) in &positions {
        for &(dx, dy) in &offsets {
            let (nx, ny) = torus.offset(x, y, dx, dy);
            let occ = occupant[torus.index(nx, ny)];
            if occ != u32::MAX {
                nbr_ids.push(occ);
            }
        }
        nbr_start.push(nbr_ids.len() as u32);
    }

    let agent_media = positions
        .iter()
        .map(|&(x, y)| media[torus.index(x, y)])
        .collect();

    let back = vec![0.0; n];
    WorldState {
        tick: 0,
        w,
        positions,
        media,
        torus,
        agent_media,
        nbr_start,
        nbr_ids,
        back,
    }
}
