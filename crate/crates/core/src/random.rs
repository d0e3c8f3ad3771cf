//! Random instances for property tests and benchmarks.

use rand::Rng;

use crate::trajectory::{Trajectory, TrajectorySet};

#[derive(Clone, Debug)]
pub struct RandomSetConfig {
    pub window: usize,
    pub max_trajectories: usize,
    pub dim: usize,
    /// States are drawn uniformly from `[0, extent]` in every coordinate.
    pub extent: f64,
    /// Probability that an interior step of a trajectory is a hole.
    pub hole_probability: f64,
}

impl RandomSetConfig {
    pub fn small(window: usize) -> Self {
        Self {
            window,
            max_trajectories: 2,
            dim: 1,
            extent: 6.0,
            hole_probability: 0.25,
        }
    }
}

pub fn random_state<R: Rng + ?Sized>(rng: &mut R, dim: usize, extent: f64) -> Vec<f64> {
    (0..dim).map(|_| rng.random_range(0.0..=extent)).collect()
}

/// Up to `max` states of dimension `dim`.
pub fn random_target_set<R: Rng + ?Sized>(rng: &mut R, max: usize, dim: usize, extent: f64) -> Vec<Vec<f64>> {
    let n = rng.random_range(0..=max);
    (0..n).map(|_| random_state(rng, dim, extent)).collect()
}

/// One trajectory with random birth and death inside the window and random
/// interior holes.
pub fn random_trajectory<R: Rng + ?Sized>(rng: &mut R, label: String, config: &RandomSetConfig) -> Trajectory {
    let birth = rng.random_range(1..=config.window);
    let last = rng.random_range(birth..=config.window);
    let len = last - birth + 1;
    let states = (0..len)
        .map(|n| {
            let interior = n > 0 && n + 1 < len;
            if interior && rng.random_bool(config.hole_probability) {
                None
            } else {
                Some(random_state(rng, config.dim, config.extent))
            }
        })
        .collect();
    Trajectory::new(label, birth, states).expect("generated trajectory is valid")
}

pub fn random_trajectory_set<R: Rng + ?Sized>(rng: &mut R, prefix: &str, config: &RandomSetConfig) -> TrajectorySet {
    let n = rng.random_range(0..=config.max_trajectories);
    let trajectories = (0..n)
        .map(|i| random_trajectory(rng, format!("{prefix}{}", i + 1), config))
        .collect();
    TrajectorySet::new(config.window, trajectories).expect("generated set is valid")
}
