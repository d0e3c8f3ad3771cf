//! The two-target benchmark scenario: two parallel, constant truths and four
//! estimates with different failure modes.
//!
//! * `e1`: each truth tracked with a deviation of 3 at every step.
//! * `e2`: `e1` with the estimate labels swapped after step 250.
//! * `e3`: `e1` with the estimate labels swapped after step 650.
//! * `e4`: `e1` with the second estimate displaced by half the separation
//!   from step 550 on.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use trajmetric::{Error, Result, Trajectory, TrajectorySet};

pub const WINDOW: usize = 800;
pub const OFFSET: f64 = 3.0;
/// Last step before the labels swap in `e2`.
pub const E2_SWAP_AFTER: usize = 250;
/// Last step before the labels swap in `e3`.
pub const E3_SWAP_AFTER: usize = 650;
/// First displaced step in `e4`.
pub const E4_DISPLACED_FROM: usize = 550;
pub const DEFAULT_SEPARATION: f64 = 100.0;

#[derive(Clone, Debug)]
pub struct Scenario {
    pub truth: TrajectorySet,
    /// `("e1", set)` to `("e4", set)`.
    pub estimates: Vec<(String, TrajectorySet)>,
}

fn one_dim(label: &str, positions: Vec<f64>) -> Trajectory {
    Trajectory::contiguous(label, 1, positions.into_iter().map(|p| vec![p]).collect())
        .expect("positions are finite and non-empty")
}

fn estimate_set(y1: Vec<f64>, y2: Vec<f64>) -> TrajectorySet {
    TrajectorySet::new(WINDOW, vec![one_dim("y1", y1), one_dim("y2", y2)]).expect("estimates fit the window")
}

fn swapped_after(y1: &[f64], y2: &[f64], after: usize) -> TrajectorySet {
    let pick = |own: &[f64], other: &[f64]| (0..WINDOW).map(|n| if n < after { own[n] } else { other[n] }).collect();
    estimate_set(pick(y1, y2), pick(y2, y1))
}

/// Builds the scenario. `separation` must exceed `2c + 6` so that estimates
/// are never within the cut-off of the wrong truth.
pub fn benchmark_scenario(separation: f64, c: f64, seed: u64) -> Result<Scenario> {
    if !(separation.is_finite() && separation > 2.0 * c + 2.0 * OFFSET) {
        return Err(Error::InvalidParameter {
            name: "separation",
            reason: format!("must exceed 2c + 6 = {}, got {separation}", 2.0 * c + 2.0 * OFFSET),
        });
    }
    let truth = TrajectorySet::new(
        WINDOW,
        vec![one_dim("x1", vec![0.0; WINDOW]), one_dim("x2", vec![separation; WINDOW])],
    )?;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut deviate = |centre: f64| {
        (0..WINDOW)
            .map(|_| centre + if rng.random_bool(0.5) { OFFSET } else { -OFFSET })
            .collect::<Vec<_>>()
    };
    let y1 = deviate(0.0);
    let y2 = deviate(separation);

    let displaced: Vec<f64> = y2
        .iter()
        .enumerate()
        .map(|(n, &v)| if n + 1 >= E4_DISPLACED_FROM { v + separation / 2.0 } else { v })
        .collect();

    Ok(Scenario {
        truth,
        estimates: vec![
            ("e1".to_string(), estimate_set(y1.clone(), y2.clone())),
            ("e2".to_string(), swapped_after(&y1, &y2, E2_SWAP_AFTER)),
            ("e3".to_string(), swapped_after(&y1, &y2, E3_SWAP_AFTER)),
            ("e4".to_string(), estimate_set(y1, displaced)),
        ],
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn position(set: &TrajectorySet, i: usize, k: usize) -> f64 {
        set.trajectories()[i].state_at(k).unwrap()[0]
    }

    #[test]
    fn five_sets_of_two_over_800_steps() {
        let s = benchmark_scenario(DEFAULT_SEPARATION, 5.0, 0).unwrap();
        assert_eq!(s.estimates.len(), 4);
        for set in std::iter::once(&s.truth).chain(s.estimates.iter().map(|(_, e)| e)) {
            assert_eq!((set.len(), set.window()), (2, 800));
        }
    }

    #[test]
    fn swap_geometry() {
        let sep = DEFAULT_SEPARATION;
        let s = benchmark_scenario(sep, 5.0, 3).unwrap();
        for (n, after) in [(1, E2_SWAP_AFTER), (2, E3_SWAP_AFTER)] {
            let e = &s.estimates[n].1;
            for k in 1..=WINDOW {
                let d = (position(e, 0, k) - position(&s.truth, 0, k)).abs();
                if k <= after {
                    assert_eq!(d, OFFSET);
                } else {
                    assert!(d >= sep - OFFSET);
                }
            }
        }
    }

    #[test]
    fn displaced_estimate_geometry() {
        let s = benchmark_scenario(DEFAULT_SEPARATION, 5.0, 4).unwrap();
        let e4 = &s.estimates[3].1;
        for k in 1..=WINDOW {
            let d = (position(e4, 1, k) - position(&s.truth, 1, k)).abs();
            if k < E4_DISPLACED_FROM {
                assert!(d <= OFFSET);
            } else {
                assert!(d > 5.0);
                assert!((position(e4, 1, k) - position(&s.truth, 0, k)).abs() > 5.0);
            }
        }
    }

    #[test]
    fn seed_is_reproducible() {
        let a = benchmark_scenario(DEFAULT_SEPARATION, 5.0, 9).unwrap();
        let b = benchmark_scenario(DEFAULT_SEPARATION, 5.0, 9).unwrap();
        assert_eq!(a.estimates[0].1.to_json(), b.estimates[0].1.to_json());
    }

    #[test]
    fn separation_precondition() {
        assert!(benchmark_scenario(16.0, 5.0, 0).is_err());
        assert!(benchmark_scenario(16.5, 5.0, 0).is_ok());
    }
}
