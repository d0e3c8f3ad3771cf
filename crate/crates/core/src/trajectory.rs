//! Trajectories, sets of trajectories and their per-time-step target slices.
//!
//! Time steps are 1-based. A trajectory born at `birth` with `ν` entries
//! covers steps `birth..=birth + ν - 1`; entries inside that extent may be
//! absent (a hole), but the first and last entries are always present.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    label: String,
    birth: usize,
    states: Vec<Option<Vec<f64>>>,
}

impl Trajectory {
    pub fn new(
        label: impl Into<String>,
        birth: usize,
        states: Vec<Option<Vec<f64>>>,
    ) -> Result<Self> {
        let label = label.into();
        let fail = |field: &'static str, reason: String| Error::InvalidTrajectory {
            label: label.clone(),
            field,
            reason,
        };
        if birth < 1 {
            return Err(fail("birth", "time steps start at 1".into()));
        }
        if states.is_empty() {
            return Err(fail("states", "a trajectory needs at least one state".into()));
        }
        if states.first().is_some_and(Option::is_none) || states.last().is_some_and(Option::is_none)
        {
            return Err(fail(
                "states",
                "first and last entries must be present".into(),
            ));
        }
        let mut dim = None;
        for (offset, state) in states.iter().enumerate() {
            let Some(state) = state else { continue };
            if state.is_empty() {
                return Err(fail("states", format!("entry {offset} has dimension 0")));
            }
            if state.iter().any(|v| !v.is_finite()) {
                return Err(fail("states", format!("entry {offset} is not finite")));
            }
            match dim {
                None => dim = Some(state.len()),
                Some(d) if d != state.len() => {
                    return Err(fail(
                        "states",
                        format!("entry {offset} has dimension {} instead of {d}", state.len()),
                    ))
                }
                Some(_) => {}
            }
        }
        Ok(Self {
            label,
            birth,
            states,
        })
    }

    /// Hole-free trajectory from a list of states.
    pub fn contiguous(label: impl Into<String>, birth: usize, states: Vec<Vec<f64>>) -> Result<Self> {
        Self::new(label, birth, states.into_iter().map(Some).collect())
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn birth(&self) -> usize {
        self.birth
    }

    /// Number of entries `ν`, holes included.
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn last_step(&self) -> usize {
        self.birth + self.states.len() - 1
    }

    pub fn states(&self) -> &[Option<Vec<f64>>] {
        &self.states
    }

    pub fn dim(&self) -> usize {
        self.states
            .iter()
            .flatten()
            .next()
            .map(Vec::len)
            .expect("validated trajectories have a present state")
    }

    /// State at step `k`, or `None` outside the extent or inside a hole.
    pub fn state_at(&self, k: usize) -> Option<&[f64]> {
        if k < self.birth || k > self.last_step() {
            return None;
        }
        self.states[k - self.birth].as_deref()
    }

    /// Number of steps with a present state.
    pub fn presence_count(&self) -> usize {
        self.states.iter().filter(|s| s.is_some()).count()
    }
}

/// The singleton-or-empty target set of `traj` at step `k` of a window of length `window`.
pub fn tau(traj: &Trajectory, k: usize, window: usize) -> Result<Option<&[f64]>> {
    if k < 1 || k > window {
        return Err(Error::TimeStepOutOfRange { k, window });
    }
    Ok(traj.state_at(k))
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrajectorySet {
    window: usize,
    trajectories: Vec<Trajectory>,
}

impl TrajectorySet {
    pub fn new(window: usize, trajectories: Vec<Trajectory>) -> Result<Self> {
        if window < 1 {
            return Err(Error::InvalidSet("window length T must be at least 1".into()));
        }
        let mut dim: Option<usize> = None;
        for traj in &trajectories {
            if traj.last_step() > window {
                return Err(Error::InvalidTrajectory {
                    label: traj.label.clone(),
                    field: "states",
                    reason: format!(
                        "extends to step {} past the window end {window}",
                        traj.last_step()
                    ),
                });
            }
            match dim {
                None => dim = Some(traj.dim()),
                Some(d) if d != traj.dim() => {
                    return Err(Error::InvalidTrajectory {
                        label: traj.label.clone(),
                        field: "states",
                        reason: format!("dimension {} differs from the set dimension {d}", traj.dim()),
                    })
                }
                Some(_) => {}
            }
        }
        Ok(Self {
            window,
            trajectories,
        })
    }

    pub fn empty(window: usize) -> Result<Self> {
        Self::new(window, Vec::new())
    }

    pub fn window(&self) -> usize {
        self.window
    }

    pub fn trajectories(&self) -> &[Trajectory] {
        &self.trajectories
    }

    pub fn len(&self) -> usize {
        self.trajectories.len()
    }

    pub fn is_empty(&self) -> bool {
        self.trajectories.is_empty()
    }

    /// State dimension, `None` for an empty set.
    pub fn dim(&self) -> Option<usize> {
        self.trajectories.first().map(Trajectory::dim)
    }

    /// `τᵏ(𝐗)`: the target states present at step `k`, each tagged with the
    /// index of the trajectory it came from.
    pub fn tau(&self, k: usize) -> Result<Vec<(usize, &[f64])>> {
        if k < 1 || k > self.window {
            return Err(Error::TimeStepOutOfRange {
                k,
                window: self.window,
            });
        }
        Ok(self
            .trajectories
            .iter()
            .enumerate()
            .filter_map(|(i, t)| t.state_at(k).map(|s| (i, s)))
            .collect())
    }

    /// Per-trajectory slices at step `k`.
    pub fn slice(&self, k: usize) -> Result<Vec<Option<&[f64]>>> {
        if k < 1 || k > self.window {
            return Err(Error::TimeStepOutOfRange {
                k,
                window: self.window,
            });
        }
        Ok(self.trajectories.iter().map(|t| t.state_at(k)).collect())
    }

    /// Sub-set holding the trajectories at `indices`, in that order.
    pub fn subset(&self, indices: &[usize]) -> Self {
        Self {
            window: self.window,
            trajectories: indices.iter().map(|&i| self.trajectories[i].clone()).collect(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: SetFile = serde_json::from_str(text)?;
        let trajectories = file
            .trajectories
            .into_iter()
            .map(|t| Trajectory::new(t.label, t.birth, t.states))
            .collect::<Result<Vec<_>>>()?;
        Self::new(file.window, trajectories)
    }

    /// Canonical serialisation: pretty-printed JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let file = SetFile {
            window: self.window,
            trajectories: self
                .trajectories
                .iter()
                .map(|t| TrajectoryFile {
                    label: t.label.clone(),
                    birth: t.birth,
                    states: t.states.clone(),
                })
                .collect(),
        };
        let mut out = serde_json::to_string_pretty(&file).expect("finite values always serialise");
        out.push('\n');
        out
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json())?;
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SetFile {
    #[serde(rename = "T")]
    window: usize,
    trajectories: Vec<TrajectoryFile>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TrajectoryFile {
    label: String,
    birth: usize,
    states: Vec<Option<Vec<f64>>>,
}

/// Checks that two sets can be compared and returns their common state
/// dimension (`None` when both are empty).
pub fn check_compatible(x: &TrajectorySet, y: &TrajectorySet) -> Result<Option<usize>> {
    if x.window != y.window {
        return Err(Error::WindowMismatch {
            left: x.window,
            right: y.window,
        });
    }
    match (x.dim(), y.dim()) {
        (Some(a), Some(b)) if a != b => Err(Error::DimensionMismatch { left: a, right: b }),
        (a, b) => Ok(a.or(b)),
    }
}

/// The per-trajectory target sets `𝐱ᵢᵏ` and `𝐲ⱼᵏ` at one time step.
#[derive(Clone, Debug)]
pub struct TargetSlice<'a> {
    pub k: usize,
    pub x: Vec<Option<&'a [f64]>>,
    pub y: Vec<Option<&'a [f64]>>,
}

impl<'a> TargetSlice<'a> {
    pub fn at(x: &'a TrajectorySet, y: &'a TrajectorySet, k: usize) -> Result<Self> {
        check_compatible(x, y)?;
        Ok(Self {
            k,
            x: x.slice(k)?,
            y: y.slice(k)?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn traj(birth: usize, states: Vec<Option<Vec<f64>>>) -> Trajectory {
        Trajectory::new("t", birth, states).unwrap()
    }

    #[test]
    fn tau_first_step_and_before_birth() {
        let t = traj(3, vec![Some(vec![1.0]), Some(vec![2.0])]);
        assert_eq!(tau(&t, 3, 5).unwrap(), Some(&[1.0][..]));
        assert_eq!(tau(&t, 2, 5).unwrap(), None);
        assert_eq!(tau(&t, 4, 5).unwrap(), Some(&[2.0][..]));
        assert_eq!(tau(&t, 5, 5).unwrap(), None);
    }

    #[test]
    fn tau_inside_hole_is_empty() {
        let t = traj(1, vec![Some(vec![1.0]), None, Some(vec![3.0])]);
        assert_eq!(tau(&t, 2, 3).unwrap(), None);
        assert_eq!(tau(&t, 3, 3).unwrap(), Some(&[3.0][..]));
    }

    #[test]
    fn tau_rejects_steps_outside_window() {
        let t = traj(1, vec![Some(vec![1.0])]);
        assert!(matches!(tau(&t, 0, 3), Err(Error::TimeStepOutOfRange { .. })));
        assert!(matches!(tau(&t, 4, 3), Err(Error::TimeStepOutOfRange { .. })));
    }

    #[test]
    fn tau_set_reports_origin_indices() {
        let set = TrajectorySet::new(
            4,
            vec![
                traj(1, vec![Some(vec![0.0])]),
                traj(2, vec![Some(vec![5.0]), Some(vec![6.0])]),
            ],
        )
        .unwrap();
        assert_eq!(set.tau(2).unwrap(), vec![(1, &[5.0][..])]);
        assert_eq!(set.tau(4).unwrap(), vec![]);
        assert_eq!(set.tau(1).unwrap().len(), 1);
        assert!(TrajectorySet::empty(3).unwrap().tau(2).unwrap().is_empty());
    }

    #[test]
    fn extent_must_be_tight() {
        assert!(Trajectory::new("a", 1, vec![None, Some(vec![1.0])]).is_err());
        assert!(Trajectory::new("a", 1, vec![Some(vec![1.0]), None]).is_err());
        assert!(Trajectory::new("a", 1, vec![]).is_err());
        assert!(Trajectory::new("a", 0, vec![Some(vec![1.0])]).is_err());
    }

    #[test]
    fn mixed_dimensions_are_rejected() {
        let err = Trajectory::new("bad", 1, vec![Some(vec![1.0]), Some(vec![1.0, 2.0])]).unwrap_err();
        assert!(err.to_string().contains("bad"));
        let a = traj(1, vec![Some(vec![1.0])]);
        let b = Trajectory::new("b", 1, vec![Some(vec![1.0, 2.0])]).unwrap();
        assert!(TrajectorySet::new(2, vec![a, b]).is_err());
    }

    #[test]
    fn minimal_file_loads() {
        let set = TrajectorySet::from_json(
            r#"{"T": 1, "trajectories": [{"label": "a", "birth": 1, "states": [[0.5]]}]}"#,
        )
        .unwrap();
        assert_eq!(set.len(), 1);
        assert_eq!(set.window(), 1);
    }

    #[test]
    fn trajectory_past_window_is_rejected() {
        let err = TrajectorySet::from_json(
            r#"{"T": 2, "trajectories": [{"label": "late", "birth": 2, "states": [[0.5], [1.0]]}]}"#,
        )
        .unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("late") && msg.contains("states"), "{msg}");
    }

    #[test]
    fn null_encodes_hole_and_round_trips() {
        let text = r#"{"T": 3, "trajectories": [{"label": "h", "birth": 1, "states": [[1.0], null, [0.1]]}]}"#;
        let set = TrajectorySet::from_json(text).unwrap();
        assert_eq!(set.trajectories()[0].states()[1], None);
        let canonical = set.to_json();
        let again = TrajectorySet::from_json(&canonical).unwrap();
        assert_eq!(again, set);
        assert_eq!(again.to_json(), canonical);
    }

    #[test]
    fn unknown_fields_are_schema_errors() {
        assert!(TrajectorySet::from_json(r#"{"T": 1, "trajectories": [], "extra": 1}"#).is_err());
        assert!(TrajectorySet::from_json(r#"{"trajectories": []}"#).is_err());
    }

    #[test]
    fn compatibility_checks_window_and_dimension() {
        let a = TrajectorySet::new(2, vec![traj(1, vec![Some(vec![1.0])])]).unwrap();
        let b = TrajectorySet::empty(3).unwrap();
        assert!(matches!(check_compatible(&a, &b), Err(Error::WindowMismatch { .. })));
        let c = TrajectorySet::new(2, vec![Trajectory::new("c", 1, vec![Some(vec![1.0, 1.0])]).unwrap()]).unwrap();
        assert!(matches!(check_compatible(&a, &c), Err(Error::DimensionMismatch { .. })));
        assert_eq!(check_compatible(&a, &TrajectorySet::empty(2).unwrap()).unwrap(), Some(1));
    }
}
