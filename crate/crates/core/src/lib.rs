//! Time-weighted metrics between sets of trajectories, for evaluating
//! multi-object trackers.
//!
//! * [`exact_metric`]: the multi-dimensional assignment metric, solved by
//!   dynamic programming over per-step assignment vectors.
//! * [`lp_metric`]: its linear-programming relaxation, also a metric and
//!   computable in polynomial time.
//! * [`analysis`]: weight schedules, the bounds `d⁰` and `d^∞`, OSPA/OSPA²
//!   baselines and batch averaging.
//!
//! Every metric reports its per-time decomposition into localisation,
//! missed, false and switching costs.

pub mod analysis;
pub mod assignment;
pub mod cluster;
pub mod cost;
pub mod error;
pub mod exact;
pub mod gospa;
pub mod lp;
pub mod params;
pub mod random;
pub mod report;
pub mod trajectory;

pub use assignment::{solve_assignment, Matching};
pub use cluster::{cluster_split, Cluster};
pub use error::{Error, Residuals, Result};
pub use exact::{exact_metric, exact_metric_bruteforce, exact_metric_unclustered, AssignmentVector};
pub use gospa::{gospa, gospa_singleton, GospaResult};
pub use lp::{compose_soft_assignments, lp_metric, lp_metric_unclustered, lp_objective, SoftAssignment};
pub use params::{BaseMetric, MetricParams, Normalization, WeightSchedule};
pub use report::{ErrorReport, MetricKind, StepCosts};
pub use trajectory::{tau, TargetSlice, Trajectory, TrajectorySet};
