//! Weight schedules, bound distances, OSPA baselines and batch averaging.

mod batch;
mod bounds;
mod ospa;
mod schedule;

pub use batch::{aggregate, batch_metric, evaluate, rank, BatchResult, RankEntry, TIE_TOLERANCE};
pub use bounds::{check_inequality_chain, d_infinity, d_zero, ChainReport, CHAIN_TOLERANCE};
pub use ospa::{ospa, ospa2, trajectory_distance};
pub use schedule::{make_schedule, ScheduleSpec};
