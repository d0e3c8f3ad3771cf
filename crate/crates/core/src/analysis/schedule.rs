//! Time-weighting schedules.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::WeightSchedule;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ScheduleSpec {
    Uniform,
    /// `w₁ᵏ = ρ^(T−k)`: recent steps weigh most.
    OnlineExp { rho: f64, normalized: bool },
    /// `w₁ᵏ = ρ^(k−1)`: the first step weighs most.
    PredictorExp { rho: f64, normalized: bool },
    /// `w₁ᵏ = tₖ − tₖ₋₁` with `t₀ = 0`.
    SamplingProportional { times: Vec<f64> },
    Custom { w1: Vec<f64>, w2: Vec<f64> },
}

fn check_rho(rho: f64) -> Result<()> {
    if !(rho > 0.0 && rho < 1.0) {
        return Err(Error::param("rho", format!("must lie in (0, 1), got {rho}")));
    }
    Ok(())
}

/// Builds `w₁`; `w₂ᵏ = w₁ᵏ⁺¹` for every built-in kind.
fn from_w1(w1: Vec<f64>) -> Result<WeightSchedule> {
    let w2 = w1[1..].to_vec();
    WeightSchedule::new(w1, w2)
}

fn exponential(rho: f64, normalized: bool, window: usize, exponent: impl Fn(usize) -> usize) -> Result<WeightSchedule> {
    check_rho(rho)?;
    let scale = if normalized {
        (1.0 - rho) / (1.0 - rho.powi(window as i32))
    } else {
        1.0
    };
    from_w1((1..=window).map(|k| scale * rho.powi(exponent(k) as i32)).collect())
}

pub fn make_schedule(spec: &ScheduleSpec, window: usize) -> Result<WeightSchedule> {
    if window == 0 {
        return Err(Error::param("T", "window must contain at least one step"));
    }
    match spec {
        ScheduleSpec::Uniform => WeightSchedule::uniform(window),
        ScheduleSpec::OnlineExp { rho, normalized } => exponential(*rho, *normalized, window, |k| window - k),
        ScheduleSpec::PredictorExp { rho, normalized } => exponential(*rho, *normalized, window, |k| k - 1),
        ScheduleSpec::SamplingProportional { times } => {
            if times.len() != window {
                return Err(Error::param(
                    "sampling_times",
                    format!("expected {window} times, got {}", times.len()),
                ));
            }
            let mut previous = 0.0;
            let mut w1 = Vec::with_capacity(window);
            for &t in times {
                if !(t.is_finite() && t > previous) {
                    return Err(Error::param(
                        "sampling_times",
                        format!("must be finite, positive and strictly increasing; {t} follows {previous}"),
                    ));
                }
                w1.push(t - previous);
                previous = t;
            }
            from_w1(w1)
        }
        ScheduleSpec::Custom { w1, w2 } => {
            let schedule = WeightSchedule::new(w1.clone(), w2.clone())?;
            schedule.check_window(window)?;
            Ok(schedule)
        }
    }
}
