use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Distance between two single-target states.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BaseMetric {
    #[default]
    Euclidean,
    /// Minkowski distance with the given exponent (≥ 1).
    PNorm(f64),
}

impl BaseMetric {
    pub fn distance(&self, a: &[f64], b: &[f64]) -> f64 {
        debug_assert_eq!(a.len(), b.len());
        match *self {
            BaseMetric::Euclidean => a
                .iter()
                .zip(b)
                .map(|(u, v)| (u - v) * (u - v))
                .sum::<f64>()
                .sqrt(),
            BaseMetric::PNorm(q) => a
                .iter()
                .zip(b)
                .map(|(u, v)| (u - v).abs().powf(q))
                .sum::<f64>()
                .powf(1.0 / q),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Normalization {
    #[default]
    None,
    /// Divide the p-powered cost sum by the window length before the root.
    Window,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricParams {
    /// Cut-off distance.
    pub c: f64,
    pub p: f64,
    /// Track-switch penalty.
    pub gamma: f64,
    pub base: BaseMetric,
    pub normalization: Normalization,
}

impl MetricParams {
    pub fn new(c: f64, p: f64, gamma: f64) -> Result<Self> {
        let params = Self {
            c,
            p,
            gamma,
            base: BaseMetric::Euclidean,
            normalization: Normalization::None,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn with_base(mut self, base: BaseMetric) -> Self {
        self.base = base;
        self
    }

    pub fn with_normalization(mut self, normalization: Normalization) -> Self {
        self.normalization = normalization;
        self
    }

    pub fn with_gamma(mut self, gamma: f64) -> Self {
        self.gamma = gamma;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.c.is_finite() && self.c > 0.0) {
            return Err(Error::param("c", format!("must be finite and > 0, got {}", self.c)));
        }
        if !(self.p.is_finite() && self.p >= 1.0) {
            return Err(Error::param("p", format!("must satisfy 1 <= p < inf, got {}", self.p)));
        }
        if !(self.gamma.is_finite() && self.gamma > 0.0) {
            return Err(Error::param(
                "gamma",
                format!("must be finite and > 0, got {}", self.gamma),
            ));
        }
        if let BaseMetric::PNorm(q) = self.base {
            if !(q.is_finite() && q >= 1.0) {
                return Err(Error::param("base", format!("p-norm exponent must be >= 1, got {q}")));
            }
        }
        Ok(())
    }

    /// `c^p`
    pub fn cutoff_pth(&self) -> f64 {
        self.c.powf(self.p)
    }

    /// `γ^p`
    pub fn gamma_pth(&self) -> f64 {
        self.gamma.powf(self.p)
    }

    /// Factor applied to p-powered sums over a window of length `window`.
    pub fn normalization_factor(&self, window: usize) -> f64 {
        match self.normalization {
            Normalization::None => 1.0,
            Normalization::Window => 1.0 / window as f64,
        }
    }
}

/// Localisation weights `w₁¹..w₁ᵀ` and switching weights `w₂¹..w₂ᵀ⁻¹`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightSchedule {
    w1: Vec<f64>,
    w2: Vec<f64>,
}

impl WeightSchedule {
    pub fn new(w1: Vec<f64>, w2: Vec<f64>) -> Result<Self> {
        if w1.is_empty() {
            return Err(Error::param("w1", "needs at least one entry"));
        }
        if w2.len() + 1 != w1.len() {
            return Err(Error::param(
                "w2",
                format!("expected {} entries, got {}", w1.len() - 1, w2.len()),
            ));
        }
        for (name, w) in [("w1", &w1), ("w2", &w2)] {
            if let Some(bad) = w.iter().find(|v| !(v.is_finite() && **v > 0.0)) {
                return Err(Error::param(name, format!("entries must be finite and > 0, got {bad}")));
            }
        }
        Ok(Self { w1, w2 })
    }

    pub fn uniform(window: usize) -> Result<Self> {
        Self::new(vec![1.0; window], vec![1.0; window.saturating_sub(1)])
    }

    pub fn window(&self) -> usize {
        self.w1.len()
    }

    pub fn w1(&self) -> &[f64] {
        &self.w1
    }

    pub fn w2(&self) -> &[f64] {
        &self.w2
    }

    /// Localisation weight at 1-based step `k`.
    pub fn loc(&self, k: usize) -> f64 {
        self.w1[k - 1]
    }

    /// Switching weight between 1-based steps `k` and `k + 1`.
    pub fn switch(&self, k: usize) -> f64 {
        self.w2[k - 1]
    }

    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::new(
            self.w1.iter().map(|w| w * factor).collect(),
            self.w2.iter().map(|w| w * factor).collect(),
        )
    }

    pub(crate) fn check_window(&self, window: usize) -> Result<()> {
        if self.window() != window {
            return Err(Error::WindowMismatch {
                left: window,
                right: self.window(),
            });
        }
        Ok(())
    }
}
