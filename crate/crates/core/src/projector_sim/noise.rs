use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `(event rate in MEv/s, timestamp jitter std in microseconds)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JitterAnchor(pub f64, pub f64);

/// Timing non-idealities of the reflection camera.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct NoiseModel {
    /// Fixed latency added to every timestamp, microseconds.
    pub latency_us: f64,
    /// Jitter std as a function of event rate, interpolated log-log.
    pub jitter_anchors: Vec<JitterAnchor>,
    pub drop_probability: f64,
    /// Timestamp resolution in microseconds; 0 disables quantization.
    pub quantization_us: f64,
    /// Set from the scenario seed when run through the harness.
    #[serde(skip)]
    pub seed: u64,
}

impl Default for NoiseModel {
    fn default() -> Self {
        Self {
            latency_us: 0.0,
            jitter_anchors: vec![
                JitterAnchor(1.0, 1.0),
                JitterAnchor(10.0, 10.0),
                JitterAnchor(265.0, 200.0),
            ],
            drop_probability: 0.0,
            quantization_us: 1.0,
            seed: 0,
        }
    }
}

impl NoiseModel {
    /// No latency, jitter, drops or quantization: timestamps equal fire times.
    pub fn noiseless() -> Self {
        Self {
            latency_us: 0.0,
            jitter_anchors: Vec::new(),
            drop_probability: 0.0,
            quantization_us: 0.0,
            seed: 0,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self, path: &str) -> Result<()> {
        if !self.latency_us.is_finite() {
            return Err(Error::config(
                format!("{path}.latency_us"),
                "must be finite",
            ));
        }
        if !(0.0..1.0).contains(&self.drop_probability) {
            return Err(Error::config(
                format!("{path}.drop_probability"),
                "must lie in [0, 1)",
            ));
        }
        if !(self.quantization_us >= 0.0 && self.quantization_us.is_finite()) {
            return Err(Error::config(
                format!("{path}.quantization_us"),
                "must be >= 0",
            ));
        }
        for (i, a) in self.jitter_anchors.iter().enumerate() {
            if !(a.0 > 0.0 && a.1 > 0.0 && a.0.is_finite() && a.1.is_finite()) {
                return Err(Error::config(
                    format!("{path}.jitter_anchors[{i}]"),
                    "rate and std must be positive",
                ));
            }
        }
        for (i, w) in self.jitter_anchors.windows(2).enumerate() {
            if w[1].0 <= w[0].0 || w[1].1 < w[0].1 {
                return Err(Error::config(
                    format!("{path}.jitter_anchors[{}]", i + 1),
                    "anchors must be strictly increasing in rate and non-decreasing in std",
                ));
            }
        }
        Ok(())
    }
}

/// Jitter std (microseconds) at `rate` events per second.
///
/// Piecewise linear in `(ln rate, ln std)` between anchors, clamped to the
/// first and last anchor outside their range. No anchors means no jitter.
pub fn jitter_std(model: &NoiseModel, rate: f64) -> f64 {
    let anchors = &model.jitter_anchors;
    let (Some(first), Some(last)) = (anchors.first(), anchors.last()) else {
        return 0.0;
    };
    let mev = rate / 1e6;
    if mev <= first.0 {
        return first.1;
    }
    if mev >= last.0 {
        return last.1;
    }
    let i = anchors.partition_point(|a| a.0 <= mev);
    let (lo, hi) = (anchors[i - 1], anchors[i]);
    let w = (mev / lo.0).ln() / (hi.0 / lo.0).ln();
    (lo.1.ln() + w * (hi.1 / lo.1).ln()).exp()
}
