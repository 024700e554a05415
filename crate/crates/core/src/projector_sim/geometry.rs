use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::event_core::Resolution;

/// Rectified camera/projector pair. Rows are aligned, so a projector pixel
/// `(r, c_p)` at depth `Z` lands on camera pixel `(r, c_p - f_x * b / Z)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SensorGeometry {
    pub cam_width: usize,
    pub cam_height: usize,
    /// Focal length in pixels.
    pub focal_px: f64,
    /// Camera-projector baseline in meters.
    #[serde(default = "default_baseline")]
    pub baseline_m: f64,
}

fn default_baseline() -> f64 {
    0.04
}

impl SensorGeometry {
    pub fn new(cam: Resolution, focal_px: f64, baseline_m: f64) -> Result<Self> {
        let g = Self {
            cam_width: cam.width,
            cam_height: cam.height,
            focal_px,
            baseline_m,
        };
        g.validate("geometry")?;
        Ok(g)
    }

    pub fn cam_resolution(&self) -> Resolution {
        Resolution::new(self.cam_width, self.cam_height)
    }

    /// `f_x * b`, in pixel-meters.
    pub fn focal_baseline(&self) -> f64 {
        self.focal_px * self.baseline_m
    }

    pub fn validate(&self, path: &str) -> Result<()> {
        if self.cam_width == 0 || self.cam_height == 0 {
            return Err(Error::config(
                path,
                "camera resolution must be at least 1x1",
            ));
        }
        if !(self.focal_px > 0.0 && self.focal_px.is_finite()) {
            return Err(Error::config(
                format!("{path}.focal_px"),
                "must be positive",
            ));
        }
        if !(self.baseline_m > 0.0 && self.baseline_m.is_finite()) {
            return Err(Error::config(
                format!("{path}.baseline_m"),
                "must be positive",
            ));
        }
        Ok(())
    }
}

/// Laser point projector sweeping its pixels in row-major order once per
/// scan period.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProjectorModel {
    pub width: usize,
    pub height: usize,
    /// Scanning frequency in Hz.
    #[serde(default = "default_scan_hz")]
    pub scan_hz: f64,
}

fn default_scan_hz() -> f64 {
    60.0
}

impl ProjectorModel {
    pub fn new(resolution: Resolution, scan_hz: f64) -> Result<Self> {
        let p = Self {
            width: resolution.width,
            height: resolution.height,
            scan_hz,
        };
        p.validate("projector")?;
        Ok(p)
    }

    pub fn resolution(&self) -> Resolution {
        Resolution::new(self.width, self.height)
    }

    /// Scan period in microseconds.
    pub fn period_us(&self) -> f64 {
        1e6 / self.scan_hz
    }

    /// Time between consecutive raster pixels, microseconds.
    pub fn dense_dwell_us(&self) -> f64 {
        1e6 / (self.scan_hz * self.resolution().len() as f64)
    }

    /// Fire time of raster index `k` in the period starting at `t0`.
    #[inline]
    pub fn fire_time(&self, t0: f64, k: usize) -> f64 {
        // one division keeps fire times exact multiples of the dwell
        t0 + k as f64 * 1e6 / (self.scan_hz * self.resolution().len() as f64)
    }

    pub fn validate(&self, path: &str) -> Result<()> {
        if self.width == 0 || self.height == 0 {
            return Err(Error::config(
                path,
                "projector resolution must be at least 1x1",
            ));
        }
        if !(self.scan_hz > 0.0 && self.scan_hz.is_finite()) {
            return Err(Error::config(format!("{path}.scan_hz"), "must be positive"));
        }
        Ok(())
    }
}
