use crate::error::{Error, Result};
use crate::event_core::Resolution;

/// Commercial event camera used in the dwell-time and event-rate sweeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SensorPreset {
    pub name: &'static str,
    pub resolution: Resolution,
}

pub const SENSOR_PRESETS: [SensorPreset; 7] = [
    SensorPreset {
        name: "DVS128",
        resolution: Resolution::new(128, 128),
    },
    SensorPreset {
        name: "DAVIS240",
        resolution: Resolution::new(240, 180),
    },
    SensorPreset {
        name: "DAVIS346",
        resolution: Resolution::new(346, 260),
    },
    SensorPreset {
        name: "ATIS",
        resolution: Resolution::new(302, 240),
    },
    SensorPreset {
        name: "Gen3_CD",
        resolution: Resolution::new(640, 480),
    },
    SensorPreset {
        name: "Gen3_ATIS",
        resolution: Resolution::new(480, 360),
    },
    SensorPreset {
        name: "Gen4_CD",
        resolution: Resolution::new(1280, 720),
    },
];

impl SensorPreset {
    pub fn by_name(name: &str) -> Option<SensorPreset> {
        SENSOR_PRESETS
            .iter()
            .copied()
            .find(|p| p.name.eq_ignore_ascii_case(name))
    }
}

/// Time in seconds between consecutive illuminated pixels when every
/// `stride`-th raster pixel fires: `stride / (f * W * H)`.
pub fn theoretical_delta_t(
    scan_hz: f64,
    width: usize,
    height: usize,
    stride: usize,
) -> Result<f64> {
    if !(scan_hz > 0.0 && scan_hz.is_finite()) || width == 0 || height == 0 || stride == 0 {
        return Err(Error::InvalidArgument(format!(
            "delta t needs positive arguments (f = {scan_hz}, W = {width}, H = {height}, N = {stride})"
        )));
    }
    Ok(stride as f64 / (scan_hz * width as f64 * height as f64))
}

/// Reflection events per second: `f * W * H * fraction`.
pub fn theoretical_event_rate(
    scan_hz: f64,
    width: usize,
    height: usize,
    fraction: f64,
) -> Result<f64> {
    if !(0.0..=1.0).contains(&fraction) {
        return Err(Error::InvalidArgument(format!(
            "illuminated fraction {fraction} outside [0, 1]"
        )));
    }
    Ok(scan_hz * width as f64 * height as f64 * fraction)
}
