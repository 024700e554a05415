//! Raster-scanning laser projector, the reflection event camera and its
//! timing noise, plus the closed-form dwell-time and event-rate relations.

mod geometry;
mod noise;
mod reflection;
mod scan;
mod timing;

pub use geometry::{ProjectorModel, SensorGeometry};
pub use noise::{jitter_std, JitterAnchor, NoiseModel};
pub use reflection::{simulate_reflection_events, ReflectionOutput, ReflectionTally};
pub use scan::{build_scan_plan, write_scan_plan_csv, Firing, ScanPlan};
pub use timing::{theoretical_delta_t, theoretical_event_rate, SensorPreset, SENSOR_PRESETS};
