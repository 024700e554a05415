use rayon::prelude::*;

use super::geometry::SensorGeometry;
use super::noise::{jitter_std, NoiseModel};
use super::scan::ScanPlan;
use crate::error::{Error, Result};
use crate::event_core::{DepthMap, Event, EventStream};
use crate::rng;

/// What happened to the firings of one plan.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ReflectionTally {
    pub firings: usize,
    pub emitted: usize,
    pub dropped: usize,
    /// Reflection landed outside the camera frame.
    pub out_of_frame: usize,
    /// No valid scene depth behind the projector pixel.
    pub no_depth: usize,
    /// Noisy timestamp fell before t = 0.
    pub negative_time: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReflectionOutput {
    pub stream: EventStream,
    pub tally: ReflectionTally,
    /// Jitter std used for this plan, microseconds.
    pub jitter_std_us: f64,
}

enum Outcome {
    Emitted(Event),
    Dropped,
    OutOfFrame,
    NoDepth,
    NegativeTime,
}

/// Simulates the reflection camera for one scan plan.
///
/// `depth` is the scene depth seen along each projector ray and must have the
/// projector's resolution. Each firing produces at most one positive event at
/// the rectified camera column `round(c_p - f_x * b / Z)` on the same row.
/// Noise draws are keyed by `(seed, plan start, raster index)`, so the result
/// does not depend on how firings are split across threads.
pub fn simulate_reflection_events(
    plan: &ScanPlan,
    depth: &DepthMap,
    geometry: &SensorGeometry,
    noise: &NoiseModel,
) -> Result<ReflectionOutput> {
    if depth.resolution() != plan.projector.resolution() {
        return Err(Error::InvalidArgument(format!(
            "depth map {} does not match projector {}",
            depth.resolution(),
            plan.projector.resolution()
        )));
    }
    let cam = geometry.cam_resolution();
    let fb = geometry.focal_baseline();
    let sigma = jitter_std(noise, plan.mean_rate());
    let stream_id = plan.t0.to_bits();

    let outcomes: Vec<Outcome> = plan
        .firings
        .par_iter()
        .map(|f| {
            let key = rng::key(noise.seed, stream_id, f.k as u64);
            if noise.drop_probability > 0.0 && rng::uniform(key, 0) < noise.drop_probability {
                return Outcome::Dropped;
            }
            let Some(z) = depth.get(f.col, f.row) else {
                return Outcome::NoDepth;
            };
            let cam_col = (f.col as f64 - fb / z).round();
            if cam_col < 0.0 || cam_col >= cam.width as f64 || f.row >= cam.height {
                return Outcome::OutOfFrame;
            }
            let mut t = f.t + noise.latency_us;
            if sigma > 0.0 {
                t += sigma * rng::standard_normal(key, 1);
            }
            if noise.quantization_us > 0.0 {
                t = (t / noise.quantization_us).round() * noise.quantization_us;
            }
            if t < 0.0 {
                return Outcome::NegativeTime;
            }
            Outcome::Emitted(Event::positive(t, cam_col as u32, f.row as u32))
        })
        .collect();

    let mut tally = ReflectionTally {
        firings: plan.len(),
        ..Default::default()
    };
    let mut events = Vec::with_capacity(outcomes.len());
    for o in outcomes {
        match o {
            Outcome::Emitted(e) => {
                tally.emitted += 1;
                events.push(e);
            }
            Outcome::Dropped => tally.dropped += 1,
            Outcome::OutOfFrame => tally.out_of_frame += 1,
            Outcome::NoDepth => tally.no_depth += 1,
            Outcome::NegativeTime => tally.negative_time += 1,
        }
    }
    Ok(ReflectionOutput {
        stream: EventStream::from_unsorted(cam, events)?,
        tally,
        jitter_std_us: sigma,
    })
}
