use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::script::SceneScript;
use crate::error::{Error, Result};
use crate::event_core::{Event, EventStream, Polarity, TimeWindow};
use crate::rng;

/// Guide event camera: a per-pixel log-intensity threshold detector sampled
/// at a fixed internal render rate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GuideCameraModel {
    pub contrast_threshold: f64,
    /// Internal render rate used to detect crossings, frames per second.
    pub render_fps: f64,
    /// Spurious events per pixel per second, uniformly random in time and sign.
    pub background_noise_hz: f64,
    #[serde(skip)]
    pub noise_seed: u64,
}

impl Default for GuideCameraModel {
    fn default() -> Self {
        Self {
            contrast_threshold: 0.3,
            render_fps: 1000.0,
            background_noise_hz: 0.0,
            noise_seed: 0,
        }
    }
}

impl GuideCameraModel {
    pub fn validate(&self, path: &str) -> Result<()> {
        if !(self.contrast_threshold > 0.0 && self.contrast_threshold.is_finite()) {
            return Err(Error::config(
                format!("{path}.contrast_threshold"),
                "must be positive",
            ));
        }
        if !(self.render_fps > 0.0 && self.render_fps.is_finite()) {
            return Err(Error::config(
                format!("{path}.render_fps"),
                "must be positive",
            ));
        }
        if !(self.background_noise_hz >= 0.0 && self.background_noise_hz.is_finite()) {
            return Err(Error::config(
                format!("{path}.background_noise_hz"),
                "must be >= 0",
            ));
        }
        Ok(())
    }
}

// Numerical slack so that an exact multiple of C still counts as a crossing.
const CROSSING_EPS: f64 = 1e-9;

/// Simulates the guide camera over `window`.
///
/// Each pixel keeps a reference log intensity. Between consecutive render
/// instants a change of `dL` emits `floor(|dL| / C)` events of sign `dL`,
/// timestamped by linear interpolation at each successive crossing, and the
/// reference moves by the emitted multiple of `C`. The reference is
/// initialized from the render at `window.start`.
pub fn generate_guide_events(
    script: &SceneScript,
    camera: &GuideCameraModel,
    window: TimeWindow,
) -> Result<EventStream> {
    camera.validate("guide_camera")?;
    if window.start < 0.0 || window.end > script.duration_us {
        return Err(Error::InvalidArgument(format!(
            "guide window [{}, {}) outside scene duration [0, {}]",
            window.start, window.end, script.duration_us
        )));
    }
    let res = script.resolution();
    let step = 1e6 / camera.render_fps;
    let n_steps = (window.duration() / step).ceil() as usize;
    let instants: Vec<f64> = (0..=n_steps)
        .map(|k| (window.start + k as f64 * step).min(window.end))
        .collect();
    let objects = script.paint_order();
    let threshold = camera.contrast_threshold;
    let noise_p = camera.background_noise_hz * step * 1e-6;

    let rows: Vec<Vec<Event>> = (0..res.height)
        .into_par_iter()
        .map(|y| {
            let mut events = Vec::new();
            let mut intensity = vec![0.0; res.width];
            let mut depth = vec![0.0; res.width];
            script.render_row(&objects, instants[0], y, &mut intensity, &mut depth);
            let mut reference: Vec<f64> = intensity.iter().map(|i| i.ln()).collect();
            for (k, pair) in instants.windows(2).enumerate() {
                let (t_prev, t_now) = (pair[0], pair[1]);
                if t_now <= t_prev {
                    continue;
                }
                script.render_row(&objects, t_now, y, &mut intensity, &mut depth);
                for x in 0..res.width {
                    let delta = intensity[x].ln() - reference[x];
                    let n = (delta.abs() / threshold + CROSSING_EPS).floor();
                    if n >= 1.0 {
                        let polarity = if delta > 0.0 {
                            Polarity::Positive
                        } else {
                            Polarity::Negative
                        };
                        for j in 1..=n as u64 {
                            let frac = (j as f64 * threshold / delta.abs()).min(1.0);
                            let t = t_prev + frac * (t_now - t_prev);
                            if window.contains(t) {
                                events.push(Event::new(t, x as u32, y as u32, polarity));
                            }
                        }
                        reference[x] += polarity.sign() * n * threshold;
                    }
                    if noise_p > 0.0 {
                        let key = rng::key(
                            camera.noise_seed,
                            y as u64,
                            (k as u64) * res.width as u64 + x as u64,
                        );
                        if rng::uniform(key, 0) < noise_p {
                            let t = t_prev + (t_now - t_prev) * rng::uniform(key, 1);
                            let polarity = if rng::uniform(key, 2) < 0.5 {
                                Polarity::Negative
                            } else {
                                Polarity::Positive
                            };
                            if window.contains(t) {
                                events.push(Event::new(t, x as u32, y as u32, polarity));
                            }
                        }
                    }
                }
            }
            events
        })
        .collect();

    EventStream::from_unsorted(res, rows.into_iter().flatten().collect())
}
