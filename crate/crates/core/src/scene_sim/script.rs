use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::event_core::{DepthMap, Resolution};

/// Per-pixel intensity pattern in `(0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Texture {
    Uniform {
        value: f64,
    },
    /// Square checkerboard with `cell`-pixel squares, `low` at the origin cell.
    Checker {
        cell: usize,
        low: f64,
        high: f64,
    },
}

impl Texture {
    #[inline]
    pub fn sample(&self, u: usize, v: usize) -> f64 {
        match *self {
            Texture::Uniform { value } => value,
            Texture::Checker { cell, low, high } => {
                if ((u / cell) + (v / cell)).is_multiple_of(2) {
                    low
                } else {
                    high
                }
            }
        }
    }

    fn validate(&self, path: &str) -> Result<()> {
        let in_range = |v: f64| v > 0.0 && v <= 1.0;
        match *self {
            Texture::Uniform { value } if !in_range(value) => Err(Error::config(
                format!("{path}.value"),
                "intensity must lie in (0, 1]",
            )),
            Texture::Checker { cell: 0, .. } => Err(Error::config(
                format!("{path}.cell"),
                "cell size must be >= 1",
            )),
            Texture::Checker { low, high, .. } if !in_range(low) || !in_range(high) => Err(
                Error::config(path.to_string(), "checker intensities must lie in (0, 1]"),
            ),
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Background {
    pub depth_m: f64,
    pub texture: Texture,
}

/// Axis-aligned rectangle translating at constant velocity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MovingObject {
    /// Top-left corner at t = 0, pixels.
    pub x0: f64,
    pub y0: f64,
    pub width: usize,
    pub height: usize,
    /// Velocity in pixels per microsecond.
    #[serde(default)]
    pub vx: f64,
    #[serde(default)]
    pub vy: f64,
    pub depth_m: f64,
    pub texture: Texture,
}

impl MovingObject {
    /// Top-left corner at time `t`, rounded to the nearest pixel.
    pub fn position(&self, t: f64) -> (i64, i64) {
        (
            (self.x0 + self.vx * t).round() as i64,
            (self.y0 + self.vy * t).round() as i64,
        )
    }

    /// Pixels of the object inside `[0, width) x [0, height)` at time `t`.
    pub fn visible_area(&self, resolution: Resolution, t: f64) -> usize {
        let (px, py) = self.position(t);
        let span = |p: i64, len: usize, max: usize| {
            let lo = p.max(0);
            let hi = (p + len as i64).min(max as i64);
            (hi - lo).max(0) as usize
        };
        span(px, self.width, resolution.width) * span(py, self.height, resolution.height)
    }
}

/// Scene description: background plane plus moving rectangles.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SceneScript {
    pub width: usize,
    pub height: usize,
    /// Scene length in microseconds. Zero lets the harness size it to the run.
    #[serde(default)]
    pub duration_us: f64,
    pub background: Background,
    #[serde(default)]
    pub objects: Vec<MovingObject>,
}

impl SceneScript {
    pub fn resolution(&self) -> Resolution {
        Resolution::new(self.width, self.height)
    }

    pub fn validate(&self, path: &str) -> Result<()> {
        if self.width == 0 || self.height == 0 {
            return Err(Error::config(path, "resolution must be at least 1x1"));
        }
        if !(self.duration_us >= 0.0 && self.duration_us.is_finite()) {
            return Err(Error::config(
                format!("{path}.duration_us"),
                "must be finite and >= 0",
            ));
        }
        let z_bg = self.background.depth_m;
        if !(z_bg > 0.0 && z_bg.is_finite()) {
            return Err(Error::config(
                format!("{path}.background.depth_m"),
                "must be positive",
            ));
        }
        self.background
            .texture
            .validate(&format!("{path}.background.texture"))?;
        for (i, obj) in self.objects.iter().enumerate() {
            let p = format!("{path}.objects[{i}]");
            if !(obj.depth_m > 0.0 && obj.depth_m < z_bg) {
                return Err(Error::config(
                    format!("{p}.depth_m"),
                    format!("object depth must lie in (0, {z_bg}) so it occludes the background"),
                ));
            }
            if obj.width == 0 || obj.height == 0 {
                return Err(Error::config(p, "object must be at least 1x1"));
            }
            if ![obj.x0, obj.y0, obj.vx, obj.vy]
                .iter()
                .all(|v| v.is_finite())
            {
                return Err(Error::config(p, "position and velocity must be finite"));
            }
            obj.texture.validate(&format!("{p}.texture"))?;
        }
        Ok(())
    }

    /// Objects in painting order: farthest first, list order among equal depths.
    pub(crate) fn paint_order(&self) -> Vec<&MovingObject> {
        let mut objs: Vec<&MovingObject> = self.objects.iter().collect();
        objs.sort_by(|a, b| b.depth_m.total_cmp(&a.depth_m));
        objs
    }

    /// Renders one row into `intensity` and `depth` (both `width` long).
    pub(crate) fn render_row(
        &self,
        objects: &[&MovingObject],
        t: f64,
        y: usize,
        intensity: &mut [f64],
        depth: &mut [f64],
    ) {
        let bg = &self.background;
        for (x, (i, d)) in intensity.iter_mut().zip(depth.iter_mut()).enumerate() {
            *i = bg.texture.sample(x, y);
            *d = bg.depth_m;
        }
        let (w, yi) = (self.width as i64, y as i64);
        for obj in objects {
            let (px, py) = obj.position(t);
            if yi < py || yi >= py + obj.height as i64 {
                continue;
            }
            let lo = px.max(0);
            let hi = (px + obj.width as i64).min(w);
            for x in lo..hi {
                let u = (x - px) as usize;
                let v = (yi - py) as usize;
                intensity[x as usize] = obj.texture.sample(u, v);
                depth[x as usize] = obj.depth_m;
            }
        }
    }
}

/// Row-major intensity image with values in `(0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct IntensityImage {
    pub resolution: Resolution,
    pub values: Vec<f64>,
}

impl IntensityImage {
    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.values[self.resolution.index(x, y)]
    }
}

/// Renders intensity and metric depth at time `t` (microseconds).
pub fn render_scene(script: &SceneScript, t: f64) -> Result<(IntensityImage, DepthMap)> {
    if !(t >= 0.0 && t <= script.duration_us) {
        return Err(Error::InvalidArgument(format!(
            "render time {t} us outside scene duration [0, {}]",
            script.duration_us
        )));
    }
    let res = script.resolution();
    let objects = script.paint_order();
    let mut intensity = vec![0.0; res.len()];
    let mut depth = vec![0.0; res.len()];
    for y in 0..res.height {
        let span = y * res.width..(y + 1) * res.width;
        script.render_row(
            &objects,
            t,
            y,
            &mut intensity[span.clone()],
            &mut depth[span],
        );
    }
    let depth = DepthMap::new(res, depth.into_iter().map(Some).collect())?;
    Ok((
        IntensityImage {
            resolution: res,
            values: intensity,
        },
        depth,
    ))
}
