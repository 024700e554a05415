use super::event::{EventStream, Resolution};
use crate::error::{Error, Result};

/// Spatio-temporal event tensor with bilinear temporal binning.
///
/// An event at normalized time `t* = (B - 1) / span * (t - t0)` adds
/// `p * max(0, 1 - |b - t*|)` to every bin `b`. Bins outside `0..B` are
/// dropped, so events with `t*` beyond the window keep only in-range weight.
#[derive(Debug, Clone, PartialEq)]
pub struct VoxelGrid {
    bins: usize,
    resolution: Resolution,
    values: Vec<f64>,
    t0: f64,
    span: f64,
}

impl VoxelGrid {
    pub fn bins(&self) -> usize {
        self.bins
    }

    pub fn resolution(&self) -> Resolution {
        self.resolution
    }

    /// Window as `(t0, span)` in microseconds.
    pub fn window(&self) -> (f64, f64) {
        (self.t0, self.span)
    }

    /// Values laid out as `[bin][y][x]`.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    #[inline]
    pub fn get(&self, bin: usize, x: usize, y: usize) -> f64 {
        self.values[bin * self.resolution.len() + self.resolution.index(x, y)]
    }

    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }
}

pub fn make_voxel_grid(stream: &EventStream, bins: usize, t0: f64, span: f64) -> Result<VoxelGrid> {
    if bins < 2 {
        return Err(Error::InvalidArgument(format!(
            "voxel grid needs at least 2 bins, got {bins}"
        )));
    }
    if !(span > 0.0 && span.is_finite()) || !t0.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "voxel grid window span must be positive, got {span}"
        )));
    }
    let res = stream.resolution();
    let plane = res.len();
    let mut values = vec![0.0; bins * plane];
    let scale = (bins - 1) as f64 / span;
    for e in stream.events() {
        let t_star = scale * (e.t - t0);
        let lower = t_star.floor();
        let frac = t_star - lower;
        let pixel = res.index(e.x as usize, e.y as usize);
        let p = e.polarity.sign();
        for (bin, weight) in [(lower, 1.0 - frac), (lower + 1.0, frac)] {
            if weight <= 0.0 || bin < 0.0 || bin >= bins as f64 {
                continue;
            }
            values[bin as usize * plane + pixel] += p * weight;
        }
    }
    Ok(VoxelGrid {
        bins,
        resolution: res,
        values,
        t0,
        span,
    })
}
