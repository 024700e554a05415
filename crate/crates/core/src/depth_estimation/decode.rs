use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::event_core::{DepthMap, TimeSurface};
use crate::projector_sim::{ProjectorModel, SensorGeometry};

/// Projector pixel `(row, col)` fired nearest to `t` in the period starting at `t0`.
pub fn decode_projector_pixel(
    t: f64,
    projector: &ProjectorModel,
    t0: f64,
) -> Result<(usize, usize)> {
    let end = t0 + projector.period_us();
    if !(t >= t0 && t < end) {
        return Err(Error::OutOfPeriod { t, start: t0, end });
    }
    let n = projector.resolution().len();
    let k = ((t - t0) * projector.scan_hz * n as f64 / 1e6).round();
    let k = (k.max(0.0) as usize).min(n - 1);
    Ok((k / projector.width, k % projector.width))
}

/// Depth in meters from a rectified column pair: `Z = f_x * b / (c_p - c_c)`.
pub fn triangulate(cam_col: f64, proj_col: f64, geometry: &SensorGeometry) -> Result<f64> {
    let disparity = proj_col - cam_col;
    if !(disparity > 0.0) {
        return Err(Error::NonPositiveDisparity(disparity));
    }
    Ok(geometry.focal_baseline() / disparity)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ReconstructionParams {
    /// Largest accepted difference between decoded projector row and camera row.
    pub row_tolerance: usize,
}

impl Default for ReconstructionParams {
    fn default() -> Self {
        Self { row_tolerance: 1 }
    }
}

/// Per-pixel outcome counts of one reconstruction.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ReconstructionTally {
    pub valid: usize,
    pub no_event: usize,
    pub out_of_period: usize,
    pub row_mismatch: usize,
    pub non_positive_disparity: usize,
}

impl ReconstructionTally {
    fn merge(mut self, o: Self) -> Self {
        self.valid += o.valid;
        self.no_event += o.no_event;
        self.out_of_period += o.out_of_period;
        self.row_mismatch += o.row_mismatch;
        self.non_positive_disparity += o.non_positive_disparity;
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Reconstruction {
    pub depth: DepthMap,
    pub tally: ReconstructionTally,
}

pub fn reconstruct_depth(
    surface: &TimeSurface,
    geometry: &SensorGeometry,
    projector: &ProjectorModel,
    t0: f64,
) -> Reconstruction {
    reconstruct_depth_with(
        surface,
        geometry,
        projector,
        t0,
        &ReconstructionParams::default(),
    )
}

/// Sparse depth from one period's time surface.
///
/// Every pixel with a timestamp decodes its projector pixel and triangulates
/// against its own column. Pixels without an event, with a decoded row off by
/// more than the tolerance, or with non-positive disparity stay invalid.
pub fn reconstruct_depth_with(
    surface: &TimeSurface,
    geometry: &SensorGeometry,
    projector: &ProjectorModel,
    t0: f64,
    params: &ReconstructionParams,
) -> Reconstruction {
    let res = surface.resolution();
    let rows: Vec<(Vec<Option<f64>>, ReconstructionTally)> = (0..res.height)
        .into_par_iter()
        .map(|y| {
            let mut tally = ReconstructionTally::default();
            let row = (0..res.width)
                .map(|x| {
                    let Some(t) = surface.get(x, y) else {
                        tally.no_event += 1;
                        return None;
                    };
                    let Ok((prow, pcol)) = decode_projector_pixel(t, projector, t0) else {
                        tally.out_of_period += 1;
                        return None;
                    };
                    if prow.abs_diff(y) > params.row_tolerance {
                        tally.row_mismatch += 1;
                        return None;
                    }
                    match triangulate(x as f64, pcol as f64, geometry) {
                        Ok(z) => {
                            tally.valid += 1;
                            Some(z)
                        }
                        Err(_) => {
                            tally.non_positive_disparity += 1;
                            None
                        }
                    }
                })
                .collect();
            (row, tally)
        })
        .collect();
    let mut depth = Vec::with_capacity(res.len());
    let mut tally = ReconstructionTally::default();
    for (row, t) in rows {
        depth.extend(row);
        tally = tally.merge(t);
    }
    Reconstruction {
        // every stored value is f_x * b / d with d >= 1
        depth: DepthMap::new(res, depth).expect("triangulated depths are positive"),
        tally,
    }
}
