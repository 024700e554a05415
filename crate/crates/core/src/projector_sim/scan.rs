use std::io::Write;

use super::geometry::ProjectorModel;
use crate::error::{Error, Result};
use crate::sampling_policy::IlluminationMask;

/// One projector pixel lit during a scan period.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Firing {
    /// Raster index `row * W + col`.
    pub k: usize,
    pub row: usize,
    pub col: usize,
    /// Fire time in microseconds.
    pub t: f64,
}

/// Firings of one scan period, in raster (and therefore time) order.
///
/// The raster clock runs at the dense rate regardless of the mask: a
/// masked-off pixel only switches the laser off, so the fire time of raster
/// index `k` is always `t0 + k / (f * W * H)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanPlan {
    pub t0: f64,
    pub projector: ProjectorModel,
    pub firings: Vec<Firing>,
}

impl ScanPlan {
    pub fn len(&self) -> usize {
        self.firings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.firings.is_empty()
    }

    /// Mean firings per second over the period.
    pub fn mean_rate(&self) -> f64 {
        self.firings.len() as f64 * self.projector.scan_hz
    }

    pub fn period_end(&self) -> f64 {
        self.t0 + self.projector.period_us()
    }
}

pub fn build_scan_plan(
    projector: &ProjectorModel,
    mask: &IlluminationMask,
    t0: f64,
) -> Result<ScanPlan> {
    if mask.resolution() != projector.resolution() {
        return Err(Error::InvalidArgument(format!(
            "mask resolution {} does not match projector {}",
            mask.resolution(),
            projector.resolution()
        )));
    }
    let w = projector.width;
    let firings = mask
        .bits()
        .iter()
        .enumerate()
        .filter(|(_, &on)| on)
        .map(|(k, _)| Firing {
            k,
            row: k / w,
            col: k % w,
            t: projector.fire_time(t0, k),
        })
        .collect();
    Ok(ScanPlan {
        t0,
        projector: *projector,
        firings,
    })
}

/// Writes `k,row,col,fire_t_us` rows.
pub fn write_scan_plan_csv<W: Write>(plan: &ScanPlan, writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    let to_err = |e: csv::Error| Error::Stream(std::io::Error::other(e));
    w.write_record(["k", "row", "col", "fire_t_us"])
        .map_err(to_err)?;
    for f in &plan.firings {
        w.write_record([
            f.k.to_string(),
            f.row.to_string(),
            f.col.to_string(),
            format!("{:.6}", f.t),
        ])
        .map_err(to_err)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::event_core::Resolution;

    fn projector() -> ProjectorModel {
        ProjectorModel::new(Resolution::new(20, 10), 50.0).unwrap()
    }

    #[test]
    fn dense_plan_has_uniform_gaps() {
        let p = projector();
        let plan = build_scan_plan(&p, &IlluminationMask::full(p.resolution()), 0.0).unwrap();
        assert_eq!(plan.len(), 200);
        for w in plan.firings.windows(2) {
            assert!((w[1].t - w[0].t - p.dense_dwell_us()).abs() < 1e-9);
        }
    }

    #[test]
    fn stride_plan_gaps_scale_with_stride() {
        let p = projector();
        let n = 7;
        let mask = IlluminationMask::from_fn(p.resolution(), |k| k % n == 0);
        let plan = build_scan_plan(&p, &mask, 1000.0).unwrap();
        // enumerate the raster order directly
        let expected: Vec<usize> = (0..200).filter(|k| k % n == 0).collect();
        assert_eq!(
            plan.firings.iter().map(|f| f.k).collect::<Vec<_>>(),
            expected
        );
        let dt_s = super::super::theoretical_delta_t(50.0, 20, 10, n).unwrap();
        for w in plan.firings.windows(2) {
            assert!((w[1].t - w[0].t - dt_s * 1e6).abs() < 1e-9);
        }
        assert_eq!(plan.firings[0].t, 1000.0);
    }

    #[test]
    fn empty_mask_gives_empty_plan() {
        let p = projector();
        let plan = build_scan_plan(&p, &IlluminationMask::empty(p.resolution()), 0.0).unwrap();
        assert!(plan.is_empty());
    }

    #[test]
    fn resolution_mismatch_is_rejected() {
        let p = projector();
        let mask = IlluminationMask::full(Resolution::new(10, 10));
        assert!(matches!(
            build_scan_plan(&p, &mask, 0.0),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn csv_layout() {
        let p = ProjectorModel::new(Resolution::new(2, 2), 250_000.0).unwrap();
        let plan = build_scan_plan(
            &p,
            &IlluminationMask::from_fn(p.resolution(), |k| k != 1),
            0.0,
        )
        .unwrap();
        let mut buf = Vec::new();
        write_scan_plan_csv(&plan, &mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "k,row,col,fire_t_us\n0,0,0,0.000000\n2,1,0,2.000000\n3,1,1,3.000000\n"
        );
    }
}
