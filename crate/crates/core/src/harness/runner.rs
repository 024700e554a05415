use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;

use super::config::{FirstPeriod, Scenario};
use crate::depth_estimation::{depth_to_points, fit_plane_with, reconstruct_depth_with, write_ply};
use crate::error::{Error, Result};
use crate::event_core::io::write_events;
use crate::event_core::{
    make_event_frame, make_time_surface, DepthMap, EventStream, Resolution, TimeWindow,
};
use crate::formats::{intensity_samples, write_depth_pgm, write_pgm16};
use crate::projector_sim::{build_scan_plan, simulate_reflection_events};
use crate::sampling_policy::{
    active_pixel_fraction, build_mask, detect_roi, median_filter_frame, write_mask_pbm,
    write_roi_csv, GuideScale, IlluminationMask, Policy, RoiSet,
};
use crate::scene_sim::{generate_guide_events, render_scene, SceneScript};

/// Artifact families written per period on top of `report.csv`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct DumpSet {
    /// Guide and reflection event streams as CSV.
    pub events: bool,
    /// Illumination mask (PBM) and regions of interest (CSV).
    pub masks: bool,
    /// Reconstructed and ground-truth depth plus scene intensity (PGM).
    pub depth: bool,
    /// Reconstructed point cloud (PLY).
    pub ply: bool,
}

impl DumpSet {
    pub fn all() -> Self {
        Self {
            events: true,
            masks: true,
            depth: true,
            ply: true,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunOptions {
    /// Overrides the scenario's output directory. With neither set nothing is written.
    pub out_dir: Option<PathBuf>,
    pub dump: DumpSet,
    /// Worker threads; `None` uses the global pool. Output does not depend on it.
    pub threads: Option<usize>,
}

/// Metrics of one scan period.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PeriodReport {
    pub period: usize,
    pub t0_us: f64,
    /// Share of guide pixels with activity during this period.
    pub active_fraction: f64,
    pub mask_fraction: f64,
    /// Equal to the mask fraction: lit pixels relative to a dense scan.
    pub power_proxy: f64,
    pub illumination_reduction: f64,
    /// Guide events per second during this period.
    pub guide_event_rate: f64,
    /// Reflection events per second during this period.
    pub reflection_event_rate: f64,
    pub jitter_std_us: f64,
    pub valid_depth_pixels: usize,
    pub plane_rms_m: Option<f64>,
    /// Failure that cut this period short; later stages are then left at zero.
    pub error: Option<String>,
}

impl PeriodReport {
    fn new(period: usize, t0_us: f64) -> Self {
        Self {
            period,
            t0_us,
            active_fraction: 0.0,
            mask_fraction: 0.0,
            power_proxy: 0.0,
            illumination_reduction: 1.0,
            guide_event_rate: 0.0,
            reflection_event_rate: 0.0,
            jitter_std_us: 0.0,
            valid_depth_pixels: 0,
            plane_rms_m: None,
            error: None,
        }
    }
}

pub const REPORT_FILE: &str = "report.csv";

/// Runs every scan period of `scenario`.
///
/// Period `p` is lit according to guide events of period `p - 1`; period 0
/// uses the configured fallback. Since masks depend only on the guide
/// stream, periods are simulated independently and in parallel. Failures
/// inside a period are recorded in its report; only I/O errors abort.
pub fn run_scenario(scenario: &Scenario, options: &RunOptions) -> Result<Vec<PeriodReport>> {
    scenario.validate()?;
    let out_dir = options
        .out_dir
        .clone()
        .or_else(|| scenario.output_dir.clone());
    if let Some(dir) = &out_dir {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    let dump = if out_dir.is_some() {
        options.dump
    } else {
        DumpSet::default()
    };
    let run = || run_periods(&scenario.seeded(), out_dir.as_deref(), dump);
    let reports = match options.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?
            .install(run)?,
        None => run()?,
    };
    if let Some(dir) = &out_dir {
        let path = dir.join(REPORT_FILE);
        let file = File::create(&path).map_err(|e| Error::io(&path, e))?;
        write_report_csv(&reports, file)?;
    }
    Ok(reports)
}

fn run_periods(s: &Scenario, out_dir: Option<&Path>, dump: DumpSet) -> Result<Vec<PeriodReport>> {
    let span = TimeWindow::new(0.0, s.span_us())?;
    let guide = generate_guide_events(&s.scene, &s.guide_camera, span)?;
    let ctx = Context {
        s,
        guide: &guide,
        out_dir,
        dump,
    };
    (0..s.periods)
        .into_par_iter()
        .map(|p| ctx.period(p))
        .collect()
}

struct Context<'a> {
    s: &'a Scenario,
    guide: &'a EventStream,
    out_dir: Option<&'a Path>,
    dump: DumpSet,
}

impl Context<'_> {
    fn window(&self, p: usize) -> Result<TimeWindow> {
        let period = self.s.period_us();
        TimeWindow::new(p as f64 * period, (p + 1) as f64 * period)
    }

    fn artifact(&self, stem: &str, p: usize, ext: &str) -> Option<PathBuf> {
        self.out_dir
            .map(|d| d.join(format!("{stem}_p{p:04}.{ext}")))
    }

    fn period(&self, p: usize) -> Result<PeriodReport> {
        let window = self.window(p)?;
        let mut report = PeriodReport::new(p, window.start);
        if let Err(e) = self.simulate(p, window, &mut report) {
            match e {
                Error::Io { .. } | Error::Stream(_) => return Err(e),
                other => report.error = Some(other.to_string()),
            }
        }
        Ok(report)
    }

    fn simulate(&self, p: usize, window: TimeWindow, report: &mut PeriodReport) -> Result<()> {
        let s = self.s;
        let seconds = window.duration() * 1e-6;

        let own = self.guide.sub_stream(window);
        let own_frame = make_event_frame(&own, window);
        report.active_fraction = active_pixel_fraction(&own_frame, activity_threshold(&s.policy));
        report.guide_event_rate = own.len() as f64 / seconds;
        if self.dump.events {
            if let Some(path) = self.artifact("guide", p, "csv") {
                write_to(&path, |w| write_events(&own, w))?;
            }
        }

        let (mask, rois) = self.mask_for(p)?;
        report.mask_fraction = mask.fraction();
        report.power_proxy = report.mask_fraction;
        report.illumination_reduction = 1.0 - report.mask_fraction;
        if self.dump.masks {
            if let Some(path) = self.artifact("mask", p, "pbm") {
                write_to(&path, |w| write_mask_pbm(&mask, w))?;
            }
            if let Some(path) = self.artifact("roi", p, "csv") {
                write_to(&path, |w| write_roi_csv(&rois, w))?;
            }
        }

        let plan = build_scan_plan(&s.projector, &mask, window.start)?;
        let t_mid = (window.start + 0.5 * window.duration()).min(s.scene.duration_us);
        let (intensity, scene_depth) = render_scene(&s.scene, t_mid)?;
        let ray_depth = resample_nearest(&scene_depth, s.projector.resolution());
        if self.dump.depth {
            if let Some(path) = self.artifact("scene_depth", p, "pgm") {
                write_depth_pgm(&path, &scene_depth, s.metrics.depth_meters_per_unit)?;
            }
            if let Some(path) = self.artifact("scene_intensity", p, "pgm") {
                let samples = intensity_samples(&intensity);
                write_to(&path, |w| write_pgm16(intensity.resolution, &samples, w))?;
            }
        }

        let reflection = simulate_reflection_events(&plan, &ray_depth, &s.geometry, &s.noise)?;
        report.jitter_std_us = reflection.jitter_std_us;
        let in_window = reflection.stream.slice(window).len();
        report.reflection_event_rate = in_window as f64 / seconds;
        if self.dump.events {
            if let Some(path) = self.artifact("reflection", p, "csv") {
                write_to(&path, |w| write_events(&reflection.stream, w))?;
            }
        }

        let surface = make_time_surface(&reflection.stream, window);
        let recon = reconstruct_depth_with(
            &surface,
            &s.geometry,
            &s.projector,
            window.start,
            &s.reconstruction,
        );
        report.valid_depth_pixels = recon.depth.valid_count();
        if self.dump.depth {
            if let Some(path) = self.artifact("depth", p, "pgm") {
                write_depth_pgm(&path, &recon.depth, s.metrics.depth_meters_per_unit)?;
            }
        }

        if s.metrics.plane_fit || self.dump.ply {
            let cloud = depth_to_points(&recon.depth, &s.geometry);
            if self.dump.ply {
                if let Some(path) = self.artifact("points", p, "ply") {
                    write_to(&path, |w| write_ply(&cloud, w))?;
                }
            }
            if s.metrics.plane_fit {
                report.plane_rms_m = Some(fit_plane_with(&cloud, &s.metrics.plane_fit_mode)?.rms);
            }
        }
        Ok(())
    }

    /// Mask and guiding regions for period `p`.
    fn mask_for(&self, p: usize) -> Result<(IlluminationMask, RoiSet)> {
        let s = self.s;
        let proj = s.projector.resolution();
        let guide_res = s.scene.resolution();
        let Policy::EventGuided(params) = s.policy else {
            return Ok((
                build_mask(
                    &s.policy,
                    proj,
                    &RoiSet::empty(guide_res),
                    GuideScale::IDENTITY,
                )?,
                RoiSet::empty(guide_res),
            ));
        };
        if p == 0 {
            let mask = match s.first_period {
                FirstPeriod::Dense => IlluminationMask::full(proj),
                FirstPeriod::Background => build_mask(
                    &s.policy,
                    proj,
                    &RoiSet::empty(guide_res),
                    GuideScale::IDENTITY,
                )?,
            };
            return Ok((mask, RoiSet::empty(guide_res)));
        }
        let prev = self.window(p - 1)?;
        let frame = make_event_frame(self.guide, prev);
        let filtered = median_filter_frame(&frame, params.median_kernel)?;
        let rois = detect_roi(
            &filtered,
            params.min_events,
            params.min_area,
            params.dilation,
        )?;
        let mask = build_mask(&s.policy, proj, &rois, GuideScale::between(guide_res, proj))?;
        Ok((mask, rois))
    }
}

fn activity_threshold(policy: &Policy) -> u32 {
    match policy {
        Policy::EventGuided(p) => p.min_events,
        _ => 1,
    }
}

/// Nearest-neighbour resampling by pixel centres.
pub(crate) fn resample_nearest(map: &DepthMap, to: Resolution) -> DepthMap {
    let from = map.resolution();
    if from == to {
        return map.clone();
    }
    let sx = from.width as f64 / to.width as f64;
    let sy = from.height as f64 / to.height as f64;
    let values = (0..to.len())
        .map(|k| {
            let (x, y) = (k % to.width, k / to.width);
            let fx = (((x as f64 + 0.5) * sx) as usize).min(from.width - 1);
            let fy = (((y as f64 + 0.5) * sy) as usize).min(from.height - 1);
            map.get(fx, fy)
        })
        .collect();
    DepthMap::new(to, values).expect("resampled values come from a valid map")
}

pub(crate) fn write_to(
    path: &Path,
    body: impl FnOnce(&mut BufWriter<File>) -> Result<()>,
) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    body(&mut w)?;
    w.flush().map_err(|e| Error::io(path, e))
}

pub fn write_report_csv<W: Write>(reports: &[PeriodReport], writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    for r in reports {
        w.serialize(r).map_err(csv_error)?;
    }
    w.flush()?;
    Ok(())
}

pub(crate) fn csv_error(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Stream(io),
        other => Error::InvalidInput(format!("{other:?}")),
    }
}

/// Scene used by the noiseless checks: a textured fronto-parallel plane.
pub fn plane_scene(resolution: Resolution, depth_m: f64, duration_us: f64) -> SceneScript {
    use crate::scene_sim::{Background, Texture};
    SceneScript {
        width: resolution.width,
        height: resolution.height,
        duration_us,
        background: Background {
            depth_m,
            texture: Texture::Uniform { value: 0.5 },
        },
        objects: Vec::new(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::depth_estimation::ReconstructionParams;
    use crate::harness::config::MetricsConfig;
    use crate::projector_sim::{NoiseModel, ProjectorModel, SensorGeometry};

    fn plane_scenario(policy: Policy, noise: NoiseModel) -> Scenario {
        let res = Resolution::new(64, 48);
        let projector = ProjectorModel::new(res, 60.0).unwrap();
        let mut s = Scenario {
            seed: 1,
            periods: 2,
            first_period: FirstPeriod::Dense,
            output_dir: None,
            scene: plane_scene(res, 2.0, 0.0),
            guide_camera: Default::default(),
            geometry: SensorGeometry::new(res, 600.0, 0.04).unwrap(),
            projector,
            noise,
            policy,
            reconstruction: ReconstructionParams::default(),
            metrics: MetricsConfig::default(),
        };
        s.fill_duration();
        s
    }

    #[test]
    fn noiseless_dense_plane_is_exact() {
        let s = plane_scenario(Policy::dense(), NoiseModel::noiseless());
        let reports = run_scenario(&s, &RunOptions::default()).unwrap();
        assert_eq!(reports.len(), 2);
        for r in &reports {
            assert_eq!(r.error, None);
            assert_eq!(r.mask_fraction, 1.0);
            // disparity 12 px: the leftmost 12 projector columns fall off the camera
            assert_eq!(r.valid_depth_pixels, (64 - 12) * 48);
            assert!(r.plane_rms_m.unwrap() < 1e-9);
            assert_eq!(r.active_fraction, 0.0);
        }
    }

    #[test]
    fn failing_period_is_recorded() {
        // a stride this large lights a single pixel: too few points for a plane
        let s = plane_scenario(Policy::sparse(64 * 48), NoiseModel::noiseless());
        let reports = run_scenario(&s, &RunOptions::default()).unwrap();
        assert!(reports
            .iter()
            .all(|r| r.error.is_some() && r.plane_rms_m.is_none()));
        assert!(reports.iter().all(|r| r.mask_fraction > 0.0));
    }

    #[test]
    fn resample_picks_nearest_centre() {
        let from = Resolution::new(2, 1);
        let map = DepthMap::new(from, vec![Some(1.0), Some(2.0)]).unwrap();
        let up = resample_nearest(&map, Resolution::new(4, 2));
        let row: Vec<_> = (0..4).map(|x| up.get(x, 1).unwrap()).collect();
        assert_eq!(row, vec![1.0, 1.0, 2.0, 2.0]);
    }
}
