use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::depth_estimation::{PlaneFitMode, ReconstructionParams};
use crate::error::{Error, Result};
use crate::projector_sim::{NoiseModel, ProjectorModel, SensorGeometry};
use crate::sampling_policy::Policy;
use crate::scene_sim::{GuideCameraModel, SceneScript};

/// Mask used for period 0, before any guide events exist. Only event-guided
/// policies consult it.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FirstPeriod {
    #[default]
    Dense,
    /// The policy's background stride alone, as if no region were active.
    Background,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MetricsConfig {
    /// Fit a plane to each period's reconstruction and report its rms.
    pub plane_fit: bool,
    pub plane_fit_mode: PlaneFitMode,
    /// Scale of dumped depth PGMs.
    pub depth_meters_per_unit: f64,
}

impl Default for MetricsConfig {
    fn default() -> Self {
        Self {
            plane_fit: true,
            plane_fit_mode: PlaneFitMode::Tls,
            depth_meters_per_unit: 1e-4,
        }
    }
}

/// One simulation run, loaded from a TOML document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    /// Root of every random stream in the run.
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_periods")]
    pub periods: usize,
    #[serde(default)]
    pub first_period: FirstPeriod,
    /// Artifact directory; relative paths resolve against the working directory.
    #[serde(default)]
    pub output_dir: Option<PathBuf>,
    pub scene: SceneScript,
    #[serde(default)]
    pub guide_camera: GuideCameraModel,
    pub geometry: SensorGeometry,
    pub projector: ProjectorModel,
    #[serde(default)]
    pub noise: NoiseModel,
    pub policy: Policy,
    #[serde(default)]
    pub reconstruction: ReconstructionParams,
    #[serde(default)]
    pub metrics: MetricsConfig,
}

fn default_periods() -> usize {
    1
}

/// Command-line values that replace document fields before validation.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub periods: Option<usize>,
}

impl Scenario {
    /// Parses and validates a scenario. `source` names the document in errors.
    pub fn from_toml_str(text: &str, source: &str) -> Result<Self> {
        Self::from_toml_str_with(text, source, Overrides::default())
    }

    pub fn from_toml_str_with(text: &str, source: &str, overrides: Overrides) -> Result<Self> {
        let de =
            toml::Deserializer::parse(text).map_err(|e| Error::config(source, e.to_string()))?;
        let mut scenario: Scenario = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            let inner = e.into_inner();
            let message = inner.message().to_string();
            Error::config(
                if path == "." {
                    source.to_string()
                } else {
                    path
                },
                message,
            )
        })?;
        if let Some(seed) = overrides.seed {
            scenario.seed = seed;
        }
        if let Some(periods) = overrides.periods {
            scenario.periods = periods;
        }
        scenario.fill_duration();
        scenario.validate()?;
        Ok(scenario)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::load_with(path, Overrides::default())
    }

    pub fn load_with(path: &Path, overrides: Overrides) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml_str_with(&text, &path.display().to_string(), overrides)
    }

    pub fn period_us(&self) -> f64 {
        self.projector.period_us()
    }

    /// Total simulated time, microseconds.
    pub fn span_us(&self) -> f64 {
        self.periods as f64 * self.period_us()
    }

    /// Sets a zero scene duration to the run length.
    pub fn fill_duration(&mut self) {
        if self.scene.duration_us == 0.0 && self.projector.scan_hz > 0.0 {
            self.scene.duration_us = self.span_us();
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.periods == 0 {
            return Err(Error::config("periods", "must be >= 1"));
        }
        self.scene.validate("scene")?;
        self.guide_camera.validate("guide_camera")?;
        self.geometry.validate("geometry")?;
        self.projector.validate("projector")?;
        self.noise.validate("noise")?;
        self.policy.validate("policy")?;
        if let PlaneFitMode::Robust(p) = self.metrics.plane_fit_mode {
            if p.iterations == 0 {
                return Err(Error::config(
                    "metrics.plane_fit_mode.iterations",
                    "must be >= 1",
                ));
            }
            if !(p.inlier_threshold_m > 0.0) {
                return Err(Error::config(
                    "metrics.plane_fit_mode.inlier_threshold_m",
                    "must be positive",
                ));
            }
        }
        if !(self.metrics.depth_meters_per_unit > 0.0
            && self.metrics.depth_meters_per_unit.is_finite())
        {
            return Err(Error::config(
                "metrics.depth_meters_per_unit",
                "must be positive",
            ));
        }
        // float slack: the auto-filled duration is the same product
        if self.scene.duration_us + 1e-6 < self.span_us() {
            return Err(Error::config(
                "scene.duration_us",
                format!(
                    "scene lasts {} us but {} periods need {} us",
                    self.scene.duration_us,
                    self.periods,
                    self.span_us()
                ),
            ));
        }
        Ok(())
    }

    /// Copies the run seed into every seeded sub-model.
    pub(crate) fn seeded(&self) -> Self {
        let mut s = self.clone();
        s.noise.seed = self.seed;
        s.guide_camera.noise_seed = self.seed ^ 0x6775_6964_655f_6576;
        if let PlaneFitMode::Robust(p) = &mut s.metrics.plane_fit_mode {
            p.seed = self.seed;
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"
periods = 2
[scene]
width = 16
height = 8
[scene.background]
depth_m = 2.0
texture = { kind = "uniform", value = 0.5 }
[geometry]
cam_width = 16
cam_height = 8
focal_px = 600.0
[projector]
width = 16
height = 8
[policy]
kind = "dense"
"#;

    #[test]
    fn minimal_document_gets_defaults() {
        let s = Scenario::from_toml_str(MINIMAL, "test").unwrap();
        assert_eq!(s.periods, 2);
        assert_eq!(s.first_period, FirstPeriod::Dense);
        assert!((s.scene.duration_us - 2.0 * 1e6 / 60.0).abs() < 1e-9);
        assert_eq!(s.geometry.baseline_m, 0.04);
        assert_eq!(s.noise, NoiseModel::default());
    }

    #[test]
    fn unknown_key_reports_path() {
        let text = MINIMAL.replace("focal_px = 600.0", "focal_px = 600.0\nfocal = 1.0");
        let err = Scenario::from_toml_str(&text, "test").unwrap_err();
        let Error::Config { path, message } = err else {
            panic!("{err}")
        };
        assert_eq!(path, "geometry.focal");
        assert!(message.contains("unknown field"), "{message}");
    }

    #[test]
    fn type_error_reports_nested_path() {
        let text = MINIMAL.replace("value = 0.5", "value = \"bright\"");
        let err = Scenario::from_toml_str(&text, "test").unwrap_err();
        let Error::Config { path, .. } = err else {
            panic!("{err}")
        };
        // tagged enums are buffered, so the path stops at the enum
        assert_eq!(path, "scene.background.texture");
    }

    #[test]
    fn semantic_error_reports_path() {
        let text = MINIMAL.replace("focal_px = 600.0", "focal_px = -1.0");
        let err = Scenario::from_toml_str(&text, "test").unwrap_err();
        let Error::Config { path, .. } = err else {
            panic!("{err}")
        };
        assert_eq!(path, "geometry.focal_px");
    }

    #[test]
    fn short_scene_is_rejected() {
        let text = MINIMAL.replace(
            "height = 8\n[scene.background]",
            "height = 8\nduration_us = 100.0\n[scene.background]",
        );
        let err = Scenario::from_toml_str(&text, "test").unwrap_err();
        let Error::Config { path, .. } = err else {
            panic!("{err}")
        };
        assert_eq!(path, "scene.duration_us");
    }

    #[test]
    fn overrides_apply_before_sizing() {
        let o = Overrides {
            seed: Some(9),
            periods: Some(5),
        };
        let s = Scenario::from_toml_str_with(MINIMAL, "test", o).unwrap();
        assert_eq!((s.seed, s.periods), (9, 5));
        assert!((s.scene.duration_us - s.span_us()).abs() < 1e-9);
    }

    #[test]
    fn seed_reaches_sub_models() {
        let mut s = Scenario::from_toml_str(MINIMAL, "test").unwrap();
        s.seed = 42;
        let s = s.seeded();
        assert_eq!(s.noise.seed, 42);
        assert_ne!(s.guide_camera.noise_seed, 0);
    }
}
