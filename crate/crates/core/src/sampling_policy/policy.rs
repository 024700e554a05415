use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// How sparse pixels are picked.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SparseLayout {
    /// Every `stride`-th pixel along the row-major raster index.
    #[default]
    Raster,
    /// Pixels whose row and column are both multiples of `stride`.
    Grid,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EventGuidedParams {
    /// Odd median kernel size applied to the event frame.
    pub median_kernel: usize,
    /// Minimum event count for a pixel to be active.
    pub min_events: u32,
    /// Components smaller than this many pixels are ignored.
    pub min_area: usize,
    /// Bounding-box growth in pixels on every side.
    pub dilation: usize,
    /// Raster stride outside the regions of interest.
    pub background_stride: usize,
}

impl Default for EventGuidedParams {
    fn default() -> Self {
        Self {
            median_kernel: 3,
            min_events: 1,
            min_area: 4,
            dilation: 4,
            background_stride: 16,
        }
    }
}

/// Sampling policy for one scan period.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Policy {
    Dense {},
    Sparse {
        stride: usize,
        #[serde(default)]
        layout: SparseLayout,
    },
    EventGuided(EventGuidedParams),
}

impl Policy {
    pub fn dense() -> Self {
        Policy::Dense {}
    }

    pub fn sparse(stride: usize) -> Self {
        Policy::Sparse {
            stride,
            layout: SparseLayout::Raster,
        }
    }

    pub fn event_guided() -> Self {
        Policy::EventGuided(EventGuidedParams::default())
    }

    /// Short name used in reports.
    pub fn label(&self) -> String {
        match self {
            Policy::Dense {} => "dense".into(),
            Policy::Sparse { stride, .. } => format!("sparse-{stride}"),
            Policy::EventGuided(p) => format!("event-guided-{}", p.background_stride),
        }
    }

    pub fn validate(&self, path: &str) -> Result<()> {
        match *self {
            Policy::Dense {} => Ok(()),
            Policy::Sparse { stride: 0, .. } => {
                Err(Error::config(format!("{path}.stride"), "must be >= 1"))
            }
            Policy::Sparse { .. } => Ok(()),
            Policy::EventGuided(p) => {
                if p.median_kernel == 0 || p.median_kernel % 2 == 0 {
                    return Err(Error::config(
                        format!("{path}.median_kernel"),
                        "must be odd and >= 1",
                    ));
                }
                if p.min_events == 0 {
                    return Err(Error::config(format!("{path}.min_events"), "must be >= 1"));
                }
                if p.background_stride == 0 {
                    return Err(Error::config(
                        format!("{path}.background_stride"),
                        "must be >= 1",
                    ));
                }
                Ok(())
            }
        }
    }
}
