use std::io::Write;

use super::policy::{Policy, SparseLayout};
use super::roi::{RoiBox, RoiSet};
use crate::error::{Error, Result};
use crate::event_core::{EventFrame, Resolution};

/// On/off state of every projector pixel for one scan period.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IlluminationMask {
    resolution: Resolution,
    bits: Vec<bool>,
}

impl IlluminationMask {
    pub fn full(resolution: Resolution) -> Self {
        Self {
            resolution,
            bits: vec![true; resolution.len()],
        }
    }

    pub fn empty(resolution: Resolution) -> Self {
        Self {
            resolution,
            bits: vec![false; resolution.len()],
        }
    }

    /// Mask whose pixel with raster index `k` is on iff `on(k)`.
    pub fn from_fn(resolution: Resolution, on: impl Fn(usize) -> bool) -> Self {
        Self {
            resolution,
            bits: (0..resolution.len()).map(on).collect(),
        }
    }

    pub fn resolution(&self) -> Resolution {
        self.resolution
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> bool {
        self.bits[self.resolution.index(x, y)]
    }

    pub fn on_count(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    /// On pixels over all pixels; this is also the illumination power proxy.
    pub fn fraction(&self) -> f64 {
        if self.resolution.is_empty() {
            return 0.0;
        }
        self.on_count() as f64 / self.resolution.len() as f64
    }
}

/// Per-axis scale from guide-camera pixels to projector pixels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GuideScale {
    pub sx: f64,
    pub sy: f64,
}

impl GuideScale {
    pub const IDENTITY: GuideScale = GuideScale { sx: 1.0, sy: 1.0 };

    pub fn between(guide: Resolution, projector: Resolution) -> Self {
        Self {
            sx: projector.width as f64 / guide.width as f64,
            sy: projector.height as f64 / guide.height as f64,
        }
    }

    /// Projector-space box covering every projector pixel that overlaps the
    /// guide-space box.
    pub fn map_box(&self, b: &RoiBox, projector: Resolution) -> RoiBox {
        let lo = |v: usize, s: f64| (v as f64 * s).floor() as usize;
        let hi = |v: usize, s: f64, max: usize| {
            (((v + 1) as f64 * s).ceil() as usize)
                .saturating_sub(1)
                .min(max - 1)
        };
        RoiBox {
            x_min: lo(b.x_min, self.sx).min(projector.width - 1),
            y_min: lo(b.y_min, self.sy).min(projector.height - 1),
            x_max: hi(b.x_max, self.sx, projector.width),
            y_max: hi(b.y_max, self.sy, projector.height),
        }
    }
}

fn sparse_on(layout: SparseLayout, stride: usize, width: usize, k: usize) -> bool {
    match layout {
        SparseLayout::Raster => k.is_multiple_of(stride),
        SparseLayout::Grid => {
            (k / width).is_multiple_of(stride) && (k % width).is_multiple_of(stride)
        }
    }
}

/// Illumination mask for one period.
///
/// Event-guided masks light every pixel inside a scaled region of interest
/// and, elsewhere, every `background_stride`-th raster pixel. A pixel that
/// qualifies either way is on.
pub fn build_mask(
    policy: &Policy,
    projector: Resolution,
    rois: &RoiSet,
    scale: GuideScale,
) -> Result<IlluminationMask> {
    policy.validate("policy")?;
    if projector.is_empty() {
        return Err(Error::InvalidArgument(
            "projector resolution is empty".into(),
        ));
    }
    let w = projector.width;
    Ok(match *policy {
        Policy::Dense {} => IlluminationMask::full(projector),
        Policy::Sparse { stride, layout } => {
            IlluminationMask::from_fn(projector, |k| sparse_on(layout, stride, w, k))
        }
        Policy::EventGuided(params) => {
            let mut mask =
                IlluminationMask::from_fn(projector, |k| k % params.background_stride == 0);
            for b in &rois.boxes {
                let pb = scale.map_box(b, projector);
                for y in pb.y_min..=pb.y_max {
                    mask.bits[projector.index(pb.x_min, y)..=projector.index(pb.x_max, y)]
                        .fill(true);
                }
            }
            mask
        }
    })
}

/// Share of pixels with at least `threshold` events.
pub fn active_pixel_fraction(frame: &EventFrame, threshold: u32) -> f64 {
    let res = frame.resolution();
    if res.is_empty() {
        return 0.0;
    }
    let active = frame.counts().iter().filter(|&&c| c >= threshold).count();
    active as f64 / res.len() as f64
}

/// Binary PBM (P4). A set bit (black) marks an illuminated pixel.
pub fn write_mask_pbm<W: Write>(mask: &IlluminationMask, mut writer: W) -> Result<()> {
    let res = mask.resolution();
    write!(writer, "P4\n{} {}\n", res.width, res.height)?;
    let row_bytes = res.width.div_ceil(8);
    let mut row = vec![0u8; row_bytes];
    for y in 0..res.height {
        row.fill(0);
        for x in 0..res.width {
            if mask.get(x, y) {
                row[x / 8] |= 0x80 >> (x % 8);
            }
        }
        writer.write_all(&row)?;
    }
    Ok(())
}
