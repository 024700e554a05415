use std::io::Write;

use crate::error::{Error, Result};
use crate::event_core::{EventFrame, Resolution};

/// Inclusive axis-aligned box in pixel coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RoiBox {
    pub x_min: usize,
    pub y_min: usize,
    pub x_max: usize,
    pub y_max: usize,
}

impl RoiBox {
    #[inline]
    pub fn contains(&self, x: usize, y: usize) -> bool {
        x >= self.x_min && x <= self.x_max && y >= self.y_min && y <= self.y_max
    }

    pub fn area(&self) -> usize {
        (self.x_max - self.x_min + 1) * (self.y_max - self.y_min + 1)
    }

    /// Grows the box by `r` on every side, clipped to the frame.
    pub fn dilate(&self, r: usize, frame: Resolution) -> RoiBox {
        RoiBox {
            x_min: self.x_min.saturating_sub(r),
            y_min: self.y_min.saturating_sub(r),
            x_max: (self.x_max + r).min(frame.width - 1),
            y_max: (self.y_max + r).min(frame.height - 1),
        }
    }
}

/// Regions of interest detected on one event frame.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoiSet {
    pub resolution: Resolution,
    pub boxes: Vec<RoiBox>,
}

impl RoiSet {
    pub fn empty(resolution: Resolution) -> Self {
        Self {
            resolution,
            boxes: Vec::new(),
        }
    }

    pub fn contains(&self, x: usize, y: usize) -> bool {
        self.boxes.iter().any(|b| b.contains(x, y))
    }
}

fn find(parent: &mut [u32], mut a: u32) -> u32 {
    while parent[a as usize] != a {
        let next = parent[a as usize];
        parent[a as usize] = parent[next as usize];
        a = next;
    }
    a
}

fn union(parent: &mut [u32], a: u32, b: u32) {
    let (ra, rb) = (find(parent, a), find(parent, b));
    if ra != rb {
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        parent[hi as usize] = lo;
    }
}

/// Bounding boxes of the 8-connected components of `counts >= threshold`.
///
/// Components with fewer than `min_area` pixels are discarded; the rest are
/// dilated by `dilation` and clipped to the frame. Boxes are ordered by the
/// raster position of each component's first pixel.
pub fn detect_roi(
    frame: &EventFrame,
    threshold: u32,
    min_area: usize,
    dilation: usize,
) -> Result<RoiSet> {
    if threshold == 0 {
        return Err(Error::InvalidArgument(
            "activity threshold must be >= 1".into(),
        ));
    }
    let res = frame.resolution();
    let (w, h) = (res.width, res.height);
    const NONE: u32 = u32::MAX;
    let mut labels = vec![NONE; res.len()];
    let mut parent: Vec<u32> = Vec::new();

    // first pass: provisional labels from the already-visited neighbors
    for y in 0..h {
        for x in 0..w {
            if frame.count(x, y) < threshold {
                continue;
            }
            let mut neighbors = [NONE; 4];
            if x > 0 {
                neighbors[0] = labels[res.index(x - 1, y)];
            }
            if y > 0 {
                if x > 0 {
                    neighbors[1] = labels[res.index(x - 1, y - 1)];
                }
                neighbors[2] = labels[res.index(x, y - 1)];
                if x + 1 < w {
                    neighbors[3] = labels[res.index(x + 1, y - 1)];
                }
            }
            let mut label = NONE;
            for &n in neighbors.iter().filter(|&&n| n != NONE) {
                if label == NONE {
                    label = n;
                } else {
                    union(&mut parent, label, n);
                }
            }
            if label == NONE {
                label = parent.len() as u32;
                parent.push(label);
            }
            labels[res.index(x, y)] = label;
        }
    }

    // second pass: accumulate area and extent per root
    struct Acc {
        area: usize,
        bbox: RoiBox,
        first: usize,
    }
    let mut accs: Vec<Option<Acc>> = (0..parent.len()).map(|_| None).collect();
    for y in 0..h {
        for x in 0..w {
            let l = labels[res.index(x, y)];
            if l == NONE {
                continue;
            }
            let root = find(&mut parent, l) as usize;
            let acc = accs[root].get_or_insert(Acc {
                area: 0,
                bbox: RoiBox {
                    x_min: x,
                    y_min: y,
                    x_max: x,
                    y_max: y,
                },
                first: res.index(x, y),
            });
            acc.area += 1;
            acc.bbox.x_min = acc.bbox.x_min.min(x);
            acc.bbox.x_max = acc.bbox.x_max.max(x);
            acc.bbox.y_max = acc.bbox.y_max.max(y);
        }
    }
    let mut comps: Vec<Acc> = accs
        .into_iter()
        .flatten()
        .filter(|a| a.area >= min_area)
        .collect();
    comps.sort_by_key(|a| a.first);
    Ok(RoiSet {
        resolution: res,
        boxes: comps.iter().map(|a| a.bbox.dilate(dilation, res)).collect(),
    })
}

/// Writes `x_min,y_min,x_max,y_max` rows.
pub fn write_roi_csv<W: Write>(rois: &RoiSet, mut writer: W) -> Result<()> {
    writeln!(writer, "x_min,y_min,x_max,y_max")?;
    for b in &rois.boxes {
        writeln!(writer, "{},{},{},{}", b.x_min, b.y_min, b.x_max, b.y_max)?;
    }
    Ok(())
}
