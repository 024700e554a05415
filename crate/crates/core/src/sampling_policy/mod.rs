//! Per-period illumination masks: dense, fixed-stride sparse, or guided by
//! the previous period's guide events.
//!
//! The event-guided path is median filter, threshold, 8-connected
//! components, dilated bounding boxes. Pixels inside a box are scanned
//! densely and the rest at the background stride.

mod mask;
mod median;
mod policy;
mod roi;

pub use mask::{active_pixel_fraction, build_mask, write_mask_pbm, GuideScale, IlluminationMask};
pub use median::median_filter_frame;
pub use policy::{EventGuidedParams, Policy, SparseLayout};
pub use roi::{detect_roi, write_roi_csv, RoiBox, RoiSet};
