//! Depth from reflection-event time surfaces, and the evaluation tools used
//! on the result: back-projection, plane fitting, and a non-learned
//! inverse-distance inpainting baseline.

mod cloud;
mod decode;
mod inpaint;
mod plane;

pub use cloud::{depth_to_points, write_ply, PointCloud};
pub use decode::{
    decode_projector_pixel, reconstruct_depth, reconstruct_depth_with, triangulate, Reconstruction,
    ReconstructionParams, ReconstructionTally,
};
pub use inpaint::inpaint_depth;
pub use plane::{
    fit_plane, fit_plane_robust, fit_plane_with, PlaneFit, PlaneFitMode, RansacParams,
};
