//! Event data types and the deterministic event representations: event
//! frames, time surfaces, voxel grids and the logarithmic depth codec.
//!
//! All timestamps are real-valued microseconds. Windows are half-open
//! `[start, end)` everywhere so that consecutive scan periods partition a
//! stream without double counting.

mod depth;
mod event;
mod frame;
pub mod io;
mod voxel;

pub use depth::{DepthMap, LogDepthCodec, LogDepthMap};
pub use event::{Event, EventStream, Polarity, Resolution, TimeWindow};
pub use frame::{make_event_frame, make_time_surface, EventFrame, TimeSurface};
pub use voxel::{make_voxel_grid, VoxelGrid};
