//! Deterministic simulation and analysis of event-guided structured-light
//! depth sensing.
//!
//! The pipeline per scan period:
//!
//! 1. [`scene_sim`] renders a synthetic scene and the guide event camera
//!    turns its log-intensity changes into events.
//! 2. [`sampling_policy`] turns the previous period's guide events into an
//!    illumination mask (dense, sparse, or event-guided).
//! 3. [`projector_sim`] schedules the raster scan, reflects it off the scene
//!    and produces noisy reflection events.
//! 4. [`depth_estimation`] decodes the reflection time surface into depth
//!    and evaluates it.
//! 5. [`harness`] wires it together, runs sweeps and writes reports.

// `!(x > 0.0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod depth_estimation;
pub mod error;
pub mod event_core;
pub mod formats;
pub mod harness;
pub mod projector_sim;
pub mod rng;
pub mod sampling_policy;
pub mod scene_sim;

pub use error::{Error, Result};
