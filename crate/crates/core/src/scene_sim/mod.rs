//! Synthetic scenes and the guide event camera.
//!
//! A scene is a textured background plane with axis-aligned rectangles
//! translating across it. The guide camera watches the rendered log
//! intensity and emits an event every time a pixel drifts by the contrast
//! threshold from its reference level.

mod guide;
mod script;

pub use guide::{generate_guide_events, GuideCameraModel};
pub use script::{render_scene, Background, IntensityImage, MovingObject, SceneScript, Texture};
