use std::io::Write;

use nalgebra::Vector3;

use crate::error::Result;
use crate::event_core::DepthMap;
use crate::projector_sim::SensorGeometry;

/// Points in the camera frame, meters.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PointCloud {
    pub points: Vec<Vector3<f64>>,
}

impl PointCloud {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

impl FromIterator<Vector3<f64>> for PointCloud {
    fn from_iter<I: IntoIterator<Item = Vector3<f64>>>(iter: I) -> Self {
        Self {
            points: iter.into_iter().collect(),
        }
    }
}

/// Pinhole back-projection of the valid pixels, principal point at the
/// image center.
pub fn depth_to_points(map: &DepthMap, geometry: &SensorGeometry) -> PointCloud {
    let cx = geometry.cam_width as f64 / 2.0;
    let cy = geometry.cam_height as f64 / 2.0;
    let f = geometry.focal_px;
    map.iter_valid()
        .map(|(x, y, z)| Vector3::new((x as f64 - cx) * z / f, (y as f64 - cy) * z / f, z))
        .collect()
}

/// ASCII PLY with float32 `x y z` vertices.
pub fn write_ply<W: Write>(cloud: &PointCloud, mut writer: W) -> Result<()> {
    write!(
        writer,
        "ply\nformat ascii 1.0\nelement vertex {}\nproperty float x\nproperty float y\nproperty float z\nend_header\n",
        cloud.len()
    )?;
    for p in &cloud.points {
        writeln!(writer, "{} {} {}", p.x as f32, p.y as f32, p.z as f32)?;
    }
    Ok(())
}
