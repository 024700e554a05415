use super::event::Resolution;
use crate::error::{Error, Result};

/// Per-pixel metric depth in meters; `None` marks an invalid pixel.
#[derive(Debug, Clone, PartialEq)]
pub struct DepthMap {
    resolution: Resolution,
    depth: Vec<Option<f64>>,
}

impl DepthMap {
    pub fn new(resolution: Resolution, depth: Vec<Option<f64>>) -> Result<Self> {
        if depth.len() != resolution.len() {
            return Err(Error::InvalidInput(format!(
                "{} depth values for a {resolution} map",
                depth.len()
            )));
        }
        if let Some((i, d)) = depth
            .iter()
            .enumerate()
            .find_map(|(i, d)| d.filter(|d| !(d.is_finite() && *d > 0.0)).map(|d| (i, d)))
        {
            return Err(Error::InvalidInput(format!(
                "depth {d} at pixel {i} is not strictly positive and finite"
            )));
        }
        Ok(Self { resolution, depth })
    }

    pub fn invalid(resolution: Resolution) -> Self {
        Self {
            resolution,
            depth: vec![None; resolution.len()],
        }
    }

    pub fn constant(resolution: Resolution, depth: f64) -> Result<Self> {
        Self::new(resolution, vec![Some(depth); resolution.len()])
    }

    pub fn resolution(&self) -> Resolution {
        self.resolution
    }

    pub fn values(&self) -> &[Option<f64>] {
        &self.depth
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> Option<f64> {
        self.depth[self.resolution.index(x, y)]
    }

    pub fn valid_count(&self) -> usize {
        self.depth.iter().filter(|d| d.is_some()).count()
    }

    /// Valid pixels as `(x, y, depth)`.
    pub fn iter_valid(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        let w = self.resolution.width;
        self.depth
            .iter()
            .enumerate()
            .filter_map(move |(i, d)| d.map(|d| (i % w, i / w, d)))
    }
}

/// Normalized log depth values; `None` marks an invalid pixel.
#[derive(Debug, Clone, PartialEq)]
pub struct LogDepthMap {
    pub resolution: Resolution,
    pub values: Vec<Option<f64>>,
}

/// Maps metric depth to `D = ln(depth / d_max) / alpha + 1`, so `d_max` maps to 1
/// and `d_max * exp(-alpha)` maps to 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogDepthCodec {
    alpha: f64,
    d_max: f64,
}

impl Default for LogDepthCodec {
    fn default() -> Self {
        Self {
            alpha: 5.7,
            d_max: 1000.0,
        }
    }
}

impl LogDepthCodec {
    pub fn new(alpha: f64, d_max: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha.is_finite()) || !(d_max > 0.0 && d_max.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "log depth codec needs alpha > 0 and d_max > 0 (got {alpha}, {d_max})"
            )));
        }
        Ok(Self { alpha, d_max })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn d_max(&self) -> f64 {
        self.d_max
    }

    pub fn encode_value(&self, depth: f64) -> Result<f64> {
        if !(depth > 0.0 && depth.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "cannot log-encode non-positive depth {depth}"
            )));
        }
        Ok((depth / self.d_max).ln() / self.alpha + 1.0)
    }

    pub fn decode_value(&self, encoded: f64) -> f64 {
        self.d_max * (self.alpha * (encoded - 1.0)).exp()
    }

    pub fn encode(&self, map: &DepthMap) -> Result<LogDepthMap> {
        let values = map
            .values()
            .iter()
            .map(|d| d.map(|d| self.encode_value(d)).transpose())
            .collect::<Result<Vec<_>>>()?;
        Ok(LogDepthMap {
            resolution: map.resolution(),
            values,
        })
    }

    /// Inverse of [`encode`](Self::encode). Values that overflow to a
    /// non-finite or zero depth become invalid.
    pub fn decode(&self, map: &LogDepthMap) -> DepthMap {
        let depth = map
            .values
            .iter()
            .map(|v| {
                v.filter(|v| v.is_finite())
                    .map(|v| self.decode_value(v))
                    .filter(|d| d.is_finite() && *d > 0.0)
            })
            .collect();
        DepthMap {
            resolution: map.resolution,
            depth,
        }
    }
}
