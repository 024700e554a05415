use nalgebra::{Matrix3, SymmetricEigen, Vector3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::cloud::PointCloud;
use crate::error::{Error, Result};

/// Plane `normal . X = offset` with fit statistics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlaneFit {
    pub normal: Vector3<f64>,
    pub offset: f64,
    /// Root mean squared point-to-plane distance over the inliers, meters.
    pub rms: f64,
    pub inliers: usize,
}

impl PlaneFit {
    pub fn distance(&self, p: &Vector3<f64>) -> f64 {
        self.normal.dot(p) - self.offset
    }
}

/// Fixed-iteration random sample consensus settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RansacParams {
    pub iterations: usize,
    pub inlier_threshold_m: f64,
    #[serde(skip)]
    pub seed: u64,
}

impl Default for RansacParams {
    fn default() -> Self {
        Self {
            iterations: 200,
            inlier_threshold_m: 0.05,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "kebab-case", deny_unknown_fields)]
pub enum PlaneFitMode {
    /// Total least squares over every point.
    #[default]
    Tls,
    Robust(RansacParams),
}

pub fn fit_plane_with(points: &PointCloud, mode: &PlaneFitMode) -> Result<PlaneFit> {
    match mode {
        PlaneFitMode::Tls => fit_plane(points),
        PlaneFitMode::Robust(p) => fit_plane_robust(points, p),
    }
}

// relative eigenvalue floor below which the spread is treated as rank deficient
const RANK_EPS: f64 = 1e-12;

/// Total-least-squares plane: centroid plus the covariance eigenvector of the
/// smallest eigenvalue. The normal is oriented so that `offset >= 0`.
pub fn fit_plane(points: &PointCloud) -> Result<PlaneFit> {
    tls(&points.points)
}

fn tls(points: &[Vector3<f64>]) -> Result<PlaneFit> {
    let n = points.len();
    if n < 3 {
        return Err(Error::Degenerate(format!(
            "plane fit needs at least 3 points, got {n}"
        )));
    }
    let centroid = points.iter().sum::<Vector3<f64>>() / n as f64;
    let mut cov = Matrix3::zeros();
    for p in points {
        let d = p - centroid;
        cov += d * d.transpose();
    }
    cov /= n as f64;
    let eig = SymmetricEigen::new(cov);
    let mut order = [0usize, 1, 2];
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let (smallest, middle, largest) = (order[0], order[1], order[2]);
    let scale = eig.eigenvalues[largest];
    if !(scale > 0.0) || eig.eigenvalues[middle] <= RANK_EPS * scale {
        return Err(Error::Degenerate(
            "points are coincident or collinear".into(),
        ));
    }
    let mut normal: Vector3<f64> = eig.eigenvectors.column(smallest).into_owned().normalize();
    let mut offset = normal.dot(&centroid);
    if offset < 0.0 {
        normal = -normal;
        offset = -offset;
    }
    let sq: f64 = points
        .iter()
        .map(|p| (normal.dot(p) - offset).powi(2))
        .sum();
    Ok(PlaneFit {
        normal,
        offset,
        rms: (sq / n as f64).sqrt(),
        inliers: n,
    })
}

/// Consensus search over random 3-point planes, then a TLS refit on the
/// largest inlier set. `rms` and `inliers` refer to that set.
pub fn fit_plane_robust(points: &PointCloud, params: &RansacParams) -> Result<PlaneFit> {
    let pts = &points.points;
    if pts.len() < 3 {
        return Err(Error::Degenerate(format!(
            "plane fit needs at least 3 points, got {}",
            pts.len()
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let thr = params.inlier_threshold_m;
    let mut best: Option<(usize, Vector3<f64>, f64)> = None;
    for _ in 0..params.iterations {
        let i = rng.random_range(0..pts.len());
        let j = rng.random_range(0..pts.len());
        let k = rng.random_range(0..pts.len());
        let cross = (pts[j] - pts[i]).cross(&(pts[k] - pts[i]));
        let norm = cross.norm();
        if i == j || j == k || i == k || !(norm > 0.0) {
            continue;
        }
        let normal = cross / norm;
        let offset = normal.dot(&pts[i]);
        let count = pts
            .iter()
            .filter(|p| (normal.dot(p) - offset).abs() <= thr)
            .count();
        if best.is_none_or(|(c, _, _)| count > c) {
            best = Some((count, normal, offset));
        }
    }
    let Some((_, normal, offset)) = best else {
        return Err(Error::Degenerate("no non-degenerate sample found".into()));
    };
    let inliers: Vec<Vector3<f64>> = pts
        .iter()
        .filter(|p| (normal.dot(p) - offset).abs() <= thr)
        .copied()
        .collect();
    tls(&inliers)
}
