use crate::error::{Error, Result};
use crate::event_core::DepthMap;

/// Fills every invalid pixel with the inverse-squared-distance weighted mean
/// of its `neighbors` nearest valid pixels. Valid pixels are kept as is.
///
/// This is a simple non-learned baseline for densifying sparse samples.
pub fn inpaint_depth(sparse: &DepthMap, neighbors: usize) -> Result<DepthMap> {
    if neighbors == 0 {
        return Err(Error::InvalidArgument(
            "inpainting needs at least one neighbor".into(),
        ));
    }
    if sparse.valid_count() == 0 {
        return Err(Error::Degenerate(
            "no valid depth samples to inpaint from".into(),
        ));
    }
    let res = sparse.resolution();
    let (w, h) = (res.width as i64, res.height as i64);
    let max_ring = w.max(h);
    let mut candidates: Vec<(i64, usize)> = Vec::new();
    let mut out = Vec::with_capacity(res.len());
    for y in 0..h {
        for x in 0..w {
            if let Some(d) = sparse.get(x as usize, y as usize) {
                out.push(Some(d));
                continue;
            }
            // grow square rings until the k-th nearest cannot improve
            candidates.clear();
            for r in 1..=max_ring {
                for (xx, yy) in ring(x, y, r) {
                    if xx < 0 || yy < 0 || xx >= w || yy >= h {
                        continue;
                    }
                    let (xu, yu) = (xx as usize, yy as usize);
                    if sparse.get(xu, yu).is_some() {
                        let d2 = (xx - x).pow(2) + (yy - y).pow(2);
                        candidates.push((d2, res.index(xu, yu)));
                    }
                }
                if candidates.len() >= neighbors {
                    candidates.sort_unstable();
                    if candidates[neighbors - 1].0 <= r * r {
                        break;
                    }
                }
            }
            candidates.sort_unstable();
            let (mut num, mut den) = (0.0, 0.0);
            for &(d2, idx) in candidates.iter().take(neighbors) {
                let wgt = 1.0 / d2 as f64;
                num += wgt * sparse.values()[idx].expect("candidate is valid");
                den += wgt;
            }
            out.push(Some(num / den));
        }
    }
    DepthMap::new(res, out)
}

/// Pixels at Chebyshev distance exactly `r` from `(x, y)`.
fn ring(x: i64, y: i64, r: i64) -> impl Iterator<Item = (i64, i64)> {
    let top_bottom = (-r..=r).flat_map(move |dx| [(x + dx, y - r), (x + dx, y + r)]);
    let sides = (-r + 1..r).flat_map(move |dy| [(x - r, y + dy), (x + r, y + dy)]);
    top_bottom.chain(sides)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::event_core::Resolution;

    #[test]
    fn valid_map_unchanged() {
        let res = Resolution::new(5, 4);
        let map = DepthMap::new(res, (0..20).map(|i| Some(1.0 + i as f64)).collect()).unwrap();
        assert_eq!(inpaint_depth(&map, 4).unwrap(), map);
    }

    #[test]
    fn constant_samples_fill_constant() {
        let res = Resolution::new(20, 15);
        let map = DepthMap::new(
            res,
            (0..res.len())
                .map(|i| (i % 17 == 0).then_some(3.5))
                .collect(),
        )
        .unwrap();
        let dense = inpaint_depth(&map, 4).unwrap();
        assert!(dense
            .values()
            .iter()
            .all(|d| (d.unwrap() - 3.5).abs() < 1e-12));
    }

    #[test]
    fn matches_brute_force_nearest() {
        let res = Resolution::new(12, 9);
        let raw: Vec<Option<f64>> = (0..res.len())
            .map(|i| (i * 7 % 11 == 0).then_some(1.0 + (i % 5) as f64))
            .collect();
        let map = DepthMap::new(res, raw.clone()).unwrap();
        let k = 3;
        let dense = inpaint_depth(&map, k).unwrap();
        for y in 0..9i64 {
            for x in 0..12i64 {
                let i = res.index(x as usize, y as usize);
                if raw[i].is_some() {
                    continue;
                }
                let mut all: Vec<(i64, usize)> = (0..res.len())
                    .filter(|&j| raw[j].is_some())
                    .map(|j| {
                        let (jx, jy) = ((j % 12) as i64, (j / 12) as i64);
                        ((jx - x).pow(2) + (jy - y).pow(2), j)
                    })
                    .collect();
                all.sort_unstable();
                let (n, d): (f64, f64) = all[..k].iter().fold((0.0, 0.0), |(n, d), &(d2, j)| {
                    (n + raw[j].unwrap() / d2 as f64, d + 1.0 / d2 as f64)
                });
                assert!((dense.values()[i].unwrap() - n / d).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn step_scene_stays_within_sample_range() {
        let res = Resolution::new(30, 20);
        let raw = (0..res.len())
            .map(|i| (i % 9 == 0).then_some(if i % 30 < 15 { 1.0 } else { 4.0 }))
            .collect();
        let dense = inpaint_depth(&DepthMap::new(res, raw).unwrap(), 6).unwrap();
        assert!(dense
            .values()
            .iter()
            .all(|d| (1.0..=4.0).contains(&d.unwrap())));
    }

    #[test]
    fn all_invalid_is_degenerate() {
        let map = DepthMap::invalid(Resolution::new(4, 4));
        assert!(matches!(inpaint_depth(&map, 3), Err(Error::Degenerate(_))));
    }
}
