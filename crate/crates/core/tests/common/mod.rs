//! Brute-force oracles and seeded suites shared by the property and
//! acceptance targets. Each oracle is written from the defining formula,
//! independently of the library code it checks.
#![allow(dead_code)]

use std::collections::VecDeque;
use std::path::{Path, PathBuf};

use nalgebra::Vector3;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use evguide::depth_estimation::{decode_projector_pixel, fit_plane, PointCloud};
use evguide::event_core::{
    make_event_frame, make_time_surface, make_voxel_grid, Event, EventFrame, EventStream,
    LogDepthCodec, Polarity, Resolution, TimeWindow,
};
use evguide::projector_sim::{build_scan_plan, ProjectorModel};
use evguide::sampling_policy::{detect_roi, median_filter_frame, IlluminationMask};

pub type Check = Result<(), String>;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn scenario_path(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../scenarios")
        .join(name)
}

pub fn random_events(
    rng: &mut impl Rng,
    res: Resolution,
    n: usize,
    t_lo: f64,
    t_hi: f64,
) -> Vec<Event> {
    (0..n)
        .map(|_| {
            let pol = if rng.random::<bool>() {
                Polarity::Positive
            } else {
                Polarity::Negative
            };
            Event::new(
                rng.random_range(t_lo..t_hi),
                rng.random_range(0..res.width as u32),
                rng.random_range(0..res.height as u32),
                pol,
            )
        })
        .collect()
}

pub fn random_stream(
    rng: &mut impl Rng,
    res: Resolution,
    n: usize,
    t_lo: f64,
    t_hi: f64,
) -> EventStream {
    EventStream::from_unsorted(res, random_events(rng, res, n, t_lo, t_hi)).unwrap()
}

// ---------------------------------------------------------------- oracles

/// Triangle-kernel voxel grid summed bin by bin over every event.
pub fn oracle_voxel(
    events: &[Event],
    res: Resolution,
    bins: usize,
    t0: f64,
    span: f64,
) -> Vec<f64> {
    let plane = res.len();
    let mut v = vec![0.0; bins * plane];
    for e in events {
        let t_star = (bins - 1) as f64 * (e.t - t0) / span;
        let sign = if e.polarity == Polarity::Positive {
            1.0
        } else {
            -1.0
        };
        for b in 0..bins {
            let w = (1.0 - (b as f64 - t_star).abs()).max(0.0);
            v[b * plane + e.y as usize * res.width + e.x as usize] += sign * w;
        }
    }
    v
}

pub fn oracle_frame(events: &[Event], res: Resolution, window: TimeWindow) -> Vec<u32> {
    let mut c = vec![0; res.len()];
    for e in events
        .iter()
        .filter(|e| e.t >= window.start && e.t < window.end)
    {
        c[e.y as usize * res.width + e.x as usize] += 1;
    }
    c
}

pub fn oracle_surface(events: &[Event], res: Resolution, window: TimeWindow) -> Vec<Option<f64>> {
    let mut s: Vec<Option<f64>> = vec![None; res.len()];
    for e in events
        .iter()
        .filter(|e| e.t >= window.start && e.t < window.end)
    {
        let slot = &mut s[e.y as usize * res.width + e.x as usize];
        if slot.is_none_or(|t| e.t > t) {
            *slot = Some(e.t);
        }
    }
    s
}

/// Full sort of each zero-padded neighbourhood.
pub fn oracle_median(counts: &[u32], res: Resolution, kernel: usize) -> Vec<u32> {
    let r = (kernel / 2) as i64;
    let mut out = vec![0; res.len()];
    for y in 0..res.height as i64 {
        for x in 0..res.width as i64 {
            let mut win = Vec::new();
            for yy in y - r..=y + r {
                for xx in x - r..=x + r {
                    let inside =
                        xx >= 0 && yy >= 0 && xx < res.width as i64 && yy < res.height as i64;
                    win.push(if inside {
                        counts[(yy * res.width as i64 + xx) as usize]
                    } else {
                        0
                    });
                }
            }
            win.sort_unstable();
            out[(y * res.width as i64 + x) as usize] = win[win.len() / 2];
        }
    }
    out
}

/// Breadth-first flood fill over 8-neighbours; returns sorted dilated boxes.
pub fn oracle_boxes(
    counts: &[u32],
    res: Resolution,
    threshold: u32,
    min_area: usize,
    dilation: usize,
) -> Vec<(usize, usize, usize, usize)> {
    let (w, h) = (res.width as i64, res.height as i64);
    let mut seen = vec![false; res.len()];
    let mut boxes = Vec::new();
    for start in 0..res.len() {
        if seen[start] || counts[start] < threshold {
            continue;
        }
        seen[start] = true;
        let mut queue = VecDeque::from([start]);
        let (mut x0, mut y0, mut x1, mut y1) = (usize::MAX, usize::MAX, 0, 0);
        let mut area = 0;
        while let Some(k) = queue.pop_front() {
            let (x, y) = ((k % res.width) as i64, (k / res.width) as i64);
            area += 1;
            x0 = x0.min(x as usize);
            y0 = y0.min(y as usize);
            x1 = x1.max(x as usize);
            y1 = y1.max(y as usize);
            for dy in -1..=1 {
                for dx in -1..=1 {
                    let (nx, ny) = (x + dx, y + dy);
                    if nx < 0 || ny < 0 || nx >= w || ny >= h {
                        continue;
                    }
                    let n = (ny * w + nx) as usize;
                    if !seen[n] && counts[n] >= threshold {
                        seen[n] = true;
                        queue.push_back(n);
                    }
                }
            }
        }
        if area >= min_area {
            boxes.push((
                x0.saturating_sub(dilation),
                y0.saturating_sub(dilation),
                (x1 + dilation).min(res.width - 1),
                (y1 + dilation).min(res.height - 1),
            ));
        }
    }
    boxes.sort_unstable();
    boxes
}

/// Parses a binary PBM into on/off bits, row-major.
pub fn read_pbm(bytes: &[u8]) -> (Resolution, Vec<bool>) {
    let text_end = bytes
        .iter()
        .enumerate()
        .filter(|(_, b)| **b == b'\n')
        .nth(1)
        .map(|(i, _)| i + 1)
        .expect("pbm header");
    let header = std::str::from_utf8(&bytes[..text_end]).unwrap();
    let mut it = header.split_whitespace();
    assert_eq!(it.next(), Some("P4"));
    let w: usize = it.next().unwrap().parse().unwrap();
    let h: usize = it.next().unwrap().parse().unwrap();
    let row = w.div_ceil(8);
    let data = &bytes[text_end..];
    assert_eq!(data.len(), row * h);
    let bits = (0..w * h)
        .map(|k| {
            let (x, y) = (k % w, k / w);
            data[y * row + x / 8] & (0x80 >> (x % 8)) != 0
        })
        .collect();
    (Resolution::new(w, h), bits)
}

// ----------------------------------------------------------------- suites

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

/// Oracle agreement, mass conservation and additivity of voxel grids.
pub fn voxel_suite(cases: u64) -> Check {
    for case in 0..cases {
        let mut r = rng(0x7630 + case);
        let res = Resolution::new(r.random_range(1..12), r.random_range(1..12));
        let bins = r.random_range(2..9);
        let t0 = r.random_range(2e3..3e3);
        let span = r.random_range(1.0..1e4);
        let n = r.random_range(0..200);

        // some events outside the window exercise the clipping
        let wide = random_events(&mut r, res, n, t0 - 0.2 * span, t0 + 1.2 * span);
        let grid = make_voxel_grid(
            &EventStream::from_unsorted(res, wide.clone()).unwrap(),
            bins,
            t0,
            span,
        )
        .map_err(|e| e.to_string())?;
        let oracle = oracle_voxel(&wide, res, bins, t0, span);
        if let Some(i) = (0..oracle.len()).find(|&i| !close(grid.values()[i], oracle[i], 1e-9)) {
            return Err(format!(
                "voxel case {case}: cell {i} is {} expected {}",
                grid.values()[i],
                oracle[i]
            ));
        }

        let inside = random_events(&mut r, res, n, t0, t0 + span);
        let net: f64 = inside.iter().map(|e| e.polarity.sign()).sum();
        let (a, b) = inside.split_at(n / 2);
        let whole = make_voxel_grid(
            &EventStream::from_unsorted(res, inside.clone()).unwrap(),
            bins,
            t0,
            span,
        )
        .unwrap();
        if !close(whole.sum(), net, 1e-9) {
            return Err(format!(
                "voxel case {case}: mass {} expected {net}",
                whole.sum()
            ));
        }
        let ga = make_voxel_grid(
            &EventStream::from_unsorted(res, a.to_vec()).unwrap(),
            bins,
            t0,
            span,
        )
        .unwrap();
        let gb = make_voxel_grid(
            &EventStream::from_unsorted(res, b.to_vec()).unwrap(),
            bins,
            t0,
            span,
        )
        .unwrap();
        for i in 0..whole.values().len() {
            if !close(whole.values()[i], ga.values()[i] + gb.values()[i], 1e-9) {
                return Err(format!("voxel case {case}: additivity fails at cell {i}"));
            }
        }
    }
    Ok(())
}

pub fn log_depth_suite(cases: u64) -> Check {
    let codec = LogDepthCodec::default();
    let mut r = rng(0x1d);
    for _ in 0..cases {
        let d = 10f64.powf(r.random_range(-3.0..3.0));
        let back = codec.decode_value(codec.encode_value(d).map_err(|e| e.to_string())?);
        if ((back - d) / d).abs() > 1e-9 {
            return Err(format!("log-depth round trip {d} -> {back}"));
        }
    }
    Ok(())
}

/// Event frame and time surface against brute force on 32x32 streams.
pub fn frame_surface_suite(cases: u64) -> Check {
    let res = Resolution::new(32, 32);
    for case in 0..cases {
        let mut r = rng(0xf4a3e + case);
        let n = r.random_range(0..3000);
        let stream = random_stream(&mut r, res, n, 0.0, 1e4);
        let a = r.random_range(0.0..9e3);
        let window = TimeWindow::new(a, a + r.random_range(1.0..5e3)).unwrap();
        let frame = make_event_frame(&stream, window);
        if frame.counts() != oracle_frame(stream.events(), res, window).as_slice() {
            return Err(format!("event frame mismatch in case {case}"));
        }
        let surface = make_time_surface(&stream, window);
        if surface.values() != oracle_surface(stream.events(), res, window).as_slice() {
            return Err(format!("time surface mismatch in case {case}"));
        }
    }
    Ok(())
}

/// Median filter and connected components against brute force.
pub fn median_components_suite(cases: u64) -> Check {
    for case in 0..cases {
        let mut r = rng(0x3ed + case);
        let res = Resolution::new(r.random_range(1..40), r.random_range(1..40));
        let density = r.random_range(0.05..0.7);
        let counts: Vec<u32> = (0..res.len())
            .map(|_| {
                if r.random::<f64>() < density {
                    r.random_range(1..4)
                } else {
                    0
                }
            })
            .collect();
        let window = TimeWindow::new(0.0, 1.0).unwrap();
        let frame = EventFrame::from_counts(res, counts.clone(), window).unwrap();

        let kernel = [1, 3, 5][r.random_range(0..3)];
        let filtered = median_filter_frame(&frame, kernel).map_err(|e| e.to_string())?;
        if filtered.counts() != oracle_median(&counts, res, kernel).as_slice() {
            return Err(format!(
                "median filter mismatch in case {case} (kernel {kernel})"
            ));
        }

        let threshold = r.random_range(1..3);
        let min_area = r.random_range(0..6);
        let dilation = r.random_range(0..4);
        let rois = detect_roi(&frame, threshold, min_area, dilation).map_err(|e| e.to_string())?;
        let mut got: Vec<_> = rois
            .boxes
            .iter()
            .map(|b| (b.x_min, b.y_min, b.x_max, b.y_max))
            .collect();
        got.sort_unstable();
        if got != oracle_boxes(&counts, res, threshold, min_area, dilation) {
            return Err(format!("connected components mismatch in case {case}"));
        }
    }
    Ok(())
}

/// Every firing of a random mask decodes back to its own projector pixel.
pub fn decode_round_trip_suite(maskings: u64) -> Check {
    let mut r = rng(0xdec0de);
    for case in 0..maskings {
        let res = Resolution::new(r.random_range(1..25), r.random_range(1..17));
        let hz = r.random_range(30.0..300.0);
        let t0 = r.random_range(0.0..1e6);
        let density = r.random::<f64>();
        let bits: Vec<bool> = (0..res.len())
            .map(|_| r.random::<f64>() < density)
            .collect();
        let mask = IlluminationMask::from_fn(res, |k| bits[k]);
        let projector = ProjectorModel::new(res, hz).unwrap();
        let plan = build_scan_plan(&projector, &mask, t0).map_err(|e| e.to_string())?;
        if plan.firings.len() != bits.iter().filter(|b| **b).count() {
            return Err(format!(
                "masking {case}: firing count differs from lit pixels"
            ));
        }
        let dwell = 1e6 / (hz * res.len() as f64);
        for f in &plan.firings {
            let expected_t = t0 + f.k as f64 * dwell;
            if !bits[f.k] || f.k != f.row * res.width + f.col || (f.t - expected_t).abs() > 1e-6 {
                return Err(format!(
                    "masking {case}: firing {f:?} inconsistent with raster clock"
                ));
            }
            let decoded = decode_projector_pixel(f.t, &projector, t0).map_err(|e| e.to_string())?;
            if decoded != (f.row, f.col) {
                return Err(format!(
                    "masking {case}: firing {f:?} decoded as {decoded:?}"
                ));
            }
        }
    }
    Ok(())
}

/// TLS rms of a noisy z = 2 plane with uniform +-1 mm depth noise.
pub fn plane_monte_carlo_rms(points: usize, seed: u64) -> f64 {
    let mut r = rng(seed);
    let cloud: PointCloud = (0..points)
        .map(|_| {
            Vector3::new(
                r.random_range(-1.0..1.0),
                r.random_range(-1.0..1.0),
                2.0 + r.random_range(-1e-3..1e-3),
            )
        })
        .collect();
    fit_plane(&cloud).unwrap().rms
}

pub fn plane_monte_carlo_suite() -> Check {
    let expected = 1e-3 / 3f64.sqrt();
    let rms = plane_monte_carlo_rms(10_000, 0x91a4e);
    if ((rms - expected) / expected).abs() <= 0.10 {
        Ok(())
    } else {
        Err(format!("plane rms {rms} m vs {expected} m"))
    }
}
