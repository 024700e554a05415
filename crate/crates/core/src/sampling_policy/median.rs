use crate::error::{Error, Result};
use crate::event_core::EventFrame;

/// Median of the `kernel x kernel` neighborhood of each pixel, with
/// out-of-frame neighbors counted as zero.
pub fn median_filter_frame(frame: &EventFrame, kernel: usize) -> Result<EventFrame> {
    if kernel == 0 || kernel.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!(
            "median kernel must be odd and >= 1, got {kernel}"
        )));
    }
    if kernel == 1 {
        return Ok(frame.clone());
    }
    let res = frame.resolution();
    let (w, h) = (res.width as i64, res.height as i64);
    let r = (kernel / 2) as i64;
    let mid = kernel * kernel / 2;
    let mut window = Vec::with_capacity(kernel * kernel);
    let mut out = vec![0u32; res.len()];
    for y in 0..h {
        for x in 0..w {
            window.clear();
            for dy in -r..=r {
                for dx in -r..=r {
                    let (xx, yy) = (x + dx, y + dy);
                    let v = if xx >= 0 && yy >= 0 && xx < w && yy < h {
                        frame.count(xx as usize, yy as usize)
                    } else {
                        0
                    };
                    window.push(v);
                }
            }
            let (_, m, _) = window.select_nth_unstable(mid);
            out[res.index(x as usize, y as usize)] = *m;
        }
    }
    EventFrame::from_counts(res, out, frame.window())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::event_core::{Resolution, TimeWindow};

    fn frame(res: Resolution, on: &[(usize, usize)]) -> EventFrame {
        let mut counts = vec![0; res.len()];
        for &(x, y) in on {
            counts[res.index(x, y)] = 1;
        }
        EventFrame::from_counts(res, counts, TimeWindow::new(0.0, 1.0).unwrap()).unwrap()
    }

    #[test]
    fn removes_isolated_pixel() {
        let f = frame(Resolution::new(9, 9), &[(4, 4)]);
        assert_eq!(median_filter_frame(&f, 3).unwrap().total(), 0);
    }

    #[test]
    fn kernel_one_is_identity() {
        let f = frame(Resolution::new(5, 5), &[(1, 1), (3, 2)]);
        assert_eq!(median_filter_frame(&f, 1).unwrap(), f);
    }

    #[test]
    fn solid_block_keeps_pixels_with_five_active_neighbors() {
        let res = Resolution::new(11, 11);
        let block: Vec<_> = (3..8).flat_map(|y| (3..8).map(move |x| (x, y))).collect();
        let out = median_filter_frame(&frame(res, &block), 3).unwrap();
        for y in 0..11 {
            for x in 0..11 {
                // count of block pixels in the 3x3 window
                let n = block
                    .iter()
                    .filter(|&&(bx, by)| bx.abs_diff(x) <= 1 && by.abs_diff(y) <= 1)
                    .count();
                assert_eq!(out.count(x, y), u32::from(n >= 5), "({x}, {y})");
            }
        }
        // the four corners of the block have only 4 active neighbors
        assert_eq!(out.count(3, 3), 0);
        assert_eq!(out.count(4, 3), 1);
        assert_eq!(out.total(), 21);
    }

    #[test]
    fn rejects_even_kernel() {
        let f = frame(Resolution::new(3, 3), &[]);
        assert!(matches!(
            median_filter_frame(&f, 2),
            Err(Error::InvalidArgument(_))
        ));
        assert!(median_filter_frame(&f, 0).is_err());
    }
}
