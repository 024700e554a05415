use super::event::{EventStream, Resolution, TimeWindow};
use crate::error::{Error, Result};

/// Per-pixel event counts accumulated over a time window.
#[derive(Debug, Clone, PartialEq)]
pub struct EventFrame {
    resolution: Resolution,
    counts: Vec<u32>,
    window: TimeWindow,
}

impl EventFrame {
    pub fn zeros(resolution: Resolution, window: TimeWindow) -> Self {
        Self {
            resolution,
            counts: vec![0; resolution.len()],
            window,
        }
    }

    /// Wraps row-major counts; the length must match the resolution.
    pub fn from_counts(
        resolution: Resolution,
        counts: Vec<u32>,
        window: TimeWindow,
    ) -> Result<Self> {
        if counts.len() != resolution.len() {
            return Err(Error::InvalidInput(format!(
                "{} counts for a {resolution} frame",
                counts.len()
            )));
        }
        Ok(Self {
            resolution,
            counts,
            window,
        })
    }

    pub fn resolution(&self) -> Resolution {
        self.resolution
    }

    pub fn window(&self) -> TimeWindow {
        self.window
    }

    pub fn counts(&self) -> &[u32] {
        &self.counts
    }

    #[inline]
    pub fn count(&self, x: usize, y: usize) -> u32 {
        self.counts[self.resolution.index(x, y)]
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().map(|&c| u64::from(c)).sum()
    }
}

/// Count events per pixel with `t_start <= t < t_end`.
pub fn make_event_frame(stream: &EventStream, window: TimeWindow) -> EventFrame {
    let mut frame = EventFrame::zeros(stream.resolution(), window);
    let res = stream.resolution();
    for e in stream.slice(window) {
        frame.counts[res.index(e.x as usize, e.y as usize)] += 1;
    }
    frame
}

/// Most recent event timestamp per pixel within a window.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSurface {
    resolution: Resolution,
    last_t: Vec<Option<f64>>,
    window: TimeWindow,
}

impl TimeSurface {
    pub fn empty(resolution: Resolution, window: TimeWindow) -> Self {
        Self {
            resolution,
            last_t: vec![None; resolution.len()],
            window,
        }
    }

    pub fn resolution(&self) -> Resolution {
        self.resolution
    }

    pub fn window(&self) -> TimeWindow {
        self.window
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> Option<f64> {
        self.last_t[self.resolution.index(x, y)]
    }

    pub fn values(&self) -> &[Option<f64>] {
        &self.last_t
    }

    /// Pixels carrying a timestamp.
    pub fn occupied(&self) -> usize {
        self.last_t.iter().filter(|t| t.is_some()).count()
    }
}

pub fn make_time_surface(stream: &EventStream, window: TimeWindow) -> TimeSurface {
    let mut surface = TimeSurface::empty(stream.resolution(), window);
    let res = stream.resolution();
    for e in stream.slice(window) {
        let slot = &mut surface.last_t[res.index(e.x as usize, e.y as usize)];
        // the stream is time-sorted, but keep the max explicit for ties
        *slot = Some(slot.map_or(e.t, |t| t.max(e.t)));
    }
    surface
}
