use crate::error::{Error, Result};

/// Image size in pixels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Resolution {
    pub width: usize,
    pub height: usize,
}

impl Resolution {
    pub const fn new(width: usize, height: usize) -> Self {
        Self { width, height }
    }

    /// Number of pixels.
    pub const fn len(&self) -> usize {
        self.width * self.height
    }

    pub const fn is_empty(&self) -> bool {
        self.len() == 0
    }

    #[inline]
    pub const fn index(&self, x: usize, y: usize) -> usize {
        y * self.width + x
    }

    #[inline]
    pub const fn contains(&self, x: i64, y: i64) -> bool {
        x >= 0 && y >= 0 && (x as usize) < self.width && (y as usize) < self.height
    }
}

impl std::fmt::Display for Resolution {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}x{}", self.width, self.height)
    }
}

/// Sign of a brightness change.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Polarity {
    Negative,
    Positive,
}

impl Polarity {
    #[inline]
    pub fn sign(self) -> f64 {
        match self {
            Polarity::Positive => 1.0,
            Polarity::Negative => -1.0,
        }
    }

    pub fn as_i8(self) -> i8 {
        match self {
            Polarity::Positive => 1,
            Polarity::Negative => -1,
        }
    }

    pub fn from_i64(p: i64) -> Option<Self> {
        match p {
            1 => Some(Polarity::Positive),
            -1 => Some(Polarity::Negative),
            _ => None,
        }
    }
}

/// A single timestamped brightness-change event.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Event {
    /// Timestamp in microseconds.
    pub t: f64,
    pub x: u32,
    pub y: u32,
    pub polarity: Polarity,
}

impl Event {
    pub fn new(t: f64, x: u32, y: u32, polarity: Polarity) -> Self {
        Self { t, x, y, polarity }
    }

    pub fn positive(t: f64, x: u32, y: u32) -> Self {
        Self::new(t, x, y, Polarity::Positive)
    }

    /// Total order used to canonicalize streams: time, then row, column, polarity.
    pub(crate) fn canonical_cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.t
            .total_cmp(&other.t)
            .then(self.y.cmp(&other.y))
            .then(self.x.cmp(&other.x))
            .then(self.polarity.as_i8().cmp(&other.polarity.as_i8()))
    }
}

/// Half-open time interval `[start, end)` in microseconds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeWindow {
    pub start: f64,
    pub end: f64,
}

impl TimeWindow {
    pub fn new(start: f64, end: f64) -> Result<Self> {
        if !(start.is_finite() && end.is_finite()) || start > end {
            return Err(Error::InvalidArgument(format!(
                "time window [{start}, {end}) is not a valid interval"
            )));
        }
        Ok(Self { start, end })
    }

    #[inline]
    pub fn contains(&self, t: f64) -> bool {
        self.start <= t && t < self.end
    }

    pub fn duration(&self) -> f64 {
        self.end - self.start
    }
}

/// Time-ordered events at a fixed sensor resolution.
#[derive(Debug, Clone, PartialEq)]
pub struct EventStream {
    resolution: Resolution,
    events: Vec<Event>,
}

impl EventStream {
    /// Builds a stream, checking pixel bounds and time ordering.
    pub fn new(resolution: Resolution, events: Vec<Event>) -> Result<Self> {
        for (i, e) in events.iter().enumerate() {
            check_event(resolution, e, i)?;
        }
        if let Some(i) = events.windows(2).position(|w| w[1].t < w[0].t) {
            return Err(Error::InvalidInput(format!(
                "events not sorted by time at index {}",
                i + 1
            )));
        }
        Ok(Self { resolution, events })
    }

    /// Builds a stream from events in arbitrary order, sorting them canonically.
    pub fn from_unsorted(resolution: Resolution, mut events: Vec<Event>) -> Result<Self> {
        for (i, e) in events.iter().enumerate() {
            check_event(resolution, e, i)?;
        }
        events.sort_by(Event::canonical_cmp);
        Ok(Self { resolution, events })
    }

    pub fn empty(resolution: Resolution) -> Self {
        Self {
            resolution,
            events: Vec::new(),
        }
    }

    pub fn resolution(&self) -> Resolution {
        self.resolution
    }

    pub fn events(&self) -> &[Event] {
        &self.events
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    pub fn into_events(self) -> Vec<Event> {
        self.events
    }

    /// Events with `t` inside the half-open window.
    pub fn slice(&self, window: TimeWindow) -> &[Event] {
        let lo = self.events.partition_point(|e| e.t < window.start);
        let hi = self.events.partition_point(|e| e.t < window.end);
        &self.events[lo..hi.max(lo)]
    }

    /// A new stream holding only the events inside the window.
    pub fn sub_stream(&self, window: TimeWindow) -> EventStream {
        EventStream {
            resolution: self.resolution,
            events: self.slice(window).to_vec(),
        }
    }
}

fn check_event(resolution: Resolution, e: &Event, i: usize) -> Result<()> {
    if !e.t.is_finite() || e.t < 0.0 {
        return Err(Error::InvalidInput(format!(
            "event {i} has invalid timestamp {}",
            e.t
        )));
    }
    if e.x as usize >= resolution.width || e.y as usize >= resolution.height {
        return Err(Error::InvalidInput(format!(
            "event {i} at ({}, {}) outside {resolution}",
            e.x, e.y
        )));
    }
    Ok(())
}
