use std::io::Write;

use serde::Serialize;

use super::runner::csv_error;
use crate::error::{Error, Result};
use crate::projector_sim::{theoretical_delta_t, theoretical_event_rate, SensorPreset};

/// Scanning frequencies covered by default, Hz.
pub const DEFAULT_FREQ_RANGE: (f64, f64) = (50.0, 290.0);

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DeltaTRow {
    pub preset: &'static str,
    pub width: usize,
    pub height: usize,
    pub scan_hz: f64,
    pub delta_t_s: f64,
    pub below_1us: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EventRateRow {
    pub preset: &'static str,
    pub width: usize,
    pub height: usize,
    pub scan_hz: f64,
    pub event_rate_ev_s: f64,
}

/// `start, start + step, ...` up to and including `stop`.
pub fn frequency_range(start: f64, stop: f64, step: f64) -> Result<Vec<f64>> {
    if !(start > 0.0 && stop >= start && step > 0.0 && stop.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "frequency range needs 0 < start <= stop and step > 0 (got {start}..{stop} step {step})"
        )));
    }
    let n = ((stop - start) / step + 1e-9).floor() as usize;
    Ok((0..=n).map(|i| start + i as f64 * step).collect())
}

/// Dense dwell time for every preset at every frequency.
pub fn sweep_delta_t(presets: &[SensorPreset], freqs: &[f64]) -> Result<Vec<DeltaTRow>> {
    let mut rows = Vec::with_capacity(presets.len() * freqs.len());
    for p in presets {
        for &f in freqs {
            let dt = theoretical_delta_t(f, p.resolution.width, p.resolution.height, 1)?;
            rows.push(DeltaTRow {
                preset: p.name,
                width: p.resolution.width,
                height: p.resolution.height,
                scan_hz: f,
                delta_t_s: dt,
                below_1us: dt < 1e-6,
            });
        }
    }
    Ok(rows)
}

/// Reflection event rate for every preset at every frequency with
/// `fraction` of the pixels lit.
pub fn sweep_event_rate(
    presets: &[SensorPreset],
    freqs: &[f64],
    fraction: f64,
) -> Result<Vec<EventRateRow>> {
    let mut rows = Vec::with_capacity(presets.len() * freqs.len());
    for p in presets {
        for &f in freqs {
            if !(f > 0.0 && f.is_finite()) {
                return Err(Error::InvalidArgument(format!(
                    "scan frequency {f} must be positive"
                )));
            }
            rows.push(EventRateRow {
                preset: p.name,
                width: p.resolution.width,
                height: p.resolution.height,
                scan_hz: f,
                event_rate_ev_s: theoretical_event_rate(
                    f,
                    p.resolution.width,
                    p.resolution.height,
                    fraction,
                )?,
            });
        }
    }
    Ok(rows)
}

pub fn write_rows_csv<T: Serialize, W: Write>(rows: &[T], writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    for r in rows {
        w.serialize(r).map_err(csv_error)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::projector_sim::SENSOR_PRESETS;

    #[test]
    fn range_is_inclusive() {
        let f = frequency_range(50.0, 290.0, 10.0).unwrap();
        assert_eq!(f.len(), 25);
        assert_eq!(*f.last().unwrap(), 290.0);
        assert!(frequency_range(0.0, 10.0, 1.0).is_err());
    }

    #[test]
    fn dvs128_at_60_is_the_only_slow_sensor() {
        let rows = sweep_delta_t(&SENSOR_PRESETS, &[60.0]).unwrap();
        let slow: Vec<_> = rows
            .iter()
            .filter(|r| !r.below_1us)
            .map(|r| r.preset)
            .collect();
        assert_eq!(slow, vec!["DVS128"]);
    }

    #[test]
    fn csv_has_header() {
        let rows = sweep_event_rate(&SENSOR_PRESETS[..1], &[50.0], 1.0).unwrap();
        let mut buf = Vec::new();
        write_rows_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("preset,width,height,scan_hz,event_rate_ev_s\n"));
        assert!(text.contains("DVS128,128,128,50.0,819200.0"));
    }
}
