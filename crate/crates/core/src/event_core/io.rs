//! Shared event-stream text format.
//!
//! One event per line after the header `t_us,x,y,p`, e.g. `12.500,305,211,1`.
//! Timestamps are written with three decimals and polarity as `1` or `-1`.

use std::io::{Read, Write};

use super::event::{Event, EventStream, Polarity, Resolution};
use crate::error::{Error, Result};

pub const HEADER: [&str; 4] = ["t_us", "x", "y", "p"];

pub fn write_events<W: Write>(stream: &EventStream, writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(HEADER).map_err(csv_err)?;
    for e in stream.events() {
        w.write_record([
            format!("{:.3}", e.t),
            e.x.to_string(),
            e.y.to_string(),
            e.polarity.as_i8().to_string(),
        ])
        .map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

/// Reads a stream. Without an explicit resolution, the bounding size of the
/// event coordinates is used.
pub fn read_events<R: Read>(reader: R, resolution: Option<Resolution>) -> Result<EventStream> {
    let mut r = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(reader);
    let header = r.headers().map_err(csv_err)?.clone();
    if header.iter().collect::<Vec<_>>() != HEADER {
        return Err(Error::Parse {
            line: 1,
            message: format!(
                "expected header `t_us,x,y,p`, found `{}`",
                header.iter().collect::<Vec<_>>().join(",")
            ),
        });
    }
    let mut events = Vec::new();
    for (i, record) in r.records().enumerate() {
        let line = i + 2;
        let record = record.map_err(csv_err)?;
        let field = |k: usize| record.get(k).unwrap_or("");
        let parse_err = |what: &str| Error::Parse {
            line,
            message: format!("bad {what} field"),
        };
        let t: f64 = field(0).parse().map_err(|_| parse_err("t_us"))?;
        let x: u32 = field(1).parse().map_err(|_| parse_err("x"))?;
        let y: u32 = field(2).parse().map_err(|_| parse_err("y"))?;
        let p = field(3)
            .parse::<i64>()
            .ok()
            .and_then(Polarity::from_i64)
            .ok_or_else(|| parse_err("p"))?;
        events.push(Event::new(t, x, y, p));
    }
    let resolution = resolution.unwrap_or_else(|| {
        let w = events.iter().map(|e| e.x as usize + 1).max().unwrap_or(0);
        let h = events.iter().map(|e| e.y as usize + 1).max().unwrap_or(0);
        Resolution::new(w, h)
    });
    EventStream::new(resolution, events)
}

fn csv_err(e: csv::Error) -> Error {
    let line = e.position().map_or(0, |p| p.line() as usize);
    Error::Parse {
        line,
        message: e.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn writes_expected_text() {
        let s = EventStream::new(
            Resolution::new(400, 300),
            vec![
                Event::positive(12.5, 305, 211),
                Event::new(13.0, 1, 2, Polarity::Negative),
            ],
        )
        .unwrap();
        let mut buf = Vec::new();
        write_events(&s, &mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "t_us,x,y,p\n12.500,305,211,1\n13.000,1,2,-1\n"
        );
    }

    #[test]
    fn reads_back() {
        let text = "t_us,x,y,p\n12.500,305,211,1\n13.000,1,2,-1\n";
        let s = read_events(text.as_bytes(), None).unwrap();
        assert_eq!(s.resolution(), Resolution::new(306, 212));
        assert_eq!(s.events()[1], Event::new(13.0, 1, 2, Polarity::Negative));
    }

    #[test]
    fn reports_bad_lines() {
        let err = read_events("t_us,x,y,p\n1.0,2,3,0\n".as_bytes(), None).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");
        assert!(read_events("t,x,y,p\n".as_bytes(), None).is_err());
    }
}
