//! 16-bit PGM output for intensity and depth images.
//!
//! Depth images store `round(depth / meters_per_unit)` with 0 for invalid
//! pixels; the scale goes into a sidecar text file next to the image.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::event_core::{DepthMap, Resolution};
use crate::scene_sim::IntensityImage;

/// Binary 16-bit PGM (P5, maxval 65535, big-endian samples).
pub fn write_pgm16<W: Write>(resolution: Resolution, samples: &[u16], mut writer: W) -> Result<()> {
    if samples.len() != resolution.len() {
        return Err(Error::InvalidInput(format!(
            "{} samples for a {resolution} image",
            samples.len()
        )));
    }
    write!(
        writer,
        "P5\n{} {}\n65535\n",
        resolution.width, resolution.height
    )?;
    let bytes: Vec<u8> = samples.iter().flat_map(|s| s.to_be_bytes()).collect();
    writer.write_all(&bytes)?;
    Ok(())
}

/// Reads back a file written by [`write_pgm16`].
pub fn read_pgm16(bytes: &[u8]) -> Result<(Resolution, Vec<u16>)> {
    let bad = |m: &str| Error::Parse {
        line: 0,
        message: format!("pgm: {m}"),
    };
    let mut fields = Vec::new();
    let mut pos = 0;
    while fields.len() < 4 {
        while pos < bytes.len() && bytes[pos].is_ascii_whitespace() {
            pos += 1;
        }
        let start = pos;
        while pos < bytes.len() && !bytes[pos].is_ascii_whitespace() {
            pos += 1;
        }
        if start == pos {
            return Err(bad("truncated header"));
        }
        fields.push(std::str::from_utf8(&bytes[start..pos]).map_err(|_| bad("header not ascii"))?);
    }
    if fields[0] != "P5" || fields[3] != "65535" {
        return Err(bad("expected P5 with maxval 65535"));
    }
    let w: usize = fields[1].parse().map_err(|_| bad("width"))?;
    let h: usize = fields[2].parse().map_err(|_| bad("height"))?;
    let data = &bytes[pos + 1..];
    if data.len() != 2 * w * h {
        return Err(bad("pixel data length mismatch"));
    }
    let samples = data
        .chunks_exact(2)
        .map(|c| u16::from_be_bytes([c[0], c[1]]))
        .collect();
    Ok((Resolution::new(w, h), samples))
}

pub fn intensity_samples(image: &IntensityImage) -> Vec<u16> {
    image
        .values
        .iter()
        .map(|v| (v.clamp(0.0, 1.0) * 65535.0).round() as u16)
        .collect()
}

/// Depth quantized to `meters_per_unit` steps, saturating at 65535.
pub fn depth_samples(map: &DepthMap, meters_per_unit: f64) -> Vec<u16> {
    map.values()
        .iter()
        .map(|d| match d {
            Some(d) => (d / meters_per_unit).round().clamp(1.0, 65535.0) as u16,
            None => 0,
        })
        .collect()
}

/// Writes `<path>` as a depth PGM and `<path>.scale` holding the scale.
pub fn write_depth_pgm(path: &Path, map: &DepthMap, meters_per_unit: f64) -> Result<()> {
    let mut buf = Vec::new();
    write_pgm16(
        map.resolution(),
        &depth_samples(map, meters_per_unit),
        &mut buf,
    )?;
    fs::write(path, buf).map_err(|e| Error::io(path, e))?;
    let sidecar = scale_sidecar_path(path);
    fs::write(
        &sidecar,
        format!("meters_per_unit={meters_per_unit}\ninvalid=0\n"),
    )
    .map_err(|e| Error::io(&sidecar, e))
}

pub fn scale_sidecar_path(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".scale");
    PathBuf::from(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pgm_header_and_byte_order() {
        let mut buf = Vec::new();
        write_pgm16(Resolution::new(2, 1), &[1, 0x1234], &mut buf).unwrap();
        assert_eq!(buf, b"P5\n2 1\n65535\n\x00\x01\x12\x34");
        let (res, s) = read_pgm16(&buf).unwrap();
        assert_eq!(res, Resolution::new(2, 1));
        assert_eq!(s, vec![1, 0x1234]);
    }

    #[test]
    fn depth_quantization_marks_invalid_as_zero() {
        let map = DepthMap::new(Resolution::new(3, 1), vec![Some(2.0), None, Some(1e9)]).unwrap();
        assert_eq!(depth_samples(&map, 0.001), vec![2000, 0, 65535]);
    }

    #[test]
    fn sidecar_written() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("d.pgm");
        let map = DepthMap::constant(Resolution::new(2, 2), 1.5).unwrap();
        write_depth_pgm(&p, &map, 0.0005).unwrap();
        let side = fs::read_to_string(scale_sidecar_path(&p)).unwrap();
        assert_eq!(side, "meters_per_unit=0.0005\ninvalid=0\n");
        let (_, s) = read_pgm16(&fs::read(&p).unwrap()).unwrap();
        assert_eq!(s, vec![3000; 4]);
    }
}
