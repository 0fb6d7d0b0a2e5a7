//! Plain bitmap format.
//!
//! ```text
//! PB <N>
//! <N lines of N characters '0' / '1'>
//! ```
//!
//! Lines are written top-down like an image: the first bitmap line is the top
//! row `N - 1`, the last line is row 0 at the bottom of the window. The window
//! lives in an optional sidecar `<name>.meta.json` with keys `window_origin`
//! and `window_side`; without it the window is the unit square at the origin.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use bitvec::prelude::*;
use serde::{Deserialize, Serialize};

use super::grid::GridSpec;
use super::set::RasterSet;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WindowMeta {
    pub window_origin: [f64; 2],
    pub window_side: f64,
}

impl Default for WindowMeta {
    fn default() -> Self {
        Self {
            window_origin: [0.0, 0.0],
            window_side: 1.0,
        }
    }
}

/// Path of the metadata sidecar belonging to a bitmap file.
pub fn sidecar_path(path: &Path) -> PathBuf {
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    path.with_file_name(format!("{stem}.meta.json"))
}

fn parse_err(offset: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        offset,
        message: message.into(),
    }
}

/// Parses the bitmap body; returns the resolution and the row-major bits.
pub fn parse_bitmap(data: &[u8]) -> Result<(usize, BitVec)> {
    const MAGIC: &[u8] = b"PB ";
    if !data.starts_with(MAGIC) {
        return Err(parse_err(0, "expected header \"PB <N>\""));
    }
    let header_end = data
        .iter()
        .position(|&b| b == b'\n')
        .ok_or_else(|| parse_err(data.len(), "missing newline after header"))?;
    let digits = &data[MAGIC.len()..header_end];
    let digits = digits.strip_suffix(b"\r").unwrap_or(digits);
    if digits.is_empty() || !digits.iter().all(u8::is_ascii_digit) {
        return Err(parse_err(MAGIC.len(), "resolution must be a decimal integer"));
    }
    let n: usize = std::str::from_utf8(digits)
        .ok()
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| parse_err(MAGIC.len(), "resolution out of range"))?;
    if n == 0 || !n.is_power_of_two() {
        return Err(Error::Grid(format!("resolution {n} is not a power of two")));
    }

    let mut bits = bitvec![0; n * n];
    let mut pos = header_end + 1;
    for line in 0..n {
        let row = n - 1 - line;
        if pos + n > data.len() {
            return Err(parse_err(data.len(), format!("bitmap truncated in line {}", line + 1)));
        }
        for i in 0..n {
            match data[pos + i] {
                b'0' => {}
                b'1' => bits.set(row * n + i, true),
                other => {
                    return Err(parse_err(
                        pos + i,
                        format!("unexpected byte 0x{other:02x}, expected '0' or '1'"),
                    ))
                }
            }
        }
        pos += n;
        if data.get(pos) == Some(&b'\r') {
            pos += 1;
        }
        match data.get(pos) {
            Some(b'\n') => pos += 1,
            None if line + 1 == n => {}
            _ => return Err(parse_err(pos, format!("line {} is longer than {n}", line + 1))),
        }
    }
    if data[pos..].iter().any(|b| !b.is_ascii_whitespace()) {
        return Err(parse_err(pos, "trailing data after bitmap"));
    }
    Ok((n, bits))
}

pub fn format_bitmap(set: &RasterSet) -> String {
    let n = set.grid().n();
    let mut out = String::with_capacity(n * (n + 1) + 16);
    let _ = writeln!(out, "PB {n}");
    for row in (0..n).rev() {
        for i in 0..n {
            out.push(if set.get(i, row) { '1' } else { '0' });
        }
        out.push('\n');
    }
    out
}

/// Builds a set from bitmap bytes and an optional window description.
pub fn raster_from_bytes(data: &[u8], meta: Option<WindowMeta>) -> Result<RasterSet> {
    let (n, bits) = parse_bitmap(data)?;
    let meta = meta.unwrap_or_default();
    let grid = GridSpec::new(n, meta.window_origin, meta.window_side)?;
    Ok(RasterSet::from_bits(grid, bits))
}

pub fn load_raster(path: impl AsRef<Path>) -> Result<RasterSet> {
    let path = path.as_ref();
    let data = fs::read(path).map_err(|e| Error::io(path, e))?;
    let side = sidecar_path(path);
    let meta = match fs::read(&side) {
        Ok(bytes) => Some(serde_json::from_slice::<WindowMeta>(&bytes)?),
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => None,
        Err(e) => return Err(Error::io(side, e)),
    };
    raster_from_bytes(&data, meta)
}

/// Writes the bitmap and its sidecar.
pub fn save_raster(set: &RasterSet, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    write_atomic(path, format_bitmap(set).as_bytes())?;
    let g = set.grid();
    let meta = WindowMeta {
        window_origin: g.origin(),
        window_side: g.side(),
    };
    let json = serde_json::to_vec_pretty(&meta)?;
    write_atomic(&sidecar_path(path), &json)
}

/// Write to a temporary sibling, then rename over the target.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    fs::write(&tmp, bytes).map_err(|e| Error::io(&tmp, e))?;
    fs::rename(&tmp, path).map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_by_two_anti_diagonal() {
        let a = raster_from_bytes(b"PB 2\n10\n01\n", None).unwrap();
        assert!(a.get(0, 1));
        assert!(a.get(1, 0));
        assert_eq!(a.count(), 2);
        assert_eq!(a.measure(), 0.5);
    }

    #[test]
    fn all_ones() {
        let a = raster_from_bytes(b"PB 4\n1111\n1111\n1111\n1111\n", None).unwrap();
        assert_eq!(a.measure(), 1.0);
    }

    #[test]
    fn non_power_of_two_is_validation_error() {
        let err = raster_from_bytes(b"PB 3\n000\n000\n000\n", None).unwrap_err();
        assert!(matches!(err, Error::Grid(_)));
    }

    #[test]
    fn malformed_header_names_offset() {
        match raster_from_bytes(b"PX 2\n00\n00\n", None) {
            Err(Error::Parse { offset, .. }) => assert_eq!(offset, 0),
            other => panic!("{other:?}"),
        }
        match raster_from_bytes(b"PB 2\n00\n0x\n", None) {
            Err(Error::Parse { offset, .. }) => assert_eq!(offset, 9),
            other => panic!("{other:?}"),
        }
        match raster_from_bytes(b"PB 2\n000\n00\n", None) {
            Err(Error::Parse { offset, .. }) => assert_eq!(offset, 7),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            raster_from_bytes(b"PB 2\n00\n", None),
            Err(Error::Parse { .. })
        ));
    }

    #[test]
    fn missing_final_newline_is_accepted() {
        let a = raster_from_bytes(b"PB 2\n11\n01", None).unwrap();
        assert_eq!(a.count(), 3);
    }

    #[test]
    fn file_round_trip_with_sidecar() {
        let dir = tempdir();
        let path = dir.join("set.pb");
        let g = GridSpec::new(8, [-2.0, 3.0], 4.0).unwrap();
        let a = RasterSet::from_points(g, |x, y| x * x + (y - 5.0).powi(2) < 2.0);
        save_raster(&a, &path).unwrap();
        assert!(sidecar_path(&path).ends_with("set.meta.json"));
        let b = load_raster(&path).unwrap();
        assert_eq!(a, b);
        let _ = fs::remove_dir_all(dir);
    }

    fn tempdir() -> PathBuf {
        let dir = std::env::temp_dir().join(format!(
            "powerbeam-io-{}-{:?}",
            std::process::id(),
            std::thread::current().id()
        ));
        fs::create_dir_all(&dir).unwrap();
        dir
    }
}
