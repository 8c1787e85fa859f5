//! Raster files, JSON documents and atomic writes.
//!
//! Raster layout (`.nbas`, all little-endian):
//!
//! | offset | size | field |
//! |-------:|-----:|-------|
//! | 0  | 4 | magic `NBAS` |
//! | 4  | 4 | version (`u32`, currently 1) |
//! | 8  | 4 | width (`u32`) |
//! | 12 | 4 | height (`u32`) |
//! | 16 | 32 | region centre re, centre im, width, height (`f64`) |
//! | 48 | 10·w·h | per pixel: label `i16`, component `i32`, iterations `i32` |
//!
//! Labels use [`OrbitVerdict::code`]. Immediate-basin flags are not part of
//! the grid; they travel in the JSON sidecar.

use std::fs;
use std::io::Write;
use std::path::Path;

use num_complex::Complex64;
use serde::Serialize;

use crate::dynamics::{BasinRaster, OrbitVerdict, Region};
use crate::error::{Error, Result};

pub const NBAS_MAGIC: &[u8; 4] = b"NBAS";
pub const NBAS_VERSION: u32 = 1;
pub const NBAS_HEADER_LEN: usize = 48;
const RECORD_LEN: usize = 10;

pub fn encode_raster(raster: &BasinRaster) -> Result<Vec<u8>> {
    let (w, h) = (raster.width, raster.height);
    if w == 0 || h == 0 || w > u32::MAX as usize || h > u32::MAX as usize {
        return Err(Error::InvalidInput(format!("cannot store a {w}×{h} raster")));
    }
    let mut out = Vec::with_capacity(NBAS_HEADER_LEN + RECORD_LEN * w * h);
    out.extend_from_slice(NBAS_MAGIC);
    out.extend_from_slice(&NBAS_VERSION.to_le_bytes());
    out.extend_from_slice(&(w as u32).to_le_bytes());
    out.extend_from_slice(&(h as u32).to_le_bytes());
    let r = &raster.region;
    for v in [r.center.re, r.center.im, r.width, r.height] {
        out.extend_from_slice(&v.to_le_bytes());
    }
    for i in 0..w * h {
        out.extend_from_slice(&raster.labels[i].code().to_le_bytes());
        out.extend_from_slice(&raster.components[i].to_le_bytes());
        let it = i32::try_from(raster.iterations[i]).unwrap_or(i32::MAX);
        out.extend_from_slice(&it.to_le_bytes());
    }
    Ok(out)
}

pub fn decode_raster(bytes: &[u8]) -> Result<BasinRaster> {
    let bad = |m: &str| Error::Malformed(format!("raster file: {m}"));
    if bytes.len() < NBAS_HEADER_LEN {
        return Err(bad("shorter than its header"));
    }
    if &bytes[0..4] != NBAS_MAGIC {
        return Err(bad("missing NBAS magic"));
    }
    let u32_at = |o: usize| u32::from_le_bytes(bytes[o..o + 4].try_into().unwrap());
    let f64_at = |o: usize| f64::from_le_bytes(bytes[o..o + 8].try_into().unwrap());
    let version = u32_at(4);
    if version != NBAS_VERSION {
        return Err(bad(&format!("unsupported version {version}")));
    }
    let (w, h) = (u32_at(8) as usize, u32_at(12) as usize);
    let region = Region::new(Complex64::new(f64_at(16), f64_at(24)), f64_at(32), f64_at(40));
    if w == 0 || h == 0 {
        return Err(bad("zero size"));
    }
    if !region.is_valid() {
        return Err(bad("invalid region"));
    }
    let n = w.checked_mul(h).ok_or_else(|| bad("size overflows"))?;
    if bytes.len() != NBAS_HEADER_LEN + RECORD_LEN * n {
        return Err(bad("record count does not match the header"));
    }
    let mut labels = Vec::with_capacity(n);
    let mut components = Vec::with_capacity(n);
    let mut iterations = Vec::with_capacity(n);
    for rec in bytes[NBAS_HEADER_LEN..].chunks_exact(RECORD_LEN) {
        let label = OrbitVerdict::from_code(i16::from_le_bytes([rec[0], rec[1]]));
        let comp = i32::from_le_bytes(rec[2..6].try_into().unwrap());
        let it = i32::from_le_bytes(rec[6..10].try_into().unwrap());
        if it < 0 {
            return Err(bad("negative iteration count"));
        }
        if (comp < 0) != (label == OrbitVerdict::Undecided) {
            return Err(bad("component ids disagree with labels"));
        }
        labels.push(label);
        components.push(comp);
        iterations.push(it as u32);
    }
    // Components are recomputed from the labels; stored ids must agree.
    let raster = BasinRaster::from_labels(region, w, h, labels, iterations)?;
    if raster.components != components {
        return Err(bad("component ids are not the 4-connected labelling"));
    }
    Ok(raster)
}

pub fn write_raster(raster: &BasinRaster, path: &Path) -> Result<()> {
    write_atomic(path, &encode_raster(raster)?)
}

pub fn read_raster(path: &Path) -> Result<BasinRaster> {
    decode_raster(&fs::read(path)?)
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| Error::InvalidInput(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

pub fn write_json<T: Serialize + ?Sized>(value: &T, path: &Path) -> Result<()> {
    write_atomic(path, to_json(value)?.as_bytes())
}

/// Writes through a temporary file in the same directory, then renames it
/// over `path`.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let name = path
        .file_name()
        .ok_or_else(|| Error::Io(format!("{} is not a file path", path.display())))?;
    let tmp = dir.join(format!(".{}.tmp{}", name.to_string_lossy(), std::process::id()));
    let result = (|| {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
        fs::rename(&tmp, path)
    })();
    if let Err(e) = result {
        let _ = fs::remove_file(&tmp);
        return Err(Error::Io(format!("{}: {e}", path.display())));
    }
    Ok(())
}
