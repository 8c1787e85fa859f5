use std::path::Path;

use super::Image;
use crate::error::{Error, Result};
use crate::io::write_atomic;

/// Binary PPM (`P6`, maxval 255) with the header `P6 <w> <h> 255\n`.
pub fn encode_ppm(image: &Image) -> Result<Vec<u8>> {
    if image.width == 0 || image.height == 0 {
        return Err(Error::InvalidInput("PPM images need positive dimensions".into()));
    }
    if image.data.len() != 3 * image.width * image.height {
        return Err(Error::InvalidInput("pixel buffer does not match image size".into()));
    }
    let mut out = format!("P6 {} {} 255\n", image.width, image.height).into_bytes();
    out.extend_from_slice(&image.data);
    Ok(out)
}

pub fn decode_ppm(bytes: &[u8]) -> Result<Image> {
    let mut pos = 0;
    let mut fields = [0usize; 3];
    let magic = token(bytes, &mut pos).ok_or_else(|| Error::Malformed("empty PPM".into()))?;
    if magic != b"P6" {
        return Err(Error::Malformed("not a binary PPM (P6)".into()));
    }
    for f in &mut fields {
        let t = token(bytes, &mut pos).ok_or_else(|| Error::Malformed("truncated PPM header".into()))?;
        *f = std::str::from_utf8(t)
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::Malformed("bad number in PPM header".into()))?;
    }
    let [width, height, maxval] = fields;
    if width == 0 || height == 0 {
        return Err(Error::Malformed("PPM with zero size".into()));
    }
    if maxval != 255 {
        return Err(Error::Malformed(format!("unsupported maxval {maxval}")));
    }
    // Exactly one whitespace byte separates the header from the pixels.
    pos += 1;
    let need = 3 * width * height;
    let data = bytes
        .get(pos..pos + need)
        .ok_or_else(|| Error::Malformed("truncated PPM pixel data".into()))?;
    Ok(Image {
        width,
        height,
        data: data.to_vec(),
    })
}

fn token<'a>(bytes: &'a [u8], pos: &mut usize) -> Option<&'a [u8]> {
    loop {
        while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
            *pos += 1;
        }
        if *pos < bytes.len() && bytes[*pos] == b'#' {
            while *pos < bytes.len() && bytes[*pos] != b'\n' {
                *pos += 1;
            }
            continue;
        }
        break;
    }
    let start = *pos;
    while *pos < bytes.len() && !bytes[*pos].is_ascii_whitespace() {
        *pos += 1;
    }
    (*pos > start).then(|| &bytes[start..*pos])
}

pub fn write_ppm(image: &Image, path: &Path) -> Result<()> {
    write_atomic(path, &encode_ppm(image)?)
}

pub fn read_ppm(path: &Path) -> Result<Image> {
    decode_ppm(&std::fs::read(path)?)
}
