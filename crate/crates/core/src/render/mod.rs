//! Images of basin rasters and access traces.

mod ppm;

pub use ppm::{decode_ppm, encode_ppm, read_ppm, write_ppm};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dynamics::{BasinRaster, OrbitVerdict, Region};

pub type Rgb = [u8; 3];

/// RGB pixel grid, row-major from the top-left.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Image {
    pub width: usize,
    pub height: usize,
    pub data: Vec<u8>,
}

impl Image {
    pub fn filled(width: usize, height: usize, color: Rgb) -> Image {
        Image {
            width,
            height,
            data: color.repeat(width * height),
        }
    }

    pub fn get(&self, x: usize, y: usize) -> Rgb {
        let i = 3 * (y * self.width + x);
        [self.data[i], self.data[i + 1], self.data[i + 2]]
    }

    pub fn set(&mut self, x: usize, y: usize, c: Rgb) {
        let i = 3 * (y * self.width + x);
        self.data[i..i + 3].copy_from_slice(&c);
    }

    /// Distinct colours present, sorted.
    pub fn palette(&self) -> Vec<Rgb> {
        let mut colors: Vec<Rgb> = self.data.chunks_exact(3).map(|c| [c[0], c[1], c[2]]).collect();
        colors.sort_unstable();
        colors.dedup();
        colors
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ColorScheme {
    pub roots: Vec<Rgb>,
    pub petals: Vec<Rgb>,
    pub undecided: Rgb,
    /// Darkening by iteration count, 0 disables it.
    pub shading: f64,
}

impl ColorScheme {
    /// Hues spread evenly over the colour wheel for the roots, grey levels for
    /// the petals, black for undecided points.
    pub fn for_counts(roots: usize, petals: usize) -> ColorScheme {
        ColorScheme {
            roots: (0..roots).map(|i| root_color(i, roots)).collect(),
            petals: (0..petals).map(|j| petal_gray(j, petals)).collect(),
            undecided: [0, 0, 0],
            shading: 0.0,
        }
    }

    pub fn with_shading(mut self, shading: f64) -> ColorScheme {
        self.shading = shading.clamp(0.0, 1.0);
        self
    }

    pub fn base_color(&self, label: OrbitVerdict) -> Rgb {
        match label {
            OrbitVerdict::ConvergedToRoot(i) => self.roots.get(i).copied().unwrap_or_else(|| root_color(i, i + 1)),
            OrbitVerdict::ConvergedToInfinity(j) => self.petals.get(j).copied().unwrap_or_else(|| petal_gray(j, j + 1)),
            OrbitVerdict::Undecided => self.undecided,
        }
    }
}

fn root_color(i: usize, count: usize) -> Rgb {
    let hue = (210.0 + 360.0 * i as f64 / count.max(1) as f64) % 360.0;
    hsv(hue, 0.6, 0.85)
}

fn petal_gray(j: usize, count: usize) -> Rgb {
    let level = if count <= 1 {
        170.0
    } else {
        130.0 + 90.0 * j as f64 / (count - 1) as f64
    };
    let v = level.round() as u8;
    [v, v, v]
}

fn hsv(h: f64, s: f64, v: f64) -> Rgb {
    let c = v * s;
    let hp = h / 60.0;
    let x = c * (1.0 - (hp % 2.0 - 1.0).abs());
    let (r, g, b) = match hp as u32 {
        0 => (c, x, 0.0),
        1 => (x, c, 0.0),
        2 => (0.0, c, x),
        3 => (0.0, x, c),
        4 => (x, 0.0, c),
        _ => (c, 0.0, x),
    };
    let m = v - c;
    let to = |t: f64| ((t + m) * 255.0).round() as u8;
    [to(r), to(g), to(b)]
}

/// One image pixel per raster cell.
pub fn colorize(raster: &BasinRaster, scheme: &ColorScheme) -> Image {
    let max_it = raster.iterations.iter().copied().max().unwrap_or(0) as f64;
    let denom = (1.0 + max_it).ln();
    let mut img = Image::filled(raster.width, raster.height, scheme.undecided);
    for (i, (&label, &it)) in raster.labels.iter().zip(&raster.iterations).enumerate() {
        let mut c = scheme.base_color(label);
        if scheme.shading > 0.0 && label != OrbitVerdict::Undecided && denom > 0.0 {
            let t = (1.0 + it as f64).ln() / denom;
            let f = 1.0 - scheme.shading * t;
            c = c.map(|v| (v as f64 * f).round() as u8);
        }
        img.data[3 * i..3 * i + 3].copy_from_slice(&c);
    }
    img
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Style {
    pub color: Rgb,
    /// Dot radius in pixels.
    pub radius: usize,
}

impl Default for Style {
    fn default() -> Self {
        Style {
            color: [255, 255, 255],
            radius: 2,
        }
    }
}

/// Filled dots at the given points; points outside the image are skipped.
pub fn overlay_points(image: &Image, region: &Region, points: &[Complex64], style: Style) -> Image {
    let mut out = image.clone();
    let r = style.radius as i64;
    for &z in points {
        if !z.is_finite() {
            continue;
        }
        let (x, y) = region.to_pixel(image.width, image.height, z);
        let (cx, cy) = (x.floor() as i64, y.floor() as i64);
        for dy in -r..=r {
            for dx in -r..=r {
                if dx * dx + dy * dy <= r * r {
                    put(&mut out, cx + dx, cy + dy, style.color);
                }
            }
        }
    }
    out
}

/// A polyline clipped to the image; non-finite vertices break the line.
pub fn overlay_polyline(image: &Image, region: &Region, polyline: &[Complex64], style: Style) -> Image {
    let mut out = image.clone();
    let (w, h) = (image.width as f64, image.height as f64);
    for seg in polyline.windows(2) {
        if !(seg[0].is_finite() && seg[1].is_finite()) {
            continue;
        }
        let a = region.to_pixel(image.width, image.height, seg[0]);
        let b = region.to_pixel(image.width, image.height, seg[1]);
        let Some((a, b)) = clip(a, b, w, h) else { continue };
        let steps = (2.0 * (b.0 - a.0).abs().max((b.1 - a.1).abs())).ceil() as usize + 1;
        for s in 0..=steps {
            let t = s as f64 / steps as f64;
            let x = a.0 + (b.0 - a.0) * t;
            let y = a.1 + (b.1 - a.1) * t;
            put(&mut out, x.floor() as i64, y.floor() as i64, style.color);
        }
    }
    out
}

fn put(img: &mut Image, x: i64, y: i64, c: Rgb) {
    if x >= 0 && y >= 0 && (x as usize) < img.width && (y as usize) < img.height {
        img.set(x as usize, y as usize, c);
    }
}

/// Liang–Barsky clipping of a segment to `[0, w] × [0, h]`.
fn clip(a: (f64, f64), b: (f64, f64), w: f64, h: f64) -> Option<((f64, f64), (f64, f64))> {
    let (dx, dy) = (b.0 - a.0, b.1 - a.1);
    let (mut t0, mut t1) = (0.0f64, 1.0f64);
    for (p, q) in [(-dx, a.0), (dx, w - a.0), (-dy, a.1), (dy, h - a.1)] {
        if p == 0.0 {
            if q < 0.0 {
                return None;
            }
        } else {
            let r = q / p;
            if p < 0.0 {
                t0 = t0.max(r);
            } else {
                t1 = t1.min(r);
            }
        }
    }
    (t0 <= t1).then_some(((a.0 + t0 * dx, a.1 + t0 * dy), (a.0 + t1 * dx, a.1 + t1 * dy)))
}
