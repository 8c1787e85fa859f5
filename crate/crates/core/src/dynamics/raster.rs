use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{Classifier, OrbitVerdict};
use crate::error::{Error, Result};
use crate::newton::NewtonCertificate;

/// Axis-aligned rectangle of the plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Region {
    pub center: Complex64,
    pub width: f64,
    pub height: f64,
}

impl Region {
    pub fn new(center: Complex64, width: f64, height: f64) -> Self {
        Region { center, width, height }
    }

    /// Square of side `2·half` around `center`.
    pub fn square(center: Complex64, half: f64) -> Self {
        Region::new(center, 2.0 * half, 2.0 * half)
    }

    pub fn is_valid(&self) -> bool {
        self.center.is_finite() && self.width.is_finite() && self.height.is_finite() && self.width > 0.0 && self.height > 0.0
    }

    pub fn contains(&self, z: Complex64) -> bool {
        let d = z - self.center;
        d.re.abs() <= self.width / 2.0 && d.im.abs() <= self.height / 2.0
    }

    /// Centre of pixel `(col, row)` on a `cols × rows` grid; row 0 is the top.
    pub fn pixel_center(&self, cols: usize, rows: usize, col: usize, row: usize) -> Complex64 {
        let x = self.center.re - self.width / 2.0 + (col as f64 + 0.5) * self.width / cols as f64;
        let y = self.center.im + self.height / 2.0 - (row as f64 + 0.5) * self.height / rows as f64;
        Complex64::new(x, y)
    }

    /// Continuous pixel coordinates `(x, y)` of `z`, pixel centres at half-integers.
    pub fn to_pixel(&self, cols: usize, rows: usize, z: Complex64) -> (f64, f64) {
        let x = (z.re - (self.center.re - self.width / 2.0)) / self.width * cols as f64;
        let y = ((self.center.im + self.height / 2.0) - z.im) / self.height * rows as f64;
        (x, y)
    }

    /// Pixel containing `z`, if inside.
    pub fn pixel_of(&self, cols: usize, rows: usize, z: Complex64) -> Option<(usize, usize)> {
        if !self.contains(z) {
            return None;
        }
        let (x, y) = self.to_pixel(cols, rows, z);
        Some(((x.floor() as usize).min(cols - 1), (y.floor() as usize).min(rows - 1)))
    }

    /// Distance from the centre to the boundary along direction `v`.
    pub fn reach(&self, v: Complex64) -> f64 {
        let tx = if v.re == 0.0 { f64::INFINITY } else { self.width / 2.0 / v.re.abs() };
        let ty = if v.im == 0.0 { f64::INFINITY } else { self.height / 2.0 / v.im.abs() };
        tx.min(ty)
    }
}

/// Fixed point served by an immediate basin.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Served {
    Root(usize),
    Petal(usize),
}

impl Served {
    pub fn verdict(self) -> OrbitVerdict {
        match self {
            Served::Root(i) => OrbitVerdict::ConvergedToRoot(i),
            Served::Petal(j) => OrbitVerdict::ConvergedToInfinity(j),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ImmediateBasin {
    pub component: u32,
    pub serves: Served,
    /// Point whose pixel identified the component.
    pub anchor: Complex64,
    pub pixels: usize,
}

/// Per-pixel basin labels over a region, row-major from the top-left.
#[derive(Debug, Clone, PartialEq)]
pub struct BasinRaster {
    pub region: Region,
    pub width: usize,
    pub height: usize,
    pub labels: Vec<OrbitVerdict>,
    pub iterations: Vec<u32>,
    /// 4-connected component id per pixel, `−1` for undecided pixels.
    pub components: Vec<i32>,
    pub component_count: usize,
    pub immediate_flags: Vec<u32>,
}

impl BasinRaster {
    /// Assembles a raster from labels, computing the components.
    pub fn from_labels(
        region: Region,
        width: usize,
        height: usize,
        labels: Vec<OrbitVerdict>,
        iterations: Vec<u32>,
    ) -> Result<BasinRaster> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidInput("raster must have at least one pixel".into()));
        }
        if labels.len() != width * height || iterations.len() != width * height {
            return Err(Error::InvalidInput("raster buffers do not match its size".into()));
        }
        let (components, component_count) = label_components(&labels, width, height);
        Ok(BasinRaster {
            region,
            width,
            height,
            labels,
            iterations,
            components,
            component_count,
            immediate_flags: Vec::new(),
        })
    }

    #[inline]
    pub fn index(&self, col: usize, row: usize) -> usize {
        row * self.width + col
    }

    pub fn label_at(&self, col: usize, row: usize) -> OrbitVerdict {
        self.labels[self.index(col, row)]
    }

    pub fn component_at(&self, col: usize, row: usize) -> i32 {
        self.components[self.index(col, row)]
    }

    pub fn pixel_center(&self, col: usize, row: usize) -> Complex64 {
        self.region.pixel_center(self.width, self.height, col, row)
    }

    pub fn pixel_of(&self, z: Complex64) -> Option<(usize, usize)> {
        self.region.pixel_of(self.width, self.height, z)
    }

    /// Side of a pixel in plane units (the larger of the two).
    pub fn pixel_size(&self) -> f64 {
        (self.region.width / self.width as f64).max(self.region.height / self.height as f64)
    }

    pub fn component_size(&self, id: u32) -> usize {
        self.components.iter().filter(|&&c| c == id as i32).count()
    }

    /// Same raster with the given components flagged as immediate basins.
    pub fn with_immediate(mut self, basins: &[ImmediateBasin]) -> BasinRaster {
        let mut flags: Vec<u32> = basins.iter().map(|b| b.component).collect();
        flags.sort_unstable();
        flags.dedup();
        self.immediate_flags = flags;
        self
    }

    /// Whether `id` was flagged as an immediate basin.
    pub fn is_immediate(&self, id: i32) -> bool {
        id >= 0 && self.immediate_flags.binary_search(&(id as u32)).is_ok()
    }
}

/// Classifies the centre of every pixel of a `resolution × resolution` grid.
///
/// Rows are processed in parallel on the current rayon pool; the result does
/// not depend on the number of threads.
pub fn raster_basins(classifier: &Classifier, region: Region, resolution: usize) -> Result<BasinRaster> {
    if resolution == 0 {
        return Err(Error::InvalidInput("resolution must be positive".into()));
    }
    if !region.is_valid() {
        return Err(Error::InvalidInput(format!("invalid region {region:?}")));
    }
    let (w, h) = (resolution, resolution);
    let rows: Vec<Vec<(OrbitVerdict, u32)>> = (0..h)
        .into_par_iter()
        .map(|row| {
            (0..w)
                .map(|col| {
                    let (v, it) = classifier.classify(region.pixel_center(w, h, col, row));
                    (v, it as u32)
                })
                .collect()
        })
        .collect();
    let (labels, iterations) = rows.into_iter().flatten().unzip();
    BasinRaster::from_labels(region, w, h, labels, iterations)
}

fn label_components(labels: &[OrbitVerdict], w: usize, h: usize) -> (Vec<i32>, usize) {
    let mut comp = vec![-1i32; labels.len()];
    let mut next = 0i32;
    let mut stack = Vec::new();
    for start in 0..labels.len() {
        if comp[start] >= 0 || labels[start] == OrbitVerdict::Undecided {
            continue;
        }
        let label = labels[start];
        comp[start] = next;
        stack.push(start);
        while let Some(i) = stack.pop() {
            let (c, r) = (i % w, i / w);
            let mut visit = |j: usize| {
                if comp[j] < 0 && labels[j] == label {
                    comp[j] = next;
                    stack.push(j);
                }
            };
            if c > 0 {
                visit(i - 1);
            }
            if c + 1 < w {
                visit(i + 1);
            }
            if r > 0 {
                visit(i - w);
            }
            if r + 1 < h {
                visit(i + w);
            }
        }
        next += 1;
    }
    (comp, next as usize)
}

/// Fraction of the way to the region boundary at which petal samples are taken.
pub const PETAL_SAMPLE_FRACTION: f64 = 0.9;

/// Components containing each root, and the far-field sample along each
/// petal direction.
pub fn immediate_basins(raster: &BasinRaster, cert: &NewtonCertificate) -> Result<Vec<ImmediateBasin>> {
    let mut out = Vec::new();
    for (i, r) in cert.roots.iter().enumerate() {
        let served = Served::Root(i);
        let comp = anchor_component(raster, r.z, served, &format!("root {i}"))?;
        out.push(ImmediateBasin {
            component: comp,
            serves: served,
            anchor: r.z,
            pixels: raster.component_size(comp),
        });
    }
    if cert.n > 0 {
        for (j, v) in crate::newton::petal_directions(cert)?.into_iter().enumerate() {
            let region = &raster.region;
            let anchor = region.center + v * (PETAL_SAMPLE_FRACTION * region.reach(v));
            let served = Served::Petal(j);
            let comp = anchor_component(raster, anchor, served, &format!("petal {j} sample"))?;
            out.push(ImmediateBasin {
                component: comp,
                serves: served,
                anchor,
                pixels: raster.component_size(comp),
            });
        }
    }
    Ok(out)
}

/// Component of the pixel at `z`, falling back to the nearest pixel with the
/// expected label within two pixels.
fn anchor_component(raster: &BasinRaster, z: Complex64, served: Served, what: &str) -> Result<u32> {
    let outside = || Error::RootOutsideRegion {
        what: what.to_string(),
        location: z,
    };
    let (col, row) = raster.pixel_of(z).ok_or_else(outside)?;
    let want = served.verdict();
    let mut best: Option<(f64, u32)> = None;
    for dr in -2i64..=2 {
        for dc in -2i64..=2 {
            let (c, r) = (col as i64 + dc, row as i64 + dr);
            if c < 0 || r < 0 || c >= raster.width as i64 || r >= raster.height as i64 {
                continue;
            }
            let (c, r) = (c as usize, r as usize);
            if raster.label_at(c, r) != want {
                continue;
            }
            let d = (raster.pixel_center(c, r) - z).norm();
            if best.is_none_or(|(bd, _)| d < bd) {
                best = Some((d, raster.component_at(c, r) as u32));
            }
        }
    }
    best.map(|b| b.1).ok_or_else(|| Error::RootOutsideRegion {
        what: format!("{what} (no pixel of its basin nearby)"),
        location: z,
    })
}
