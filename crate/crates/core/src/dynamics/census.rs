use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::critical::{CriticalKind, CriticalPoints};
use super::raster::{BasinRaster, ImmediateBasin, Served};
use crate::error::{Error, Result};
use crate::poly::roots;
use crate::ratmap::RationalMap;

/// Pixels around a critical point that must all lie in one component.
pub const GUARD_PIXELS: usize = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "placement", rename_all = "snake_case")]
pub enum Placement {
    Immediate { component: u32 },
    /// In some other component or on undecided pixels.
    Elsewhere,
    OutsideRegion,
    /// Multiple pole; maps to ∞ and lies in the Julia set.
    Pole,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CensusEntry {
    pub z: Complex64,
    pub multiplicity: usize,
    #[serde(flatten)]
    pub placement: Placement,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BasinCensus {
    pub component: u32,
    pub serves: Served,
    pub pixels: usize,
    /// Critical points inside, with multiplicity.
    pub k: usize,
    pub restriction_degree: usize,
    pub access_count: usize,
    /// Parabolic basins carry the access generated by forward images of a
    /// segment `[z0, N(z0)]`.
    pub dynamical_access: bool,
    pub critical_points: Vec<Complex64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AccessCensus {
    pub basins: Vec<BasinCensus>,
    pub critical_points: Vec<CensusEntry>,
    pub infinity_multiplicity: usize,
    pub guard_pixels: usize,
}

/// Counts critical points in each immediate basin.
///
/// A critical point is placed by the 5×5 pixel window around it: if the
/// window touches no immediate basin it is ignored, if it lies in a single
/// immediate basin it counts there, and otherwise the census is refused.
pub fn access_census(raster: &BasinRaster, basins: &[ImmediateBasin], critical: &CriticalPoints) -> Result<AccessCensus> {
    let is_immediate = |id: i32| id >= 0 && basins.iter().any(|b| b.component as i32 == id);
    let g = GUARD_PIXELS as i64;
    let mut entries = Vec::new();
    for cp in &critical.finite {
        let placement = if cp.kind == CriticalKind::MultiplePole {
            Placement::Pole
        } else if let Some((col, row)) = raster.pixel_of(cp.z) {
            let mut ids = Vec::new();
            for dr in -g..=g {
                for dc in -g..=g {
                    let (c, r) = (col as i64 + dc, row as i64 + dr);
                    if c >= 0 && r >= 0 && (c as usize) < raster.width && (r as usize) < raster.height {
                        ids.push(raster.component_at(c as usize, r as usize));
                    }
                }
            }
            let centre = raster.component_at(col, row);
            if !ids.iter().any(|&id| is_immediate(id)) {
                Placement::Elsewhere
            } else if is_immediate(centre) && ids.iter().all(|&id| id == centre) {
                Placement::Immediate {
                    component: centre as u32,
                }
            } else {
                return Err(Error::CriticalPointUnresolved {
                    location: cp.z,
                    pixels: GUARD_PIXELS,
                });
            }
        } else {
            Placement::OutsideRegion
        };
        entries.push(CensusEntry {
            z: cp.z,
            multiplicity: cp.multiplicity,
            placement,
        });
    }
    let basins = basins
        .iter()
        .map(|b| {
            let inside: Vec<&CensusEntry> = entries
                .iter()
                .filter(|e| e.placement == Placement::Immediate { component: b.component })
                .collect();
            let k = inside.iter().map(|e| e.multiplicity).sum();
            BasinCensus {
                component: b.component,
                serves: b.serves,
                pixels: b.pixels,
                k,
                restriction_degree: k + 1,
                access_count: k,
                dynamical_access: matches!(b.serves, Served::Petal(_)),
                critical_points: inside.iter().map(|e| e.z).collect(),
            }
        })
        .collect();
    Ok(AccessCensus {
        basins,
        critical_points: entries,
        infinity_multiplicity: critical.infinity_multiplicity,
        guard_pixels: GUARD_PIXELS,
    })
}

/// Preimages of one point of a basin, sorted by where they land.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoveringProbe {
    pub target: Complex64,
    /// Preimages (with multiplicity) whose pixel belongs to the basin.
    pub inside: usize,
    /// Preimages outside the raster region.
    pub outside_region: usize,
    /// Preimages in other components.
    pub elsewhere: usize,
}

/// Counts the preimages under `N` of a pixel centre of `basin` that land in
/// the same component. For an immediate basin on which `N` has degree `k+1`
/// this is `k+1` once every preimage lies in the region.
pub fn covering_degree_probe(map: &RationalMap, raster: &BasinRaster, basin: &ImmediateBasin) -> Result<CoveringProbe> {
    let (col, row) = raster.pixel_of(basin.anchor).ok_or(Error::RootOutsideRegion {
        what: "basin anchor".into(),
        location: basin.anchor,
    })?;
    // The pixel centre next to the anchor avoids landing exactly on a fixed
    // point, where preimages collide.
    let target = nearest_member_center(raster, col, row, basin.component).unwrap_or(basin.anchor);
    let eq = map.num() - &map.den().scale(target);
    let mut probe = CoveringProbe {
        target,
        inside: 0,
        outside_region: 0,
        elsewhere: 0,
    };
    if eq.degree_or_zero() == 0 {
        return Ok(probe);
    }
    for (z, mult) in roots(&eq)?.entries {
        match raster.pixel_of(z) {
            None => probe.outside_region += mult,
            Some((c, r)) if raster.component_at(c, r) == basin.component as i32 => probe.inside += mult,
            Some(_) => probe.elsewhere += mult,
        }
    }
    Ok(probe)
}

fn nearest_member_center(raster: &BasinRaster, col: usize, row: usize, comp: u32) -> Option<Complex64> {
    let mut best: Option<(usize, Complex64)> = None;
    for r in row.saturating_sub(3)..(row + 4).min(raster.height) {
        for c in col.saturating_sub(3)..(col + 4).min(raster.width) {
            if raster.component_at(c, r) == comp as i32 {
                let d = c.abs_diff(col) + r.abs_diff(row);
                if d > 0 && best.is_none_or(|(bd, _)| d < bd) {
                    best = Some((d, raster.pixel_center(c, r)));
                }
            }
        }
    }
    best.map(|b| b.1)
}
