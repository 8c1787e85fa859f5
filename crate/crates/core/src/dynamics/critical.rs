use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::poly::roots;
use crate::ratmap::RationalMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CriticalKind {
    /// Zero of `N'`.
    Zero,
    /// Pole of order ≥ 2.
    MultiplePole,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriticalPoint {
    pub z: Complex64,
    pub multiplicity: usize,
    pub kind: CriticalKind,
}

/// Critical points of a rational map. The point at ∞ is kept apart.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriticalPoints {
    pub finite: Vec<CriticalPoint>,
    /// Local degree at ∞ minus one.
    pub infinity_multiplicity: usize,
    /// Residual bound of the root finder on the numerator of `N'`.
    pub residual_bound: f64,
}

impl CriticalPoints {
    /// Total count with multiplicity, ∞ included; `2d − 2` for a map of degree `d`.
    pub fn total_multiplicity(&self) -> usize {
        self.finite.iter().map(|c| c.multiplicity).sum::<usize>() + self.infinity_multiplicity
    }

    pub fn zeros(&self) -> impl Iterator<Item = &CriticalPoint> {
        self.finite.iter().filter(|c| c.kind == CriticalKind::Zero)
    }
}

/// Zeros of `N'` plus multiple poles, with the local degree at ∞ reported
/// separately.
pub fn critical_points(map: &RationalMap) -> Result<CriticalPoints> {
    let deriv = map.derivative()?;
    let mut finite = Vec::new();
    let mut residual_bound = 0.0;
    if deriv.num().degree_or_zero() > 0 {
        let rs = roots(deriv.num())?;
        residual_bound = rs.residual_bound;
        finite.extend(rs.entries.iter().map(|&(z, multiplicity)| CriticalPoint {
            z,
            multiplicity,
            kind: CriticalKind::Zero,
        }));
    }
    if let Some(poles) = map.poles()? {
        finite.extend(poles.entries.iter().filter(|e| e.1 > 1).map(|&(z, order)| CriticalPoint {
            z,
            multiplicity: order - 1,
            kind: CriticalKind::MultiplePole,
        }));
    }
    finite.sort_by(|a, b| a.z.re.total_cmp(&b.z.re).then(a.z.im.total_cmp(&b.z.im)));
    Ok(CriticalPoints {
        finite,
        infinity_multiplicity: local_degree_at_infinity(map) - 1,
        residual_bound,
    })
}

fn local_degree_at_infinity(map: &RationalMap) -> usize {
    let (a, b) = (map.num(), map.den());
    let (da, db) = (a.degree_or_zero(), b.degree_or_zero());
    if da != db {
        return da.abs_diff(db);
    }
    // N(∞) = c finite; the order of N − c at ∞ is deg A − deg(A − cB).
    let c = a.leading() / b.leading();
    let rest = (a - &b.scale(c)).trimmed(crate::ratmap::TRIM_TOL, a.norm_inf());
    da - rest.degree_or_zero()
}
