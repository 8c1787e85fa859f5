//! Orbits, basins, critical points and accesses to ∞ for Newton maps.

mod census;
mod critical;
mod raster;
mod trace;

pub use census::{access_census, covering_degree_probe, AccessCensus, BasinCensus, CensusEntry, CoveringProbe, Placement, GUARD_PIXELS};
pub use critical::{critical_points, CriticalKind, CriticalPoint, CriticalPoints};
pub use raster::{immediate_basins, raster_basins, BasinRaster, ImmediateBasin, Region, Served, PETAL_SAMPLE_FRACTION};
pub use trace::{escape_direction, orbit_direction, trace_dynamical_access, AccessTrace, TraceParams};

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::newton::{nearest_petal, petal_directions, NewtonCertificate};
use crate::ratmap::{RationalMap, SpherePoint};

/// Iteration controls shared by every point classification.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct DynamicsParams {
    pub max_iter: usize,
    /// Root convergence radius relative to `1 + |z_i|`.
    pub conv_radius: f64,
    /// Escape radius for the parabolic point at ∞; derived from the
    /// certificate when absent.
    pub escape_radius: Option<f64>,
    /// Consecutive non-decreasing moduli required before an escape counts.
    pub escape_steps: usize,
}

impl Default for DynamicsParams {
    fn default() -> Self {
        DynamicsParams {
            max_iter: 10_000,
            conv_radius: 1e-8,
            escape_radius: None,
            escape_steps: 8,
        }
    }
}

/// Fate of an orbit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OrbitVerdict {
    ConvergedToRoot(usize),
    ConvergedToInfinity(usize),
    Undecided,
}

impl OrbitVerdict {
    /// Compact code used in raster files: `i ≥ 0` for root `i`, `−1` for
    /// undecided, `−(2 + j)` for petal `j`.
    pub fn code(self) -> i16 {
        match self {
            OrbitVerdict::ConvergedToRoot(i) => i as i16,
            OrbitVerdict::Undecided => -1,
            OrbitVerdict::ConvergedToInfinity(j) => -2 - j as i16,
        }
    }

    pub fn from_code(code: i16) -> OrbitVerdict {
        match code {
            c if c >= 0 => OrbitVerdict::ConvergedToRoot(c as usize),
            -1 => OrbitVerdict::Undecided,
            c => OrbitVerdict::ConvergedToInfinity((-2 - c) as usize),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Orbit {
    pub points: Vec<SpherePoint>,
    pub verdict: OrbitVerdict,
    pub iterations_used: usize,
}

/// Escape radius used when none is given.
///
/// Writing `1/(z − N) = p'/p + q'` and expanding at ∞, the step is
/// `−1/(n q_n z^{n−1})·(1 + r)` with `r` collecting the terms of `p'/p` and
/// of the lower coefficients of `q`. Each term has a natural radius at which
/// it equals the leading one; the escape radius puts every term of `r` below
/// 1/10 and stays outside twice the root disk.
pub fn default_escape_radius(cert: &NewtonCertificate) -> f64 {
    let root_radius = cert.roots.iter().map(|r| r.z.norm()).fold(0.0, f64::max);
    let n = cert.n;
    if n == 0 {
        return 1e3 * (1.0 + root_radius);
    }
    let nf = n as f64;
    let lead = nf * cert.q.leading().norm();
    let deg_p = cert.total_multiplicity() as f64;
    let mut r = 2.0 * (1.0 + root_radius);
    // deg p / z against n q_n z^{n−1}
    r = r.max((10.0 * deg_p / lead).powf(1.0 / nf));
    // Σ m_i z_i / z² against the same
    r = r.max((10.0 * deg_p * root_radius / lead).powf(1.0 / (nf + 1.0)));
    // j q_j z^{j−1} against the same
    for j in 1..n {
        let c = j as f64 * cert.q.coeff(j).norm();
        r = r.max((10.0 * c / lead).powf(1.0 / (n - j) as f64));
    }
    r
}

/// Precomputed data for classifying many starting points under one map.
#[derive(Debug, Clone)]
pub struct Classifier {
    map: RationalMap,
    roots: Vec<Complex64>,
    radii: Vec<f64>,
    petals: Vec<Complex64>,
    escape_radius: f64,
    params: DynamicsParams,
}

impl Classifier {
    pub fn new(map: &RationalMap, cert: &NewtonCertificate, params: DynamicsParams) -> Self {
        let roots = cert.root_locations();
        let radii = roots.iter().map(|z| params.conv_radius * (1.0 + z.norm())).collect();
        let petals = petal_directions(cert).unwrap_or_default();
        let escape_radius = params.escape_radius.unwrap_or_else(|| default_escape_radius(cert));
        Classifier {
            map: map.clone(),
            roots,
            radii,
            petals,
            escape_radius,
            params,
        }
    }

    pub fn map(&self) -> &RationalMap {
        &self.map
    }

    pub fn roots(&self) -> &[Complex64] {
        &self.roots
    }

    pub fn petals(&self) -> &[Complex64] {
        &self.petals
    }

    pub fn escape_radius(&self) -> f64 {
        self.escape_radius
    }

    pub fn params(&self) -> &DynamicsParams {
        &self.params
    }

    /// OrbitVerdict and number of map applications for the orbit of `z0`.
    pub fn classify(&self, z0: Complex64) -> (OrbitVerdict, usize) {
        self.run(z0, |_| {})
    }

    pub fn orbit(&self, z0: Complex64) -> Orbit {
        let mut points = vec![SpherePoint::Finite(z0)];
        let (verdict, iterations_used) = self.run(z0, |p| points.push(p));
        Orbit {
            points,
            verdict,
            iterations_used,
        }
    }

    fn run(&self, z0: Complex64, mut record: impl FnMut(SpherePoint)) -> (OrbitVerdict, usize) {
        if !z0.is_finite() {
            return (OrbitVerdict::Undecided, 0);
        }
        let sector = if self.petals.is_empty() {
            0.0
        } else {
            PI / (2.0 * self.petals.len() as f64)
        };
        let mut z = z0;
        let mut rising = 0usize;
        for j in 1..=self.params.max_iter {
            let next = self.map.eval(z);
            if !next.is_finite() {
                record(SpherePoint::Infinity);
                return (OrbitVerdict::Undecided, j);
            }
            record(SpherePoint::Finite(next));
            for (i, (&root, &radius)) in self.roots.iter().zip(&self.radii).enumerate() {
                let d = (z - root).norm();
                if d <= radius && (next - root).norm() <= d {
                    return (OrbitVerdict::ConvergedToRoot(i), j);
                }
            }
            if next.norm() >= z.norm() {
                rising += 1;
            } else {
                rising = 0;
            }
            if !self.petals.is_empty() && rising >= self.params.escape_steps && next.norm() > self.escape_radius {
                if let Some((petal, angle)) = nearest_petal(&self.petals, next) {
                    if angle <= sector {
                        return (OrbitVerdict::ConvergedToInfinity(petal), j);
                    }
                }
            }
            z = next;
        }
        (OrbitVerdict::Undecided, self.params.max_iter)
    }
}

/// One-shot classification of `z0`.
pub fn classify_point(map: &RationalMap, cert: &NewtonCertificate, z0: Complex64, params: DynamicsParams) -> Orbit {
    Classifier::new(map, cert, params).orbit(z0)
}
