use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{Classifier, OrbitVerdict};
use crate::error::{Error, Result};
use crate::newton::angle_between;
use crate::ratmap::RationalMap;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TraceParams {
    /// Samples on the initial segment `[z0, N(z0)]`.
    pub samples: usize,
    /// Number of forward images of the segment.
    pub generations: usize,
    /// Cap on the points of one generation after refinement.
    pub max_points: usize,
    /// Iterations of the seed before the flow continuation that fixes the
    /// landing direction.
    pub direction_steps: usize,
}

impl Default for TraceParams {
    fn default() -> Self {
        TraceParams {
            samples: 64,
            generations: 200,
            max_points: 4096,
            direction_steps: 10_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AccessTrace {
    pub seed: Complex64,
    pub petal: usize,
    pub polyline: Vec<Complex64>,
    /// Half-open index ranges into `polyline`, one per generation.
    pub generations: Vec<(usize, usize)>,
    /// Spacing of the samples on the initial segment; refinement keeps
    /// later generations at most this far apart.
    pub sampling_step: f64,
    pub landing_direction: Complex64,
    /// Angle between the landing direction and the petal direction.
    pub landing_error: f64,
    /// First generation from which the minimum modulus grows strictly.
    pub escaping_from: Option<usize>,
}

impl AccessTrace {
    pub fn generation(&self, g: usize) -> &[Complex64] {
        let (a, b) = self.generations[g];
        &self.polyline[a..b]
    }
}

/// Forward images of the segment `[z0, N(z0)]` inside the basin of `petal`.
pub fn trace_dynamical_access(classifier: &Classifier, z0: Complex64, petal: usize, params: TraceParams) -> Result<AccessTrace> {
    let petals = classifier.petals();
    if petals.is_empty() {
        return Err(Error::NotParabolic);
    }
    if petal >= petals.len() {
        return Err(Error::InvalidInput(format!("petal {petal} out of range (n = {})", petals.len())));
    }
    let want = OrbitVerdict::ConvergedToInfinity(petal);
    if classifier.classify(z0).0 != want {
        return Err(Error::SeedNotInParabolicBasin { seed: z0, petal });
    }
    let map = classifier.map();
    let z1 = map.eval(z0);
    let s = params.samples.max(2);
    let step = (z1 - z0).norm() / (s - 1) as f64;
    let at = |t: f64| z0 + (z1 - z0) * t;
    let mut gen: Vec<(f64, Complex64)> = (0..s)
        .map(|i| {
            let t = i as f64 / (s - 1) as f64;
            (t, at(t))
        })
        .collect();
    for &(_, z) in &gen {
        if classifier.classify(z).0 != want {
            return Err(Error::SegmentLeavesBasin { sample: z, petal });
        }
    }

    let mut polyline = Vec::new();
    let mut generations = Vec::new();
    let mut push = |gen: &[(f64, Complex64)], polyline: &mut Vec<Complex64>| {
        let start = polyline.len();
        polyline.extend(gen.iter().map(|e| e.1));
        generations.push((start, polyline.len()));
    };
    push(&gen, &mut polyline);
    for g in 1..=params.generations {
        let mut next: Vec<(f64, Complex64)> = gen.iter().map(|&(t, z)| (t, map.eval(z))).collect();
        refine(&mut next, step, params.max_points, |t| {
            (0..g).try_fold(at(t), |z, _| Some(map.eval(z)).filter(|w| w.is_finite()))
        });
        if next.iter().any(|e| !e.1.is_finite()) {
            return Err(Error::SegmentLeavesBasin { sample: z0, petal });
        }
        push(&next, &mut polyline);
        gen = next;
    }

    let landing_direction = orbit_direction(classifier, z0, params.direction_steps.max(2))
        .ok_or(Error::SeedNotInParabolicBasin { seed: z0, petal })?;
    let landing_error = angle_between(petals[petal], landing_direction);
    let mins: Vec<f64> = generations
        .iter()
        .map(|&(a, b)| polyline[a..b].iter().map(|z| z.norm()).fold(f64::INFINITY, f64::min))
        .collect();
    let mut escaping_from = None;
    for g in (0..mins.len()).rev() {
        if g + 1 < mins.len() && mins[g + 1] <= mins[g] {
            break;
        }
        escaping_from = Some(g);
    }
    if mins.len() < 2 {
        escaping_from = None;
    }
    Ok(AccessTrace {
        seed: z0,
        petal,
        polyline,
        generations,
        sampling_step: step,
        landing_direction,
        landing_error,
        escaping_from,
    })
}

/// Inserts parameter midpoints wherever consecutive points are more than
/// `step` apart.
fn refine(gen: &mut Vec<(f64, Complex64)>, step: f64, cap: usize, eval: impl Fn(f64) -> Option<Complex64>) {
    loop {
        let mut out = Vec::with_capacity(gen.len() * 2);
        let mut changed = false;
        for i in 0..gen.len() {
            out.push(gen[i]);
            if i + 1 == gen.len() || out.len() + (gen.len() - i) >= cap {
                continue;
            }
            let (ta, a) = gen[i];
            let (tb, b) = gen[i + 1];
            if (b - a).norm() > step && tb - ta > 1e-12 {
                let tm = 0.5 * (ta + tb);
                if let Some(m) = eval(tm) {
                    out.push((tm, m));
                    changed = true;
                }
            }
        }
        *gen = out;
        if !changed || gen.len() >= cap {
            return;
        }
    }
}

/// Direction in which the orbit of `z0` leaves towards ∞.
///
/// The orbit is followed for `steps` iterations and then continued along the
/// Newton flow `dz/dt = N(z) − z` out to `10⁶·|z_steps|`. Near ∞ the time-one
/// map of the flow agrees with `N` to leading order, so orbit and flow line
/// share their asymptote; the flow reaches moduli where the lower-order terms
/// of the map no longer bend the path, which iterating `N` alone would need
/// billions of steps for.
pub fn orbit_direction(classifier: &Classifier, z0: Complex64, steps: usize) -> Option<Complex64> {
    let map = classifier.map();
    let mut z = z0;
    for _ in 0..steps {
        z = map.eval(z);
        if !z.is_finite() {
            return None;
        }
    }
    flow_direction(map, z)
}

const FLOW_GROWTH: f64 = 1e6;
const FLOW_STEP: f64 = 0.02;
const FLOW_MAX_STEPS: usize = 20_000;

/// Asymptotic direction of the Newton flow line through `z`.
///
/// Integrated with RK4 in `u = log z` at unit speed; `N(z) − z = −T/B` with
/// `T = zB − A` avoids cancellation at large `|z|`.
fn flow_direction(map: &RationalMap, z: Complex64) -> Option<Complex64> {
    if z.norm() == 0.0 {
        return None;
    }
    let t = map.displacement_numerator();
    let b = map.den();
    let field = |u: Complex64| -> Option<Complex64> {
        let z = u.exp();
        let w = -t.eval(z) / (b.eval(z) * z);
        let norm = w.norm();
        (norm.is_finite() && norm > 0.0).then(|| w / norm)
    };
    let mut u = z.ln();
    let target = u.re + FLOW_GROWTH.ln();
    let h = FLOW_STEP;
    for _ in 0..FLOW_MAX_STEPS {
        if u.re >= target {
            let z = u.exp();
            return Some(z / z.norm());
        }
        let k1 = field(u)?;
        let k2 = field(u + k1 * (h / 2.0))?;
        let k3 = field(u + k2 * (h / 2.0))?;
        let k4 = field(u + k3 * h)?;
        u += (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0);
    }
    None
}

/// Escape direction of a point classified as converging to ∞, or `None`
/// otherwise.
pub fn escape_direction(classifier: &Classifier, z0: Complex64, steps: usize) -> Option<Complex64> {
    match classifier.classify(z0).0 {
        OrbitVerdict::ConvergedToInfinity(_) => orbit_direction(classifier, z0, steps),
        _ => None,
    }
}
