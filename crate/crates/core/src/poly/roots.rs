//! Simultaneous (Aberth–Ehrlich) root finding with multiplicity recovery.
//!
//! Multiple roots come out of the simultaneous iteration as tight clusters.
//! Clusters are merged in two stages: anything within the hard merge radius is
//! merged outright, and wider clusters are merged only if the polynomial
//! vanishes to the cluster's order at the centroid.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{vanishing_order, Polynomial, ONE, ZERO};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootOptions {
    pub max_iterations: usize,
    /// Roots closer than this are merged without further checks. `None` means
    /// `max(1e-8, 1e3 · ε · root_bound)`.
    pub merge_radius: Option<f64>,
    /// Largest cluster spread (relative to `1 + |centroid|`) considered for a
    /// validated merge.
    pub cluster_search: f64,
    /// Relative tolerance on the Taylor coefficients at a merged centroid.
    pub multiplicity_tol: f64,
}

impl Default for RootOptions {
    fn default() -> Self {
        RootOptions {
            max_iterations: 500,
            merge_radius: None,
            cluster_search: 1e-3,
            multiplicity_tol: 1e-9,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RootSet {
    /// Distinct roots with multiplicities, sorted by real then imaginary part.
    pub entries: Vec<(Complex64, usize)>,
    /// Upper bound on `|P(root)|` over all entries.
    pub residual_bound: f64,
    /// Hard merge radius that was used.
    pub merge_radius: f64,
    /// Largest spread among the clusters that were merged (0 if none).
    pub largest_merged_spread: f64,
    /// True when the simultaneous iteration stalled and deflation took over.
    pub used_deflation: bool,
}

impl RootSet {
    pub fn total_multiplicity(&self) -> usize {
        self.entries.iter().map(|e| e.1).sum()
    }

    pub fn locations(&self) -> impl Iterator<Item = Complex64> + '_ {
        self.entries.iter().map(|e| e.0)
    }
}

pub fn roots(p: &Polynomial) -> Result<RootSet> {
    roots_with(p, &RootOptions::default())
}

pub fn roots_with(p: &Polynomial, opts: &RootOptions) -> Result<RootSet> {
    let degree = match p.degree() {
        None | Some(0) => return Err(Error::ZeroPolynomial),
        Some(d) => d,
    };
    let monic = p.monic();
    // Exact zeros at the origin are split off so they come out exact.
    let zeros_at_origin = monic.coeffs().iter().take_while(|c| **c == ZERO).count();
    let reduced = Polynomial::new(monic.coeffs()[zeros_at_origin..].to_vec());

    let bound = root_bound(&monic);
    let merge_radius = opts
        .merge_radius
        .unwrap_or_else(|| (1e3 * f64::EPSILON * bound).max(1e-8));

    let mut raw: Vec<Complex64> = vec![ZERO; zeros_at_origin];
    let mut used_deflation = false;
    if reduced.degree_or_zero() > 0 {
        let found = match aberth(&reduced, opts.max_iterations) {
            Ok(r) => r,
            Err(_) => {
                used_deflation = true;
                deflation_roots(&reduced, opts.max_iterations)?
            }
        };
        raw.extend(found);
    }
    debug_assert_eq!(raw.len(), degree);

    let (mut entries, largest_merged_spread) = cluster(&monic, &raw, merge_radius, opts);
    entries.sort_by(|a, b| {
        a.0.re
            .partial_cmp(&b.0.re)
            .unwrap()
            .then(a.0.im.partial_cmp(&b.0.im).unwrap())
    });
    let residual_bound = entries
        .iter()
        .map(|e| p.eval(e.0).norm())
        .fold(0.0, f64::max);
    Ok(RootSet {
        entries,
        residual_bound,
        merge_radius,
        largest_merged_spread,
        used_deflation,
    })
}

/// Fujiwara's bound on root moduli of a monic polynomial.
fn root_bound(monic: &Polynomial) -> f64 {
    let n = monic.degree_or_zero();
    let c = monic.coeffs();
    let mut b: f64 = 0.0;
    for (i, a) in c.iter().enumerate().take(n) {
        let k = (n - i) as f64;
        let mut term = a.norm().powf(1.0 / k);
        if i == 0 {
            term = (a.norm() / 2.0).powf(1.0 / k);
        }
        b = b.max(term);
    }
    2.0 * b
}

fn aberth(p: &Polynomial, max_iterations: usize) -> Result<Vec<Complex64>> {
    let n = p.degree_or_zero();
    if n == 1 {
        return Ok(vec![-p.coeff(0) / p.coeff(1)]);
    }
    let center = -p.coeff(n - 1) / (p.coeff(n) * n as f64);
    let shifted = Polynomial::new(p.taylor_at(center));
    let radius = root_bound(&shifted.monic()).max(1e-3) * 0.5;
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| {
            let theta = 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.4;
            center + Complex64::from_polar(radius, theta)
        })
        .collect();
    let mut done = vec![false; n];
    let mut last_step = f64::INFINITY;
    for _ in 0..max_iterations {
        last_step = 0.0;
        for i in 0..n {
            if done[i] {
                continue;
            }
            let (v, dv) = p.eval_with_derivative(z[i]);
            if v == ZERO {
                done[i] = true;
                continue;
            }
            let ratio = v / dv;
            let repulsion: Complex64 = (0..n)
                .filter(|&j| j != i)
                .map(|j| {
                    let d = z[i] - z[j];
                    if d == ZERO {
                        ZERO
                    } else {
                        d.inv()
                    }
                })
                .sum();
            let w = ratio / (ONE - ratio * repulsion);
            if !w.is_finite() {
                // Perturb away from a degenerate configuration.
                let kick = Complex64::new(1e-7, 1e-7) * (1.0 + z[i].norm());
                z[i] += kick;
                last_step = f64::INFINITY;
                continue;
            }
            z[i] -= w;
            let step = w.norm();
            last_step = last_step.max(step);
            if step <= 4.0 * f64::EPSILON * (1.0 + z[i].norm()) {
                done[i] = true;
            }
        }
        if done.iter().all(|&d| d) {
            return Ok(z);
        }
    }
    // Stalled roots that still sit on tiny residuals are as good as it gets.
    let ok = z.iter().all(|&zi| {
        let noise = 1e3 * f64::EPSILON * p.eval_abs(zi.norm());
        p.eval(zi).norm() <= noise
    });
    if ok {
        Ok(z)
    } else {
        Err(Error::RootFinderFailed {
            iterations: max_iterations,
            last_step,
        })
    }
}

/// One root at a time with Laguerre's method, deflating as we go.
fn deflation_roots(p: &Polynomial, max_iterations: usize) -> Result<Vec<Complex64>> {
    let mut work = p.clone();
    let mut out = Vec::new();
    while let Some(n) = work.degree().filter(|&d| d > 0) {
        if n == 1 {
            out.push(-work.coeff(0) / work.coeff(1));
            break;
        }
        let root = laguerre(&work, ZERO, max_iterations)?;
        let root = polish(p, root);
        out.push(root);
        let (q, _) = work.divmod(&Polynomial::new(vec![-root, ONE]))?;
        work = q;
    }
    Ok(out)
}

fn laguerre(p: &Polynomial, start: Complex64, max_iterations: usize) -> Result<Complex64> {
    let n = p.degree_or_zero() as f64;
    let dp = p.derivative();
    let ddp = dp.derivative();
    let mut z = start;
    for it in 0..max_iterations {
        let v = p.eval(z);
        if v.norm() <= 4.0 * f64::EPSILON * p.eval_abs(z.norm()) {
            return Ok(z);
        }
        let g = dp.eval(z) / v;
        let h = g * g - ddp.eval(z) / v;
        let sq = ((h * n - g * g) * (n - 1.0)).sqrt();
        let d1 = g + sq;
        let d2 = g - sq;
        let denom = if d1.norm() >= d2.norm() { d1 } else { d2 };
        let step = if denom.norm() > 0.0 {
            Complex64::new(n, 0.0) / denom
        } else {
            Complex64::from_polar(1.0 + z.norm(), it as f64)
        };
        z -= step;
        if step.norm() <= f64::EPSILON * (1.0 + z.norm()) {
            return Ok(z);
        }
    }
    Err(Error::RootFinderFailed {
        iterations: max_iterations,
        last_step: f64::NAN,
    })
}

/// A couple of Newton steps, kept only while they reduce the residual.
fn polish(p: &Polynomial, mut z: Complex64) -> Complex64 {
    let mut best = p.eval(z).norm();
    for _ in 0..3 {
        let (v, dv) = p.eval_with_derivative(z);
        if dv == ZERO || v == ZERO {
            break;
        }
        let cand = z - v / dv;
        let r = p.eval(cand).norm();
        if r < best {
            best = r;
            z = cand;
        } else {
            break;
        }
    }
    z
}

struct Cluster {
    members: Vec<Complex64>,
}

impl Cluster {
    fn centroid(&self) -> Complex64 {
        self.members.iter().sum::<Complex64>() / self.members.len() as f64
    }

    /// Centroid sharpened by Newton on `P^(μ-1)`, which has a simple root at a
    /// μ-fold root of `P`.
    fn refined(&self, p: &Polynomial) -> Complex64 {
        let mut d = p.clone();
        for _ in 1..self.members.len() {
            d = d.derivative();
        }
        polish(&d, self.centroid())
    }

    fn spread(&self) -> f64 {
        let c = self.centroid();
        self.members.iter().map(|m| (m - c).norm()).fold(0.0, f64::max)
    }
}

fn cluster(
    p: &Polynomial,
    raw: &[Complex64],
    merge_radius: f64,
    opts: &RootOptions,
) -> (Vec<(Complex64, usize)>, f64) {
    let mut clusters: Vec<Cluster> = raw
        .iter()
        .map(|&z| Cluster { members: vec![z] })
        .collect();
    // Pairs whose validated merge was refused; indices refer to the current
    // cluster list and the list is reset whenever a merge changes it.
    let mut refused: Vec<(usize, usize)> = Vec::new();
    let mut largest = 0.0f64;
    loop {
        let mut best: Option<(usize, usize, f64)> = None;
        for i in 0..clusters.len() {
            let ci = clusters[i].centroid();
            for j in i + 1..clusters.len() {
                if refused.contains(&(i, j)) {
                    continue;
                }
                let d = (ci - clusters[j].centroid()).norm();
                if best.is_none_or(|b| d < b.2) {
                    best = Some((i, j, d));
                }
            }
        }
        let Some((i, j, d)) = best else { break };
        let scale = 1.0 + clusters[i].centroid().norm();
        if d > opts.cluster_search * scale {
            break;
        }
        let mut merged = clusters[i].members.clone();
        merged.extend_from_slice(&clusters[j].members);
        let candidate = Cluster { members: merged };
        let accept = d <= merge_radius || {
            let mult = candidate.members.len();
            vanishing_order(p, candidate.refined(p), mult, opts.multiplicity_tol) == mult
        };
        if accept {
            largest = largest.max(candidate.spread());
            clusters[i] = candidate;
            clusters.swap_remove(j);
            refused.clear();
        } else {
            refused.push((i, j));
        }
    }
    let entries = clusters
        .iter()
        .map(|c| (c.refined(p), c.members.len()))
        .collect();
    (entries, largest)
}
