//! Recognition and construction of rational Newton maps `N = z − f/f'` for
//! `f = p·e^q`.
//!
//! For such maps `1/(z − N(z)) = p'/p + q' = Σ m_i/(z − z_i) + q'(z)`, so the
//! partial fractions of the displacement reciprocal read off the roots of `p`
//! with their multiplicities (as residues) and `q'` (as the polynomial part).
//! Conversely any map whose decomposition has only simple poles with positive
//! integer residues is of this form.
//!
//! # Petal directions at infinity
//!
//! From the same identity, for large `z` the displacement is dominated by `q'`:
//! `N(z) = z − 1/(n·q_n·z^{n−1}) + O(z^{−n})` where `q_n` is the leading
//! coefficient of `q` and `n = deg q`. An orbit near ∞ moves outward exactly
//! when the step `−1/(n·q_n·z^{n−1})` is a positive multiple of `z`, i.e. when
//! `z^n` is a negative multiple of `1/q_n`. The attracting directions are
//! therefore the `n` unit vectors `v` with `v^n = −t/q_n`, `t > 0`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::Polynomial;
use crate::ratmap::{InfinityStatus, RationalMap};

/// Default tolerance for snapping residues to integers.
pub const DEFAULT_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RootMultiplicity {
    pub z: Complex64,
    pub m: u32,
}

/// Witness that a rational map is the Newton map of `p·e^q` with
/// `p = ∏ (z − z_i)^{m_i}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NewtonCertificate {
    pub roots: Vec<RootMultiplicity>,
    /// Normalized so that `q(0) = 0`.
    pub q: Polynomial,
    pub k: usize,
    pub n: usize,
    pub degree: usize,
}

impl NewtonCertificate {
    /// Assembles a certificate, normalizing `q(0) = 0` and deriving `k`, `n`, `degree`.
    pub fn new(roots: Vec<RootMultiplicity>, q: Polynomial) -> Self {
        let q = &q - &Polynomial::constant(q.coeff(0));
        let k = roots.len();
        let n = q.degree_or_zero();
        NewtonCertificate {
            roots,
            q,
            k,
            n,
            degree: k + n,
        }
    }

    pub fn p(&self) -> Polynomial {
        let rm: Vec<_> = self.roots.iter().map(|r| (r.z, r.m as usize)).collect();
        Polynomial::from_roots(&rm)
    }

    /// `Σ m_i`, the degree of `p`.
    pub fn total_multiplicity(&self) -> u32 {
        self.roots.iter().map(|r| r.m).sum()
    }

    pub fn root_locations(&self) -> Vec<Complex64> {
        self.roots.iter().map(|r| r.z).collect()
    }
}

/// Builds `N = z − p/(p' + p·q')` in lowest terms.
pub fn construct(p_roots: &[(Complex64, u32)], q: &Polynomial) -> Result<(RationalMap, NewtonCertificate)> {
    for (i, &(z, m)) in p_roots.iter().enumerate() {
        if m == 0 {
            return Err(Error::InvalidInput(format!("root {z} has multiplicity 0")));
        }
        if !z.is_finite() {
            return Err(Error::InvalidInput(format!("root {z} is not finite")));
        }
        if p_roots[..i].iter().any(|&(w, _)| w == z) {
            return Err(Error::InvalidInput(format!("root {z} listed twice")));
        }
    }
    let cert = NewtonCertificate::new(
        p_roots.iter().map(|&(z, m)| RootMultiplicity { z, m }).collect(),
        q.clone(),
    );
    if cert.k + cert.n < 2 {
        return Err(Error::DegenerateMap(format!(
            "k + deg q = {} < 2: the Newton map has degree below 2",
            cert.k + cert.n
        )));
    }
    let p = cert.p();
    let den = &p.derivative() + &(&p * &cert.q.derivative());
    let num = &den.shift_up(1) - &p;
    let map = RationalMap::normalize(num, den)?;
    Ok((map, cert))
}

/// Why a map failed the Newton test.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "reason")]
pub enum NotNewtonReason {
    InfinityNotFixed,
    HigherOrderPole { z: Complex64, order: usize },
    NonIntegerResidue { z: Complex64, value: Complex64 },
    NonPositiveResidue { z: Complex64, value: Complex64 },
    /// Residues pass but ∞ is neither repelling nor parabolic.
    InfinityNotWeaklyRepelling { status: InfinityStatus },
}

/// Per-pole evidence gathered by [`detect`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidueReport {
    pub z: Complex64,
    pub order: usize,
    /// Coefficient of `(z − z_i)^{-1}`.
    pub residue: Complex64,
    /// Integer the residue snapped to, if it did.
    pub snapped: Option<i64>,
    /// Outside `tol` but within `10·tol` of an integer.
    pub near_miss: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    Newton { certificate: NewtonCertificate },
    NotNewton { reason: NotNewtonReason },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Detection {
    #[serde(flatten)]
    pub verdict: Verdict,
    pub residues: Vec<ResidueReport>,
    pub infinity: InfinityStatus,
    pub tol: f64,
}

impl Detection {
    pub fn certificate(&self) -> Option<&NewtonCertificate> {
        match &self.verdict {
            Verdict::Newton { certificate } => Some(certificate),
            Verdict::NotNewton { .. } => None,
        }
    }

    pub fn reason(&self) -> Option<&NotNewtonReason> {
        match &self.verdict {
            Verdict::Newton { .. } => None,
            Verdict::NotNewton { reason } => Some(reason),
        }
    }
}

fn snap(r: Complex64, tol: f64) -> (Option<i64>, bool) {
    let nearest = r.re.round();
    let dist = (r.re - nearest).abs().max(r.im.abs());
    if dist <= tol {
        (Some(nearest as i64), false)
    } else {
        (None, dist <= 10.0 * tol)
    }
}

/// Decides whether `map` is a Newton map and, if so, reconstructs `(p, q)`.
pub fn detect(map: &RationalMap, tol: f64) -> Result<Detection> {
    if map.degree() < 2 {
        return Err(Error::InvalidInput(format!(
            "detection needs degree ≥ 2, got {}",
            map.degree()
        )));
    }
    let infinity = map.infinity_status();
    let not_newton = |reason, residues| {
        Ok(Detection {
            verdict: Verdict::NotNewton { reason },
            residues,
            infinity,
            tol,
        })
    };
    if let InfinityStatus::NotFixed { .. } = infinity {
        return not_newton(NotNewtonReason::InfinityNotFixed, Vec::new());
    }

    let pf = map.partial_fractions_of_displacement()?;
    let residues: Vec<ResidueReport> = pf
        .poles
        .iter()
        .map(|pole| {
            let (snapped, near_miss) = snap(pole.residue(), tol);
            ResidueReport {
                z: pole.location,
                order: pole.order(),
                residue: pole.residue(),
                snapped,
                near_miss,
            }
        })
        .collect();

    let mut failure = None;
    for r in &residues {
        let reason = if r.order > 1 {
            Some(NotNewtonReason::HigherOrderPole { z: r.z, order: r.order })
        } else {
            match r.snapped {
                Some(m) if m >= 1 => None,
                Some(_) => Some(NotNewtonReason::NonPositiveResidue { z: r.z, value: r.residue }),
                None if r.residue.re <= 0.0 => {
                    Some(NotNewtonReason::NonPositiveResidue { z: r.z, value: r.residue })
                }
                None => Some(NotNewtonReason::NonIntegerResidue { z: r.z, value: r.residue }),
            }
        };
        if reason.is_some() {
            failure = reason;
            break;
        }
    }
    if let Some(reason) = failure {
        return not_newton(reason, residues);
    }
    if !infinity.is_weakly_repelling() {
        return not_newton(NotNewtonReason::InfinityNotWeaklyRepelling { status: infinity }, residues);
    }

    let roots = residues
        .iter()
        .map(|r| RootMultiplicity {
            z: r.z,
            m: r.snapped.expect("accepted residues are snapped") as u32,
        })
        .collect();
    let mut certificate = NewtonCertificate::new(roots, pf.polynomial_part.antiderivative());
    certificate.degree = map.degree();
    Ok(Detection {
        verdict: Verdict::Newton { certificate },
        residues,
        infinity,
        tol,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultiplierCheck {
    pub z: Complex64,
    pub m: u32,
    pub multiplier: Complex64,
    pub expected: f64,
    pub deviation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultiplierReport {
    pub checks: Vec<MultiplierCheck>,
    pub worst_deviation: f64,
}

/// Checks `N'(z_i) = (m_i − 1)/m_i` at every root recorded in the certificate.
pub fn validate_multipliers(map: &RationalMap, cert: &NewtonCertificate, tol: f64) -> Result<MultiplierReport> {
    let deriv = map.derivative()?;
    let mut checks = Vec::with_capacity(cert.roots.len());
    for r in &cert.roots {
        let multiplier = deriv.eval(r.z);
        let expected = (r.m as f64 - 1.0) / r.m as f64;
        let deviation = (multiplier - expected).norm();
        let deviation = if deviation.is_nan() { f64::INFINITY } else { deviation };
        if deviation > tol {
            return Err(Error::ValidationFailed {
                location: r.z,
                multiplier,
                expected,
                deviation,
            });
        }
        checks.push(MultiplierCheck {
            z: r.z,
            m: r.m,
            multiplier,
            expected,
            deviation,
        });
    }
    let worst_deviation = checks.iter().map(|c| c.deviation).fold(0.0, f64::max);
    Ok(MultiplierReport { checks, worst_deviation })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InfinityKind {
    Repelling,
    Parabolic,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InfinityClassification {
    pub kind: InfinityKind,
    /// `m/(m−1)` with `m = deg p`; repelling case only.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub multiplier: Option<f64>,
    /// `n + 1`; parabolic case only.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub parabolic_multiplicity: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub petal_count: Option<usize>,
}

pub fn classify_infinity(cert: &NewtonCertificate) -> InfinityClassification {
    if cert.n == 0 {
        let m = cert.total_multiplicity() as f64;
        InfinityClassification {
            kind: InfinityKind::Repelling,
            multiplier: Some(m / (m - 1.0)),
            parabolic_multiplicity: None,
            petal_count: None,
        }
    } else {
        InfinityClassification {
            kind: InfinityKind::Parabolic,
            multiplier: None,
            parabolic_multiplicity: Some(cert.n + 1),
            petal_count: Some(cert.n),
        }
    }
}

/// Attracting directions of the parabolic point at ∞, sorted by argument in `(−π, π]`.
pub fn petal_directions(cert: &NewtonCertificate) -> Result<Vec<Complex64>> {
    let n = cert.n;
    if n == 0 {
        return Err(Error::NotParabolic);
    }
    let base = PI - cert.q.leading().arg();
    let mut dirs: Vec<Complex64> = (0..n)
        .map(|j| Complex64::from_polar(1.0, (base + 2.0 * PI * j as f64) / n as f64))
        .map(|v| Complex64::from_polar(1.0, v.arg()))
        .collect();
    dirs.sort_by(|a, b| a.arg().partial_cmp(&b.arg()).unwrap());
    Ok(dirs)
}

/// Index of the petal direction closest in angle to `z`.
pub fn nearest_petal(dirs: &[Complex64], z: Complex64) -> Option<(usize, f64)> {
    dirs.iter()
        .enumerate()
        .map(|(i, v)| (i, angle_between(*v, z)))
        .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
}

/// Unsigned angle between two non-zero complex numbers.
pub fn angle_between(a: Complex64, b: Complex64) -> f64 {
    (b / a).arg().abs()
}
