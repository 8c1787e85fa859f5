//! Rational maps of the Riemann sphere.

mod partial;

pub use partial::{PartialFractionDecomp, Pole};

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{roots, Polynomial, RootSet};

/// Relative tolerance used to cancel common factors of numerator and denominator.
pub const NORMALIZE_TOL: f64 = 1e-9;
/// Relative size below which leading coefficients of `z·B − A` count as rounding noise.
pub const TRIM_TOL: f64 = 1e-10;
/// Tolerance on `|λ|` when classifying fixed points.
pub const CLASSIFY_TOL: f64 = 1e-9;

/// A point of the Riemann sphere.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpherePoint {
    Finite(Complex64),
    Infinity,
}

impl SpherePoint {
    pub fn finite(self) -> Option<Complex64> {
        match self {
            SpherePoint::Finite(z) => Some(z),
            SpherePoint::Infinity => None,
        }
    }

    pub fn is_infinity(self) -> bool {
        matches!(self, SpherePoint::Infinity)
    }
}

impl From<Complex64> for SpherePoint {
    fn from(z: Complex64) -> Self {
        SpherePoint::Finite(z)
    }
}

impl fmt::Display for SpherePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpherePoint::Finite(z) => write!(f, "{z}"),
            SpherePoint::Infinity => write!(f, "∞"),
        }
    }
}

/// `N = num / den` with coprime numerator and denominator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RationalMap {
    num: Polynomial,
    den: Polynomial,
    #[serde(skip)]
    cancelled_degree: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FixedPointKind {
    Superattracting,
    Attracting,
    Repelling,
    RationallyIndifferent,
    IrrationallyIndifferent,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FixedPointRecord {
    pub location: SpherePoint,
    /// `None` only for a multiple fixed point at infinity.
    pub multiplier: Option<Complex64>,
    pub fixed_multiplicity: usize,
    pub classification: FixedPointKind,
}

/// How the map behaves at infinity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InfinityStatus {
    NotFixed { image: SpherePoint },
    Superattracting { local_degree: usize },
    Attracting { multiplier: Complex64 },
    Indifferent { multiplier: Complex64 },
    Repelling { multiplier: Complex64 },
    /// Multiplier exactly 1; `multiplicity` is that of ∞ as a root of the fixed-point equation.
    Parabolic { multiplicity: usize },
}

impl InfinityStatus {
    /// Repelling, or parabolic with multiplier +1.
    pub fn is_weakly_repelling(&self) -> bool {
        matches!(
            self,
            InfinityStatus::Repelling { .. } | InfinityStatus::Parabolic { .. }
        )
    }
}

/// Classifies a fixed point from its multiplier.
pub fn classify_multiplier(lambda: Complex64, tol: f64) -> FixedPointKind {
    let r = lambda.norm();
    if r <= tol {
        FixedPointKind::Superattracting
    } else if r < 1.0 - tol {
        FixedPointKind::Attracting
    } else if r > 1.0 + tol {
        FixedPointKind::Repelling
    } else {
        // λ = e^{2πiθ}; rational θ with small denominator shows up as λ^q ≈ 1.
        let mut power = Complex64::new(1.0, 0.0);
        for q in 1..=64u32 {
            power *= lambda;
            if (power - 1.0).norm() <= tol * q as f64 {
                return FixedPointKind::RationallyIndifferent;
            }
        }
        FixedPointKind::IrrationallyIndifferent
    }
}

impl RationalMap {
    /// Puts `num/den` in lowest terms.
    pub fn normalize(num: Polynomial, den: Polynomial) -> Result<RationalMap> {
        let map = Self::reduce(num, den)?;
        if map.degree() == 0 {
            return Err(Error::DegenerateMap(format!(
                "constant map {}",
                map.eval_sphere(SpherePoint::Finite(Complex64::new(0.0, 0.0)))
            )));
        }
        Ok(map)
    }

    /// Lowest terms, constants allowed.
    fn reduce(num: Polynomial, den: Polynomial) -> Result<RationalMap> {
        if den.is_zero() {
            return Err(Error::DivisionByZeroPolynomial);
        }
        if num.is_zero() {
            return Ok(RationalMap {
                num,
                den: Polynomial::one(),
                cancelled_degree: 0,
            });
        }
        let g = num.gcd_approx(&den, NORMALIZE_TOL);
        let cancelled_degree = g.degree_or_zero();
        if cancelled_degree == 0 {
            return Ok(RationalMap {
                num,
                den,
                cancelled_degree,
            });
        }
        let (num, _) = num.divmod(&g)?;
        let (den, _) = den.divmod(&g)?;
        Ok(RationalMap {
            num,
            den,
            cancelled_degree,
        })
    }

    /// The polynomial map `p`.
    pub fn polynomial(p: Polynomial) -> Result<RationalMap> {
        Self::normalize(p, Polynomial::one())
    }

    pub fn num(&self) -> &Polynomial {
        &self.num
    }

    pub fn den(&self) -> &Polynomial {
        &self.den
    }

    /// Degree of the common factor removed by normalization.
    pub fn cancelled_degree(&self) -> usize {
        self.cancelled_degree
    }

    pub fn degree(&self) -> usize {
        self.num.degree_or_zero().max(self.den.degree_or_zero())
    }

    /// Plain evaluation for hot loops; poles give non-finite values.
    #[inline]
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.num.eval(z) / self.den.eval(z)
    }

    pub fn eval_sphere(&self, z: SpherePoint) -> SpherePoint {
        match z {
            SpherePoint::Finite(z) => {
                let b = self.den.eval(z);
                if b == Complex64::new(0.0, 0.0) {
                    return SpherePoint::Infinity;
                }
                let w = self.num.eval(z) / b;
                if w.is_finite() {
                    SpherePoint::Finite(w)
                } else {
                    SpherePoint::Infinity
                }
            }
            SpherePoint::Infinity => {
                let (da, db) = (self.num.degree(), self.den.degree_or_zero());
                match da {
                    None => SpherePoint::Finite(Complex64::new(0.0, 0.0)),
                    Some(da) if da > db => SpherePoint::Infinity,
                    Some(da) if da < db => SpherePoint::Finite(Complex64::new(0.0, 0.0)),
                    Some(_) => SpherePoint::Finite(self.num.leading() / self.den.leading()),
                }
            }
        }
    }

    /// `N'` in lowest terms.
    ///
    /// With `B = c ∏(z − ρ_j)^{μ_j}` the factor `∏(z − ρ_j)^{μ_j − 1}` divides
    /// both `A'B − AB'` and `B²`; it is removed analytically.
    pub fn derivative(&self) -> Result<RationalMap> {
        let (a, b) = (&self.num, &self.den);
        let top = &(&a.derivative() * b) - &(a * &b.derivative());
        if b.degree_or_zero() == 0 {
            let c = b.coeff(0).inv();
            return Self::reduce(top.scale(c * c), Polynomial::one());
        }
        let poles = roots(b)?;
        let excess: Vec<_> = poles
            .entries
            .iter()
            .filter(|e| e.1 > 1)
            .map(|&(r, m)| (r, m - 1))
            .collect();
        let g = Polynomial::from_roots(&excess);
        let (top, _) = top.divmod(&g)?;
        let (bottom, _) = (b * b).divmod(&g)?;
        let top = top.trimmed(TRIM_TOL, top.norm_inf());
        Ok(RationalMap {
            num: top,
            den: bottom,
            cancelled_degree: g.degree_or_zero(),
        })
    }

    /// `z·B − A`, whose roots are the finite fixed points, with rounding noise
    /// removed from the top coefficients.
    pub fn displacement_numerator(&self) -> Polynomial {
        let zb = self.den.shift_up(1);
        let t = &zb - &self.num;
        let scale = zb.norm_inf().max(self.num.norm_inf());
        t.trimmed(TRIM_TOL, scale)
    }

    pub fn infinity_status(&self) -> InfinityStatus {
        let da = self.num.degree_or_zero();
        let db = self.den.degree_or_zero();
        if da <= db {
            return InfinityStatus::NotFixed {
                image: self.eval_sphere(SpherePoint::Infinity),
            };
        }
        if da >= db + 2 {
            return InfinityStatus::Superattracting {
                local_degree: da - db,
            };
        }
        let t = self.displacement_numerator();
        let multiplicity = 1 + da - t.degree_or_zero();
        if multiplicity >= 2 || t.is_zero() {
            return InfinityStatus::Parabolic { multiplicity };
        }
        let multiplier = self.den.leading() / self.num.leading();
        match classify_multiplier(multiplier, CLASSIFY_TOL) {
            FixedPointKind::Attracting | FixedPointKind::Superattracting => {
                InfinityStatus::Attracting { multiplier }
            }
            FixedPointKind::Repelling => InfinityStatus::Repelling { multiplier },
            _ => InfinityStatus::Indifferent { multiplier },
        }
    }

    /// All fixed points on the sphere. Finite ones are the roots of `z·B − A`.
    pub fn fixed_points(&self) -> Result<Vec<FixedPointRecord>> {
        let t = self.displacement_numerator();
        if t.is_zero() {
            return Err(Error::DegenerateMap("identity map".into()));
        }
        let mut out = Vec::new();
        if t.degree_or_zero() > 0 {
            let deriv = self.derivative()?;
            for (z, mult) in roots(&t)?.entries {
                let (multiplier, classification) = if mult >= 2 {
                    (Complex64::new(1.0, 0.0), FixedPointKind::RationallyIndifferent)
                } else {
                    let lambda = deriv.eval(z);
                    (lambda, classify_multiplier(lambda, CLASSIFY_TOL))
                };
                out.push(FixedPointRecord {
                    location: SpherePoint::Finite(z),
                    multiplier: Some(multiplier),
                    fixed_multiplicity: mult,
                    classification,
                });
            }
        }
        let inf = match self.infinity_status() {
            InfinityStatus::NotFixed { .. } => None,
            InfinityStatus::Superattracting { .. } => Some((
                Some(Complex64::new(0.0, 0.0)),
                1,
                FixedPointKind::Superattracting,
            )),
            InfinityStatus::Parabolic { multiplicity } => {
                Some((None, multiplicity, FixedPointKind::RationallyIndifferent))
            }
            InfinityStatus::Attracting { multiplier }
            | InfinityStatus::Indifferent { multiplier }
            | InfinityStatus::Repelling { multiplier } => Some((
                Some(multiplier),
                1,
                classify_multiplier(multiplier, CLASSIFY_TOL),
            )),
        };
        if let Some((multiplier, fixed_multiplicity, classification)) = inf {
            out.push(FixedPointRecord {
                location: SpherePoint::Infinity,
                multiplier,
                fixed_multiplicity,
                classification,
            });
        }
        Ok(out)
    }

    /// Partial fractions of `1/(z − N(z)) = B/(z·B − A)`.
    pub fn partial_fractions_of_displacement(&self) -> Result<PartialFractionDecomp> {
        let t = self.displacement_numerator();
        if t.is_zero() {
            return Err(Error::DegenerateMap("identity map".into()));
        }
        PartialFractionDecomp::of_quotient(&self.den, &t)
    }

    /// Finite poles of `N` (roots of the denominator).
    pub fn poles(&self) -> Result<Option<RootSet>> {
        if self.den.degree_or_zero() == 0 {
            return Ok(None);
        }
        roots(&self.den).map(Some)
    }
}

impl fmt::Display for RationalMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] / [{}]", self.num, self.den)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn real(cs: &[f64]) -> Polynomial {
        Polynomial::from_real(cs)
    }

    /// (z²+1)/(2z), the Newton map of z²−1.
    fn quadratic_newton() -> RationalMap {
        RationalMap::normalize(real(&[1.0, 0.0, 1.0]), real(&[0.0, 2.0])).unwrap()
    }

    /// z²/(1+z), the Newton map of z·e^z.
    fn parabolic_newton() -> RationalMap {
        RationalMap::normalize(real(&[0.0, 0.0, 1.0]), real(&[1.0, 1.0])).unwrap()
    }

    fn same_map(m: &RationalMap, num: &[f64], den: &[f64]) -> bool {
        // Compare as functions at a few points.
        let other = RationalMap {
            num: real(num),
            den: real(den),
            cancelled_degree: 0,
        };
        [c(0.3, 0.7), c(-1.2, 0.1), c(2.0, -1.5)]
            .iter()
            .all(|&z| (m.eval(z) - other.eval(z)).norm() < 1e-12)
            && m.num.degree() == other.num.degree()
            && m.den.degree() == other.den.degree()
    }

    #[test]
    fn normalize_examples() {
        let m = RationalMap::normalize(real(&[-1.0, 0.0, 1.0]), real(&[-1.0, 1.0])).unwrap();
        assert!(same_map(&m, &[1.0, 1.0], &[1.0]));
        assert_eq!(m.cancelled_degree(), 1);

        let m = quadratic_newton();
        assert_eq!(m.num(), &real(&[1.0, 0.0, 1.0]));
        assert_eq!(m.den(), &real(&[0.0, 2.0]));
        assert_eq!(m.cancelled_degree(), 0);

        let m = RationalMap::normalize(real(&[0.0, -1.0, 1.0]), real(&[0.0, 1.0, 1.0])).unwrap();
        assert!(same_map(&m, &[-1.0, 1.0], &[1.0, 1.0]));
    }

    #[test]
    fn constant_maps_are_degenerate() {
        let e = RationalMap::normalize(real(&[-2.0, 2.0]), real(&[-1.0, 1.0])).unwrap_err();
        assert!(matches!(e, Error::DegenerateMap(_)));
        assert!(RationalMap::normalize(real(&[1.0]), Polynomial::zero()).is_err());
    }

    #[test]
    fn sphere_evaluation() {
        let m = quadratic_newton();
        assert_eq!(m.eval_sphere(c(0.0, 0.0).into()), SpherePoint::Infinity);
        assert_eq!(m.eval_sphere(SpherePoint::Infinity), SpherePoint::Infinity);
        assert_eq!(m.eval_sphere(c(1.0, 0.0).into()), SpherePoint::Finite(c(1.0, 0.0)));
        let inv = RationalMap::normalize(real(&[1.0]), real(&[0.0, 1.0])).unwrap();
        assert_eq!(inv.eval_sphere(SpherePoint::Infinity), SpherePoint::Finite(c(0.0, 0.0)));
    }

    // Quotient rule written out by hand, independent of `derivative`.
    fn quotient_rule_at(m: &RationalMap, z: Complex64) -> Complex64 {
        let (a, da) = m.num().eval_with_derivative(z);
        let (b, db) = m.den().eval_with_derivative(z);
        (da * b - a * db) / (b * b)
    }

    #[test]
    fn derivative_examples() {
        let d = quadratic_newton().derivative().unwrap();
        assert!(same_map(&d, &[-1.0, 0.0, 1.0], &[0.0, 0.0, 2.0]));
        let d = parabolic_newton().derivative().unwrap();
        assert!(same_map(&d, &[0.0, 2.0, 1.0], &[1.0, 2.0, 1.0]));
        let shift = RationalMap::polynomial(real(&[3.5, 1.0])).unwrap();
        let d = shift.derivative().unwrap();
        assert_eq!(d.degree(), 0);
        assert_eq!(d.eval(c(7.0, 1.0)), c(1.0, 0.0));
    }

    #[test]
    fn derivative_with_double_pole() {
        // (2z³+1)/(3z²): Newton map of z³−1.
        let m = RationalMap::normalize(real(&[1.0, 0.0, 0.0, 2.0]), real(&[0.0, 0.0, 3.0])).unwrap();
        let d = m.derivative().unwrap();
        assert_eq!(d.den().degree(), Some(3));
        for z in [c(0.4, 0.9), c(-1.3, 0.2)] {
            assert!((d.eval(z) - quotient_rule_at(&m, z)).norm() < 1e-12);
        }
    }

    #[test]
    fn fixed_point_examples() {
        let fps = quadratic_newton().fixed_points().unwrap();
        assert_eq!(fps.len(), 3);
        for want in [-1.0, 1.0] {
            let r = fps
                .iter()
                .find(|r| r.location.finite().is_some_and(|z| (z - c(want, 0.0)).norm() < 1e-12))
                .unwrap();
            assert_eq!(r.classification, FixedPointKind::Superattracting);
            assert!(r.multiplier.unwrap().norm() < 1e-12);
        }
        assert_eq!(fps[2].location, SpherePoint::Infinity);
        assert_eq!(fps[2].classification, FixedPointKind::Repelling);
        assert!((fps[2].multiplier.unwrap() - c(2.0, 0.0)).norm() < 1e-12);

        let fps = parabolic_newton().fixed_points().unwrap();
        assert_eq!(fps.len(), 2);
        assert_eq!(fps[0].location, SpherePoint::Finite(c(0.0, 0.0)));
        assert_eq!(fps[0].multiplier, Some(c(0.0, 0.0)));
        assert_eq!(fps[1].location, SpherePoint::Infinity);
        assert_eq!(fps[1].fixed_multiplicity, 2);
        assert_eq!(fps[1].multiplier, None);

        let sq = RationalMap::polynomial(real(&[0.0, 0.0, 1.0])).unwrap();
        let fps = sq.fixed_points().unwrap();
        assert_eq!(fps.len(), 3);
        assert_eq!(fps[0].classification, FixedPointKind::Superattracting);
        assert!((fps[1].multiplier.unwrap() - c(2.0, 0.0)).norm() < 1e-12);
        assert_eq!(fps[1].classification, FixedPointKind::Repelling);
        assert_eq!(fps[2].classification, FixedPointKind::Superattracting);
    }

    #[test]
    fn identity_has_no_isolated_fixed_points() {
        let id = RationalMap::polynomial(Polynomial::identity()).unwrap();
        assert!(matches!(id.fixed_points(), Err(Error::DegenerateMap(_))));
        assert!(matches!(
            id.partial_fractions_of_displacement(),
            Err(Error::DegenerateMap(_))
        ));
    }

    #[test]
    fn multiplier_classes() {
        assert_eq!(classify_multiplier(c(0.0, 0.0), 1e-9), FixedPointKind::Superattracting);
        assert_eq!(classify_multiplier(c(0.5, 0.0), 1e-9), FixedPointKind::Attracting);
        assert_eq!(classify_multiplier(c(0.0, 1.5), 1e-9), FixedPointKind::Repelling);
        assert_eq!(classify_multiplier(c(-1.0, 0.0), 1e-9), FixedPointKind::RationallyIndifferent);
        let golden = (5f64.sqrt() - 1.0) / 2.0;
        let lambda = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * golden);
        assert_eq!(classify_multiplier(lambda, 1e-9), FixedPointKind::IrrationallyIndifferent);
    }

    #[test]
    fn infinity_status_cases() {
        assert!(matches!(
            quadratic_newton().infinity_status(),
            InfinityStatus::Repelling { .. }
        ));
        assert_eq!(
            parabolic_newton().infinity_status(),
            InfinityStatus::Parabolic { multiplicity: 2 }
        );
        let sq = RationalMap::polynomial(real(&[0.0, 0.0, 1.0])).unwrap();
        assert_eq!(
            sq.infinity_status(),
            InfinityStatus::Superattracting { local_degree: 2 }
        );
        assert!(!sq.infinity_status().is_weakly_repelling());
    }
}
