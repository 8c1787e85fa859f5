//! Dense complex polynomials.
//!
//! Coefficients are stored in ascending order: `coeffs[i]` multiplies `z^i`.
//! The zero polynomial is the empty coefficient vector and has no degree.

mod roots;

pub use roots::{roots, roots_with, RootOptions, RootSet};

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub(crate) const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub(crate) const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "Vec<Complex64>", into = "Vec<Complex64>")]
pub struct Polynomial {
    coeffs: Vec<Complex64>,
}

impl From<Vec<Complex64>> for Polynomial {
    fn from(coeffs: Vec<Complex64>) -> Self {
        Polynomial::new(coeffs)
    }
}

impl From<Polynomial> for Vec<Complex64> {
    fn from(p: Polynomial) -> Self {
        p.coeffs
    }
}

impl Polynomial {
    /// Builds a polynomial from ascending coefficients, dropping exact trailing zeros.
    pub fn new(mut coeffs: Vec<Complex64>) -> Self {
        while coeffs.last().is_some_and(|c| *c == ZERO) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Polynomial::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    pub fn constant(c: Complex64) -> Self {
        Polynomial::new(vec![c])
    }

    pub fn one() -> Self {
        Polynomial::constant(ONE)
    }

    /// The monomial `z`.
    pub fn identity() -> Self {
        Polynomial::new(vec![ZERO, ONE])
    }

    /// `∏ (z - root)^mult`.
    pub fn from_roots(roots: &[(Complex64, usize)]) -> Self {
        let mut p = Polynomial::one();
        for &(r, m) in roots {
            let lin = Polynomial::new(vec![-r, ONE]);
            for _ in 0..m {
                p = &p * &lin;
            }
        }
        p
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial counted as 0. Handy for degree arithmetic
    /// on maps where the zero polynomial has already been ruled out.
    pub fn degree_or_zero(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn leading(&self) -> Complex64 {
        self.coeffs.last().copied().unwrap_or(ZERO)
    }

    pub fn coeff(&self, i: usize) -> Complex64 {
        self.coeffs.get(i).copied().unwrap_or(ZERO)
    }

    /// Largest coefficient modulus (0 for the zero polynomial).
    pub fn norm_inf(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(ZERO, |acc, &c| acc * z + c)
    }

    /// Value and first derivative in one Horner pass.
    pub fn eval_with_derivative(&self, z: Complex64) -> (Complex64, Complex64) {
        let mut p = ZERO;
        let mut dp = ZERO;
        for &c in self.coeffs.iter().rev() {
            dp = dp * z + p;
            p = p * z + c;
        }
        (p, dp)
    }

    /// Horner evaluation of the majorant `Σ |a_i| r^i`, the natural scale for
    /// rounding errors of `eval` at a point of modulus `r`.
    pub fn eval_abs(&self, r: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * r + c.norm())
    }

    pub fn derivative(&self) -> Polynomial {
        Polynomial::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| c * i as f64)
                .collect(),
        )
    }

    /// Antiderivative with zero constant term.
    pub fn antiderivative(&self) -> Polynomial {
        if self.is_zero() {
            return Polynomial::zero();
        }
        let mut out = Vec::with_capacity(self.coeffs.len() + 1);
        out.push(ZERO);
        out.extend(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, &c)| c / (i as f64 + 1.0)),
        );
        Polynomial::new(out)
    }

    pub fn scale(&self, s: Complex64) -> Polynomial {
        Polynomial::new(self.coeffs.iter().map(|&c| c * s).collect())
    }

    /// Divides through by the leading coefficient. The zero polynomial is returned unchanged.
    pub fn monic(&self) -> Polynomial {
        match self.coeffs.last() {
            Some(&lead) => self.scale(lead.inv()),
            None => Polynomial::zero(),
        }
    }

    /// Drops leading coefficients whose modulus is at most `rel_tol × scale`.
    ///
    /// Subtraction of nearly equal polynomials leaves rounding noise in the top
    /// coefficients; this is where it gets removed.
    pub fn trimmed(&self, rel_tol: f64, scale: f64) -> Polynomial {
        let cut = rel_tol * scale;
        let mut coeffs = self.coeffs.clone();
        while coeffs.last().is_some_and(|c| c.norm() <= cut) {
            coeffs.pop();
        }
        Polynomial::new(coeffs)
    }

    /// Multiplication by `z^k`.
    pub fn shift_up(&self, k: usize) -> Polynomial {
        if self.is_zero() {
            return Polynomial::zero();
        }
        let mut out = vec![ZERO; k];
        out.extend_from_slice(&self.coeffs);
        Polynomial::new(out)
    }

    /// Coefficients of `P(z + center)`, i.e. the Taylor coefficients
    /// `P^{(j)}(center) / j!` in ascending order.
    pub fn taylor_at(&self, center: Complex64) -> Vec<Complex64> {
        let mut c = self.coeffs.clone();
        let n = c.len();
        for i in 0..n {
            for j in (i..n.saturating_sub(1)).rev() {
                let hi = c[j + 1];
                c[j] += center * hi;
            }
        }
        c
    }

    /// `(quotient, remainder)` with `self = quotient·divisor + remainder`
    /// and `deg remainder < deg divisor`.
    pub fn divmod(&self, divisor: &Polynomial) -> Result<(Polynomial, Polynomial)> {
        let db = divisor.degree().ok_or(Error::DivisionByZeroPolynomial)?;
        let da = match self.degree() {
            Some(d) if d >= db => d,
            _ => return Ok((Polynomial::zero(), self.clone())),
        };
        let lead_inv = divisor.leading().inv();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![ZERO; da - db + 1];
        for k in (0..=da - db).rev() {
            let c = rem[k + db] * lead_inv;
            quot[k] = c;
            for (j, &b) in divisor.coeffs.iter().enumerate() {
                rem[k + j] -= c * b;
            }
        }
        rem.truncate(db);
        Ok((Polynomial::new(quot), Polynomial::new(rem)))
    }

    /// Monic approximate greatest common divisor.
    ///
    /// A root ρ of the lower-degree input is common when the other input
    /// vanishes there to the required order, with every Taylor coefficient
    /// below `tol × (its rounding majorant)`, and also has roots of matching
    /// total multiplicity within `√tol · (1 + |ρ|)`. The second condition stops
    /// a polynomial that is merely small near ρ from counting as vanishing.
    /// The result has degree 0 exactly when the inputs are coprime at `tol`.
    /// Two zero inputs give the zero polynomial.
    pub fn gcd_approx(&self, other: &Polynomial, tol: f64) -> Polynomial {
        match (self.is_zero(), other.is_zero()) {
            (true, true) => return Polynomial::zero(),
            (true, false) => return other.monic(),
            (false, true) => return self.monic(),
            _ => {}
        }
        let (low, high) = if self.degree() <= other.degree() {
            (self, other)
        } else {
            (other, self)
        };
        if low.degree() == Some(0) {
            return Polynomial::one();
        }
        let (Ok(low_roots), Ok(high_roots)) = (roots(low), roots(high)) else {
            return Polynomial::one();
        };
        let mut common = Vec::new();
        for &(rho, mult) in &low_roots.entries {
            let radius = tol.sqrt().max(1e-8) * (1.0 + rho.norm());
            let nearby: usize = high_roots
                .entries
                .iter()
                .filter(|(w, _)| (w - rho).norm() <= radius)
                .map(|e| e.1)
                .sum();
            let order = vanishing_order(high, rho, mult.min(nearby), tol);
            if order > 0 {
                common.push((rho, order));
            }
        }
        Polynomial::from_roots(&common)
    }
}

/// How many leading Taylor coefficients of `p` at `rho` are negligible, capped at `cap`.
pub(crate) fn vanishing_order(p: &Polynomial, rho: Complex64, cap: usize, tol: f64) -> usize {
    let taylor = p.taylor_at(rho);
    let abs_poly = Polynomial::new(p.coeffs.iter().map(|c| Complex64::new(c.norm(), 0.0)).collect());
    let majorant = abs_poly.taylor_at(Complex64::new(rho.norm(), 0.0));
    // Rounding floor: near the origin the local majorant only sees the low
    // coefficients, which may themselves be pure rounding noise.
    let floor = abs_poly.taylor_at(Complex64::new(rho.norm().max(1.0), 0.0));
    let mut order = 0;
    while order < cap && order < taylor.len() {
        let limit = (tol * majorant[order].re).max(64.0 * f64::EPSILON * floor[order].re);
        if taylor[order].norm() <= limit.max(f64::MIN_POSITIVE) {
            order += 1;
        } else {
            break;
        }
    }
    order
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial{:?}", self.coeffs)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if *c == ZERO {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "({c})")?,
                1 => write!(f, "({c})z")?,
                _ => write!(f, "({c})z^{i}")?,
            }
        }
        Ok(())
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut out = vec![ZERO; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Polynomial::new(out)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr for Polynomial {
            type Output = Polynomial;
            fn $f(self, rhs: Polynomial) -> Polynomial {
                (&self).$f(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn close(a: &Polynomial, b: &Polynomial, tol: f64) -> bool {
        let n = a.coeffs().len().max(b.coeffs().len());
        (0..n).all(|i| (a.coeff(i) - b.coeff(i)).norm() <= tol)
    }

    // Term-by-term evaluation, kept separate from Horner.
    fn eval_terms(p: &Polynomial, z: Complex64) -> Complex64 {
        p.coeffs()
            .iter()
            .enumerate()
            .map(|(i, &a)| a * z.powu(i as u32))
            .sum()
    }

    #[test]
    fn eval_examples() {
        let p = Polynomial::from_real(&[-1.0, 0.0, 1.0]);
        assert_eq!(p.eval(c(2.0, 0.0)), c(3.0, 0.0));
        assert_eq!(Polynomial::zero().eval(c(3.0, -7.0)), ZERO);
        let cube = Polynomial::from_real(&[1.0, 0.0, 0.0, 1.0]);
        let i = c(0.0, 1.0);
        assert_eq!(eval_terms(&cube, i), c(1.0, -1.0));
        assert!((cube.eval(i) - c(1.0, -1.0)).norm() < 1e-15);
    }

    #[test]
    fn zero_polynomial_has_no_degree() {
        assert_eq!(Polynomial::zero().degree(), None);
        assert_eq!(Polynomial::new(vec![ZERO, ZERO]).degree(), None);
        assert_eq!(Polynomial::from_real(&[1.0, 2.0, 0.0]).degree(), Some(1));
    }

    #[test]
    fn derivative_and_antiderivative() {
        let p = Polynomial::from_real(&[-1.0, 0.0, 1.0]);
        assert_eq!(p.derivative(), Polynomial::from_real(&[0.0, 2.0]));
        assert_eq!(Polynomial::one().antiderivative(), Polynomial::identity());
        assert_eq!(
            Polynomial::identity().antiderivative(),
            Polynomial::from_real(&[0.0, 0.0, 0.5])
        );
        assert!(Polynomial::zero().antiderivative().is_zero());
        assert!(Polynomial::one().derivative().is_zero());
    }

    #[test]
    fn divmod_examples() {
        let (q, r) = Polynomial::from_real(&[1.0, 1.0])
            .divmod(&Polynomial::identity())
            .unwrap();
        assert_eq!((q, r), (Polynomial::one(), Polynomial::one()));

        let (q, r) = Polynomial::from_real(&[-1.0, 0.0, 1.0])
            .divmod(&Polynomial::from_real(&[-1.0, 1.0]))
            .unwrap();
        assert_eq!(q, Polynomial::from_real(&[1.0, 1.0]));
        assert!(r.is_zero());

        let (q, r) = Polynomial::identity()
            .divmod(&Polynomial::from_real(&[1.0, 0.0, 1.0]))
            .unwrap();
        assert!(q.is_zero());
        assert_eq!(r, Polynomial::identity());

        assert_eq!(
            Polynomial::identity().divmod(&Polynomial::zero()),
            Err(Error::DivisionByZeroPolynomial)
        );
    }

    #[test]
    fn gcd_examples() {
        let a = Polynomial::from_roots(&[(ONE, 2)]);
        let b = Polynomial::from_roots(&[(ONE, 1), (ZERO, 1)]);
        assert!(close(&a.gcd_approx(&b, 1e-10), &Polynomial::from_real(&[-1.0, 1.0]), 1e-12));

        let a = Polynomial::from_real(&[1.0, 0.0, 1.0]);
        let b = Polynomial::from_real(&[-3.0, 1.0]);
        assert_eq!(a.gcd_approx(&b, 1e-10), Polynomial::one());
    }

    #[test]
    fn gcd_tolerates_perturbation() {
        // (z-1)(z-1) multiplied out, then nudged.
        let lin = Polynomial::from_real(&[-1.0, 1.0]);
        let sq = &lin * &lin;
        let noisy = &sq + &Polynomial::from_real(&[1e-14]);
        let g = noisy.gcd_approx(&lin, 1e-10);
        assert!(close(&g, &lin, 1e-12), "{g:?}");
        // Far too much noise for the tolerance.
        let loud = &sq + &Polynomial::from_real(&[1e-6]);
        assert_eq!(loud.gcd_approx(&lin, 1e-10), Polynomial::one());
    }

    #[test]
    fn taylor_shift_matches_derivatives() {
        let p = Polynomial::from_real(&[3.0, -2.0, 0.5, 1.0]);
        let z0 = c(0.3, -1.1);
        let t = p.taylor_at(z0);
        assert!((t[0] - p.eval(z0)).norm() < 1e-13);
        assert!((t[1] - p.derivative().eval(z0)).norm() < 1e-13);
        assert!((t[2] - p.derivative().derivative().eval(z0) / 2.0).norm() < 1e-13);
        assert!((t[3] - ONE).norm() < 1e-13);
    }

    #[test]
    fn trimming_is_relative() {
        let p = Polynomial::new(vec![c(2.0, 0.0), c(1.0, 0.0), c(1e-17, 0.0)]);
        assert_eq!(p.degree(), Some(2));
        assert_eq!(p.trimmed(1e-12, 2.0).degree(), Some(1));
    }

    #[test]
    fn json_shape_is_pair_list() {
        let p = Polynomial::new(vec![c(1.0, 0.0), c(0.0, -2.0)]);
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(s, "[[1.0,0.0],[0.0,-2.0]]");
        let back: Polynomial = serde_json::from_str("[[1.0,0.0],[0.0,0.0]]").unwrap();
        assert_eq!(back, Polynomial::one());
    }
}
