use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::poly::{roots, Polynomial};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Pole {
    pub location: Complex64,
    /// Coefficients of `(z − location)^{-1}, (z − location)^{-2}, …`.
    pub principal_part: Vec<Complex64>,
}

impl Pole {
    pub fn order(&self) -> usize {
        self.principal_part.len()
    }

    pub fn residue(&self) -> Complex64 {
        self.principal_part[0]
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        let w = (z - self.location).inv();
        self.principal_part
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| (acc + c) * w)
    }
}

/// `polynomial_part + Σ principal parts`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartialFractionDecomp {
    pub polynomial_part: Polynomial,
    pub poles: Vec<Pole>,
    /// Largest merge spread reported by the root finder on the denominator.
    pub pole_cluster_spread: f64,
}

impl PartialFractionDecomp {
    /// Decomposes `num / den` for coprime `num`, `den` with `den` non-zero.
    ///
    /// Simple poles use the closed form `num(ρ)/den'(ρ)`. A pole of order μ
    /// uses the Taylor expansion of `num / (den / (z − ρ)^μ)` at ρ.
    pub fn of_quotient(num: &Polynomial, den: &Polynomial) -> Result<Self> {
        let (polynomial_part, _) = num.divmod(den)?;
        if den.degree_or_zero() == 0 {
            return Ok(PartialFractionDecomp {
                polynomial_part,
                poles: Vec::new(),
                pole_cluster_spread: 0.0,
            });
        }
        let rs = roots(den)?;
        let dden = den.derivative();
        let mut poles = Vec::with_capacity(rs.entries.len());
        for &(rho, order) in &rs.entries {
            let principal_part = if order == 1 {
                vec![num.eval(rho) / dden.eval(rho)]
            } else {
                higher_order_part(num, den, rho, order)?
            };
            poles.push(Pole {
                location: rho,
                principal_part,
            });
        }
        Ok(PartialFractionDecomp {
            polynomial_part,
            poles,
            pole_cluster_spread: rs.largest_merged_spread,
        })
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.polynomial_part.eval(z) + self.poles.iter().map(|p| p.eval(z)).sum::<Complex64>()
    }
}

fn higher_order_part(
    num: &Polynomial,
    den: &Polynomial,
    rho: Complex64,
    order: usize,
) -> Result<Vec<Complex64>> {
    let factor = Polynomial::from_roots(&[(rho, order)]);
    let (rest, _) = den.divmod(&factor)?;
    let a = num.taylor_at(rho);
    let b = rest.taylor_at(rho);
    // Series quotient a/b, first `order` terms.
    let mut c = vec![Complex64::new(0.0, 0.0); order];
    for k in 0..order {
        let mut acc = a.get(k).copied().unwrap_or_default();
        for j in 0..k {
            acc -= c[j] * b.get(k - j).copied().unwrap_or_default();
        }
        c[k] = acc / b[0];
    }
    // c_k multiplies (z − ρ)^{k − order}; index 0 of the result is the residue.
    c.reverse();
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratmap::RationalMap;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn pole_at(d: &PartialFractionDecomp, z: Complex64) -> &Pole {
        d.poles
            .iter()
            .find(|p| (p.location - z).norm() < 1e-10)
            .unwrap_or_else(|| panic!("no pole at {z}: {d:?}"))
    }

    #[test]
    fn displacement_of_quadratic_newton() {
        let n = RationalMap::normalize(Polynomial::from_real(&[1.0, 0.0, 1.0]), Polynomial::from_real(&[0.0, 2.0])).unwrap();
        let d = n.partial_fractions_of_displacement().unwrap();
        assert!(d.polynomial_part.is_zero() || d.polynomial_part.norm_inf() < 1e-14);
        assert_eq!(d.poles.len(), 2);
        for z in [c(1.0, 0.0), c(-1.0, 0.0)] {
            let p = pole_at(&d, z);
            assert_eq!(p.order(), 1);
            assert!((p.residue() - 1.0).norm() < 1e-13);
        }
    }

    #[test]
    fn displacement_of_parabolic_newton() {
        let n = RationalMap::normalize(Polynomial::from_real(&[0.0, 0.0, 1.0]), Polynomial::from_real(&[1.0, 1.0])).unwrap();
        let d = n.partial_fractions_of_displacement().unwrap();
        assert_eq!(d.polynomial_part, Polynomial::one());
        assert_eq!(d.poles.len(), 1);
        assert!((pole_at(&d, c(0.0, 0.0)).residue() - 1.0).norm() < 1e-14);
    }

    #[test]
    fn displacement_of_square() {
        let n = RationalMap::polynomial(Polynomial::from_real(&[0.0, 0.0, 1.0])).unwrap();
        let d = n.partial_fractions_of_displacement().unwrap();
        assert!(d.polynomial_part.is_zero());
        assert!((pole_at(&d, c(0.0, 0.0)).residue() - 1.0).norm() < 1e-14);
        assert!((pole_at(&d, c(1.0, 0.0)).residue() + 1.0).norm() < 1e-14);
    }

    #[test]
    fn higher_order_pole_is_represented() {
        // 1/(z−1)^2 + 3/(z−1) + 2/(z+1) + z, assembled over a common denominator.
        let a = Polynomial::from_roots(&[(c(1.0, 0.0), 2), (c(-1.0, 0.0), 1)]);
        let parts = [
            Polynomial::from_real(&[1.0, 1.0]),                               // (z+1)
            &Polynomial::from_real(&[3.0]) * &Polynomial::from_real(&[-1.0, 0.0, 1.0]), // 3(z−1)(z+1)
            &Polynomial::from_real(&[2.0]) * &Polynomial::from_roots(&[(c(1.0, 0.0), 2)]),
            &Polynomial::identity() * &a,
        ];
        let top = parts.iter().fold(Polynomial::zero(), |acc, p| &acc + p);
        let d = PartialFractionDecomp::of_quotient(&top, &a).unwrap();
        let p1 = pole_at(&d, c(1.0, 0.0));
        assert_eq!(p1.order(), 2);
        assert!((p1.principal_part[0] - 3.0).norm() < 1e-9, "{:?}", p1.principal_part);
        assert!((p1.principal_part[1] - 1.0).norm() < 1e-9);
        assert!((pole_at(&d, c(-1.0, 0.0)).residue() - 2.0).norm() < 1e-9);
        let z = c(0.3, 0.8);
        assert!((d.eval(z) - top.eval(z) / a.eval(z)).norm() < 1e-10);
    }
}
