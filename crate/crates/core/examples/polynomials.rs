//! Polynomial arithmetic and root finding.

use newton_atlas::poly::{roots, Polynomial};
use newton_atlas::Complex64;

fn main() -> newton_atlas::Result<()> {
    let one = Complex64::new(1.0, 0.0);
    // (z − 1)^2 (z + 2)
    let p = Polynomial::from_roots(&[(one, 2), (-2.0 * one, 1)]);
    println!("p      = {p}");
    println!("p'     = {}", p.derivative());
    println!("p(3)   = {}", p.eval(Complex64::new(3.0, 0.0)));

    let (quot, rem) = p.divmod(&Polynomial::from_real(&[-1.0, 1.0]))?;
    println!("p/(z-1) = {quot}, remainder {rem}");

    let found = roots(&p)?;
    for (z, m) in &found.entries {
        println!("root {z:.6} with multiplicity {m}");
    }
    println!("residual bound {:.1e}", found.residual_bound);
    Ok(())
}
