//! Fixed points, the point at infinity and critical points of a Newton map.

use newton_atlas::dynamics::critical_points;
use newton_atlas::newton::{classify_infinity, construct, petal_directions, validate_multipliers};
use newton_atlas::poly::Polynomial;
use newton_atlas::Complex64;

fn main() -> newton_atlas::Result<()> {
    let c = Complex64::new;
    // p = z^2 − 1, q = (1/2 + i) z^2
    let q = Polynomial::new(vec![c(0.0, 0.0), c(0.0, 0.0), c(0.5, 1.0)]);
    let (map, cert) = construct(&[(c(1.0, 0.0), 1), (c(-1.0, 0.0), 1)], &q)?;

    for fp in map.fixed_points()? {
        println!("fixed point {} ({:?}), multiplier {:?}", fp.location, fp.classification, fp.multiplier);
    }
    let report = validate_multipliers(&map, &cert, 1e-6)?;
    println!("worst deviation from (m-1)/m: {:.1e}", report.worst_deviation);

    println!("infinity: {:?}", classify_infinity(&cert));
    for v in petal_directions(&cert)? {
        println!("petal direction {v:.6}");
    }

    let crit = critical_points(&map)?;
    for cp in &crit.finite {
        println!("critical point {:.6} x{} ({:?})", cp.z, cp.multiplicity, cp.kind);
    }
    println!("total with multiplicity: {}", crit.total_multiplicity());
    Ok(())
}
