//! Count critical points and accesses to the fixed point in each immediate basin.

use newton_atlas::dynamics::*;
use newton_atlas::newton::construct;
use newton_atlas::poly::Polynomial;
use newton_atlas::Complex64;

fn main() -> newton_atlas::Result<()> {
    let c = Complex64::new;
    let cube: Vec<_> = (0..3).map(|j| (Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * j as f64 / 3.0), 1)).collect();
    let quartic_q = Polynomial::new(vec![c(0.0, 0.0), c(0.0, 0.0), c(0.5, 1.0)]);
    let cases = [
        ("z^3 - 1", cube, Polynomial::zero()),
        ("z^2/(1+z)", vec![(c(0.0, 0.0), 1)], Polynomial::identity()),
        ("quartic", vec![(c(1.0, 0.0), 1), (c(-1.0, 0.0), 1)], quartic_q),
    ];
    for (name, roots, q) in cases {
        let (map, cert) = construct(&roots, &q)?;
        let classifier = Classifier::new(&map, &cert, DynamicsParams::default());
        let raster = raster_basins(&classifier, Region::square(c(0.0, 0.0), 4.0), 384)?;
        let basins = immediate_basins(&raster, &cert)?;
        let census = access_census(&raster, &basins, &critical_points(&map)?)?;
        println!("{name}");
        for b in &census.basins {
            println!(
                "    {:?}: {} critical point(s), degree {}, {} access(es){}",
                b.serves,
                b.k,
                b.restriction_degree,
                b.access_count,
                if b.dynamical_access { ", dynamical" } else { "" }
            );
        }
    }
    Ok(())
}
