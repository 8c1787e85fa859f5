//! Build the Newton map of p·e^q from roots, multiplicities and q.

use newton_atlas::newton::{construct, detect, DEFAULT_TOL};
use newton_atlas::poly::Polynomial;
use newton_atlas::Complex64;

fn main() -> newton_atlas::Result<()> {
    let c = Complex64::new;
    // p = (z − 1)^2 (z + i), q = z^2/2
    let roots = [(c(1.0, 0.0), 2), (c(0.0, -1.0), 1)];
    let q = Polynomial::new(vec![c(0.0, 0.0), c(0.0, 0.0), c(0.5, 0.0)]);
    let (map, cert) = construct(&roots, &q)?;

    println!("N = {map}");
    println!("degree {} = k + deg q = {} + {}", map.degree(), cert.k, cert.n);
    println!("cancelled common factor of degree {}", map.cancelled_degree());

    // Detection recovers the data.
    let back = detect(&map, DEFAULT_TOL)?;
    let cert = back.certificate().expect("a Newton map");
    for r in &cert.roots {
        println!("root {:.9} multiplicity {}", r.z, r.m);
    }
    println!("q = {}", cert.q);
    Ok(())
}
