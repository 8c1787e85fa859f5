//! Decide whether rational maps are Newton maps.

use newton_atlas::newton::{detect, DEFAULT_TOL};
use newton_atlas::poly::Polynomial;
use newton_atlas::ratmap::RationalMap;

fn main() -> newton_atlas::Result<()> {
    let maps = [
        ("(z^2+1)/(2z)", Polynomial::from_real(&[1.0, 0.0, 1.0]), Polynomial::from_real(&[0.0, 2.0])),
        ("z^2/(1+z)", Polynomial::from_real(&[0.0, 0.0, 1.0]), Polynomial::from_real(&[1.0, 1.0])),
        ("z^2", Polynomial::from_real(&[0.0, 0.0, 1.0]), Polynomial::one()),
        ("z^2 + 0.1", Polynomial::from_real(&[0.1, 0.0, 1.0]), Polynomial::one()),
    ];
    for (name, num, den) in maps {
        let map = RationalMap::normalize(num, den)?;
        let d = detect(&map, DEFAULT_TOL)?;
        match (d.certificate(), d.reason()) {
            (Some(cert), _) => println!("{name}: Newton map, {} root(s), deg q = {}", cert.k, cert.n),
            (_, Some(reason)) => println!("{name}: not Newton, {reason:?}"),
            _ => unreachable!(),
        }
        for r in &d.residues {
            println!("    pole {:.6} order {} residue {:.6}", r.z, r.order, r.residue);
        }
    }
    Ok(())
}
