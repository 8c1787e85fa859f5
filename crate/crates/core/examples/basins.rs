//! Render the basins of a Newton map to a PPM file.
//!
//! cargo run --release --example basins -- out.ppm

use newton_atlas::dynamics::{raster_basins, Classifier, DynamicsParams, Region};
use newton_atlas::newton::construct;
use newton_atlas::poly::Polynomial;
use newton_atlas::render::{colorize, write_ppm, ColorScheme};
use newton_atlas::Complex64;

fn main() -> newton_atlas::Result<()> {
    let out = std::env::args().nth(1).unwrap_or_else(|| "basins.ppm".into());
    let c = Complex64::new;
    let q = Polynomial::new(vec![c(0.0, 0.0), c(0.0, 0.0), c(0.5, 1.0)]);
    let (map, cert) = construct(&[(c(1.0, 0.0), 1), (c(-1.0, 0.0), 1)], &q)?;

    let classifier = Classifier::new(&map, &cert, DynamicsParams::default());
    let raster = raster_basins(&classifier, Region::square(c(0.0, 0.0), 4.0), 512)?;
    let undecided = raster.components.iter().filter(|&&id| id < 0).count();
    println!("{} components, {undecided} undecided pixels", raster.component_count);

    // Roots in colour, the two parabolic basins in gray.
    let image = colorize(&raster, &ColorScheme::for_counts(cert.k, cert.n).with_shading(0.4));
    write_ppm(&image, out.as_ref())?;
    println!("wrote {out}");
    Ok(())
}
