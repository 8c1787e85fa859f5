//! Trace the dynamical access to infinity inside a parabolic basin and draw it.
//!
//! cargo run --release --example trace -- trace.ppm

use newton_atlas::dynamics::*;
use newton_atlas::newton::construct;
use newton_atlas::poly::Polynomial;
use newton_atlas::render::{colorize, overlay_points, overlay_polyline, write_ppm, ColorScheme, Style};
use newton_atlas::Complex64;

fn main() -> newton_atlas::Result<()> {
    let out = std::env::args().nth(1).unwrap_or_else(|| "trace.ppm".into());
    let c = Complex64::new;
    let q = Polynomial::new(vec![c(0.0, 0.0), c(0.0, 0.0), c(0.5, 1.0)]);
    let (map, cert) = construct(&[(c(1.0, 0.0), 1), (c(-1.0, 0.0), 1)], &q)?;
    let classifier = Classifier::new(&map, &cert, DynamicsParams::default());

    let petal = 0;
    let seed = classifier.petals()[petal] * 1.5;
    let trace = trace_dynamical_access(&classifier, seed, petal, TraceParams::default())?;
    println!(
        "{} points in {} generations, landing direction {:.6} (error {:.1e})",
        trace.polyline.len(),
        trace.generations.len(),
        trace.landing_direction,
        trace.landing_error
    );

    let region = Region::square(c(0.0, 0.0), 4.0);
    let raster = raster_basins(&classifier, region, 400)?;
    let image = colorize(&raster, &ColorScheme::for_counts(cert.k, cert.n));
    let image = overlay_polyline(&image, &region, &trace.polyline, Style { color: [255, 255, 255], radius: 0 });
    let image = overlay_points(&image, &region, &[seed], Style { color: [220, 30, 30], radius: 3 });
    write_ppm(&image, out.as_ref())?;
    println!("wrote {out}");
    Ok(())
}
