//! Save a basin raster, read it back and export the census as JSON.

use newton_atlas::dynamics::*;
use newton_atlas::io::{read_raster, to_json, write_raster};
use newton_atlas::newton::construct;
use newton_atlas::poly::Polynomial;
use newton_atlas::Complex64;

fn main() -> newton_atlas::Result<()> {
    let c = Complex64::new;
    let (map, cert) = construct(&[(c(1.0, 0.0), 1), (c(-1.0, 0.0), 1)], &Polynomial::zero())?;
    let classifier = Classifier::new(&map, &cert, DynamicsParams::default());
    let raster = raster_basins(&classifier, Region::square(c(0.0, 0.0), 2.0), 128)?;

    let dir = std::env::temp_dir().join(format!("newton-atlas-example-{}", std::process::id()));
    std::fs::create_dir_all(&dir)?;
    let path = dir.join("quadratic.nbas");
    write_raster(&raster, &path)?;
    let back = read_raster(&path)?;
    println!("{} bytes on disk, identical after reading: {}", std::fs::metadata(&path)?.len(), back == raster);

    let basins = immediate_basins(&back, &cert)?;
    let census = access_census(&back, &basins, &critical_points(&map)?)?;
    print!("{}", to_json(&census)?);
    std::fs::remove_dir_all(&dir)?;
    Ok(())
}
