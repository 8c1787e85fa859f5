//! Command-line front end.
//!
//! Exit codes: 0 success, 1 domain error, 2 malformed input, 3 not a Newton
//! map, 4 census refused, 5 seed outside the parabolic basin.

mod spec;

pub use spec::{default_region, Loaded, MapSpec, Num, NewtonSpec, ParamsSpec, RationalSpec, RegionSpec, RootSpec};

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use num_complex::Complex64;
use serde::Serialize;

use crate::dynamics::{
    access_census, critical_points, immediate_basins, raster_basins, trace_dynamical_access, AccessCensus, BasinRaster, Classifier,
    CriticalPoints, DynamicsParams, ImmediateBasin, OrbitVerdict, Region, TraceParams,
};
use crate::error::{Error, Result};
use crate::io::{to_json, write_raster};
use crate::newton::{
    classify_infinity, detect, nearest_petal, petal_directions, validate_multipliers, Detection, InfinityClassification,
    MultiplierReport, NewtonCertificate,
};
use crate::poly::Polynomial;
use crate::ratmap::{FixedPointRecord, RationalMap};
use crate::render::{colorize, overlay_points, overlay_polyline, write_ppm, ColorScheme, Image, Style};

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 1;
pub const EXIT_MALFORMED: i32 = 2;
pub const EXIT_NOT_NEWTON: i32 = 3;
pub const EXIT_CENSUS_REFUSED: i32 = 4;
pub const EXIT_BAD_SEED: i32 = 5;

pub const DEFAULT_RESOLUTION: usize = 512;
/// Tolerance of the multiplier check in `analyze`.
pub const MULTIPLIER_TOL: f64 = 1e-6;

#[derive(Debug, Parser)]
#[command(name = "newton-atlas", version, about = "Recognize and explore Newton maps of p·e^q")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// JSON map specification.
    #[arg(long, global = true)]
    pub spec: Option<PathBuf>,
    /// Output directory (default: current directory).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Raster side length in pixels.
    #[arg(long, global = true)]
    pub resolution: Option<usize>,
    #[arg(long, global = true)]
    pub max_iter: Option<usize>,
    /// Residue tolerance for detection.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Worker threads for rasters; 0 or unset uses all cores.
    #[arg(long, global = true, env = "NEWTON_ATLAS_THREADS")]
    pub threads: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide whether a rational map is a Newton map.
    Detect,
    /// Fixed points, multipliers, the point at ∞ and critical points.
    Analyze,
    /// Basin raster, image and access census.
    Basins,
    /// Dynamical access from a seed in a parabolic basin.
    TraceAccess {
        /// Seed as `re,im` or `re`.
        #[arg(long, allow_hyphen_values = true)]
        seed: Option<String>,
        #[arg(long)]
        petal: Option<usize>,
    },
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Malformed(_) | Error::InvalidInput(_) => EXIT_MALFORMED,
        Error::CriticalPointUnresolved { .. } => EXIT_CENSUS_REFUSED,
        Error::SeedNotInParabolicBasin { .. } | Error::SegmentLeavesBasin { .. } => EXIT_BAD_SEED,
        _ => EXIT_DOMAIN,
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(stderr, "{}", e.render());
                return EXIT_MALFORMED;
            }
            let _ = write!(stdout, "{}", e.render());
            return EXIT_OK;
        }
    };
    let mut buf = Vec::new();
    let result = match cli.threads.filter(|&t| t > 0) {
        Some(t) => match rayon::ThreadPoolBuilder::new().num_threads(t).build() {
            Ok(pool) => pool.install(|| execute(&cli, &mut buf)),
            Err(e) => Err(Error::InvalidInput(format!("thread pool: {e}"))),
        },
        None => execute(&cli, &mut buf),
    };
    let _ = stdout.write_all(&buf);
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            exit_code(&e)
        }
    }
}

fn execute(cli: &Cli, stdout: &mut dyn Write) -> Result<i32> {
    let path = cli
        .spec
        .as_ref()
        .ok_or_else(|| Error::Malformed("--spec <file> is required".into()))?;
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let mut spec = MapSpec::parse(&text)?;
    if let Some(r) = cli.resolution {
        spec.resolution = Some(r);
    }
    if let Some(m) = cli.max_iter {
        spec.params.max_iter = Some(m);
    }
    if let Some(t) = cli.tol {
        spec.params.tol = Some(t);
    }
    if spec.resolution == Some(0) {
        return Err(Error::Malformed("resolution must be positive".into()));
    }
    if !(spec.tol() > 0.0 && spec.tol().is_finite()) {
        return Err(Error::Malformed("tolerance must be positive".into()));
    }
    let out_dir = cli.out.clone().unwrap_or_else(|| PathBuf::from("."));
    match &cli.command {
        Command::Detect => cmd_detect(&spec, &out_dir, cli.out.is_some(), stdout),
        Command::Analyze => cmd_analyze(&spec, &out_dir, cli.out.is_some(), stdout),
        Command::Basins => cmd_basins(&spec, &out_dir, stdout),
        Command::TraceAccess { seed, petal } => {
            let seed = match seed {
                Some(s) => Some(parse_seed(s)?),
                None => spec.seed.map(|n| n.value()),
            };
            let seed = seed.ok_or_else(|| Error::Malformed("trace-access needs --seed or a \"seed\" in the spec".into()))?;
            cmd_trace_access(&spec, seed, petal.or(spec.petal), &out_dir, stdout)
        }
    }
}

/// `re,im` or a bare real part.
pub fn parse_seed(s: &str) -> Result<Complex64> {
    let bad = || Error::Malformed(format!("seed {s:?}: expected re,im"));
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let vals: Vec<f64> = parts.iter().map(|p| p.parse::<f64>()).collect::<std::result::Result<_, _>>().map_err(|_| bad())?;
    let z = match vals[..] {
        [re] => Complex64::new(re, 0.0),
        [re, im] => Complex64::new(re, im),
        _ => return Err(bad()),
    };
    if !z.is_finite() {
        return Err(bad());
    }
    Ok(z)
}

/// Settings recorded in every report.
#[derive(Debug, Clone, Serialize)]
pub struct Provenance {
    pub version: &'static str,
    pub tol: f64,
    pub dynamics: DynamicsParams,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub escape_radius: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub region: Option<Region>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub resolution: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace: Option<TraceParams>,
}

impl Provenance {
    fn new(spec: &MapSpec) -> Self {
        Provenance {
            version: env!("CARGO_PKG_VERSION"),
            tol: spec.tol(),
            dynamics: spec.dynamics_params(),
            escape_radius: None,
            region: None,
            resolution: None,
            trace: None,
        }
    }
}

fn emit<T: Serialize>(doc: &T, file: Option<PathBuf>, stdout: &mut dyn Write) -> Result<()> {
    let text = to_json(doc)?;
    if let Some(path) = file {
        std::fs::create_dir_all(path.parent().unwrap_or(Path::new(".")))?;
        crate::io::write_atomic(&path, text.as_bytes())?;
    }
    stdout.write_all(text.as_bytes())?;
    Ok(())
}

#[derive(Debug, Serialize)]
pub struct DetectReport {
    #[serde(flatten)]
    pub detection: Detection,
    pub provenance: Provenance,
}

fn cmd_detect(spec: &MapSpec, out: &Path, save: bool, stdout: &mut dyn Write) -> Result<i32> {
    let detection = match spec.load(spec.tol())? {
        Loaded::Newton { detection: Some(d), .. } | Loaded::NotNewton { detection: d, .. } => d,
        Loaded::Newton { map, .. } => detect(&map, spec.tol())?,
    };
    let code = if detection.certificate().is_some() { EXIT_OK } else { EXIT_NOT_NEWTON };
    let report = DetectReport {
        detection,
        provenance: Provenance::new(spec),
    };
    emit(&report, save.then(|| out.join("detect.json")), stdout)?;
    Ok(code)
}

#[derive(Debug, Serialize)]
pub struct MapSummary {
    pub num: Polynomial,
    pub den: Polynomial,
    pub degree: usize,
    pub cancelled_degree: usize,
}

impl MapSummary {
    fn of(map: &RationalMap) -> Self {
        MapSummary {
            num: map.num().clone(),
            den: map.den().clone(),
            degree: map.degree(),
            cancelled_degree: map.cancelled_degree(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct AnalyzeReport {
    pub map: MapSummary,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detection: Option<Detection>,
    pub certificate: Option<NewtonCertificate>,
    pub fixed_points: Vec<FixedPointRecord>,
    pub multipliers: Option<MultiplierReport>,
    pub infinity: Option<InfinityClassification>,
    pub petal_directions: Vec<Complex64>,
    pub critical_points: CriticalPoints,
    pub provenance: Provenance,
}

fn cmd_analyze(spec: &MapSpec, out: &Path, save: bool, stdout: &mut dyn Write) -> Result<i32> {
    let (map, cert, detection) = match spec.load(spec.tol())? {
        Loaded::Newton { map, cert, detection } => (map, Some(cert), detection),
        Loaded::NotNewton { map, detection } => (map, None, Some(detection)),
    };
    let mut provenance = Provenance::new(spec);
    let (multipliers, infinity, petals) = match &cert {
        Some(c) => {
            provenance.escape_radius = (c.n > 0).then(|| Classifier::new(&map, c, provenance.dynamics).escape_radius());
            let petals = if c.n > 0 { petal_directions(c)? } else { Vec::new() };
            (Some(validate_multipliers(&map, c, MULTIPLIER_TOL)?), Some(classify_infinity(c)), petals)
        }
        None => (None, None, Vec::new()),
    };
    let report = AnalyzeReport {
        map: MapSummary::of(&map),
        fixed_points: map.fixed_points()?,
        critical_points: critical_points(&map)?,
        detection,
        certificate: cert.clone(),
        multipliers,
        infinity,
        petal_directions: petals,
        provenance,
    };
    emit(&report, save.then(|| out.join("analyze.json")), stdout)?;
    Ok(if cert.is_some() { EXIT_OK } else { EXIT_NOT_NEWTON })
}

/// Label code convention stored alongside every raster.
pub const LABEL_CODES: &str = "i >= 0: root i; -1: undecided; -(2 + j): petal j";

/// JSON sidecar of a basin raster.
#[derive(Debug, Serialize)]
pub struct BasinsReport {
    pub raster: String,
    pub image: String,
    pub region: Region,
    pub width: usize,
    pub height: usize,
    pub label_codes: &'static str,
    pub component_count: usize,
    pub immediate_basins: Vec<ImmediateBasin>,
    pub census: AccessCensus,
    pub provenance: Provenance,
}

struct Prepared {
    map: RationalMap,
    cert: NewtonCertificate,
    classifier: Classifier,
    region: Region,
    resolution: usize,
    provenance: Provenance,
}

/// Loads a Newton map, or reports the rejection and yields the exit code.
fn prepare(spec: &MapSpec, stdout: &mut dyn Write) -> Result<std::result::Result<Prepared, i32>> {
    let (map, cert) = match spec.load(spec.tol())? {
        Loaded::Newton { map, cert, .. } => (map, cert),
        Loaded::NotNewton { detection, .. } => {
            let report = DetectReport {
                detection,
                provenance: Provenance::new(spec),
            };
            emit(&report, None, stdout)?;
            return Ok(Err(EXIT_NOT_NEWTON));
        }
    };
    let region = spec.region.as_ref().map(RegionSpec::region).unwrap_or_else(|| default_region(&cert));
    let resolution = spec.resolution.unwrap_or(DEFAULT_RESOLUTION);
    let mut provenance = Provenance::new(spec);
    let classifier = Classifier::new(&map, &cert, provenance.dynamics);
    provenance.escape_radius = (cert.n > 0).then(|| classifier.escape_radius());
    provenance.region = Some(region);
    provenance.resolution = Some(resolution);
    Ok(Ok(Prepared {
        map,
        cert,
        classifier,
        region,
        resolution,
        provenance,
    }))
}

fn scheme_for(cert: &NewtonCertificate) -> ColorScheme {
    ColorScheme::for_counts(cert.k, cert.n)
}

/// Critical points as black dots.
fn critical_dots(image: &Image, region: &Region, critical: &CriticalPoints) -> Image {
    let pts: Vec<Complex64> = critical.finite.iter().map(|c| c.z).collect();
    let radius = (image.width.min(image.height) / 128).max(1);
    overlay_points(image, region, &pts, Style { color: [0, 0, 0], radius })
}

fn cmd_basins(spec: &MapSpec, out: &Path, stdout: &mut dyn Write) -> Result<i32> {
    let p = match prepare(spec, stdout)? {
        Ok(p) => p,
        Err(code) => return Ok(code),
    };
    std::fs::create_dir_all(out)?;
    let raster = raster_basins(&p.classifier, p.region, p.resolution)?;
    let basins = immediate_basins(&raster, &p.cert)?;
    let raster: BasinRaster = raster.with_immediate(&basins);
    let critical = critical_points(&p.map)?;
    write_raster(&raster, &out.join("basins.nbas"))?;
    let image = critical_dots(&colorize(&raster, &scheme_for(&p.cert)), &p.region, &critical);
    write_ppm(&image, &out.join("basins.ppm"))?;
    let census = access_census(&raster, &basins, &critical)?;
    let report = BasinsReport {
        raster: "basins.nbas".into(),
        image: "basins.ppm".into(),
        region: p.region,
        width: raster.width,
        height: raster.height,
        label_codes: LABEL_CODES,
        component_count: raster.component_count,
        immediate_basins: basins,
        census,
        provenance: p.provenance,
    };
    emit(&report, Some(out.join("census.json")), stdout)?;
    Ok(EXIT_OK)
}

#[derive(Debug, Serialize)]
pub struct TraceReport {
    #[serde(flatten)]
    pub trace: crate::dynamics::AccessTrace,
    pub petal_direction: Complex64,
    pub image: String,
    pub provenance: Provenance,
}

fn cmd_trace_access(spec: &MapSpec, seed: Complex64, petal: Option<usize>, out: &Path, stdout: &mut dyn Write) -> Result<i32> {
    let mut p = match prepare(spec, stdout)? {
        Ok(p) => p,
        Err(code) => return Ok(code),
    };
    if p.cert.n == 0 {
        return Err(Error::NotParabolic);
    }
    let petals = p.classifier.petals().to_vec();
    let petal = match petal {
        Some(j) => j,
        None => match p.classifier.classify(seed).0 {
            OrbitVerdict::ConvergedToInfinity(j) => j,
            _ => {
                let j = nearest_petal(&petals, seed).map_or(0, |x| x.0);
                return Err(Error::SeedNotInParabolicBasin { seed, petal: j });
            }
        },
    };
    if spec.region.is_none() {
        // Keep the seed and the start of the curve in view.
        let half = (p.region.width / 2.0).max(1.25 * seed.norm());
        p.region = Region::square(Complex64::new(0.0, 0.0), half);
        p.provenance.region = Some(p.region);
    }
    let params = spec.trace_params();
    let trace = trace_dynamical_access(&p.classifier, seed, petal, params)?;
    std::fs::create_dir_all(out)?;
    let raster = raster_basins(&p.classifier, p.region, p.resolution)?;
    let image = colorize(&raster, &scheme_for(&p.cert));
    let image = overlay_polyline(&image, &p.region, &trace.polyline, Style { color: [255, 255, 255], radius: 0 });
    let image = overlay_points(&image, &p.region, &[seed], Style { color: [255, 0, 0], radius: 2 });
    write_ppm(&image, &out.join("trace.ppm"))?;
    p.provenance.trace = Some(params);
    let report = TraceReport {
        petal_direction: petals[petal],
        trace,
        image: "trace.ppm".into(),
        provenance: p.provenance,
    };
    emit(&report, Some(out.join("trace.json")), stdout)?;
    Ok(EXIT_OK)
}
