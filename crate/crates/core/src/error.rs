use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("division by the zero polynomial")]
    DivisionByZeroPolynomial,

    #[error("operation needs a polynomial of degree at least 1")]
    ZeroPolynomial,

    #[error("root finder did not converge after {iterations} iterations (max step {last_step:e})")]
    RootFinderFailed { iterations: usize, last_step: f64 },

    #[error("degenerate map: {0}")]
    DegenerateMap(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("fixed point {location} has multiplier {multiplier}, expected {expected} (deviation {deviation:e})")]
    ValidationFailed {
        location: Complex64,
        multiplier: Complex64,
        expected: f64,
        deviation: f64,
    },

    #[error("point at infinity is not parabolic (deg q = 0)")]
    NotParabolic,

    #[error("{what} at {location} lies outside the raster region")]
    RootOutsideRegion { what: String, location: Complex64 },

    #[error("critical point {location} lies within {pixels} pixels of an immediate-basin boundary; raise the resolution")]
    CriticalPointUnresolved { location: Complex64, pixels: usize },

    #[error("seed {seed} is not in the basin of petal {petal}")]
    SeedNotInParabolicBasin { seed: Complex64, petal: usize },

    #[error("sample {sample} of the initial segment leaves the basin of petal {petal}")]
    SegmentLeavesBasin { sample: Complex64, petal: usize },

    #[error("I/O failure: {0}")]
    Io(String),

    #[error("malformed input: {0}")]
    Malformed(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
