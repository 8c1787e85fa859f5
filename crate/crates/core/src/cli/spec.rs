use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dynamics::{DynamicsParams, Region, TraceParams};
use crate::error::{Error, Result};
use crate::newton::{construct, detect, Detection, NewtonCertificate};
use crate::poly::Polynomial;
use crate::ratmap::RationalMap;

/// A real number or a `[re, im]` pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Num {
    Real(f64),
    Complex([f64; 2]),
}

impl Num {
    pub fn value(self) -> Complex64 {
        match self {
            Num::Real(x) => Complex64::new(x, 0.0),
            Num::Complex([re, im]) => Complex64::new(re, im),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RationalSpec {
    /// Coefficients in ascending powers.
    pub num: Vec<Num>,
    pub den: Vec<Num>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RootSpec {
    pub z: Num,
    pub m: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NewtonSpec {
    pub roots: Vec<RootSpec>,
    /// Coefficients of `q` in ascending powers.
    #[serde(default)]
    pub q: Vec<Num>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RegionSpec {
    pub center: Num,
    pub width: f64,
    pub height: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsSpec {
    pub tol: Option<f64>,
    pub max_iter: Option<usize>,
    pub conv_radius: Option<f64>,
    pub escape_radius: Option<f64>,
    pub escape_steps: Option<usize>,
    pub samples: Option<usize>,
    pub generations: Option<usize>,
    pub max_points: Option<usize>,
    pub direction_steps: Option<usize>,
}

/// Input document of every subcommand.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapSpec {
    pub rational: Option<RationalSpec>,
    pub newton: Option<NewtonSpec>,
    pub region: Option<RegionSpec>,
    pub resolution: Option<usize>,
    #[serde(default)]
    pub params: ParamsSpec,
    pub seed: Option<Num>,
    pub petal: Option<usize>,
}

/// The map together with how it was obtained.
pub enum Loaded {
    Newton { map: RationalMap, cert: NewtonCertificate, detection: Option<Detection> },
    NotNewton { map: RationalMap, detection: Detection },
}

impl MapSpec {
    pub fn parse(text: &str) -> Result<MapSpec> {
        let spec: MapSpec = serde_json::from_str(text).map_err(|e| Error::Malformed(format!("spec: {e}")))?;
        spec.validate()?;
        Ok(spec)
    }

    fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::Malformed(format!("spec: {m}")));
        match (&self.rational, &self.newton) {
            (Some(_), Some(_)) => return bad("give exactly one of \"rational\" and \"newton\", not both"),
            (None, None) => return bad("missing \"rational\" or \"newton\""),
            _ => {}
        }
        let mut nums: Vec<f64> = Vec::new();
        let mut push = |n: &Num| {
            let z = n.value();
            nums.extend([z.re, z.im]);
        };
        if let Some(r) = &self.rational {
            r.num.iter().chain(&r.den).for_each(&mut push);
        }
        if let Some(n) = &self.newton {
            n.roots.iter().for_each(|r| push(&r.z));
            n.q.iter().for_each(&mut push);
        }
        if let Some(r) = &self.region {
            push(&r.center);
            nums.extend([r.width, r.height]);
        }
        if let Some(s) = &self.seed {
            nums.push(s.value().re);
            nums.push(s.value().im);
        }
        let p = &self.params;
        nums.extend([p.tol, p.conv_radius, p.escape_radius].into_iter().flatten());
        if nums.iter().any(|x| !x.is_finite()) {
            return bad("all numbers must be finite");
        }
        if let Some(r) = &self.region {
            if r.width <= 0.0 || r.height <= 0.0 {
                return bad("region width and height must be positive");
            }
        }
        if self.resolution == Some(0) {
            return bad("resolution must be positive");
        }
        Ok(())
    }

    pub fn tol(&self) -> f64 {
        self.params.tol.unwrap_or(crate::newton::DEFAULT_TOL)
    }

    pub fn dynamics_params(&self) -> DynamicsParams {
        let d = DynamicsParams::default();
        let p = &self.params;
        DynamicsParams {
            max_iter: p.max_iter.unwrap_or(d.max_iter),
            conv_radius: p.conv_radius.unwrap_or(d.conv_radius),
            escape_radius: p.escape_radius.or(d.escape_radius),
            escape_steps: p.escape_steps.unwrap_or(d.escape_steps),
        }
    }

    pub fn trace_params(&self) -> TraceParams {
        let d = TraceParams::default();
        let p = &self.params;
        TraceParams {
            samples: p.samples.unwrap_or(d.samples),
            generations: p.generations.unwrap_or(d.generations),
            max_points: p.max_points.unwrap_or(d.max_points),
            direction_steps: p.direction_steps.unwrap_or(d.direction_steps),
        }
    }

    /// Builds the map; rational input goes through detection.
    pub fn load(&self, tol: f64) -> Result<Loaded> {
        if let Some(n) = &self.newton {
            let roots: Vec<(Complex64, u32)> = n.roots.iter().map(|r| (r.z.value(), r.m)).collect();
            let q = Polynomial::new(n.q.iter().map(|c| c.value()).collect());
            let (map, cert) = construct(&roots, &q)?;
            return Ok(Loaded::Newton { map, cert, detection: None });
        }
        let r = self.rational.as_ref().expect("validated");
        let num = Polynomial::new(r.num.iter().map(|c| c.value()).collect());
        let den = Polynomial::new(r.den.iter().map(|c| c.value()).collect());
        let map = RationalMap::normalize(num, den)?;
        let detection = detect(&map, tol)?;
        match detection.certificate().cloned() {
            Some(cert) => Ok(Loaded::Newton { map, cert, detection: Some(detection) }),
            None => Ok(Loaded::NotNewton { map, detection }),
        }
    }
}

/// Centred at 0, four times the diameter of the root set (at least 2) wide.
pub fn default_region(cert: &NewtonCertificate) -> Region {
    let spread = cert.roots.iter().map(|r| r.z.norm()).fold(1.0, f64::max);
    Region::square(Complex64::new(0.0, 0.0), 4.0 * spread)
}

impl RegionSpec {
    pub fn region(&self) -> Region {
        Region::new(self.center.value(), self.width, self.height)
    }
}
