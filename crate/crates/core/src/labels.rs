//! Boundary data of a hyperbolic surface: geodesic lengths, cusps and cone angles.
//!
//! A cone of angle θ corresponds to the imaginary boundary length `L = iθ`, so it
//! enters the volume polynomials through `L² = −θ²`.

use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};

use crate::error::{Error, Result};
use crate::exactpoly::rational::{format_pq, int, parse_rational};
use crate::exactpoly::PiScalar;

/// A cone angle, either a float in radians or an exact rational multiple of π.
#[derive(Debug, Clone, PartialEq)]
pub enum Angle {
    Radians(f64),
    /// `q · π`
    PiMultiple(BigRational),
}

impl Angle {
    pub fn radians(&self) -> f64 {
        match self {
            Angle::Radians(x) => *x,
            Angle::PiMultiple(q) => q.to_f64().unwrap_or(f64::NAN) * std::f64::consts::PI,
        }
    }

    pub fn pi_fraction(&self) -> Option<&BigRational> {
        match self {
            Angle::Radians(_) => None,
            Angle::PiMultiple(q) => Some(q),
        }
    }

    /// Strictly inside (0, 2π), decided exactly for π-multiples.
    pub fn is_valid_cone(&self) -> bool {
        match self {
            Angle::Radians(x) => x.is_finite() && *x > 0.0 && *x < 2.0 * std::f64::consts::PI,
            Angle::PiMultiple(q) => q.is_positive() && *q < int(2),
        }
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Angle::Radians(x) => write!(f, "{x}"),
            Angle::PiMultiple(q) => write!(f, "{}pi", format_pq(q)),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum BoundaryLabel {
    Geodesic(f64),
    Cusp,
    Cone(Angle),
}

impl BoundaryLabel {
    pub fn geodesic(length: f64) -> Result<Self> {
        if length.is_finite() && length > 0.0 {
            Ok(BoundaryLabel::Geodesic(length))
        } else {
            Err(Error::InvalidLabel(format!(
                "geodesic length must be positive, got {length}"
            )))
        }
    }

    pub fn cone(theta: f64) -> Result<Self> {
        Self::cone_angle(Angle::Radians(theta))
    }

    pub fn cone_pi(fraction: BigRational) -> Result<Self> {
        Self::cone_angle(Angle::PiMultiple(fraction))
    }

    pub fn cone_angle(angle: Angle) -> Result<Self> {
        if angle.is_valid_cone() {
            Ok(BoundaryLabel::Cone(angle))
        } else {
            Err(Error::InvalidLabel(format!(
                "cone angle must lie in (0, 2π), got {angle}"
            )))
        }
    }

    pub fn is_cone(&self) -> bool {
        matches!(self, BoundaryLabel::Cone(_))
    }

    pub fn is_geodesic(&self) -> bool {
        matches!(self, BoundaryLabel::Geodesic(_))
    }

    pub fn cone_angle_radians(&self) -> Option<f64> {
        match self {
            BoundaryLabel::Cone(a) => Some(a.radians()),
            _ => None,
        }
    }

    /// The value substituted for `L²`: ℓ², 0, or −θ².
    pub fn length_squared(&self) -> f64 {
        match self {
            BoundaryLabel::Geodesic(l) => l * l,
            BoundaryLabel::Cusp => 0.0,
            BoundaryLabel::Cone(a) => {
                let t = a.radians();
                -t * t
            }
        }
    }

    /// Exact `L²` when the label is a cusp or a rational multiple of π.
    pub fn exact_length_squared(&self) -> Option<PiScalar> {
        match self {
            BoundaryLabel::Cusp => Some(PiScalar::zero()),
            BoundaryLabel::Cone(Angle::PiMultiple(q)) => Some(PiScalar::term(-(q * q), 1)),
            _ => None,
        }
    }
}

impl fmt::Display for BoundaryLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundaryLabel::Geodesic(l) => write!(f, "{l}"),
            BoundaryLabel::Cusp => write!(f, "cusp"),
            BoundaryLabel::Cone(a) => write!(f, "{a}i"),
        }
    }
}

/// Grammar: `cusp`; `<float>` for a geodesic; `<float>i` for a cone angle in radians;
/// `<p>/<q>pi i` (or `<p>/<q>pii`, `pi i`, `π i`) for a cone angle `(p/q)·π`.
impl FromStr for BoundaryLabel {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let lower = compact.to_lowercase();
        if lower.is_empty() {
            return Err(Error::InvalidLabel("empty label".into()));
        }
        if lower == "cusp" || lower == "0" {
            return Ok(BoundaryLabel::Cusp);
        }
        let Some(body) = lower.strip_suffix('i') else {
            let length: f64 = lower
                .parse()
                .map_err(|_| Error::InvalidLabel(format!("cannot parse {text:?}")))?;
            return BoundaryLabel::geodesic(length);
        };
        let angle: Angle = body
            .parse()
            .map_err(|_| Error::InvalidLabel(format!("cannot parse {text:?}")))?;
        if angle == Angle::Radians(0.0) {
            return Ok(BoundaryLabel::Cusp);
        }
        BoundaryLabel::cone_angle(angle)
    }
}

/// `<float>` in radians, or `<p>/<q>pi`, `<decimal>*pi`, `pi`, `π` for exact
/// multiples of π. The range is not checked here.
impl FromStr for Angle {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let lower = compact.to_lowercase();
        let pi_body = lower.strip_suffix("pi").or_else(|| lower.strip_suffix('π'));
        if let Some(fraction) = pi_body {
            let q = match fraction.trim_end_matches('*') {
                "" => int(1),
                f => parse_rational(f)?,
            };
            return Ok(Angle::PiMultiple(q));
        }
        lower
            .parse::<f64>()
            .ok()
            .filter(|x| x.is_finite())
            .map(Angle::Radians)
            .ok_or_else(|| Error::Parse(format!("cannot parse angle {text:?}")))
    }
}

pub fn parse_labels(text: &str) -> Result<Vec<BoundaryLabel>> {
    text.split(',').map(str::parse).collect()
}
