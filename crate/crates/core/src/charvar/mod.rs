//! The once-punctured torus with one cone point through its character variety:
//! trace coordinates `(x, y, z)` with `κ = x² + y² + z² − xyz − 2 = −2cos(θ/2)`,
//! the action of the three generators `φ₁, φ₂, φ₃`, reduction into the
//! fundamental domain `Δ`, and the Weil–Petersson volume of `M_{1,1}(iθ)` as an
//! integral over `Δ`.
//!
//! Coordinates are generic over [`Scalar`] so that orbit computations can be run
//! in exact rational arithmetic; the traces along a word of length `k` grow
//! doubly exponentially and `f64` stops being able to tell points apart after a
//! handful of steps.

mod quadrature;
mod volume;

use std::fmt::Debug;

use num_traits::{FromPrimitive, Num, ToPrimitive};
use serde::Serialize;

use crate::error::{Error, Result};

pub use quadrature::{integrate, CompensatedSum, Integral, Tolerance};
pub use volume::{
    closed_form_final, closed_form_raw, inner_integral_closed_form, volume_integral,
    volume_integral_with, VolumeEstimate, MIN_REL_TOL,
};

use std::f64::consts::PI;

/// `[PSL(2,ℤ) : M₂⁺]`
pub const PSL2Z_INDEX: u32 = 6;
/// `[M₂ : M₂⁺]`
pub const M2_INDEX: u32 = 2;
/// Order of the automorphism group of a generic one-holed torus.
pub const GENERIC_AUTOMORPHISMS: u32 = 2;
pub const REDUCTION_CAP: usize = 1_000_000;
pub const DOMAIN_TOL: f64 = 1e-12;

pub trait Scalar:
    Clone + PartialOrd + Num + FromPrimitive + ToPrimitive + Debug + Send + Sync
{
}

impl<T> Scalar for T where
    T: Clone + PartialOrd + Num + FromPrimitive + ToPrimitive + Debug + Send + Sync
{
}

fn two<T: Scalar>() -> T {
    T::one() + T::one()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceTriple<T = f64> {
    pub x: T,
    pub y: T,
    pub z: T,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HomogeneousTriple<T = f64> {
    pub r: T,
    pub s: T,
    pub t: T,
}

impl<T: Scalar> TraceTriple<T> {
    pub fn new(x: T, y: T, z: T) -> Self {
        Self { x, y, z }
    }

    pub fn to_f64(&self) -> TraceTriple<f64> {
        let f = |v: &T| v.to_f64().unwrap_or(f64::NAN);
        TraceTriple::new(f(&self.x), f(&self.y), f(&self.z))
    }
}

impl TraceTriple<f64> {
    /// Exact rational copy of a floating-point triple.
    pub fn to_exact<T: Scalar>(&self) -> Result<TraceTriple<T>> {
        let f = |v: f64| {
            T::from_f64(v).ok_or_else(|| Error::Domain(format!("{v} has no exact conversion")))
        };
        Ok(TraceTriple::new(f(self.x)?, f(self.y)?, f(self.z)?))
    }
}

impl<T: Scalar> HomogeneousTriple<T> {
    pub fn new(r: T, s: T, t: T) -> Self {
        Self { r, s, t }
    }

    pub fn to_f64(&self) -> HomogeneousTriple<f64> {
        let f = |v: &T| v.to_f64().unwrap_or(f64::NAN);
        HomogeneousTriple::new(f(&self.r), f(&self.s), f(&self.t))
    }

    /// `r + s + t − 1 − (κ + 2)rst`
    pub fn level_defect(&self, kappa: T) -> T {
        self.r.clone() + self.s.clone() + self.t.clone()
            - T::one()
            - (kappa + two()) * self.r.clone() * self.s.clone() * self.t.clone()
    }
}

/// `κ(x, y, z) = x² + y² + z² − xyz − 2`
pub fn kappa<T: Scalar>(p: &TraceTriple<T>) -> T {
    let (x, y, z) = (p.x.clone(), p.y.clone(), p.z.clone());
    x.clone() * x.clone() + y.clone() * y.clone() + z.clone() * z.clone() - x * y * z - two()
}

/// `κ = −2cos(θ/2)`
pub fn theta_to_kappa(theta: f64) -> Result<f64> {
    if !(theta.is_finite() && (0.0..2.0 * PI).contains(&theta)) {
        return Err(Error::Domain(format!("θ = {theta} must lie in [0, 2π)")));
    }
    Ok(-2.0 * (theta / 2.0).cos())
}

/// `θ = 2 arccos(−κ/2)`
pub fn kappa_to_theta(kappa: f64) -> Result<f64> {
    if !(kappa.is_finite() && (-2.0..2.0).contains(&kappa)) {
        return Err(Error::Domain(format!("κ = {kappa} must lie in [−2, 2)")));
    }
    Ok(2.0 * (-kappa / 2.0).acos())
}

/// `(x, y, z) ↦ (x/yz, y/zx, z/xy)`
pub fn to_homogeneous<T: Scalar>(p: &TraceTriple<T>) -> Result<HomogeneousTriple<T>> {
    if !(p.x > T::zero() && p.y > T::zero() && p.z > T::zero()) {
        return Err(Error::Domain("trace coordinates must be positive".into()));
    }
    let (x, y, z) = (p.x.clone(), p.y.clone(), p.z.clone());
    Ok(HomogeneousTriple::new(
        x.clone() / (y.clone() * z.clone()),
        y.clone() / (z.clone() * x.clone()),
        z / (x * y),
    ))
}

/// Inverse of [`to_homogeneous`]: `x² = 1/(st)`, `y² = 1/(tr)`, `z² = 1/(rs)`.
///
/// `negative` flips the signs of the chosen coordinates; an odd number of flips
/// would make `r, s, t` negative, so it is rejected. Use `[false; 3]` for the
/// Teichmüller component.
pub fn from_homogeneous(
    h: &HomogeneousTriple<f64>,
    negative: [bool; 3],
) -> Result<TraceTriple<f64>> {
    let (st, tr, rs) = (h.s * h.t, h.t * h.r, h.r * h.s);
    if !(st > 0.0 && tr > 0.0 && rs > 0.0) || !(h.r > 0.0) {
        return Err(Error::Domain("r, s, t must be positive".into()));
    }
    if negative.iter().filter(|&&b| b).count() % 2 == 1 {
        return Err(Error::Domain(
            "an odd number of sign flips changes the sign of r, s, t".into(),
        ));
    }
    let sign = |neg: bool| if neg { -1.0 } else { 1.0 };
    Ok(TraceTriple::new(
        sign(negative[0]) / st.sqrt(),
        sign(negative[1]) / tr.sqrt(),
        sign(negative[2]) / rs.sqrt(),
    ))
}

fn check_generator(i: usize) -> Result<()> {
    if (1..=3).contains(&i) {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "generator index {i} must be 1, 2 or 3"
        )))
    }
}

/// `φ₁: x ↦ yz − x`, `φ₂: z ↦ xy − z`, `φ₃: y ↦ zx − y`.
pub fn apply_generator<T: Scalar>(i: usize, p: &TraceTriple<T>) -> Result<TraceTriple<T>> {
    check_generator(i)?;
    let (x, y, z) = (p.x.clone(), p.y.clone(), p.z.clone());
    Ok(match i {
        1 => TraceTriple::new(y.clone() * z.clone() - x, y, z),
        2 => TraceTriple::new(x.clone(), y.clone(), x * y - z),
        _ => TraceTriple::new(x.clone(), z.clone() * x - y, z),
    })
}

/// The same generators in `(r, s, t)`: for `φ₁`, `r ↦ 1 − r` and
/// `s, t ↦ s·r/(1 − r), t·r/(1 − r)`; `φ₂` acts through `t` and `φ₃` through `s`.
pub fn apply_generator_homogeneous<T: Scalar>(
    i: usize,
    h: &HomogeneousTriple<T>,
) -> Result<HomogeneousTriple<T>> {
    check_generator(i)?;
    let flip = |pivot: &T, a: &T, b: &T| -> Result<(T, T, T)> {
        let rest = T::one() - pivot.clone();
        if rest == T::zero() {
            return Err(Error::Domain(
                "generator undefined at a coordinate equal to 1".into(),
            ));
        }
        let ratio = pivot.clone() / rest.clone();
        Ok((rest, a.clone() * ratio.clone(), b.clone() * ratio))
    };
    Ok(match i {
        1 => {
            let (r, s, t) = flip(&h.r, &h.s, &h.t)?;
            HomogeneousTriple::new(r, s, t)
        }
        2 => {
            let (t, r, s) = flip(&h.t, &h.r, &h.s)?;
            HomogeneousTriple::new(r, s, t)
        }
        _ => {
            let (s, r, t) = flip(&h.s, &h.r, &h.t)?;
            HomogeneousTriple::new(r, s, t)
        }
    })
}

/// `E(x, y, z) = x + y + z`
pub fn energy<T: Scalar>(p: &TraceTriple<T>) -> T {
    p.x.clone() + p.y.clone() + p.z.clone()
}

/// `E(p) − E(φᵢ(p))` for `i = 1, 2, 3`: `2x − yz`, `2z − xy`, `2y − zx`.
/// Positive exactly when the matching homogeneous coordinate exceeds ½.
pub fn energy_drops<T: Scalar>(p: &TraceTriple<T>) -> [T; 3] {
    let (x, y, z) = (p.x.clone(), p.y.clone(), p.z.clone());
    [
        two::<T>() * x.clone() - y.clone() * z.clone(),
        two::<T>() * z.clone() - x.clone() * y.clone(),
        two::<T>() * y - z * x,
    ]
}

/// `r, s, t ∈ (0, ½]` (with slack [`DOMAIN_TOL`]) on the level surface of `κ`.
pub fn in_fundamental_domain(h: &HomogeneousTriple<f64>, kappa: f64) -> bool {
    let inside = |v: f64| v > 0.0 && v <= 0.5 + DOMAIN_TOL;
    inside(h.r) && inside(h.s) && inside(h.t) && h.level_defect(kappa).abs() <= DOMAIN_TOL
}

/// Exact membership for positive trace coordinates: `2x ≤ yz`, `2z ≤ xy`, `2y ≤ zx`.
pub fn trace_in_domain<T: Scalar>(p: &TraceTriple<T>) -> bool {
    energy_drops(p).iter().all(|d| *d <= T::zero())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Strategy {
    /// Apply the generator with the largest energy drop (lowest index on ties).
    Greedy,
    /// Apply the first generator that lowers the energy.
    FirstApplicable,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Reduction<T = f64> {
    pub point: TraceTriple<T>,
    /// Generators in the order they were applied.
    pub word: Vec<u8>,
}

/// Walks down the orbit by energy-lowering generators until the point lies in `Δ`.
pub fn reduce_to_domain<T: Scalar>(p: &TraceTriple<T>, strategy: Strategy) -> Result<Reduction<T>> {
    reduce_with_cap(p, strategy, REDUCTION_CAP)
}

pub fn reduce_with_cap<T: Scalar>(
    p: &TraceTriple<T>,
    strategy: Strategy,
    cap: usize,
) -> Result<Reduction<T>> {
    if !(p.x > T::zero() && p.y > T::zero() && p.z > T::zero()) {
        return Err(Error::Domain(
            "reduction needs positive trace coordinates".into(),
        ));
    }
    let mut point = p.clone();
    let mut word = Vec::new();
    for _ in 0..cap {
        let drops = energy_drops(&point);
        let mut choice: Option<usize> = None;
        for (i, d) in drops.iter().enumerate() {
            if *d <= T::zero() {
                continue;
            }
            match (strategy, choice) {
                (_, None) => choice = Some(i),
                (Strategy::Greedy, Some(j)) if *d > drops[j] => choice = Some(i),
                _ => {}
            }
            if strategy == Strategy::FirstApplicable {
                break;
            }
        }
        let Some(i) = choice else {
            return Ok(Reduction { point, word });
        };
        point = apply_generator(i + 1, &point)?;
        word.push(i as u8 + 1);
    }
    Err(Error::NonConvergence(format!(
        "no point of Δ reached after {cap} steps; the input is probably off the Teichmüller component"
    )))
}

/// `1/((1 − r − s) r s)`
pub fn wp_density(r: f64, s: f64) -> Result<f64> {
    let gap = 1.0 - r - s;
    if !(r > 0.0 && s > 0.0 && gap > 0.0) {
        return Err(Error::Domain(format!(
            "density is singular or undefined at (r, s) = ({r}, {s})"
        )));
    }
    Ok(1.0 / (gap * r * s))
}

/// `t` on the level surface: `(r + s − 1)/((κ + 2)rs − 2)`.
pub fn level_t(r: f64, s: f64, kappa: f64) -> f64 {
    (r + s - 1.0) / ((kappa + 2.0) * r * s - 2.0)
}

/// Lower `r`-limit of `Δ` at height `s`: `(1 − 2s)/(2 − (κ + 2)s)`.
pub fn domain_r_min(s: f64, kappa: f64) -> f64 {
    (1.0 - 2.0 * s) / (2.0 - (kappa + 2.0) * s)
}
