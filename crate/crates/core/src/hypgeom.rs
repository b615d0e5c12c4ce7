//! Hyperbolic trigonometry behind the separation estimates: distances across
//! right-angled hexagons, pentagons with one cone vertex and quadrilaterals with
//! two, plus the length equation for a boundary that has absorbed a cone point.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::labels::BoundaryLabel;

use std::f64::consts::PI;

/// `arccosh(1 + d)`, accurate when `d` is small.
fn acosh1p(d: f64) -> f64 {
    (d + (d * (d + 2.0)).sqrt()).ln_1p()
}

fn positive_length(name: &str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "{name} must be a positive length, got {value}"
        )))
    }
}

fn nonnegative_length(name: &str, value: f64) -> Result<()> {
    if value.is_finite() && value >= 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "{name} must be a nonnegative length, got {value}"
        )))
    }
}

fn angle_in(name: &str, value: f64, hi: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 && value < hi {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "{name} = {value} must lie in (0, {hi})"
        )))
    }
}

/// Distance between two boundary geodesics of lengths `L1`, `L2` across a
/// right-angled hexagon whose third alternate side is `c/2`:
/// `cosh δ = (cosh(c/2) + cosh(L1/2)cosh(L2/2)) / (sinh(L1/2)sinh(L2/2))`.
pub fn hexagon_delta(l1: f64, l2: f64, c: f64) -> Result<f64> {
    positive_length("L1", l1)?;
    positive_length("L2", l2)?;
    nonnegative_length("c", c)?;
    let (a, b) = (l1 / 2.0, l2 / 2.0);
    let cosh_delta = ((c / 2.0).cosh() + a.cosh() * b.cosh()) / (a.sinh() * b.sinh());
    Ok(cosh_delta.acosh())
}

/// `arccosh(1 + 1/(sinh(L1/2) sinh(L2/2)))`
pub fn hexagon_bound(l1: f64, l2: f64) -> Result<f64> {
    positive_length("L1", l1)?;
    positive_length("L2", l2)?;
    Ok(acosh1p(1.0 / ((l1 / 2.0).sinh() * (l2 / 2.0).sinh())))
}

/// Distance from a cone point of angle `θ₂ < π` to a boundary geodesic of length
/// `L1` across a pentagon with four right angles.
pub fn pentagon_delta(l1: f64, theta2: f64, c: f64) -> Result<f64> {
    positive_length("L1", l1)?;
    angle_in("θ₂", theta2, PI)?;
    nonnegative_length("c", c)?;
    let (ct, st) = ((theta2 / 2.0).cos(), (theta2 / 2.0).sin());
    let (ch, sh) = ((l1 / 2.0).cosh(), (l1 / 2.0).sinh());
    let cc = (c / 2.0).cosh();
    let k = 2.0 * ct * ch * (cc - 1.0) + cc * cc - 1.0;
    let root = (ct * ct + 2.0 * ct * ch + ch * ch + k).sqrt();
    Ok((root / (st * sh)).acosh())
}

/// `(cos(θ₂/2) + cosh(L1/2)) / (sin(θ₂/2) sinh(L1/2))`, the value of `cosh δ` at `c = 0`.
pub fn pentagon_cosh_bound(l1: f64, theta2: f64) -> Result<f64> {
    positive_length("L1", l1)?;
    angle_in("θ₂", theta2, PI)?;
    Ok(((theta2 / 2.0).cos() + (l1 / 2.0).cosh()) / ((theta2 / 2.0).sin() * (l1 / 2.0).sinh()))
}

/// `arccosh(coth(L/2))`
pub fn coth_bound(l: f64) -> Result<f64> {
    positive_length("L", l)?;
    // coth(L/2) − 1 = 2/(e^L − 1)
    Ok(acosh1p(2.0 / l.exp_m1()))
}

/// Distance between two cone points with `θ₁ + θ₂ < 2π` across a quadrilateral
/// with two right angles: `cosh δ = (cosh(c/2) + cos(θ₁/2)cos(θ₂/2)) / (sin(θ₁/2)sin(θ₂/2))`.
pub fn quad_delta(theta1: f64, theta2: f64, c: f64) -> Result<f64> {
    angle_in("θ₁", theta1, 2.0 * PI)?;
    angle_in("θ₂", theta2, 2.0 * PI)?;
    nonnegative_length("c", c)?;
    if theta1 + theta2 >= 2.0 * PI {
        return Err(Error::Domain(format!(
            "θ₁ + θ₂ = {} ≥ 2π: the cone points can merge and no quadrilateral exists",
            theta1 + theta2
        )));
    }
    let (a, b) = (theta1 / 2.0, theta2 / 2.0);
    // numerator − denominator = (cosh(c/2) − 1) + (1 + cos(a + b))
    let excess = (c / 2.0).cosh() - 1.0 + 2.0 * ((a + b) / 2.0).cos().powi(2);
    Ok(acosh1p(excess / (a.sin() * b.sin())))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum ObtusePentagon {
    Delta(f64),
    /// `cos α cosh L' ≤ −cosh c`: the cone point and boundary can come arbitrarily close.
    NoSolution,
}

/// `sinh δ = (cosh c + cos α cosh L') / (sin α sinh L')`
pub fn obtuse_pentagon_sinh_delta(alpha: f64, lp: f64, c: f64) -> Result<ObtusePentagon> {
    angle_in("α", alpha, PI)?;
    positive_length("L'", lp)?;
    nonnegative_length("c", c)?;
    let numer = c.cosh() + alpha.cos() * lp.cosh();
    if numer <= 0.0 {
        return Ok(ObtusePentagon::NoSolution);
    }
    Ok(ObtusePentagon::Delta(
        (numer / (alpha.sin() * lp.sinh())).asinh(),
    ))
}

/// `sin²φ cosh L tanh²(x/2) − (cosh x tanh²(L/2) − cos²φ)`
pub fn crown_residual(phi: f64, l: f64, x: f64) -> f64 {
    let lhs = phi.sin().powi(2) * l.cosh() * (x / 2.0).tanh().powi(2);
    let rhs = x.cosh() * (l / 2.0).tanh().powi(2) - phi.cos().powi(2);
    lhs - rhs
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CrownSolution {
    pub x: f64,
    pub residual: f64,
    /// The bracket bisection ran on.
    pub bracket: (f64, f64),
}

pub const CROWN_LO: f64 = 1e-9;
const CROWN_SCAN_POINTS: usize = 4000;
const CROWN_MAX_HI: f64 = 700.0;

/// Grid on `[lo, hi]`, geometric near zero and uniform further out.
fn crown_grid(lo: f64, hi: f64) -> Vec<f64> {
    let half = CROWN_SCAN_POINTS / 2;
    let knee = 1.0f64.min(hi);
    let mut grid: Vec<f64> = (0..half)
        .map(|i| lo * (knee / lo).powf(i as f64 / half as f64))
        .collect();
    grid.extend((0..=half).map(|i| knee + (hi - knee) * i as f64 / half as f64));
    grid
}

/// Brackets around every sign change of the crown residual on `[lo, hi]`.
pub fn crown_sign_changes(phi: f64, l: f64, lo: f64, hi: f64) -> Vec<(f64, f64)> {
    let grid = crown_grid(lo, hi);
    let values: Vec<f64> = grid.iter().map(|&x| crown_residual(phi, l, x)).collect();
    let mut out = Vec::new();
    for i in 1..grid.len() {
        let (a, b) = (values[i - 1], values[i]);
        if a == 0.0 {
            out.push((grid[i - 1], grid[i - 1]));
        } else if a.signum() != b.signum() && b != 0.0 {
            out.push((grid[i - 1], grid[i]));
        }
    }
    if values.last() == Some(&0.0) {
        out.push((hi, hi));
    }
    out
}

fn bisect(phi: f64, l: f64, mut lo: f64, mut hi: f64) -> f64 {
    let mut f_lo = crown_residual(phi, l, lo);
    if f_lo == 0.0 {
        return lo;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = crown_residual(phi, l, mid);
        if f_mid == 0.0 {
            return mid;
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// The positive root `x` of
/// `sin²φ cosh L tanh²(x/2) = cosh x tanh²(L/2) − cos²φ`, by bisection.
///
/// The bracket starts as `(1e-9, L + 10]` and is doubled while the residual has the
/// same sign at both ends. The bracket is scanned for sign changes first; more than
/// one is reported as an error rather than picking a root.
pub fn crown_length(phi: f64, l: f64) -> Result<CrownSolution> {
    angle_in("φ", phi, PI)?;
    positive_length("L", l)?;
    let lo = CROWN_LO;
    let mut hi = l + 10.0;
    loop {
        let changes = crown_sign_changes(phi, l, lo, hi);
        match changes.len() {
            1 => {
                let (a, b) = changes[0];
                let x = if a == b { a } else { bisect(phi, l, a, b) };
                return Ok(CrownSolution {
                    x,
                    residual: crown_residual(phi, l, x),
                    bracket: (lo, hi),
                });
            }
            0 if hi < CROWN_MAX_HI => hi = (2.0 * hi).min(CROWN_MAX_HI),
            0 => return Err(Error::NoSignChange { lo, hi }),
            k => {
                let roots: Vec<String> = changes
                    .iter()
                    .map(|&(a, b)| format!("{:.6}", bisect(phi, l, a, b)))
                    .collect();
                return Err(Error::Domain(format!(
                    "the crown-length equation has {k} roots on ({lo}, {hi}]: {}",
                    roots.join(", ")
                )));
            }
        }
    }
}

/// Length `w` from `cosh w = −cosh²(x/2) cos φ + sinh²(x/2)`.
pub fn cone_glue_w(x: f64, phi: f64) -> Result<f64> {
    positive_length("x", x)?;
    if !(phi.is_finite() && phi > 0.0 && phi <= PI) {
        return Err(Error::Domain(format!("φ = {phi} must lie in (0, π]")));
    }
    // cosh w − 1 = 2(sinh²(x/2) sin²(φ/2) − cos²(φ/2))
    let s = (x / 2.0).sinh();
    let d = 2.0 * ((s * (phi / 2.0).sin()).powi(2) - (phi / 2.0).cos().powi(2));
    if d < 0.0 {
        return Err(Error::Domain(format!(
            "cosh w = {} < 1: no gluing for x = {x}, φ = {phi}",
            1.0 + d
        )));
    }
    Ok(acosh1p(d))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum MergeRegime {
    /// Two cone points with `θ_j + θ_k ≥ 2π`.
    ConesMerge,
    /// A cone angle above π next to a geodesic.
    ConeIntoGeodesic,
    /// Distances to a cusp are measured to a horocycle; no bound is stated.
    Cusp,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Separation {
    Bound(f64),
    NoBound(MergeRegime),
}

impl Separation {
    pub fn bound(&self) -> Option<f64> {
        match self {
            Separation::Bound(b) => Some(*b),
            Separation::NoBound(_) => None,
        }
    }
}

/// Lower bound on the distance between two boundary components.
pub fn separation_bound(a: &BoundaryLabel, b: &BoundaryLabel) -> Result<Separation> {
    use BoundaryLabel::*;
    Ok(match (a, b) {
        (Cusp, _) | (_, Cusp) => Separation::NoBound(MergeRegime::Cusp),
        (Geodesic(l1), Geodesic(l2)) => Separation::Bound(hexagon_bound(*l1, *l2)?),
        (Geodesic(l), Cone(t)) | (Cone(t), Geodesic(l)) => {
            if t.radians() <= PI {
                Separation::Bound(coth_bound(*l)?)
            } else {
                Separation::NoBound(MergeRegime::ConeIntoGeodesic)
            }
        }
        (Cone(s), Cone(t)) => {
            if s.radians() + t.radians() < 2.0 * PI {
                Separation::Bound(quad_delta(s.radians(), t.radians(), 0.0)?)
            } else {
                Separation::NoBound(MergeRegime::ConesMerge)
            }
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() < tol, "{a} vs {b}");
    }

    #[test]
    fn hexagon_values() {
        close(
            hexagon_delta(2.0, 2.0, 0.0).unwrap(),
            1.543_873_665_810_609,
            1e-12,
        );
        close(
            hexagon_delta(2.0, 2.0, 2.0).unwrap(),
            1.704_912_832_358_014,
            1e-12,
        );
        assert!(hexagon_delta(0.0, 1.0, 0.0).is_err());
        assert!(hexagon_delta(2.0, 2.0, 40.0).unwrap() > hexagon_delta(2.0, 2.0, 20.0).unwrap());
    }

    #[test]
    fn pentagon_values() {
        let d = pentagon_delta(2.0, PI / 2.0, 0.0).unwrap();
        close(d.cosh(), 2.707_830_436_866_905, 1e-12);
        close(d, 1.653_310_419_924_848, 1e-12);
        close(d.cosh(), pentagon_cosh_bound(2.0, PI / 2.0).unwrap(), 1e-12);
        assert!(pentagon_delta(2.0, 1e-6, 0.0).unwrap() > 14.0);
        assert!(pentagon_delta(2.0, PI, 0.0).is_err());
    }

    #[test]
    fn quad_values() {
        close(
            quad_delta(PI / 2.0, PI / 2.0, 2.0).unwrap(),
            2.085_432_203_461_419,
            1e-12,
        );
        close(
            quad_delta(PI / 2.0, PI / 2.0, 0.0).unwrap().cosh(),
            3.0,
            1e-12,
        );
        let near = quad_delta(PI - 5e-7, PI - 5e-7, 0.0).unwrap();
        assert!(near > 0.0 && near < 1e-5, "{near}");
        assert!(quad_delta(PI, PI, 0.0).is_err());
    }

    #[test]
    fn obtuse_values() {
        let ObtusePentagon::Delta(d) = obtuse_pentagon_sinh_delta(PI / 2.0, 1.5, 0.7).unwrap()
        else {
            panic!()
        };
        close(d.sinh(), 0.7f64.cosh() / 1.5f64.sinh(), 1e-12);
        assert_eq!(
            obtuse_pentagon_sinh_delta(2.5, 3.0, 0.0).unwrap(),
            ObtusePentagon::NoSolution
        );
        let ObtusePentagon::Delta(d) = obtuse_pentagon_sinh_delta(1.0, 1.0, 1.0).unwrap() else {
            panic!()
        };
        close(d, 1.610_781_297_668_781, 1e-12);
    }

    #[test]
    fn crown_values() {
        let s = crown_length(3.0, 2.0).unwrap();
        close(s.x, 1.140_547_006_386_197, 1e-11);
        assert!(s.residual.abs() < 1e-10);
        // cosh x = coth²(L/2) solves the equation for every φ
        for l in [1.0f64, 2.0, 5.0] {
            let s = crown_length(PI - 1e-4, l).unwrap();
            let expected = (1.0 / (l / 2.0).tanh().powi(2)).acosh();
            close(s.x, expected, 1e-10);
            assert!(s.residual.abs() < 1e-10);
        }
    }

    #[test]
    fn crown_two_roots_are_reported() {
        // at φ = π/2 both x = L and cosh x = coth²(L/2) are roots
        let err = crown_length(PI / 2.0, 3.0).unwrap_err();
        assert!(matches!(err, Error::Domain(_)), "{err}");
    }

    #[test]
    fn glue_values() {
        for x in [1e-6, 0.1, 1.0, 3.0, 10.0] {
            close(cone_glue_w(x, PI).unwrap(), x, 1e-12 * x.max(1.0));
        }
        assert!(cone_glue_w(1.0, PI / 2.0).is_err());
        close(
            cone_glue_w(3.0, PI / 2.0).unwrap(),
            2.192_324_264_753_537,
            1e-12,
        );
    }

    #[test]
    fn separation_examples() {
        let g = |l| BoundaryLabel::geodesic(l).unwrap();
        let c = |t| BoundaryLabel::cone(t).unwrap();
        close(
            separation_bound(&g(2.0), &g(2.0)).unwrap().bound().unwrap(),
            1.140_547_006_386_197,
            1e-12,
        );
        close(
            separation_bound(&c(PI / 2.0), &c(PI / 2.0))
                .unwrap()
                .bound()
                .unwrap(),
            3.0f64.acosh(),
            1e-12,
        );
        assert_eq!(
            separation_bound(&g(5.0), &c(4.0)).unwrap(),
            Separation::NoBound(MergeRegime::ConeIntoGeodesic)
        );
        assert!(separation_bound(&g(5.0), &c(PI)).unwrap().bound().is_some());
        assert_eq!(
            separation_bound(&BoundaryLabel::Cusp, &g(1.0)).unwrap(),
            Separation::NoBound(MergeRegime::Cusp)
        );
        assert_eq!(
            separation_bound(&c(4.0), &c(3.0)).unwrap(),
            Separation::NoBound(MergeRegime::ConesMerge)
        );
        assert_eq!(
            separation_bound(&c(2.0), &c(3.0)).unwrap().bound(),
            Some(quad_delta(2.0, 3.0, 0.0).unwrap())
        );
    }
}
