//! `Vol(M_{1,1}(iθ)) = ½ · (1/3) ∫₀^½ ∫_{r₀(s)}^½ dr ds / ((1 − r − s) r s)` with
//! `r₀(s) = (1 − 2s)/(2 − (κ + 2)s)`.
//!
//! The integrand blows up along `s = 0` and in the corner `r + s = 1`, but the
//! inner interval shrinks like `s` as `s → 0` and the corner singularity is
//! logarithmic. The inner integral is therefore computed in one of two
//! substituted variables:
//!
//! * `s ≤ ¼`: `r = ½ − w(s)τ` with `τ ∈ [0, 1]`, where `w(s)/s` is bounded and is
//!   evaluated without cancellation;
//! * `s > ¼`: `u = −log(1 − r − s)`, shifted so the lower limit is 0, which
//!   turns the `1/(1 − r − s)` factor into `1`.

use std::sync::Mutex;

use serde::Serialize;

use super::quadrature::{integrate, Tolerance};
use super::{theta_to_kappa, GENERIC_AUTOMORPHISMS, M2_INDEX, PSL2Z_INDEX};
use crate::error::{Error, Result};

use std::f64::consts::PI;

pub const MIN_REL_TOL: f64 = 1e-8;
/// Outer panels are refined this many at a time (in parallel).
const OUTER_BATCH: usize = 8;
const OUTER_PANELS: usize = 20_000;
const INNER_PANELS: usize = 2_000;

#[derive(Debug, Clone, Serialize)]
pub struct VolumeEstimate {
    pub theta: f64,
    pub kappa: f64,
    pub raw: f64,
    #[serde(rename = "final")]
    pub final_volume: f64,
    pub error_estimate: f64,
    pub closed_form_raw: f64,
    pub closed_form_final: f64,
    /// `|final − closed_form_final| / closed_form_final`
    pub rel_err: f64,
    pub panels: usize,
}

/// `(1/6)(π² − θ²/4)`
pub fn closed_form_raw(theta: f64) -> f64 {
    (PI * PI - theta * theta / 4.0) / 6.0
}

/// `(4π² − θ²)/48`
pub fn closed_form_final(theta: f64) -> f64 {
    (4.0 * PI * PI - theta * theta) / 48.0
}

/// `∫_{r₀}^{½} dr/((1 − r − s)rs)` from the partial fractions
/// `1/((1 − s − r)r) = (1/(1 − s))(1/r + 1/(1 − s − r))`.
pub fn inner_integral_closed_form(s: f64, kappa: f64) -> f64 {
    let lo = (1.0 - 2.0 * s) / (2.0 - (kappa + 2.0) * s);
    let upper = (0.5 / (0.5 - s)).ln();
    let lower = (lo / (1.0 - s - lo)).ln();
    (upper - lower) / (s * (1.0 - s))
}

/// `κ + 2` and `2 − κ` for `κ = −2cos(θ/2)`, without cancellation.
fn kappa_offsets(theta: f64) -> (f64, f64) {
    let (sin, cos) = (theta / 4.0).sin_cos();
    (4.0 * sin * sin, 4.0 * cos * cos)
}

struct Integrand {
    plus: f64,
    minus: f64,
    tol: Tolerance,
    failure: Mutex<Option<Error>>,
}

impl Integrand {
    fn lower_r(&self, s: f64) -> f64 {
        (1.0 - 2.0 * s) / (2.0 - self.plus * s)
    }

    fn inner(&self, s: f64) -> f64 {
        let result = if s <= 0.25 {
            let denom = 2.0 - self.plus * s;
            // ½ − r₀ = s(2 − κ)/(2(2 − (κ + 2)s))
            let w_over_s = self.minus / (2.0 * denom);
            let w = w_over_s * s;
            let f = |tau: f64| {
                let r = 0.5 - w * tau;
                w_over_s / ((0.5 - s + w * tau) * r)
            };
            integrate(&f, 0.0, 1.0, self.tol, 1)
        } else {
            let lo = self.lower_r(s);
            let gap = 1.0 - s - lo;
            let top = (gap / (0.5 - s)).ln();
            let f = |u: f64| {
                let r = lo - gap * (-u).exp_m1();
                1.0 / (r * s)
            };
            integrate(&f, 0.0, top, self.tol, 1)
        };
        match result {
            Ok(v) => v.value,
            Err(e) => {
                let mut slot = self.failure.lock().expect("poisoned");
                slot.get_or_insert(e);
                f64::NAN
            }
        }
    }
}

pub fn volume_integral(theta: f64, rel_tol: f64) -> Result<VolumeEstimate> {
    volume_integral_with(theta, rel_tol, rayon::current_num_threads())
}

/// As [`volume_integral`], refining up to `workers` outer panels at a time.
pub fn volume_integral_with(theta: f64, rel_tol: f64, workers: usize) -> Result<VolumeEstimate> {
    let kappa = theta_to_kappa(theta)?;
    if !(MIN_REL_TOL..1.0).contains(&rel_tol) {
        return Err(Error::Domain(format!(
            "relative tolerance {rel_tol} must lie in [{MIN_REL_TOL}, 1)"
        )));
    }
    let (plus, minus) = kappa_offsets(theta);
    let integrand = Integrand {
        plus,
        minus,
        tol: Tolerance {
            abs: 1e-300,
            rel: rel_tol * 1e-3,
            max_panels: INNER_PANELS,
        },
        failure: Mutex::new(None),
    };
    let outer_tol = Tolerance {
        abs: 1e-15,
        rel: rel_tol * 0.1,
        max_panels: OUTER_PANELS,
    };
    let f = |s: f64| integrand.inner(s);
    let run = |a: f64, b: f64| {
        let out = integrate(&f, a, b, outer_tol, workers.max(1).min(OUTER_BATCH));
        if let Some(e) = integrand.failure.lock().expect("poisoned").take() {
            return Err(e);
        }
        out
    };
    let near_edge = run(0.0, 0.25)?;
    let near_corner = run(0.25, 0.5)?;

    let prefactor = M2_INDEX as f64 / PSL2Z_INDEX as f64;
    let raw = prefactor * (near_edge.value + near_corner.value);
    let final_volume = raw / GENERIC_AUTOMORPHISMS as f64;
    let error_estimate = prefactor * (near_edge.error + near_corner.error) + raw * rel_tol * 1e-3;
    let closed = closed_form_final(theta);
    Ok(VolumeEstimate {
        theta,
        kappa,
        raw,
        final_volume,
        error_estimate,
        closed_form_raw: closed_form_raw(theta),
        closed_form_final: closed,
        rel_err: (final_volume - closed).abs() / closed,
        panels: near_edge.panels + near_corner.panels,
    })
}
