use std::f64::consts::PI;

use proptest::prelude::*;

use wpvol::hypgeom::{
    cone_glue_w, crown_length, crown_residual, crown_sign_changes, hexagon_delta, pentagon_delta,
    quad_delta, separation_bound, Separation, CROWN_LO,
};
use wpvol::{BoundaryLabel, Error};

fn increasing(f: impl Fn(f64) -> f64, c: f64, h: f64) -> bool {
    f(c + h) > f(c)
}

proptest! {
    #[test]
    fn deltas_increase_with_c(
        l1 in 0.05f64..8.0,
        l2 in 0.05f64..8.0,
        t1 in 0.01f64..PI - 0.01,
        t2 in 0.01f64..PI - 0.01,
        c in 0.0f64..8.0,
    ) {
        let h = 1e-3;
        prop_assert!(increasing(|c| hexagon_delta(l1, l2, c).unwrap(), c, h));
        prop_assert!(increasing(|c| pentagon_delta(l1, t1, c).unwrap(), c, h));
        prop_assert!(increasing(|c| quad_delta(t1, t2, c).unwrap(), c, h));
    }

    #[test]
    fn quad_delta_is_positive_where_defined(t1 in 1e-3f64..2.0 * PI, t2 in 1e-3f64..2.0 * PI, c in 0.0f64..5.0) {
        match quad_delta(t1, t2, c) {
            Ok(d) => prop_assert!(d > 0.0 && t1 + t2 < 2.0 * PI),
            Err(_) => prop_assert!(t1 + t2 >= 2.0 * PI),
        }
    }

    #[test]
    fn two_cone_separation_is_quad_delta(t1 in 1e-3f64..2.0 * PI, t2 in 1e-3f64..2.0 * PI) {
        prop_assume!(t1 + t2 < 2.0 * PI);
        let sep = separation_bound(&BoundaryLabel::cone(t1).unwrap(), &BoundaryLabel::cone(t2).unwrap()).unwrap();
        prop_assert_eq!(sep, Separation::Bound(quad_delta(t1, t2, 0.0).unwrap()));
    }

    #[test]
    fn gluing_at_pi_is_the_identity(x in 1e-3f64..30.0) {
        let w = cone_glue_w(x, PI).unwrap();
        prop_assert!((w - x).abs() <= 1e-12 * x.max(1.0), "{w} vs {x}");
    }

    #[test]
    fn crown_roots_have_small_residuals(phi in 0.05f64..PI - 1e-6, l in 0.05f64..12.0) {
        match crown_length(phi, l) {
            Ok(sol) => {
                prop_assert!(crown_residual(phi, l, sol.x).abs() < 1e-10);
                prop_assert_eq!(crown_sign_changes(phi, l, CROWN_LO, sol.bracket.1).len(), 1);
            }
            Err(Error::Domain(msg)) => prop_assert!(msg.contains("2 roots"), "{msg}"),
            Err(e) => prop_assert!(false, "{e}"),
        }
    }
}

/// The crown equation is quadratic in `T = tanh²(x/2)` after multiplying by `1 − T`,
/// with the `φ`-independent root `T = 1/cosh L` and the other root
/// `T = (tanh²(L/2) − cos²φ)/sin²φ`.
#[test]
fn crown_roots_match_the_quadratic() {
    let x_of = |t: f64| 2.0 * t.sqrt().atanh();
    for l in [0.5f64, 1.0, 2.0, 5.0] {
        for phi in [0.4f64, 1.2, 2.0, 2.8, 3.1] {
            let fixed = x_of(1.0 / f64::cosh(l));
            let tau = (l / 2.0).tanh().powi(2);
            let other = (tau - phi.cos().powi(2)) / phi.sin().powi(2);
            let mut expected = vec![fixed];
            if other > 0.0 && (x_of(other) - fixed).abs() > 1e-9 {
                expected.push(x_of(other));
            }
            match crown_length(phi, l) {
                Ok(sol) => {
                    assert_eq!(expected.len(), 1, "φ={phi} L={l}");
                    assert!(
                        (sol.x - expected[0]).abs() < 1e-9,
                        "φ={phi} L={l}: {} vs {}",
                        sol.x,
                        expected[0]
                    );
                }
                Err(_) => assert_eq!(expected.len(), 2, "φ={phi} L={l}"),
            }
        }
    }
}
