use num_traits::ToPrimitive;
use proptest::prelude::*;

use wpvol::exactpoly::rational::rat;
use wpvol::{PiScalar, VolumePolynomial};

const NVARS: usize = 3;

fn scalar() -> impl Strategy<Value = PiScalar> {
    prop::collection::vec((-20i64..=20, 1i64..=9, 0u32..=3), 0..4).prop_map(|terms| {
        let mut s = PiScalar::zero();
        for (p, q, e) in terms {
            s.add_term(&rat(p, q), e);
        }
        s
    })
}

fn poly() -> impl Strategy<Value = VolumePolynomial> {
    prop::collection::vec((prop::collection::vec(0u32..=3, NVARS), scalar()), 0..6)
        .prop_map(|terms| VolumePolynomial::from_terms(0, NVARS, terms).unwrap())
}

proptest! {
    #[test]
    fn scalar_ring_axioms(a in scalar(), b in scalar(), c in scalar()) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn polynomial_ring_axioms(a in poly(), b in poly(), c in poly()) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a + &VolumePolynomial::zero(0, NVARS), a.clone());
        prop_assert_eq!(&a * &VolumePolynomial::one(0, NVARS), a.clone());
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn substitution_commutes_with_evaluation(
        p in poly(),
        j in 0..NVARS,
        num in prop::collection::vec(-30i64..=30, NVARS),
        den in prop::collection::vec(1i64..=7, NVARS),
    ) {
        let squares: Vec<f64> = num.iter().zip(&den).map(|(&a, &b)| a as f64 / b as f64).collect();
        let value = PiScalar::from_rational(rat(num[j], den[j]));
        let reduced = p.substitute_square(j, &value).unwrap();
        let mut rest = squares.clone();
        rest.remove(j);
        let direct = p.eval_squares(&squares).unwrap();
        let via = reduced.eval_squares(&rest).unwrap();
        let scale = p
            .terms()
            .map(|(m, c)| {
                let mono: f64 = m.iter().zip(&squares).map(|(&k, x)| x.abs().powi(k as i32)).product();
                c.terms().map(|(e, q)| {
                    q.to_f64().unwrap().abs() * std::f64::consts::PI.powi(2 * e as i32)
                }).sum::<f64>() * mono
            })
            .sum::<f64>()
            .max(1.0);
        prop_assert!((direct - via).abs() <= 1e-12 * scale, "{direct} vs {via}");
    }

    #[test]
    fn derivative_undoes_integration(p in poly(), k in 0..NVARS) {
        let back = p.integrate_against_length(k).unwrap().odd_derivative_factor(k).unwrap();
        prop_assert_eq!(back, p);
    }

    #[test]
    fn canonical_json_round_trips(p in poly()) {
        let text = p.to_canonical_json();
        let back = VolumePolynomial::from_canonical_json(&text).unwrap();
        prop_assert_eq!(back.to_canonical_json(), text);
    }
}
