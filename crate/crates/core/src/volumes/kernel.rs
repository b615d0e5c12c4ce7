//! Moments of the recursion kernel
//! `H(x, t) = 1/(1 + e^{(x+t)/2}) + 1/(1 + e^{(x−t)/2})`.
//!
//! `F_{2k+1}(t) = ∫₀^∞ x^{2k+1} H(x, t) dx` is an even polynomial in `t`:
//! `F_{2k+1}(t) = (2k+1)! Σ_{i=0}^{k+1} ζ(2i)(2^{2i+1} − 4) t^{2k+2−2i} / (2k+2−2i)!`,
//! with ζ(2i) a rational multiple of π^{2i} given by the Bernoulli numbers.

use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::exactpoly::rational::factorial;
use crate::exactpoly::{PiScalar, Rational, VolumePolynomial};

/// Bernoulli numbers `B_0 … B_max` (with `B_1 = −1/2`).
pub fn bernoulli_numbers(max: usize) -> Vec<Rational> {
    let mut b: Vec<Rational> = Vec::with_capacity(max + 1);
    b.push(Rational::one());
    for m in 1..=max {
        // Σ_{j=0}^{m} C(m+1, j) B_j = 0
        let mut acc = Rational::zero();
        let mut binom = BigInt::one();
        for (j, bj) in b.iter().enumerate() {
            acc += Rational::from_integer(binom.clone()) * bj;
            binom = binom * BigInt::from(m + 1 - j) / BigInt::from(j + 1);
        }
        b.push(-acc / Rational::from_integer(BigInt::from(m + 1)));
    }
    b
}

/// The rational `z_i` with `ζ(2i) = z_i π^{2i}`; `ζ(0) = −1/2`.
pub fn zeta_even_rational(i: u32, bernoulli: &[Rational]) -> Rational {
    // ζ(2i) = (−1)^{i+1} B_{2i} (2π)^{2i} / (2 (2i)!)
    let sign = if i.is_multiple_of(2) {
        -Rational::one()
    } else {
        Rational::one()
    };
    let two_pow = Rational::from_integer(num_traits::pow(BigInt::from(2), 2 * i as usize));
    let denom = Rational::from_integer(BigInt::from(2) * factorial(2 * i));
    sign * &bernoulli[2 * i as usize] * two_pow / denom
}

/// `(m, c)` pairs with `F_{2k+1}(t) = Σ c · t^{2m}`.
pub type Moment = Vec<(u32, PiScalar)>;

fn compute_moment(k: u32) -> Moment {
    let bernoulli = bernoulli_numbers(2 * (k as usize + 1));
    let odd_fact = Rational::from_integer(factorial(2 * k + 1));
    let mut out = Vec::with_capacity(k as usize + 2);
    for i in 0..=k + 1 {
        let zeta = zeta_even_rational(i, &bernoulli);
        let weight = Rational::from_integer(
            num_traits::pow(BigInt::from(2), 2 * i as usize + 1) - BigInt::from(4),
        );
        let power = k + 1 - i;
        let inv_fact = Rational::from_integer(factorial(2 * power)).recip();
        let coeff = &odd_fact * zeta * weight * inv_fact;
        out.push((power, PiScalar::term(coeff, i)));
    }
    out.sort_by_key(|(m, _)| *m);
    out
}

/// Memoized kernel moments, shared across threads.
pub(crate) fn moment(k: u32) -> Moment {
    static CACHE: OnceLock<RwLock<Vec<Moment>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| RwLock::new(Vec::new()));
    if let Some(m) = cache.read().expect("kernel cache poisoned").get(k as usize) {
        return m.clone();
    }
    let mut guard = cache.write().expect("kernel cache poisoned");
    while guard.len() <= k as usize {
        let next = compute_moment(guard.len() as u32);
        guard.push(next);
    }
    guard[k as usize].clone()
}

/// `F_{2k+1}(t)` as a one-variable polynomial in `t²`.
pub fn kernel_moment(k: u32) -> VolumePolynomial {
    VolumePolynomial::from_terms(0, 1, moment(k).into_iter().map(|(m, c)| (vec![m], c)))
        .expect("one-variable terms")
}
