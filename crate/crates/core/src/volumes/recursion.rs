//! One step of Mirzakhani's recursion.
//!
//! With `H` the kernel of [`super::kernel`], `∂_{L₁}(L₁ V_{g,n}(L))` is the sum of
//!
//! * `½ ∬ xy H(x+y, L₁) V_{g−1,n+1}(x, y, L̂) dx dy`,
//! * `½ ∬ xy H(x+y, L₁) Σ V_{g₁}(x, L_I) V_{g₂}(y, L_J) dx dy` over stable splittings,
//! * `½ Σ_{j≥2} ∫ x (H(x, L₁+L_j) + H(x, L₁−L_j)) V_{g,n−1}(x, L̂) dx`.
//!
//! Every integral is a kernel moment: `∬ x^{2a+1} y^{2b+1} H(x+y, t) dx dy =
//! (2a+1)!(2b+1)!/(2a+2b+3)! · F_{2a+2b+3}(t)`.

use std::collections::BTreeMap;

use num_bigint::BigInt;

use super::kernel::moment;
use super::table::{ConfigKey, VolumeTable};
use crate::error::{Error, Result};
use crate::exactpoly::rational::factorial;
use crate::exactpoly::{even_binomial_split, Monomial, PiScalar, Rational, VolumePolynomial};

/// Accumulates `Σ c · L₁^{2m} · L̂^{e}` keyed by the full exponent vector.
struct Accumulator {
    nvars: usize,
    terms: BTreeMap<Monomial, PiScalar>,
}

impl Accumulator {
    fn new(nvars: usize) -> Self {
        Self {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    fn add(&mut self, exps: Monomial, value: PiScalar) {
        debug_assert_eq!(exps.len(), self.nvars);
        let slot = self.terms.entry(exps).or_default();
        *slot += &value;
    }

    /// Adds `coeff · F_{2k+1}(L₁) · rest`.
    fn add_moment(&mut self, k: u32, coeff: &PiScalar, rest: &[u32]) {
        for (m, f) in moment(k) {
            let mut exps = Vec::with_capacity(self.nvars);
            exps.push(m);
            exps.extend_from_slice(rest);
            self.add(exps, coeff * &f);
        }
    }
}

/// `½ (2a+1)!(2b+1)!/(2a+2b+3)!`
fn double_moment_weight(a: u32, b: u32) -> Rational {
    let numer = factorial(2 * a + 1) * factorial(2 * b + 1);
    let denom = factorial(2 * a + 2 * b + 3) * BigInt::from(2);
    Rational::new(numer, denom)
}

fn base_volume(key: ConfigKey) -> Option<VolumePolynomial> {
    match (key.g, key.n) {
        (0, 3) => Some(VolumePolynomial::one(0, 3)),
        (1, 1) => Some(
            VolumePolynomial::from_terms(
                1,
                1,
                [
                    (
                        vec![1],
                        PiScalar::from_rational(Rational::new(1.into(), 48.into())),
                    ),
                    (
                        vec![0],
                        PiScalar::term(Rational::new(1.into(), 12.into()), 1),
                    ),
                ],
            )
            .expect("one-variable terms"),
        ),
        _ => None,
    }
}

/// `V_{0,3} = 1` and `V_{1,1} = (L² + 4π²)/48`.
pub fn base_case(key: ConfigKey) -> Result<VolumePolynomial> {
    base_volume(key).ok_or(Error::NotBaseCase { g: key.g, n: key.n })
}

pub fn is_base_case(key: ConfigKey) -> bool {
    matches!((key.g, key.n), (0, 3) | (1, 1))
}

/// Keys whose volumes [`compute_volume`] reads.
pub fn dependencies(key: ConfigKey) -> Vec<ConfigKey> {
    if is_base_case(key) {
        return Vec::new();
    }
    let (g, n) = (key.g, key.n);
    if n == 0 {
        return vec![ConfigKey::unchecked(g, 1)];
    }
    let mut deps = Vec::new();
    if g >= 1 {
        deps.extend(ConfigKey::new(g - 1, n + 1).ok());
    }
    for g1 in 0..=g {
        for size in 0..n {
            let left = ConfigKey::new(g1, size + 1);
            let right = ConfigKey::new(g - g1, n - size);
            if let (Ok(l), Ok(r)) = (left, right) {
                deps.push(l);
                deps.push(r);
            }
        }
    }
    if n >= 2 {
        deps.extend(ConfigKey::new(g, n - 1).ok());
    }
    deps.sort();
    deps.dedup();
    deps
}

/// Computes `V_{g,n}` from the lower-complexity entries already in `table`.
///
/// Closed surfaces (`n = 0`) come from `V_{g,1}` through the derivative relation
/// at `L = 2πi`: `V_{g,0} = Q(−4π²)/(2g − 2)` where `∂V_{g,1}/∂L = L · Q(L²)`.
pub fn compute_volume(key: ConfigKey, table: &VolumeTable) -> Result<VolumePolynomial> {
    if let Some(base) = base_volume(key) {
        return Ok(base);
    }
    let lookup = |k: ConfigKey| -> Result<&VolumePolynomial> {
        table
            .get(k)
            .ok_or_else(|| Error::Cache(format!("missing dependency V_{{{},{}}}", k.g, k.n)))
    };
    let (g, n) = (key.g, key.n);
    if n == 0 {
        let v1 = lookup(ConfigKey::unchecked(g, 1))?;
        let q = v1.odd_derivative_factor(0)?;
        let at_two_pi =
            q.substitute_square(0, &PiScalar::term(Rational::from_integer((-4).into()), 1))?;
        let euler = Rational::from_integer(BigInt::from(2 * g - 2));
        return Ok(at_two_pi.scale_rational(&euler.recip()).with_genus(g));
    }

    let mut acc = Accumulator::new(n);

    // non-separating: cut along a curve leaving V_{g-1,n+1}(x, y, L₂..L_n)
    if g >= 1 {
        if let Ok(inner) = ConfigKey::new(g - 1, n + 1) {
            for (m, c) in lookup(inner)?.terms() {
                let (a, b) = (m[0], m[1]);
                let coeff = c.scale(&double_moment_weight(a, b));
                acc.add_moment(a + b + 1, &coeff, &m[2..]);
            }
        }
    }

    // separating: V_{g1}(x, L_I) · V_{g2}(y, L_J) with I ⊔ J = {2..n}
    let others = n - 1;
    for g1 in 0..=g {
        let g2 = g - g1;
        for mask in 0u64..(1u64 << others) {
            let in_left: Vec<usize> = (0..others).filter(|i| mask >> i & 1 == 1).collect();
            let in_right: Vec<usize> = (0..others).filter(|i| mask >> i & 1 == 0).collect();
            let (Ok(lk), Ok(rk)) = (
                ConfigKey::new(g1, in_left.len() + 1),
                ConfigKey::new(g2, in_right.len() + 1),
            ) else {
                continue;
            };
            let (left, right) = (lookup(lk)?, lookup(rk)?);
            for (ml, cl) in left.terms() {
                for (mr, cr) in right.terms() {
                    let mut rest = vec![0u32; others];
                    for (slot, e) in in_left.iter().zip(&ml[1..]) {
                        rest[*slot] = *e;
                    }
                    for (slot, e) in in_right.iter().zip(&mr[1..]) {
                        rest[*slot] = *e;
                    }
                    let coeff = (cl * cr).scale(&double_moment_weight(ml[0], mr[0]));
                    acc.add_moment(ml[0] + mr[0] + 1, &coeff, &rest);
                }
            }
        }
    }

    // boundary: the pants bounded by L₁ and L_j, leaving V_{g,n-1}(x, L̂₁ⱼ)
    if n >= 2 {
        if let Ok(inner_key) = ConfigKey::new(g, n - 1) {
            let inner = lookup(inner_key)?;
            for j in 1..n {
                for (m, c) in inner.terms() {
                    let a = m[0];
                    // positions 1..n except j receive m[1..]
                    let mut rest = vec![0u32; n];
                    let mut src = m[1..].iter();
                    for (slot, e) in rest.iter_mut().enumerate().skip(1) {
                        if slot != j {
                            *e = *src.next().expect("exponent count");
                        }
                    }
                    for (power, f) in moment(a) {
                        let fc = c * &f;
                        for (p1, pj, binom) in even_binomial_split(power) {
                            let mut exps = rest.clone();
                            exps[0] = p1;
                            exps[j] = pj;
                            acc.add(exps, fc.scale(&Rational::from_integer(binom)));
                        }
                    }
                }
            }
        }
    }

    // ∂(L₁V) = Σ c L₁^{2m}  ⇒  V = Σ c L₁^{2m} / (2m+1)
    let out = VolumePolynomial::from_terms(
        g,
        n,
        acc.terms.into_iter().map(|(m, c)| {
            let divisor = Rational::from_integer(BigInt::from(2 * m[0] + 1));
            let scaled = c.scale(&divisor.recip());
            (m, scaled)
        }),
    )?;
    if !out.is_symmetric() {
        return Err(Error::Consistency(format!(
            "recursion produced a non-symmetric V_{{{g},{n}}}"
        )));
    }
    Ok(out)
}
