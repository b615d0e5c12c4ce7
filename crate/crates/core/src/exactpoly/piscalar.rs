//! The ring of polynomials in π² with rational coefficients.
//!
//! π itself never appears: a `PiScalar` is a finite sum `Σ c_k π^{2k}`, keyed by
//! the half-exponent `k`. Floating point enters only through [`PiScalar::to_f64`].

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_traits::{One, Signed, ToPrimitive, Zero};

use super::rational::{int, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct PiScalar {
    // half-exponent k -> coefficient of π^{2k}; zero coefficients are never stored
    terms: BTreeMap<u32, Rational>,
}

impl PiScalar {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_rational(Rational::one())
    }

    pub fn from_rational(value: Rational) -> Self {
        Self::term(value, 0)
    }

    pub fn from_int(value: i64) -> Self {
        Self::from_rational(int(value))
    }

    /// `coeff · π^{2·half_exp}`
    pub fn term(coeff: Rational, half_exp: u32) -> Self {
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(half_exp, coeff);
        }
        Self { terms }
    }

    /// π^{2k}
    pub fn pi_pow(half_exp: u32) -> Self {
        Self::term(Rational::one(), half_exp)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&0).is_some_and(|c| c.is_one())
    }

    /// Iterates `(k, c)` for the terms `c·π^{2k}` in increasing `k`.
    pub fn terms(&self) -> impl Iterator<Item = (u32, &Rational)> {
        self.terms.iter().map(|(k, c)| (*k, c))
    }

    pub fn coefficient(&self, half_exp: u32) -> Rational {
        self.terms
            .get(&half_exp)
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn max_half_exp(&self) -> Option<u32> {
        self.terms.keys().next_back().copied()
    }

    pub fn add_term(&mut self, coeff: &Rational, half_exp: u32) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(half_exp).or_insert_with(Rational::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.terms.remove(&half_exp);
        }
    }

    pub fn scale(&self, factor: &Rational) -> Self {
        if factor.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(k, c)| (*k, c * factor)).collect(),
        }
    }

    /// Multiplies by π^{2·shift}.
    pub fn shift(&self, shift: u32) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (k + shift, c.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, exp: u32) -> Self {
        (0..exp).fold(Self::one(), |acc, _| &acc * self)
    }

    pub fn all_coefficients_nonnegative(&self) -> bool {
        self.terms.values().all(|c| !c.is_negative())
    }

    pub fn to_f64(&self) -> f64 {
        let pi2 = std::f64::consts::PI * std::f64::consts::PI;
        self.terms
            .iter()
            .map(|(k, c)| c.to_f64().unwrap_or(f64::NAN) * pi2.powi(*k as i32))
            .sum()
    }
}

impl From<Rational> for PiScalar {
    fn from(value: Rational) -> Self {
        Self::from_rational(value)
    }
}

impl AddAssign<&PiScalar> for PiScalar {
    fn add_assign(&mut self, rhs: &PiScalar) {
        for (k, c) in &rhs.terms {
            self.add_term(c, *k);
        }
    }
}

impl Add for &PiScalar {
    type Output = PiScalar;
    fn add(self, rhs: &PiScalar) -> PiScalar {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for PiScalar {
    type Output = PiScalar;
    fn add(mut self, rhs: PiScalar) -> PiScalar {
        self += &rhs;
        self
    }
}

impl Neg for &PiScalar {
    type Output = PiScalar;
    fn neg(self) -> PiScalar {
        PiScalar {
            terms: self.terms.iter().map(|(k, c)| (*k, -c)).collect(),
        }
    }
}

impl Neg for PiScalar {
    type Output = PiScalar;
    fn neg(self) -> PiScalar {
        -&self
    }
}

impl Sub for &PiScalar {
    type Output = PiScalar;
    fn sub(self, rhs: &PiScalar) -> PiScalar {
        self + &(-rhs)
    }
}

impl Sub for PiScalar {
    type Output = PiScalar;
    fn sub(self, rhs: PiScalar) -> PiScalar {
        &self - &rhs
    }
}

impl Mul for &PiScalar {
    type Output = PiScalar;
    fn mul(self, rhs: &PiScalar) -> PiScalar {
        let mut out = PiScalar::zero();
        for (ka, ca) in &self.terms {
            for (kb, cb) in &rhs.terms {
                out.add_term(&(ca * cb), ka + kb);
            }
        }
        out
    }
}

impl Mul for PiScalar {
    type Output = PiScalar;
    fn mul(self, rhs: PiScalar) -> PiScalar {
        &self * &rhs
    }
}

fn fmt_coeff_pi(f: &mut fmt::Formatter<'_>, coeff: &Rational, half_exp: u32) -> fmt::Result {
    let pi = match half_exp {
        0 => String::new(),
        k => format!("π^{}", 2 * k),
    };
    if pi.is_empty() {
        if coeff.is_integer() {
            write!(f, "{}", coeff.numer())
        } else {
            write!(f, "({}/{})", coeff.numer(), coeff.denom())
        }
    } else if coeff.is_one() {
        write!(f, "{pi}")
    } else if coeff.is_integer() {
        write!(f, "{}·{pi}", coeff.numer())
    } else {
        write!(f, "({}/{})·{pi}", coeff.numer(), coeff.denom())
    }
}

impl fmt::Display for PiScalar {
    /// Highest π power first, e.g. `(28/15)·π^4 + 2·π^2 + (1/2)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (k, c)) in self.terms.iter().rev().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            fmt_coeff_pi(f, c, *k)?;
        }
        Ok(())
    }
}

pub(crate) fn write_coeff_pi(
    f: &mut fmt::Formatter<'_>,
    coeff: &Rational,
    half_exp: u32,
) -> fmt::Result {
    fmt_coeff_pi(f, coeff, half_exp)
}
