use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::Zero;

use super::piscalar::PiScalar;
use super::rational::{binomial, Rational};
use crate::error::{Error, Result};
use crate::labels::BoundaryLabel;

/// Exponent vector `(k₁, …, k_n)` standing for `∏ (L_j²)^{k_j}`.
pub type Monomial = Vec<u32>;

/// A polynomial in `L₁², …, L_n²` with coefficients in ℚ[π²], tagged by `(g, n)`.
///
/// Arithmetic keeps the left operand's genus tag; use [`VolumePolynomial::with_genus`]
/// to retag intermediate results.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VolumePolynomial {
    genus: u32,
    nvars: usize,
    terms: BTreeMap<Monomial, PiScalar>,
}

impl VolumePolynomial {
    pub fn zero(genus: u32, nvars: usize) -> Self {
        Self {
            genus,
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(genus: u32, nvars: usize, value: PiScalar) -> Self {
        let mut p = Self::zero(genus, nvars);
        p.add_term(vec![0; nvars], &value);
        p
    }

    pub fn one(genus: u32, nvars: usize) -> Self {
        Self::constant(genus, nvars, PiScalar::one())
    }

    pub fn monomial(genus: u32, exps: Monomial, coeff: PiScalar) -> Self {
        let mut p = Self::zero(genus, exps.len());
        p.add_term(exps, &coeff);
        p
    }

    /// `L_j²` (0-based `j`).
    pub fn length_squared(genus: u32, nvars: usize, j: usize) -> Result<Self> {
        check_index(j, nvars)?;
        let mut exps = vec![0; nvars];
        exps[j] = 1;
        Ok(Self::monomial(genus, exps, PiScalar::one()))
    }

    pub fn from_terms(
        genus: u32,
        nvars: usize,
        terms: impl IntoIterator<Item = (Monomial, PiScalar)>,
    ) -> Result<Self> {
        let mut p = Self::zero(genus, nvars);
        for (exps, coeff) in terms {
            if exps.len() != nvars {
                return Err(Error::VariableCount {
                    left: nvars,
                    right: exps.len(),
                });
            }
            p.add_term(exps, &coeff);
        }
        Ok(p)
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn with_genus(mut self, genus: u32) -> Self {
        self.genus = genus;
        self
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &PiScalar)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, exps: &[u32]) -> PiScalar {
        self.terms.get(exps).cloned().unwrap_or_default()
    }

    /// The value at `L = 0`.
    pub fn constant_term(&self) -> PiScalar {
        self.coefficient(&vec![0; self.nvars])
    }

    pub(crate) fn add_term(&mut self, exps: Monomial, coeff: &PiScalar) {
        debug_assert_eq!(exps.len(), self.nvars);
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(exps) {
            Entry::Vacant(slot) => {
                slot.insert(coeff.clone());
            }
            Entry::Occupied(mut slot) => {
                *slot.get_mut() += coeff;
                if slot.get().is_zero() {
                    slot.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_arity(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Self {
            genus: self.genus,
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, factor: &PiScalar) -> Self {
        let mut out = Self::zero(self.genus, self.nvars);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), &(c * factor));
        }
        out
    }

    pub fn scale_rational(&self, factor: &Rational) -> Self {
        self.scale(&PiScalar::from_rational(factor.clone()))
    }

    /// Product of two polynomials over the same variables. Polynomials in
    /// disjoint variables are first placed side by side with [`Self::embed`].
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.same_arity(other)?;
        let mut out = Self::zero(self.genus, self.nvars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let exps = ma.iter().zip(mb).map(|(a, b)| a + b).collect();
                out.add_term(exps, &(ca * cb));
            }
        }
        Ok(out)
    }

    /// Moves variable `j` to position `mapping[j]` of a polynomial in `nvars` variables.
    pub fn embed(&self, nvars: usize, mapping: &[usize]) -> Result<Self> {
        if mapping.len() != self.nvars {
            return Err(Error::VariableCount {
                left: self.nvars,
                right: mapping.len(),
            });
        }
        for &target in mapping {
            check_index(target, nvars)?;
        }
        let mut out = Self::zero(self.genus, nvars);
        for (m, c) in &self.terms {
            let mut exps = vec![0; nvars];
            for (j, &e) in m.iter().enumerate() {
                exps[mapping[j]] += e;
            }
            out.add_term(exps, c);
        }
        Ok(out)
    }

    /// Relabels variables by `perm` (variable `j` becomes variable `perm[j]`).
    pub fn permute(&self, perm: &[usize]) -> Result<Self> {
        self.embed(self.nvars, perm)
    }

    /// Sets `L_j² := value` (0-based `j`), leaving a polynomial in the other `n − 1`
    /// variables. Substituting `−4π²` realises `L_j = 2πi`.
    pub fn substitute_square(&self, j: usize, value: &PiScalar) -> Result<Self> {
        check_index(j, self.nvars)?;
        let mut powers: Vec<PiScalar> = vec![PiScalar::one()];
        let mut out = Self::zero(self.genus, self.nvars - 1);
        for (m, c) in &self.terms {
            let k = m[j] as usize;
            while powers.len() <= k {
                let next = powers.last().unwrap() * value;
                powers.push(next);
            }
            let mut exps = m.clone();
            exps.remove(j);
            out.add_term(exps, &(c * &powers[k]));
        }
        Ok(out)
    }

    /// Termwise `∫₀^{L_k} x · (x²)^m dx = L_k^{2m+2} / (2m+2)`.
    pub fn integrate_against_length(&self, k: usize) -> Result<Self> {
        check_index(k, self.nvars)?;
        let mut out = Self::zero(self.genus, self.nvars);
        for (m, c) in &self.terms {
            let mut exps = m.clone();
            let power = exps[k];
            exps[k] += 1;
            let divisor = Rational::from_integer(BigInt::from(2 * power + 2));
            out.add_term(exps, &c.scale(&divisor.recip()));
        }
        Ok(out)
    }

    /// The even polynomial `Q` with `∂p/∂L_j = L_j · Q`.
    pub fn odd_derivative_factor(&self, j: usize) -> Result<Self> {
        check_index(j, self.nvars)?;
        let mut out = Self::zero(self.genus, self.nvars);
        for (m, c) in &self.terms {
            let power = m[j];
            if power == 0 {
                continue;
            }
            let mut exps = m.clone();
            exps[j] -= 1;
            let factor = Rational::from_integer(BigInt::from(2 * power));
            out.add_term(exps, &c.scale(&factor));
        }
        Ok(out)
    }

    /// Evaluates at numeric values of `L_j²`.
    pub fn eval_squares(&self, squares: &[f64]) -> Result<f64> {
        if squares.len() != self.nvars {
            return Err(Error::LabelCount {
                expected: self.nvars,
                got: squares.len(),
            });
        }
        let mut sum = 0.0;
        let mut compensation = 0.0;
        for (m, c) in &self.terms {
            let mut term = c.to_f64();
            for (x, &e) in squares.iter().zip(m) {
                term *= x.powi(e as i32);
            }
            // Neumaier summation
            let t = sum + term;
            if sum.abs() >= term.abs() {
                compensation += (sum - t) + term;
            } else {
                compensation += (term - t) + sum;
            }
            sum = t;
        }
        Ok(sum + compensation)
    }

    /// Evaluates at exact values of `L_j²` in ℚ[π²].
    pub fn eval_exact(&self, squares: &[PiScalar]) -> Result<PiScalar> {
        if squares.len() != self.nvars {
            return Err(Error::LabelCount {
                expected: self.nvars,
                got: squares.len(),
            });
        }
        let mut p = self.clone();
        for value in squares.iter().rev() {
            p = p.substitute_square(p.nvars - 1, value)?;
        }
        Ok(p.constant_term())
    }

    /// Geodesic(ℓ) ↦ L² = ℓ², Cusp ↦ 0, Cone(θ) ↦ −θ².
    pub fn numeric_eval(&self, labels: &[BoundaryLabel]) -> Result<f64> {
        let squares: Vec<f64> = labels.iter().map(BoundaryLabel::length_squared).collect();
        self.eval_squares(&squares)
    }

    /// Exact evaluation when every label is a cusp or a rational multiple of π.
    pub fn exact_eval(&self, labels: &[BoundaryLabel]) -> Result<Option<PiScalar>> {
        let squares: Option<Vec<PiScalar>> = labels
            .iter()
            .map(BoundaryLabel::exact_length_squared)
            .collect();
        match squares {
            Some(squares) => self.eval_exact(&squares).map(Some),
            None => Ok(None),
        }
    }

    /// Largest `deg_L²(monomial) + k` over the terms `c·π^{2k}·monomial`.
    pub fn max_weight(&self) -> Option<u32> {
        self.terms
            .iter()
            .filter_map(|(m, c)| c.max_half_exp().map(|k| m.iter().sum::<u32>() + k))
            .max()
    }

    /// Every term has weight at most `3g − 3 + n`.
    pub fn respects_dimension_bound(&self) -> bool {
        let dim = 3 * self.genus as i64 - 3 + self.nvars as i64;
        self.max_weight().is_none_or(|w| (w as i64) <= dim)
    }

    /// Every term has weight exactly `3g − 3 + n`.
    pub fn is_homogeneous_of_dimension(&self) -> bool {
        let dim = 3 * self.genus as i64 - 3 + self.nvars as i64;
        self.terms.iter().all(|(m, c)| {
            let deg = m.iter().sum::<u32>();
            c.terms().all(|(k, _)| (deg + k) as i64 == dim)
        })
    }

    pub fn all_coefficients_nonnegative(&self) -> bool {
        self.terms
            .values()
            .all(PiScalar::all_coefficients_nonnegative)
    }

    /// Invariance under all permutations of the variables.
    pub fn is_symmetric(&self) -> bool {
        // adjacent transpositions generate the symmetric group
        (0..self.nvars.saturating_sub(1)).all(|j| {
            self.terms.iter().all(|(m, c)| {
                let mut swapped = m.clone();
                swapped.swap(j, j + 1);
                self.terms.get(&swapped) == Some(c)
            })
        })
    }

    fn same_arity(&self, other: &Self) -> Result<()> {
        if self.nvars == other.nvars {
            Ok(())
        } else {
            Err(Error::VariableCount {
                left: self.nvars,
                right: other.nvars,
            })
        }
    }
}

fn check_index(index: usize, nvars: usize) -> Result<()> {
    if index < nvars {
        Ok(())
    } else {
        Err(Error::IndexOutOfRange { index, nvars })
    }
}

/// `(a + b)^{2m} + (a − b)^{2m} = 2 Σ_i C(2m, 2i) a^{2(m−i)} b^{2i}`; returns the
/// `(m − i, i, C(2m, 2i))` triples.
pub(crate) fn even_binomial_split(m: u32) -> Vec<(u32, u32, BigInt)> {
    (0..=m)
        .map(|i| (m - i, i, binomial(2 * m, 2 * i)))
        .collect()
}

impl Add for &VolumePolynomial {
    type Output = VolumePolynomial;
    fn add(self, rhs: &VolumePolynomial) -> VolumePolynomial {
        VolumePolynomial::add(self, rhs).expect("variable count mismatch in +")
    }
}

impl Sub for &VolumePolynomial {
    type Output = VolumePolynomial;
    fn sub(self, rhs: &VolumePolynomial) -> VolumePolynomial {
        VolumePolynomial::sub(self, rhs).expect("variable count mismatch in -")
    }
}

impl Mul for &VolumePolynomial {
    type Output = VolumePolynomial;
    fn mul(self, rhs: &VolumePolynomial) -> VolumePolynomial {
        self.multiply(rhs).expect("variable count mismatch in *")
    }
}

impl Neg for &VolumePolynomial {
    type Output = VolumePolynomial;
    fn neg(self) -> VolumePolynomial {
        VolumePolynomial::neg(self)
    }
}

impl VolumePolynomial {
    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.iter().all(Zero::is_zero))
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.iter().sum()).max()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactpoly::rational::{int, rat};

    fn v03() -> VolumePolynomial {
        VolumePolynomial::one(0, 3)
    }

    fn v11() -> VolumePolynomial {
        VolumePolynomial::from_terms(
            1,
            1,
            [
                (vec![1], PiScalar::from_rational(rat(1, 48))),
                (vec![0], PiScalar::term(rat(1, 12), 1)),
            ],
        )
        .unwrap()
    }

    fn v04() -> VolumePolynomial {
        let mut p = VolumePolynomial::constant(0, 4, PiScalar::term(int(2), 1));
        for j in 0..4 {
            let mut e = vec![0; 4];
            e[j] = 1;
            p.add_term(e, &PiScalar::from_rational(rat(1, 2)));
        }
        p
    }

    #[test]
    fn additive_identity() {
        let z = VolumePolynomial::zero(0, 4);
        assert_eq!(v04().add(&z).unwrap(), v04());
    }

    #[test]
    fn doubling_v03() {
        let two = v03().add(&v03()).unwrap();
        assert_eq!(two, VolumePolynomial::constant(0, 3, PiScalar::from_int(2)));
    }

    #[test]
    fn assembling_one_variable_of_v04() {
        // (½L₁²) + (2π²) in four variables
        let half_l1 =
            VolumePolynomial::monomial(0, vec![1, 0, 0, 0], PiScalar::from_rational(rat(1, 2)));
        let two_pi2 = VolumePolynomial::constant(0, 4, PiScalar::term(int(2), 1));
        let sum = half_l1.add(&two_pi2).unwrap();
        let full = v04();
        for (m, c) in sum.terms() {
            assert_eq!(&full.coefficient(m), c);
        }
        assert_eq!(sum.len(), 2);
    }

    #[test]
    fn mismatched_arity_is_an_error() {
        assert!(matches!(
            v03().add(&v04()),
            Err(Error::VariableCount { left: 3, right: 4 })
        ));
    }

    #[test]
    fn multiplicative_identity_and_pi_coefficients() {
        assert_eq!(v04().multiply(&VolumePolynomial::one(0, 4)).unwrap(), v04());
        let l1 = VolumePolynomial::length_squared(0, 1, 0).unwrap();
        let pi2 = VolumePolynomial::constant(0, 1, PiScalar::pi_pow(1));
        let product = l1.multiply(&pi2).unwrap();
        assert_eq!(product.len(), 1);
        assert_eq!(product.coefficient(&[1]), PiScalar::pi_pow(1));
    }

    #[test]
    fn product_of_two_v11() {
        let x = v11().embed(2, &[0]).unwrap();
        let y = v11().embed(2, &[1]).unwrap();
        let p = x.multiply(&y).unwrap();
        // (4π²)²/48² = π⁴/144
        assert_eq!(p.constant_term(), PiScalar::term(rat(1, 144), 2));
        assert_eq!(
            p.coefficient(&[1, 1]),
            PiScalar::from_rational(rat(1, 2304))
        );
        assert_eq!(p.total_degree(), Some(2));
    }

    #[test]
    fn substitution_examples() {
        let minus_4pi2 = PiScalar::term(int(-4), 1);
        let sub = v04().substitute_square(3, &minus_4pi2).unwrap();
        let mut expected = VolumePolynomial::zero(0, 3);
        for j in 0..3 {
            let mut e = vec![0; 3];
            e[j] = 1;
            expected.add_term(e, &PiScalar::from_rational(rat(1, 2)));
        }
        assert_eq!(sub, expected);

        let at_zero = v11().substitute_square(0, &PiScalar::zero()).unwrap();
        assert_eq!(at_zero.constant_term(), PiScalar::term(rat(1, 12), 1));
        assert!(v11().substitute_square(0, &minus_4pi2).unwrap().is_zero());
        assert!(matches!(
            v11().substitute_square(1, &minus_4pi2),
            Err(Error::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn integration_examples() {
        let int03 = VolumePolynomial::one(0, 1)
            .integrate_against_length(0)
            .unwrap();
        assert_eq!(int03.coefficient(&[1]), PiScalar::from_rational(rat(1, 2)));
        let int11 = v11().integrate_against_length(0).unwrap();
        assert_eq!(
            int11.coefficient(&[2]),
            PiScalar::from_rational(rat(1, 192))
        );
        assert_eq!(int11.coefficient(&[1]), PiScalar::term(rat(1, 24), 1));
        assert!(int11.constant_term().is_zero());
    }

    #[test]
    fn derivative_factor_examples() {
        let q = v04().odd_derivative_factor(3).unwrap();
        assert_eq!(q, VolumePolynomial::one(0, 4));
        let q11 = v11().odd_derivative_factor(0).unwrap();
        assert_eq!(
            q11,
            VolumePolynomial::constant(1, 1, PiScalar::from_rational(rat(1, 24)))
        );
        assert!(v03().odd_derivative_factor(0).unwrap().is_zero());
    }

    #[test]
    fn numeric_examples() {
        let pi = std::f64::consts::PI;
        let labels = [
            BoundaryLabel::Cusp,
            BoundaryLabel::Geodesic(1.0),
            BoundaryLabel::cone(1.0).unwrap(),
        ];
        assert_eq!(v03().numeric_eval(&labels).unwrap(), 1.0);
        let v = v11()
            .numeric_eval(&[BoundaryLabel::cone(pi).unwrap()])
            .unwrap();
        assert!((v - pi * pi / 16.0).abs() < 1e-14);
        assert!((v - 0.616850).abs() < 1e-6);
        let labels = [
            BoundaryLabel::Cusp,
            BoundaryLabel::Cusp,
            BoundaryLabel::cone(2.0).unwrap(),
            BoundaryLabel::cone(2.0 * pi - 0.1).unwrap(),
        ];
        let v = v04().numeric_eval(&labels).unwrap();
        let direct = 2.0 * pi * pi - 0.5 * (4.0 + (2.0 * pi - 0.1).powi(2));
        assert!((v - direct).abs() < 1e-12);
        assert!((v + 1.3767).abs() < 1e-4);
    }

    #[test]
    fn exact_eval_at_pi_multiples() {
        let labels = [BoundaryLabel::cone_pi(rat(1, 1)).unwrap()];
        assert_eq!(
            v11().exact_eval(&labels).unwrap(),
            Some(PiScalar::term(rat(1, 16), 1))
        );
        assert_eq!(
            v11().exact_eval(&[BoundaryLabel::Geodesic(1.0)]).unwrap(),
            None
        );
    }

    #[test]
    fn weights_and_symmetry() {
        assert!(v04().is_symmetric());
        assert!(v04().is_homogeneous_of_dimension());
        assert!(v04().respects_dimension_bound());
        let lopsided = VolumePolynomial::monomial(0, vec![1, 0], PiScalar::one());
        assert!(!lopsided.is_symmetric());
        assert_eq!(v11().max_weight(), Some(1));
    }

    #[test]
    fn binomial_split() {
        // (a+b)^4 + (a-b)^4 = 2(a^4 + 6a²b² + b^4)
        let split = even_binomial_split(2);
        let coeffs: Vec<i64> = split
            .iter()
            .map(|(_, _, c)| c.try_into().unwrap())
            .collect();
        assert_eq!(coeffs, vec![1, 6, 1]);
    }
}
