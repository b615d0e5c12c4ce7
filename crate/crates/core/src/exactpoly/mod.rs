//! Exact arithmetic: rationals, the ring ℚ[π²], and even polynomials in the
//! boundary lengths.

mod piscalar;
mod poly;
pub mod rational;
mod serial;

pub use piscalar::PiScalar;
pub(crate) use poly::even_binomial_split;
pub use poly::{Monomial, VolumePolynomial};
pub use rational::Rational;
