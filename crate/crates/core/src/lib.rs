//! Weil–Petersson volume polynomials of moduli spaces of hyperbolic surfaces,
//! their evaluation at cone-angle boundary data, and a numerical check of the
//! once-punctured torus volume on its character variety.

pub mod chambers;
pub mod charvar;
pub mod error;
pub mod exactpoly;
pub mod hypgeom;
pub mod identities;
pub mod labels;
pub mod volumes;

pub use error::{Error, Result};
pub use exactpoly::{PiScalar, Rational, VolumePolynomial};
pub use labels::{Angle, BoundaryLabel};
pub use volumes::{ConfigKey, VolumeTable};
