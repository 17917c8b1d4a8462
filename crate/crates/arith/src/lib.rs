//! Exact arithmetic in the rational-function field `Q(x, y, l, w1..w5)`.
//!
//! [`Scalar`] is the working number type: a reduced fraction of
//! [`MPoly`] values with a canonical sign, so equality is structural.
//! The [`modular`] module provides prime-field images used for
//! probabilistic identity testing, and [`matrix`] the exact determinant and
//! kernel routines.

pub mod error;
pub mod gcd;
pub mod identity;
pub mod matrix;
pub mod modular;
pub mod monomial;
pub mod mpoly;
pub mod parse;
pub mod ring;
pub mod scalar;

pub use error::{ArithError, Result};
pub use matrix::{det_field, det_fraction_free, kernel, Matrix};
pub use modular::{Fp, FpPoly, PointSampler, MERSENNE61};
pub use monomial::{Monomial, Var, NVARS};
pub use mpoly::MPoly;
pub use ring::Ring;
pub use scalar::Scalar;
