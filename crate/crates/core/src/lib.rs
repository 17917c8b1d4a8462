//! Exact computations for the q-deformed Virasoro algebra: Verma modules and
//! Kac determinants, the free-boson realization on Fock sectors, screening
//! currents, and the link between singular vectors and Macdonald
//! polynomials.

pub mod acceptance;
pub mod checks;
pub mod config;
pub mod error;
pub mod fock;
pub mod linalg;
pub mod partition;
pub mod singvec;
pub mod symfunc;
pub mod verma;

pub use error::{Error, Result};
