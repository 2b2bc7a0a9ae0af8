//! Numerical spectral theory on G = PSL(2,R) modulo the modular group.
//!
//! The crate is organized around the objects that drive the Kloosterman/spectral
//! sum formulas for PSL(2,Z):
//!
//! - [`group`]: exact coordinate geometry on G (Iwasawa and Bruhat
//!   decompositions, left action on the upper half-plane, Haar density).
//! - [`lie`]: left-invariant differential operators applied through controlled
//!   finite differences, with commutator and Casimir identity checkers.
//! - [`specfun`]: complex Gamma, Bessel functions of complex order, Riemann
//!   zeta, divisor sums, and the quadrature engine used by every transform.
//! - [`jacquet`]: the Jacquet integral on the elementary vectors, Whittaker
//!   functions, and ladder-norm identities.
//! - [`kirillov`]: the Kirillov map, the Bessel kernel of representations,
//!   Mellin transforms with the local functional equation, Whittaker product
//!   integrals, and unitarity Gram matrices.
//! - [`kloosterman`]: Kloosterman sums, the Bessel transforms of the sum
//!   formulas, and both sides of the spectral/arithmetic identities.
//! - [`spectra`]: ingestion and validation of Maass-form spectral datasets.
//! - [`cli`]: the command-line front end (`eval`, `verify`, `trace`).

pub mod cli;
pub mod error;
pub mod group;
pub mod jacquet;
pub mod kirillov;
pub mod kloosterman;
pub mod lie;
pub mod specfun;
pub mod spectra;

pub use error::{Error, Result};
pub use num_complex::Complex64;
