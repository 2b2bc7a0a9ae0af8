//! Complex special functions and the quadrature engine.
//!
//! Everything here is pure and reentrant. Working precision is f64 with
//! compensated summation in the series; the evaluation envelopes are chosen so
//! cancellation keeps at least ten significant digits inside them.

mod bessel;
mod gamma;
mod quad;
mod sigma;
mod zeta;

pub use bessel::{bessel, bessel_k_imag_batch, BesselKind};
pub use gamma::{digamma, gamma, recip_gamma};
pub use quad::{
    integrate, integrate_finite, integrate_half_line, integrate_half_line_segmented,
    integrate_real_line, integrate_shifted_line, tanh_sinh as tanh_sinh_finite, Domain,
    IntegralEstimate, QuadratureSpec, Scheme,
};
pub(crate) use quad::integrate_finite_soft;
pub use sigma::sigma;
pub use zeta::{zeta, zeta_chi};

use crate::error::{Error, Result};
use num_complex::Complex64;

/// Spectral parameter of an irreducible representation: nu = i*kappa on the
/// unitary principal series, nu = k - 1/2 on the (anti)holomorphic discrete
/// series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SpectralParam {
    Principal { kappa: f64 },
    Discrete { k: i32 },
}

/// Smallest spectral parameter of a Maass cusp form on PSL(2,Z); the first
/// eigenvalue is 1/4 + kappa^2 with kappa = 9.5336..., so kappa > 3.815 holds
/// with a wide margin and is enforced on dataset ingestion.
pub const KAPPA_MIN_PSL2Z: f64 = 3.815;

impl SpectralParam {
    /// nu as a complex number.
    pub fn nu(&self) -> Complex64 {
        match *self {
            SpectralParam::Principal { kappa } => Complex64::new(0.0, kappa),
            SpectralParam::Discrete { k } => Complex64::new(k as f64 - 0.5, 0.0),
        }
    }

    /// Validated constructor for discrete series: k >= 1.
    pub fn discrete(k: i32) -> Result<Self> {
        if k < 1 {
            return Err(Error::InvalidArgument(format!(
                "discrete series index k must be >= 1, got {k}"
            )));
        }
        Ok(SpectralParam::Discrete { k })
    }

    /// Validated constructor for a PSL(2,Z) dataset entry: kappa > 3.815 for
    /// principal series, k >= 6 for discrete series (no holomorphic cusp forms
    /// of weight below 12).
    pub fn for_psl2z_dataset(self) -> Result<Self> {
        match self {
            SpectralParam::Principal { kappa } if kappa <= KAPPA_MIN_PSL2Z => {
                Err(Error::InvalidArgument(format!(
                    "principal-series kappa {kappa} violates the PSL(2,Z) bound kappa > {KAPPA_MIN_PSL2Z}"
                )))
            }
            SpectralParam::Discrete { k } if k < 6 => Err(Error::InvalidArgument(format!(
                "discrete-series k {k} below 6: no holomorphic cusp forms of weight < 12"
            ))),
            ok => Ok(ok),
        }
    }
}

/// e(x) = exp(2 pi i x), the additive character used throughout.
pub fn e_char(x: f64) -> Complex64 {
    let (s, c) = (2.0 * std::f64::consts::PI * x).sin_cos();
    Complex64::new(c, s)
}
