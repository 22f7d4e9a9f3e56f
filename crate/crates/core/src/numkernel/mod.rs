//! Special functions and quadrature engines.

mod bessel;
mod chebyshev;
mod gamma;
mod quadrature;
mod summation;

pub use chebyshev::Chebyshev;
pub use bessel::{
    bessel_i0, bessel_i_complex_order, bessel_i_imag, bessel_i_imag_scaled, bessel_j1,
    bessel_k_imag, bessel_k_imag_contour, bessel_k_imag_scaled, k_contour_angle,
};
pub use gamma::{gamma_complex, ln_gamma, ln_gamma_complex};
pub use quadrature::{
    gauss_kronrod, gauss_kronrod_breaks, integrate, integrate_complex, integrate_fourier,
    integrate_fourier_line, integrate_generic, integrate_plane, tanh_sinh, wynn_epsilon, Domain,
    Estimate, QuadValue, QuadratureMethod, QuadratureSpec,
};
pub use summation::{compensated_sum, CompensatedComplex, CompensatedSum};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A complex number whose parts are both finite.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexValue {
    re: f64,
    im: f64,
}

impl ComplexValue {
    pub fn new(re: f64, im: f64) -> Result<Self> {
        if re.is_finite() && im.is_finite() {
            Ok(Self { re, im })
        } else {
            Err(Error::NonFinite(format!("complex value ({re}, {im})")))
        }
    }

    pub fn real(re: f64) -> Result<Self> {
        Self::new(re, 0.0)
    }

    pub fn re(&self) -> f64 {
        self.re
    }

    pub fn im(&self) -> f64 {
        self.im
    }

    pub fn norm(&self) -> f64 {
        self.re.hypot(self.im)
    }

    pub fn to_complex(self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }
}

impl TryFrom<Complex64> for ComplexValue {
    type Error = Error;
    fn try_from(z: Complex64) -> Result<Self> {
        Self::new(z.re, z.im)
    }
}

impl From<ComplexValue> for Complex64 {
    fn from(v: ComplexValue) -> Self {
        v.to_complex()
    }
}
