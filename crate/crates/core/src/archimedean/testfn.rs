//! The archimedean test functions `h(t)` and the Plancherel value `f∞(1)`.

use std::cell::RefCell;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numkernel::{gauss_kronrod_breaks, Estimate, QuadValue, QuadratureSpec};

/// A quadrature value with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Approx {
    pub value: f64,
    pub error: f64,
}

impl Approx {
    pub fn exact(value: f64) -> Self {
        Self { value, error: 0.0 }
    }

    pub(crate) fn from_estimate(est: Estimate<f64>, context: &str) -> Result<Self> {
        let est = est.into_result(context)?;
        Ok(Self {
            value: est.value,
            error: est.error,
        })
    }
}

/// Captures the first error raised inside a quadrature closure, which must
/// itself return a plain value.
pub(crate) struct ErrorSlot(RefCell<Option<Error>>);

impl ErrorSlot {
    pub(crate) fn new() -> Self {
        Self(RefCell::new(None))
    }

    pub(crate) fn take<V: QuadValue>(&self, r: Result<V>) -> V {
        match r {
            Ok(v) => v,
            Err(e) => {
                self.0.borrow_mut().get_or_insert(e);
                V::zero()
            }
        }
    }

    pub(crate) fn check(self) -> Result<()> {
        match self.0.into_inner() {
            Some(e) => Err(e),
            None => Ok(()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case", deny_unknown_fields)]
enum RawArch {
    Family1 {
        #[serde(rename = "T")]
        t: f64,
        delta: f64,
    },
    Family2 {
        #[serde(rename = "T")]
        t: f64,
    },
    Zero,
}

/// `h∞` for one of the two families, or the degenerate `h ≡ 0`.
///
/// * `Family1`: `(t² + 1/4)/T² · [sech((t − T)/Δ) + sech((t + T)/Δ)]`, `1 <= Δ < T/100`.
/// * `Family2`: `(t² + 1/4)/T² · exp(−(t/T)²)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawArch", into = "RawArch")]
pub enum ArchTestFunction {
    Family1 { t: f64, delta: f64 },
    Family2 { t: f64 },
    Zero,
}

impl TryFrom<RawArch> for ArchTestFunction {
    type Error = Error;
    fn try_from(raw: RawArch) -> Result<Self> {
        match raw {
            RawArch::Family1 { t, delta } => Self::family1(t, delta),
            RawArch::Family2 { t } => Self::family2(t),
            RawArch::Zero => Ok(Self::Zero),
        }
    }
}

impl From<ArchTestFunction> for RawArch {
    fn from(h: ArchTestFunction) -> Self {
        match h {
            ArchTestFunction::Family1 { t, delta } => RawArch::Family1 { t, delta },
            ArchTestFunction::Family2 { t } => RawArch::Family2 { t },
            ArchTestFunction::Zero => RawArch::Zero,
        }
    }
}


/// A point of the spectral parameter: real, or purely imaginary `iτ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpectralPoint {
    Real(f64),
    Imaginary(f64),
}

fn sech_complex(z: Complex64) -> Complex64 {
    let w = if z.re >= 0.0 { z } else { -z };
    let e = (-w).exp();
    2.0 * e / (1.0 + e * e)
}

fn sech(x: f64) -> f64 {
    let e = (-x.abs()).exp();
    2.0 * e / (1.0 + e * e)
}

impl ArchTestFunction {
    pub fn family1(t: f64, delta: f64) -> Result<Self> {
        if !(t.is_finite() && delta.is_finite()) || !(1.0 <= delta && delta < t / 100.0) {
            return Err(Error::Domain(format!(
                "Family1 requires 1 <= Δ < T/100, got T = {t}, Δ = {delta}"
            )));
        }
        Ok(Self::Family1 { t, delta })
    }

    pub fn family2(t: f64) -> Result<Self> {
        if !(t.is_finite() && t > 0.0) {
            return Err(Error::Domain(format!("Family2 requires T > 0, got {t}")));
        }
        Ok(Self::Family2 { t })
    }

    /// The scale `T` (1 for the zero function).
    pub fn scale(&self) -> f64 {
        match *self {
            Self::Family1 { t, .. } | Self::Family2 { t } => t,
            Self::Zero => 1.0,
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Self::Zero)
    }

    pub fn eval(&self, t: f64) -> f64 {
        match *self {
            Self::Family1 { t: big, delta } => {
                (t * t + 0.25) / (big * big) * (sech((t - big) / delta) + sech((t + big) / delta))
            }
            Self::Family2 { t: big } => (t * t + 0.25) / (big * big) * (-(t / big) * (t / big)).exp(),
            Self::Zero => 0.0,
        }
    }

    /// Analytic continuation, used on shifted contours.
    pub fn eval_complex(&self, t: Complex64) -> Complex64 {
        match *self {
            Self::Family1 { t: big, delta } => {
                (t * t + 0.25) / (big * big) * (sech_complex((t - big) / delta) + sech_complex((t + big) / delta))
            }
            Self::Family2 { t: big } => {
                let s = t / big;
                (t * t + 0.25) / (big * big) * (-(s * s)).exp()
            }
            Self::Zero => Complex64::new(0.0, 0.0),
        }
    }

    /// Cut-off beyond which `|h|` is below `1e-19` of its size near the peak,
    /// together with breakpoints on `[0, cut]` for quadrature.
    pub fn breakpoints(&self) -> Vec<f64> {
        match *self {
            Self::Family1 { t, delta } => {
                vec![0.0, (t - 45.0 * delta).max(0.0), t, t + 45.0 * delta]
            }
            Self::Family2 { t } => vec![0.0, t, 2.5 * t, 7.5 * t],
            Self::Zero => vec![0.0, 1.0],
        }
    }

    pub fn cut(&self) -> f64 {
        *self.breakpoints().last().expect("nonempty")
    }

    /// `∫_0^cut g(t) dt` on this function's breakpoints.
    pub(crate) fn integrate_support<F: Fn(f64) -> f64>(&self, g: F, spec: &QuadratureSpec) -> Estimate<f64> {
        let b = self.breakpoints();
        gauss_kronrod_breaks(g, b[0], b[b.len() - 1], &b[1..b.len() - 1], spec)
    }
}

/// `h(t)` at a real or imaginary point with `|Im t| < 1/2`.
pub fn h_eval(h: &ArchTestFunction, t: SpectralPoint) -> Result<f64> {
    match t {
        SpectralPoint::Real(x) => Ok(h.eval(x)),
        SpectralPoint::Imaginary(tau) => {
            if tau.abs() >= 0.5 {
                return Err(Error::Domain(format!("|Im t| = {} must be < 1/2", tau.abs())));
            }
            Ok(h.eval_complex(Complex64::new(0.0, tau)).re)
        }
    }
}

/// `f∞(1) = (1/4π) ∫ h(t) t tanh(πt) dt`.
pub fn f_infty_identity(h: &ArchTestFunction, spec: &QuadratureSpec) -> Result<Approx> {
    if h.is_zero() {
        return Ok(Approx::exact(0.0));
    }
    let g = |t: f64| h.eval(t) * t * (std::f64::consts::PI * t).tanh();
    let est = h.integrate_support(g, spec);
    let a = Approx::from_estimate(est, "f∞(1)")?;
    Ok(Approx {
        value: a.value / (2.0 * std::f64::consts::PI),
        error: a.error / (2.0 * std::f64::consts::PI),
    })
}
