//! The transform `H∞⁻`, the Fourier transform of the modified Zagier
//! transform, and the Fourier route to `𝓜`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::testfn::{Approx, ArchTestFunction, ErrorSlot};
use crate::error::{Error, Result};
use crate::numkernel::{
    bessel_i0, bessel_i_imag_scaled, bessel_k_imag_scaled, ln_gamma_complex, QuadratureSpec,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum HMinusRoute {
    /// `(1/π) ∫ K_{2it}(x) sinh(πt) t h(t) dt`.
    KForm,
    /// `(i/2) ∫ I_{2it}(x) t h(t) / cosh(πt) dt`.
    IForm,
}

/// `sinh(π|t|) K_{2it}(x)`, assembled from the scaled `e^{π|t|} K_{2it}(x)`.
fn sinh_k(t: f64, x: f64) -> Result<f64> {
    let a = t.abs();
    Ok(0.5 * (-(-2.0 * PI * a).exp_m1()) * bessel_k_imag_scaled(a, x)?)
}

/// `H∞⁻(x)` by the chosen route.
pub fn h_minus_transform(h: &ArchTestFunction, x: f64, route: HMinusRoute, spec: &QuadratureSpec) -> Result<Approx> {
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::Domain(format!("H⁻ needs x > 0, got {x}")));
    }
    if h.is_zero() {
        return Ok(Approx::exact(0.0));
    }
    let slot = ErrorSlot::new();
    let (est, factor, context) = match route {
        HMinusRoute::KForm => {
            let g = |t: f64| slot.take(sinh_k(t, x)) * t * h.eval(t);
            (h.integrate_support(g, spec), 2.0 / PI, "H⁻ (K-form)")
        }
        HMinusRoute::IForm => {
            // integrand F(-t) = -conj F(t), so (i/2)∫F = -∫_0^∞ Im F
            let g = |t: f64| slot.take(bessel_i_imag_scaled(t, x)).im * t * h.eval(t);
            (h.integrate_support(g, spec), -1.0, "H⁻ (I-form)")
        }
    };
    slot.check()?;
    let a = Approx::from_estimate(est, context)?;
    Ok(Approx {
        value: factor * a.value,
        error: factor.abs() * a.error,
    })
}

/// `A_h = ∫ |s − i| |h(s − i)| / (cosh(πs) |Γ(3 + 2is)|) ds`.
///
/// Shifting the `I`-form to `Im t = −1` (the pole of `1/cosh(πt)` at `−i/2` is
/// cancelled by the zero of `h`) and bounding `|I_{2+2is}(x)|` by
/// `(x/2)² I_0(x) / |Γ(3 + 2is)|` gives `|H∞⁻(x)| <= (x²/8) I_0(x) A_h`.
pub fn h_minus_bound_constant(h: &ArchTestFunction, spec: &QuadratureSpec) -> Result<Approx> {
    if h.is_zero() {
        return Ok(Approx::exact(0.0));
    }
    let g = |s: f64| {
        let z = Complex64::new(s, -1.0);
        let lg = ln_gamma_complex(Complex64::new(3.0, 2.0 * s)).re;
        let ln_cosh = PI * s.abs() + (0.5 * (1.0 + (-2.0 * PI * s.abs()).exp())).ln();
        z.norm() * h.eval_complex(z).norm() * (-lg - ln_cosh).exp()
    };
    let a = Approx::from_estimate(h.integrate_support(g, spec), "H⁻ bound constant")?;
    Ok(Approx {
        value: 2.0 * a.value,
        error: 2.0 * a.error,
    })
}

/// `(x²/8) I_0(x) A_h`, a rigorous majorant for `|H∞⁻(x)|`.
pub fn h_minus_majorant(x: f64, bound_constant: f64) -> f64 {
    x * x / 8.0 * bessel_i0(x) * bound_constant
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HMinusBoundRow {
    pub x: f64,
    pub value: f64,
    /// `|H⁻(x)| / (f∞(1) (x/T)² e^{4πx})`.
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HMinusBoundCheck {
    pub f_infty_one: f64,
    pub rows: Vec<HMinusBoundRow>,
    /// Largest ratio on the grid: the measured constant `C`.
    pub measured_constant: f64,
    /// `T² A_h / (8 f∞(1))`, which dominates the ratio at every `x > 0`
    /// because `I_0(x) <= e^{4πx}`.
    pub analytic_constant: f64,
    pub pass: bool,
}

/// Measure `C` in `|H∞⁻(x)| <= C f∞(1) (x/T)² e^{4πx}` on `xs`.
pub fn h_minus_bound_check(h: &ArchTestFunction, xs: &[f64], spec: &QuadratureSpec) -> Result<HMinusBoundCheck> {
    let f1 = super::testfn::f_infty_identity(h, spec)?.value;
    if f1 == 0.0 {
        return Err(Error::Precondition("f∞(1) = 0".into()));
    }
    let big = h.scale();
    let mut rows = Vec::with_capacity(xs.len());
    for &x in xs {
        let v = h_minus_transform(h, x, HMinusRoute::IForm, spec)?.value;
        let shape = f1 * (x / big).powi(2) * (4.0 * PI * x).exp();
        rows.push(HMinusBoundRow {
            x,
            value: v,
            ratio: v.abs() / shape,
        });
    }
    let measured = rows.iter().map(|r| r.ratio).fold(0.0, f64::max);
    let a_h = h_minus_bound_constant(h, spec)?.value;
    let analytic = big * big * a_h / (8.0 * f1);
    Ok(HMinusBoundCheck {
        f_infty_one: f1,
        rows,
        measured_constant: measured,
        analytic_constant: analytic,
        pass: measured.is_finite() && measured <= analytic * (1.0 + 1e-9),
    })
}

/// `𝓜̂(a) = (1/2πa) ∫ K_{2it}(4πa) sinh(πt) t h(t) dt`, integrated over the
/// whole line.
pub fn modified_zagier_hat(h: &ArchTestFunction, a: f64, spec: &QuadratureSpec) -> Result<Approx> {
    if !(a > 0.0 && a.is_finite()) {
        return Err(Error::Domain(format!("𝓜̂ needs a > 0, got {a}")));
    }
    if h.is_zero() {
        return Ok(Approx::exact(0.0));
    }
    let x = 4.0 * PI * a;
    let slot = ErrorSlot::new();
    let g = |t: f64| t.signum() * slot.take(sinh_k(t, x)) * t * h.eval(t);
    let mut b: Vec<f64> = h.breakpoints().iter().rev().map(|v| -v).collect();
    b.extend(h.breakpoints().into_iter().skip(1));
    let est = crate::numkernel::gauss_kronrod_breaks(g, b[0], b[b.len() - 1], &b[1..b.len() - 1], spec);
    slot.check()?;
    let r = Approx::from_estimate(est, "𝓜̂")?;
    let f = 1.0 / (2.0 * PI * a);
    Ok(Approx {
        value: f * r.value,
        error: f * r.error,
    })
}

/// `𝓜(t) = (1/4) ∫ h(r) e^{iαr} dr` with `t = 2 sinh(α/2)`.
pub fn modified_zagier_fourier(h: &ArchTestFunction, t: f64, spec: &QuadratureSpec) -> Result<Approx> {
    if h.is_zero() {
        return Ok(Approx::exact(0.0));
    }
    let alpha = 2.0 * (t / 2.0).asinh();
    let g = |r: f64| h.eval(r) * (alpha * r).cos();
    let a = Approx::from_estimate(h.integrate_support(g, spec), "𝓜 (Fourier route)")?;
    Ok(Approx {
        value: 0.5 * a.value,
        error: 0.5 * a.error,
    })
}
