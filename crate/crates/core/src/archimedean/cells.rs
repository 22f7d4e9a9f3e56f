//! Archimedean factors of the first two Bruhat cells for the weight-2 form.

use std::cell::Cell;
use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::testfn::Approx;
use crate::error::{Error, Result};
use crate::numkernel::{bessel_j1, integrate, integrate_fourier_line, Domain, QuadratureSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CellRoute {
    ClosedForm,
    Quadrature,
}

/// Imaginary shift of the second-cell contours; poles sit beyond `|Im| = 1`.
const SECOND_CELL_SHIFT: f64 = 0.7;

fn require_positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("{name} must be positive, got {v}")))
    }
}

/// `4π m₁m₂ e^{−2π(m₁+m₂)}`.
pub fn first_cell_arch(m1: f64, m2: f64) -> Result<f64> {
    require_positive("m1", m1)?;
    require_positive("m2", m2)?;
    Ok(4.0 * PI * m1 * m2 * (-2.0 * PI * (m1 + m2)).exp())
}

/// `∫ f∞(diag(m₁, m₂) n(t)) e(t) dt` on the line `Im t = (m₁ + m₂)/2`.
pub fn first_cell_arch_quadrature(m1: f64, m2: f64, spec: &QuadratureSpec) -> Result<Approx> {
    require_positive("m1", m1)?;
    require_positive("m2", m2)?;
    let s = m1 + m2;
    let g = |tau: f64| {
        let d = Complex64::new(-tau, 0.5 * s);
        Complex64::new(-m1 * m2 / PI, 0.0) / (d * d)
    };
    let est = integrate_fourier_line(g, 0.0, 2.0 * PI, spec).into_result("first cell")?;
    let scale = (-PI * s).exp();
    Ok(Approx {
        value: scale * est.value.re,
        error: scale * est.error,
    })
}

/// Second-cell factor
/// `∬ f∞([[−t₁, −μ − t₁t₂], [1, t₂]]) e(−m₁t₁ + m₂t₂) dt₁ dt₂`.
pub fn second_cell_arch(mu: f64, m1: f64, m2: f64, route: CellRoute, spec: &QuadratureSpec) -> Result<Approx> {
    require_positive("mu", mu)?;
    require_positive("m1", m1)?;
    require_positive("m2", m2)?;
    match route {
        CellRoute::ClosedForm => {
            let root = (mu * m1 * m2).sqrt();
            Ok(Approx::exact(
                -8.0 * PI * PI * root * (-2.0 * PI * (m1 + m2)).exp() * bessel_j1(4.0 * PI * root),
            ))
        }
        CellRoute::Quadrature => second_cell_quadrature(mu, m1, m2, spec),
    }
}

/// Both contours moved off the real axis, `t₁ = τ₁ − is`, `t₂ = τ₂ + is`;
/// the phase then contributes the factor `e^{−2πs(m₁+m₂)}`.
fn second_cell_quadrature(mu: f64, m1: f64, m2: f64, spec: &QuadratureSpec) -> Result<Approx> {
    let s = SECOND_CELL_SHIFT;
    let inner_spec = spec.with_tol(spec.abs_tol * 0.1, spec.rel_tol * 0.1);
    let inner_ok = Cell::new(true);
    let inner_err = Cell::new(0.0f64);
    let inner = |tau1: f64| {
        let a = Complex64::new(tau1, 1.0 - s);
        let g = |tau2: f64| {
            let d = a * Complex64::new(tau2, s - 1.0) + mu;
            Complex64::new(-mu / PI, 0.0) / (d * d)
        };
        let est = integrate_fourier_line(g, 0.0, 2.0 * PI * m2, &inner_spec);
        if !est.converged {
            inner_ok.set(false);
        }
        inner_err.set(inner_err.get().max(est.error));
        est.value
    };
    let est = integrate_fourier_line(inner, 0.0, -2.0 * PI * m1, spec);
    if !inner_ok.get() || !est.converged {
        return Err(Error::NonConvergence {
            context: "second cell".into(),
            value: est.value.norm(),
            error: est.error + inner_err.get(),
        });
    }
    let scale = (-2.0 * PI * s * (m1 + m2)).exp();
    Ok(Approx {
        value: scale * est.value.re,
        error: scale * (est.error + est.value.im.abs()),
    })
}

/// `∬ |f∞| dt₁ dt₂` for the second cell.
///
/// The shift `t₂ → t₂ − μt₁/(t₁² + 1)` turns the inner integral into a
/// Lorentzian of width `1 + μ/(t₁² + 1)`.
pub fn second_cell_abs_integral(mu: f64, spec: &QuadratureSpec) -> Result<Approx> {
    require_positive("mu", mu)?;
    let inner_spec = spec.with_tol(spec.abs_tol * 0.1, spec.rel_tol * 0.1);
    let inner_ok = Cell::new(true);
    let inner = |t1: f64| {
        let q = t1 * t1 + 1.0;
        let b = 1.0 + mu / q;
        let est = integrate(|t2| 1.0 / (t2 * t2 + b * b), Domain::RealLine { center: 0.0, scale: b }, &inner_spec);
        if !est.converged {
            inner_ok.set(false);
        }
        est.value / q
    };
    let est = integrate(inner, Domain::RealLine { center: 0.0, scale: 1.0 }, spec);
    if !inner_ok.get() {
        return Err(Error::NonConvergence {
            context: "second cell absolute integral".into(),
            value: est.value,
            error: est.error,
        });
    }
    let a = Approx::from_estimate(est, "second cell absolute integral")?;
    Ok(Approx {
        value: mu / PI * a.value,
        error: mu / PI * a.error,
    })
}

/// Closed form `μπ/√(1 + μ)` of [`second_cell_abs_integral`].
pub fn second_cell_abs_closed_form(mu: f64) -> f64 {
    mu * PI / (1.0 + mu).sqrt()
}
