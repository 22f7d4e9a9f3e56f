//! Geometric side of the opposite-sign Kuznetsov formula and the parity bound.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::petersson::{diagonal_weight, moduli, validated_engine, GeometricSideResult, GeometricTerm};
use crate::archimedean::{f_infty_identity, h_minus_bound_constant, h_minus_transform, ArchTestFunction, HMinusRoute};
use crate::error::{Error, Result};
use crate::numkernel::{bessel_i0, QuadratureSpec};
use crate::padic::arith::gcd;
use crate::padic::{admissible_moduli, GlobalTestFunction};

/// `H∞⁻(x)` uses the `I`-series up to this argument and the `K`-form beyond.
pub const I_FORM_LIMIT: f64 = 5.0;

fn h_minus(h: &ArchTestFunction, x: f64, spec: &QuadratureSpec) -> Result<crate::archimedean::Approx> {
    let route = if x <= I_FORM_LIMIT { HMinusRoute::IForm } else { HMinusRoute::KForm };
    h_minus_transform(h, x, route, spec)
}

/// `Σ_{N | c ≤ c_max} H(m₁, m₂, c)/c · H∞⁻(4π√|m₁m₂|/c)` for `m₁m₂ < 0`.
///
/// The tail uses `|H(c)| ≤ c κ f(1)` and `|H∞⁻(x)| ≤ (x²/8) I₀(x) A_h`.
pub fn bk_opposite_geometric(
    f: &GlobalTestFunction,
    h: &ArchTestFunction,
    m1: i64,
    m2: i64,
    c_max: u64,
    spec: &QuadratureSpec,
) -> Result<GeometricSideResult> {
    if m1.checked_mul(m2).is_none_or(|p| p >= 0) {
        return Err(Error::Precondition(format!("m₁m₂ must be negative, got ({m1}, {m2})")));
    }
    let level = f.level();
    if c_max < level {
        return Err(Error::Precondition(format!("c_max = {c_max} is below the level {level}")));
    }
    let engine = validated_engine(f)?;
    let bound = h_minus_bound_constant(h, spec)?;
    let a_h = bound.value + bound.error;
    let trivial = level as f64 * f.value_at_identity();
    let root = ((m1 * m2).unsigned_abs() as f64).sqrt();
    let rows: Vec<(GeometricTerm, f64)> = moduli(level, c_max)
        .into_par_iter()
        .map(|c| {
            let hk = engine.evaluate(m1, m2, c)?.value.re();
            let x = 4.0 * PI * root / c as f64;
            let kernel = h_minus(h, x, spec)?;
            let term = GeometricTerm {
                c,
                kloosterman: hk,
                kernel: kernel.value,
                term: hk / c as f64 * kernel.value,
                majorant: trivial * x * x / 8.0 * bessel_i0(x) * a_h,
            };
            Ok((term, hk.abs() / c as f64 * kernel.error))
        })
        .collect::<Result<_>>()?;
    let quadrature_error: f64 = rows.iter().map(|r| r.1).sum();
    let terms = rows.into_iter().map(|r| r.0).collect();
    let j = (c_max / level) as f64;
    let x_max = 4.0 * PI * root / c_max as f64;
    let tail = trivial * a_h * bessel_i0(x_max) * 2.0 * PI * PI * root * root / (level as f64 * level as f64 * j);
    Ok(GeometricSideResult::assemble(0.0, terms, tail, c_max, quadrature_error))
}

/// Largest constant accepted by the parity demonstration.
pub const PARITY_CONSTANT_LIMIT: f64 = 1e3;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParityReport {
    pub level: u64,
    pub m: u64,
    pub c_max: u64,
    pub spectral_scale: f64,
    pub geometric_side: f64,
    pub tail_majorant: f64,
    pub quadrature_error: f64,
    pub f_infty_one: f64,
    /// `f_𝔸(1) = f∞(1) f(1)`.
    pub f_adelic_one: f64,
    pub conductor: u64,
    /// `f_𝔸(1) m²/(T² κ²) e^{16π²m/κ}`.
    pub majorant_shape: f64,
    /// `(|side| + tail)/shape`.
    pub measured_constant: f64,
    pub constant_limit: f64,
    pub delta: f64,
    /// `(1/2) f∞(1) δ`.
    pub main_term: f64,
    pub pass: bool,
}

/// Opposite-sign side at `(−m, m)` against the majorant shape of the parity bound.
pub fn parity_bound_demo(
    f: &GlobalTestFunction,
    h: &ArchTestFunction,
    m: u64,
    c_max: u64,
    spec: &QuadratureSpec,
) -> Result<ParityReport> {
    let level = f.level();
    if m == 0 || gcd(m as i64, level as i64) != 1 {
        return Err(Error::Precondition(format!("m = {m} must be positive and prime to {level}")));
    }
    let side = bk_opposite_geometric(f, h, -(m as i64), m as i64, c_max, spec)?;
    let f_inf = f_infty_identity(h, spec)?.value;
    let f_adelic = f_inf * f.value_at_identity();
    let scan = admissible_moduli(f, 10 * level, &[(-(m as i64), m as i64), (1, 1)])?;
    let conductor = scan.conductor_estimate.unwrap_or(level);
    let kappa = conductor as f64;
    let t = h.scale();
    let mf = m as f64;
    let shape = f_adelic * mf * mf / (t * t * kappa * kappa) * (16.0 * PI * PI * mf / kappa).exp();
    let measured = (side.value.abs() + side.tail_majorant + side.quadrature_error) / shape;
    let delta = diagonal_weight(f)?;
    Ok(ParityReport {
        level,
        m,
        c_max,
        spectral_scale: t,
        geometric_side: side.value,
        tail_majorant: side.tail_majorant,
        quadrature_error: side.quadrature_error,
        f_infty_one: f_inf,
        f_adelic_one: f_adelic,
        conductor,
        majorant_shape: shape,
        measured_constant: measured,
        constant_limit: PARITY_CONSTANT_LIMIT,
        delta,
        main_term: 0.5 * f_inf * delta,
        pass: measured.is_finite() && measured <= PARITY_CONSTANT_LIMIT,
    })
}
