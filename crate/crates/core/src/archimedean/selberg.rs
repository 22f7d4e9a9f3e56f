//! The point-pair kernel `k(u)` attached to `h` by Selberg inversion.
//!
//! With `g(ξ) = (1/2π) ∫ h(r) e^{−irξ} dr`, `Q(v) = g(ξ)/2` at
//! `v = sinh²(ξ/2)`, the kernel is `k(u) = −(1/π) ∫_u^∞ Q'(v) (v − u)^{−1/2} dv`.
//! Writing `q(ξ) = g'(ξ)/sinh ξ = Q'(v)` and `v = u + s²` gives
//! `k(u) = −(2/π) ∫_0^∞ q(ξ(u + s²)) ds`, `ξ(v) = 2 asinh √v`.

use std::f64::consts::PI;

use serde::Serialize;

use super::testfn::{Approx, ArchTestFunction, ErrorSlot};
use crate::error::{Error, Result};
use crate::numkernel::{gauss_kronrod, Chebyshev, QuadratureSpec};

const XI_STEP: f64 = 0.125;
const XI_LIMIT: f64 = 60.0;
const CHEB_MAX_NODES: usize = 4096;

fn xi_of(v: f64) -> f64 {
    2.0 * v.max(0.0).sqrt().asinh()
}

fn v_of(xi: f64) -> f64 {
    let s = (0.5 * xi).sinh();
    s * s
}

/// `q(ξ) = g'(ξ)/sinh ξ` by direct quadrature over `h`.
fn q_direct(h: &ArchTestFunction, xi: f64, spec: &QuadratureSpec) -> Result<f64> {
    if xi == 0.0 {
        let g2 = h.integrate_support(|r| r * r * h.eval(r), spec);
        return Ok(-Approx::from_estimate(g2, "g''(0)")?.value / PI);
    }
    let est = h.integrate_support(|r| r * h.eval(r) * (r * xi).sin(), spec);
    let g1 = -Approx::from_estimate(est, "g'(ξ)")?.value / PI;
    Ok(g1 / xi.sinh())
}

/// Scan `ξ = j/8` until three consecutive `|q|` fall below `threshold`.
fn scan_xi_max(h: &ArchTestFunction, spec: &QuadratureSpec) -> Result<f64> {
    let scale = q_direct(h, 0.0, spec)?.abs().max(f64::MIN_POSITIVE);
    let threshold = (spec.abs_tol / 100.0).max(1e-13 * scale);
    let mut quiet = 0;
    let mut xi = 0.0;
    while xi < XI_LIMIT {
        xi += XI_STEP;
        if q_direct(h, xi, spec)?.abs() < threshold {
            quiet += 1;
            if quiet == 3 {
                return Ok(xi);
            }
        } else {
            quiet = 0;
        }
    }
    Err(Error::NonConvergence {
        context: "Selberg kernel support scan".into(),
        value: xi,
        error: threshold,
    })
}

/// Tabulated kernel: `q` as a Chebyshev series in `ξ²` and `k` as one in `u`,
/// both on the support found by scanning.
#[derive(Debug, Clone)]
pub struct SelbergKernel {
    h: ArchTestFunction,
    xi_max: f64,
    u_max: f64,
    q: Option<Chebyshev>,
    k: Option<Chebyshev>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KernelSummary {
    pub xi_max: f64,
    pub u_max: f64,
    pub q_nodes: usize,
    pub k_nodes: usize,
    pub k_at_zero: f64,
}

impl SelbergKernel {
    pub fn new(h: &ArchTestFunction, spec: &QuadratureSpec) -> Result<Self> {
        if h.is_zero() {
            return Ok(Self {
                h: *h,
                xi_max: 0.0,
                u_max: 0.0,
                q: None,
                k: None,
            });
        }
        let xi_max = scan_xi_max(h, spec)?;
        let w_max = xi_max * xi_max;
        let slot = ErrorSlot::new();
        let q_scale = q_direct(h, 0.0, spec)?.abs();
        let q = Chebyshev::fit_adaptive(|w| slot.take(q_direct(h, w.max(0.0).sqrt(), spec)), 0.0, w_max, 32, CHEB_MAX_NODES, 1e-14 * q_scale)?;
        slot.check()?;
        let u_max = v_of(xi_max);
        let mut kernel = Self {
            h: *h,
            xi_max,
            u_max,
            q: Some(q),
            k: None,
        };
        let inner = spec.with_tol(1e-15 * q_scale, 1e-13);
        let k0 = kernel.k_abel(0.0, &inner)?.abs();
        let slot = ErrorSlot::new();
        let k = Chebyshev::fit_adaptive(|u| slot.take(kernel.k_abel(u, &inner)), 0.0, u_max, 32, CHEB_MAX_NODES, 1e-14 * k0)?;
        slot.check()?;
        kernel.k = Some(k);
        Ok(kernel)
    }

    pub fn test_function(&self) -> &ArchTestFunction {
        &self.h
    }

    /// `k(u) = 0` for `u >= u_max` up to the scan threshold.
    pub fn support(&self) -> f64 {
        self.u_max
    }

    pub fn xi_max(&self) -> f64 {
        self.xi_max
    }

    pub fn summary(&self) -> KernelSummary {
        KernelSummary {
            xi_max: self.xi_max,
            u_max: self.u_max,
            q_nodes: self.q.as_ref().map_or(0, Chebyshev::len),
            k_nodes: self.k.as_ref().map_or(0, Chebyshev::len),
            k_at_zero: self.eval(0.0),
        }
    }

    fn q(&self, xi: f64) -> f64 {
        match &self.q {
            Some(c) if xi < self.xi_max => c.eval(xi * xi),
            _ => 0.0,
        }
    }

    fn k_abel(&self, u: f64, spec: &QuadratureSpec) -> Result<f64> {
        if u >= self.u_max {
            return Ok(0.0);
        }
        let s_max = (self.u_max - u).sqrt();
        let est = gauss_kronrod(|s| self.q(xi_of(u + s * s)), 0.0, s_max, spec);
        Ok(-2.0 / PI * Approx::from_estimate(est, "Abel inversion")?.value)
    }

    /// `k(u)` from the table.
    pub fn eval(&self, u: f64) -> f64 {
        match &self.k {
            Some(c) if (0.0..self.u_max).contains(&u) => c.eval(u),
            Some(c) if u < 0.0 => c.eval(0.0),
            _ => 0.0,
        }
    }

    /// Forward Selberg transform of the tabulated kernel:
    /// `Q(v) = ∫_v^∞ k(u)(u − v)^{−1/2} du`, `g(ξ) = 2Q(sinh²(ξ/2))`,
    /// `h(t) = ∫ g(ξ) e^{iξt} dξ`.
    pub fn forward(&self, t: f64, spec: &QuadratureSpec) -> Result<Approx> {
        if self.k.is_none() {
            return Ok(Approx::exact(0.0));
        }
        let inner = spec.with_tol(spec.abs_tol * 0.01, spec.rel_tol * 0.01);
        let slot = ErrorSlot::new();
        let big_q = |v: f64| -> Result<f64> {
            if v >= self.u_max {
                return Ok(0.0);
            }
            let est = gauss_kronrod(|s| self.eval(v + s * s), 0.0, (self.u_max - v).sqrt(), &inner);
            Ok(2.0 * Approx::from_estimate(est, "forward Abel transform")?.value)
        };
        let est = gauss_kronrod(|xi| 2.0 * slot.take(big_q(v_of(xi))) * (xi * t).cos(), 0.0, self.xi_max, spec);
        slot.check()?;
        let a = Approx::from_estimate(est, "forward Selberg transform")?;
        Ok(Approx {
            value: 2.0 * a.value,
            error: 2.0 * a.error,
        })
    }
}

/// `k(u)` by nested quadrature, with `q` evaluated directly from `h` rather
/// than from a table.
pub fn selberg_kernel(h: &ArchTestFunction, u: f64, spec: &QuadratureSpec) -> Result<Approx> {
    if !(u >= 0.0) {
        return Err(Error::Domain(format!("u must be >= 0, got {u}")));
    }
    if h.is_zero() {
        return Ok(Approx::exact(0.0));
    }
    let xi_max = scan_xi_max(h, spec)?;
    let u_max = v_of(xi_max);
    if u >= u_max {
        return Ok(Approx::exact(0.0));
    }
    let slot = ErrorSlot::new();
    let g = |s: f64| {
        let xi = xi_of(u + s * s);
        if xi >= xi_max {
            0.0
        } else {
            slot.take(q_direct(h, xi, spec))
        }
    };
    let est = gauss_kronrod(g, 0.0, (u_max - u).sqrt(), spec);
    slot.check()?;
    let a = Approx::from_estimate(est, "Selberg kernel")?;
    Ok(Approx {
        value: -2.0 / PI * a.value,
        error: 2.0 / PI * a.error,
    })
}
