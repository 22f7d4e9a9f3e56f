//! The Zagier transform `𝓩` and the modified Zagier transform `𝓜` by plane
//! quadrature against the Selberg kernel.
//!
//! Both integrands are `k(u(γz, z)) dx dy / y` for an isometry `γ`. In polar
//! coordinates `z = −t/2 + R e^{iφ}` each ray meets the sublevel set
//! `{u <= u_max}` in a single interval of `log R` (the sets are Euclidean
//! disks or regions bounded by equidistant arcs through the axis endpoints),
//! found by golden-section search and bisection.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::selberg::SelbergKernel;
use super::testfn::{Approx, ArchTestFunction};
use super::transforms::modified_zagier_fourier;
use crate::error::{Error, Result};
use crate::numkernel::{gauss_kronrod, QuadratureSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ZagierRoute {
    /// `∬ k(z + t, 1/z̄) y dz` over the upper half-plane.
    Plane2d,
    /// `C √(t² + 4) ∫ k((t²/4 + 1)x² + t²/4) dx` with `C` fitted against the plane route.
    Kernel1d,
    /// `(1/4) ∫ h(r) e^{iαr} dr`, `t = 2 sinh(α/2)`.
    Fourier1d,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Isometry {
    /// `z ↦ 1/z̄ − t` composed so that `u(z + t, 1/z̄)` is the displacement.
    Modified,
    /// `u(z + t, −1/z)`.
    Classical,
}

fn pair_u(z1: Complex64, z2: Complex64) -> f64 {
    (z1 - z2).norm_sqr() / (4.0 * z1.im * z2.im)
}

fn displacement(kind: Isometry, t: f64, z: Complex64) -> f64 {
    let z1 = z + t;
    let z2 = match kind {
        Isometry::Modified => z / z.norm_sqr(),
        Isometry::Classical => -1.0 / z,
    };
    pair_u(z1, z2)
}

const GOLDEN_ITERS: usize = 120;
const BISECT_ITERS: usize = 80;
const L_SPAN: f64 = 30.0;

fn golden_min<F: Fn(f64) -> f64>(f: &F, mut a: f64, mut b: f64) -> f64 {
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..GOLDEN_ITERS {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}

/// Crossing of the level `level` by a monotone `f` between `inside` (below) and `outside`.
fn bisect<F: Fn(f64) -> f64>(f: &F, mut inside: f64, mut outside: f64, level: f64) -> f64 {
    for _ in 0..BISECT_ITERS {
        let mid = 0.5 * (inside + outside);
        if f(mid) < level {
            inside = mid;
        } else {
            outside = mid;
        }
    }
    0.5 * (inside + outside)
}

fn plane_transform(kernel: &SelbergKernel, kind: Isometry, t: f64, spec: &QuadratureSpec) -> Result<Approx> {
    let u_max = kernel.support();
    if u_max == 0.0 {
        return Ok(Approx::exact(0.0));
    }
    let c0 = -0.5 * t;
    let r_ref = match kind {
        Isometry::Modified => (0.25 * t * t + 1.0).sqrt(),
        Isometry::Classical => (0.25 * t * t - 1.0).abs().sqrt().max(1e-3),
    };
    let l_ref = r_ref.ln();
    let inner_spec = spec.with_tol(spec.abs_tol * 0.1, spec.rel_tol * 0.1);
    let inner_ok = std::cell::Cell::new(true);
    let ray = |phi: f64| -> f64 {
        let dir = Complex64::from_polar(1.0, phi);
        let point = |l: f64| Complex64::new(c0, 0.0) + dir * l.exp();
        let u_at = |l: f64| displacement(kind, t, point(l));
        let (lo_end, hi_end) = (l_ref - L_SPAN, l_ref + L_SPAN);
        let l_star = golden_min(&u_at, lo_end, hi_end);
        if u_at(l_star) >= u_max {
            return 0.0;
        }
        let l_lo = if u_at(lo_end) < u_max { lo_end } else { bisect(&u_at, l_star, lo_end, u_max) };
        let l_hi = if u_at(hi_end) < u_max { hi_end } else { bisect(&u_at, l_star, hi_end, u_max) };
        let sin_phi = phi.sin();
        let est = gauss_kronrod(|l| kernel.eval(u_at(l)) * l.exp() / sin_phi, l_lo, l_hi, &inner_spec);
        if !est.converged {
            inner_ok.set(false);
        }
        est.value
    };
    let est = gauss_kronrod(ray, 0.0, PI, spec);
    if !inner_ok.get() {
        return Err(Error::NonConvergence {
            context: "plane transform (ray integral)".into(),
            value: est.value,
            error: est.error,
        });
    }
    Approx::from_estimate(est, "plane transform")
}

/// `√(t² + 4) ∫_{−∞}^{∞} k((t²/4 + 1)x² + t²/4) dx` and the same integral with
/// the prefactor `√(1 + t²)`.
fn kernel_line_integral(kernel: &SelbergKernel, t: f64, spec: &QuadratureSpec) -> Result<f64> {
    let u_max = kernel.support();
    let a = 0.25 * t * t + 1.0;
    let b = 0.25 * t * t;
    if b >= u_max {
        return Ok(0.0);
    }
    let x_max = ((u_max - b) / a).sqrt();
    let est = gauss_kronrod(|x| kernel.eval(a * x * x + b), 0.0, x_max, spec);
    Ok(2.0 * Approx::from_estimate(est, "kernel line integral")?.value)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PrefactorFit {
    pub ts: Vec<f64>,
    pub plane: Vec<f64>,
    /// Least-squares `C` in `𝓜(t) ≈ C √(t² + 4) ∫ k dx`.
    pub constant: f64,
    pub residual: f64,
    /// Least-squares `C` in `𝓜(t) ≈ C √(1 + t²) ∫ k dx`.
    pub alternative_constant: f64,
    pub alternative_residual: f64,
}

fn least_squares(raw: &[f64], target: &[f64]) -> (f64, f64) {
    let num: f64 = raw.iter().zip(target).map(|(r, p)| r * p).sum();
    let den: f64 = raw.iter().map(|r| r * r).sum();
    let c = if den > 0.0 { num / den } else { 0.0 };
    let res2: f64 = raw.iter().zip(target).map(|(r, p)| (c * r - p).powi(2)).sum();
    let norm2: f64 = target.iter().map(|p| p * p).sum();
    (c, if norm2 > 0.0 { (res2 / norm2).sqrt() } else { 0.0 })
}

/// Transforms of one `h` sharing a tabulated kernel.
#[derive(Debug, Clone)]
pub struct ZagierEngine {
    kernel: SelbergKernel,
    spec: QuadratureSpec,
    fit: std::sync::OnceLock<PrefactorFit>,
}

pub const DEFAULT_FIT_POINTS: [f64; 6] = [0.0, 0.4, 0.8, 1.2, 1.6, 2.0];

impl ZagierEngine {
    pub fn new(h: &ArchTestFunction, spec: &QuadratureSpec) -> Result<Self> {
        Ok(Self::from_kernel(SelbergKernel::new(h, spec)?, spec))
    }

    pub fn from_kernel(kernel: SelbergKernel, spec: &QuadratureSpec) -> Self {
        Self {
            kernel,
            spec: *spec,
            fit: std::sync::OnceLock::new(),
        }
    }

    pub fn kernel(&self) -> &SelbergKernel {
        &self.kernel
    }

    /// `|t|` beyond which `𝓩(t)` vanishes: the minimal displacement
    /// `t²/4 − 1` exceeds the kernel support.
    pub fn zagier_support(&self) -> f64 {
        2.0 * (1.0 + self.kernel.support()).sqrt()
    }

    /// `|t|` beyond which `𝓜(t)` vanishes (minimal displacement `t²/4`).
    pub fn modified_zagier_support(&self) -> f64 {
        2.0 * self.kernel.support().sqrt()
    }

    pub fn zagier(&self, t: f64) -> Result<Approx> {
        if t.abs() >= self.zagier_support() {
            return Ok(Approx::exact(0.0));
        }
        plane_transform(&self.kernel, Isometry::Classical, t, &self.spec)
    }

    pub fn prefactor_fit(&self) -> Result<&PrefactorFit> {
        if let Some(f) = self.fit.get() {
            return Ok(f);
        }
        let ts = DEFAULT_FIT_POINTS.to_vec();
        let mut plane = Vec::with_capacity(ts.len());
        let mut raw = Vec::with_capacity(ts.len());
        let mut alt = Vec::with_capacity(ts.len());
        for &t in &ts {
            plane.push(plane_transform(&self.kernel, Isometry::Modified, t, &self.spec)?.value);
            let line = kernel_line_integral(&self.kernel, t, &self.spec)?;
            raw.push((t * t + 4.0).sqrt() * line);
            alt.push((1.0 + t * t).sqrt() * line);
        }
        let (constant, residual) = least_squares(&raw, &plane);
        let (alternative_constant, alternative_residual) = least_squares(&alt, &plane);
        let _ = self.fit.set(PrefactorFit {
            ts,
            plane,
            constant,
            residual,
            alternative_constant,
            alternative_residual,
        });
        Ok(self.fit.get().expect("just set"))
    }

    pub fn modified_zagier(&self, t: f64, route: ZagierRoute) -> Result<Approx> {
        match route {
            ZagierRoute::Plane2d => {
                if t.abs() >= self.modified_zagier_support() {
                    return Ok(Approx::exact(0.0));
                }
                plane_transform(&self.kernel, Isometry::Modified, t, &self.spec)
            }
            ZagierRoute::Kernel1d => {
                let c = self.prefactor_fit()?.constant;
                let line = kernel_line_integral(&self.kernel, t, &self.spec)?;
                Ok(Approx {
                    value: c * (t * t + 4.0).sqrt() * line,
                    error: 0.0,
                })
            }
            ZagierRoute::Fourier1d => modified_zagier_fourier(self.kernel.test_function(), t, &self.spec),
        }
    }

    /// `∫ 𝓜(t) e(−at) dt` from plane-route values of `𝓜` over its support.
    pub fn modified_zagier_fourier_transform(&self, a: f64) -> Result<Approx> {
        let support = self.modified_zagier_support();
        if support == 0.0 {
            return Ok(Approx::exact(0.0));
        }
        let slot = super::testfn::ErrorSlot::new();
        let outer = self.spec.with_tol(self.spec.abs_tol * 10.0, self.spec.rel_tol * 10.0);
        let est = gauss_kronrod(
            |t| slot.take(self.modified_zagier(t, ZagierRoute::Plane2d).map(|v| v.value)) * (2.0 * PI * a * t).cos(),
            0.0,
            support,
            &outer,
        );
        slot.check()?;
        let r = Approx::from_estimate(est, "Fourier transform of 𝓜")?;
        Ok(Approx {
            value: 2.0 * r.value,
            error: 2.0 * r.error,
        })
    }
}

/// `𝓜(t)` by the chosen route, building the kernel for this call.
pub fn modified_zagier(h: &ArchTestFunction, t: f64, route: ZagierRoute, spec: &QuadratureSpec) -> Result<Approx> {
    if route == ZagierRoute::Fourier1d {
        return modified_zagier_fourier(h, t, spec);
    }
    ZagierEngine::new(h, spec)?.modified_zagier(t, route)
}

/// `𝓩(t) = ∬ k(z + t, −1/z) y dz`.
pub fn zagier_transform(h: &ArchTestFunction, t: f64, spec: &QuadratureSpec) -> Result<Approx> {
    ZagierEngine::new(h, spec)?.zagier(t)
}
