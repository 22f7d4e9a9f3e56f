//! The weight-`κ` matrix coefficient, Cartan coordinates and the smooth
//! truncation used for the weight-2 form.

use std::cell::Cell;
use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::testfn::{Approx, ErrorSlot};
use crate::error::{Error, Result};
use crate::numkernel::{gauss_kronrod, gauss_kronrod_breaks, integrate_plane, ComplexValue, QuadratureSpec};

/// A real `2 × 2` matrix `[[a, b], [c, d]]`.
pub type Matrix2 = [[f64; 2]; 2];

fn det(g: &Matrix2) -> f64 {
    g[0][0] * g[1][1] - g[0][1] * g[1][0]
}

/// `f∞(g) = (κ−1)/(4π) · det(g)^{κ/2} (2i)^κ / (−b + c + (a + d)i)^κ` when
/// `det g > 0`, and `0` otherwise.
pub fn matrix_coeff(g: &Matrix2, kappa: u32) -> Result<ComplexValue> {
    if kappa < 2 {
        return Err(Error::Domain(format!("weight must be at least 2, got {kappa}")));
    }
    let dt = det(g);
    if !g.iter().flatten().all(|v| v.is_finite()) {
        return Err(Error::NonFinite("matrix entries".into()));
    }
    if dt == 0.0 {
        return Err(Error::Domain("singular matrix".into()));
    }
    if dt < 0.0 {
        return ComplexValue::real(0.0);
    }
    let [[a, b], [c, d]] = *g;
    let k = kappa as i32;
    let denom = Complex64::new(c - b, a + d);
    let num = Complex64::new(0.0, 2.0).powi(k) * dt.powf(0.5 * kappa as f64);
    ComplexValue::try_from(num / denom.powi(k) * ((kappa - 1) as f64 / (4.0 * PI)))
}

/// Rotation `k_θ`.
pub fn rotation(theta: f64) -> Matrix2 {
    let (s, c) = theta.sin_cos();
    [[c, -s], [s, c]]
}

/// `a_r = diag(e^{−r/2}, e^{r/2})`.
pub fn cartan_torus(r: f64) -> Matrix2 {
    [[(-0.5 * r).exp(), 0.0], [0.0, (0.5 * r).exp()]]
}

pub fn mat_mul(x: &Matrix2, y: &Matrix2) -> Matrix2 {
    let mut out = [[0.0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = x[i][0] * y[0][j] + x[i][1] * y[1][j];
        }
    }
    out
}

/// `r ≥ 0` with `g ∈ Z K a_r K`: the singular values of `g/√det g` are `e^{±r/2}`,
/// so `‖g‖_F² / det g = 2 cosh r`.
pub fn cartan_radius(g: &Matrix2) -> Result<f64> {
    let dt = det(g);
    if !(dt > 0.0) {
        return Err(Error::Domain(format!("Cartan radius needs det > 0, got {dt}")));
    }
    let frob: f64 = g.iter().flatten().map(|v| v * v).sum();
    Ok((0.5 * frob / dt).max(1.0).acosh())
}

/// A point of the upper half-plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HyperbolicPoint {
    x: f64,
    y: f64,
}

impl HyperbolicPoint {
    pub fn new(x: f64, y: f64) -> Result<Self> {
        if !(y > 0.0) || !x.is_finite() || !y.is_finite() {
            return Err(Error::Domain(format!("({x}, {y}) is not in the upper half-plane")));
        }
        Ok(Self { x, y })
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn y(&self) -> f64 {
        self.y
    }

    /// Hyperbolic distance to `i`.
    pub fn distance_to_i(&self) -> f64 {
        distance_to_i(self.x, self.y)
    }
}

fn distance_to_i(x: f64, y: f64) -> f64 {
    2.0 * ((x * x + (y - 1.0) * (y - 1.0)).sqrt() / (2.0 * y.sqrt())).asinh()
}

fn sigma(x: f64) -> f64 {
    if x > 0.0 {
        (-1.0 / x).exp()
    } else {
        0.0
    }
}

/// Smooth cutoff: `1` on `(−∞, 0]`, `0` on `[1, ∞)`.
pub fn smoothstep(x: f64) -> f64 {
    if x <= 0.0 {
        1.0
    } else if x >= 1.0 {
        0.0
    } else {
        let (a, b) = (sigma(1.0 - x), sigma(x));
        a / (a + b)
    }
}

/// The truncation `ϱ^T(g) = ρ(r(g) − T)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TruncationProfile {
    t: f64,
}

impl TruncationProfile {
    pub fn new(t: f64) -> Result<Self> {
        if !(t >= 1.0) || !t.is_finite() {
            return Err(Error::Domain(format!("truncation radius must be at least 1, got {t}")));
        }
        Ok(Self { t })
    }

    pub fn radius(&self) -> f64 {
        self.t
    }

    pub fn weight(&self, r: f64) -> f64 {
        smoothstep(r - self.t)
    }
}

/// Largest `|Im t|` accepted by [`lambda_t_principal`].
pub const SPECTRAL_GAP: f64 = 3.0 / 16.0;

/// Half-width in `x` of the disk `r(z) ≤ R` at height `y`.
fn disk_half_width(radius: f64, y: f64) -> f64 {
    ((y - (-radius).exp()) * (radius.exp() - y)).max(0.0).sqrt()
}

/// `λ_T(t) = −(1/π) ∬ ρ(r(z) − T) (x + i(y+1))^{−2} y^{it−1/2} dx dy`.
///
/// The `x`-integral is real by symmetry and is closed-form on the disk `r ≤ T`;
/// only the collar `T ≤ r ≤ T + 1` is integrated numerically.
pub fn lambda_t_principal(t: Complex64, profile: &TruncationProfile, spec: &QuadratureSpec) -> Result<ComplexValue> {
    if !(t.re.is_finite() && t.im.is_finite()) {
        return Err(Error::NonFinite("spectral parameter".into()));
    }
    if t.im.abs() > SPECTRAL_GAP {
        return Err(Error::Domain(format!("|Im t| = {} exceeds {SPECTRAL_GAP}", t.im.abs())));
    }
    let tt = profile.radius();
    let big = tt + 1.0;
    let inner_spec = spec.with_tol(spec.abs_tol * 0.1, spec.rel_tol * 0.1);
    let inner_ok = Cell::new(true);
    let inner_err = Cell::new(0.0f64);
    let collar = |y: f64| -> f64 {
        let b = y + 1.0;
        let x_in = disk_half_width(tt, y);
        let x_out = disk_half_width(big, y);
        let core = -x_in / (x_in * x_in + b * b);
        let est = gauss_kronrod(
            |x| {
                let s = x * x + b * b;
                profile.weight(distance_to_i(x, y)) * (x * x - b * b) / (s * s)
            },
            x_in,
            x_out,
            &inner_spec,
        );
        if !est.converged {
            inner_ok.set(false);
        }
        inner_err.set(inner_err.get().max(est.error));
        2.0 * (core + est.value)
    };
    let expo = Complex64::new(0.5 - t.im, t.re);
    let outer = |l: f64| (expo * l).exp() * collar(l.exp());
    let est = gauss_kronrod_breaks(outer, -big, big, &[-tt, tt], spec);
    if !inner_ok.get() || !est.converged {
        return Err(Error::NonConvergence {
            context: format!("λ_T({t}) at T = {tt}"),
            value: est.value.norm(),
            error: est.error + inner_err.get(),
        });
    }
    ComplexValue::try_from(-est.value / PI)
}

/// Upper end of the Cartan radius for the untruncated integral; the
/// integrand decays like `e^{−r}`.
const R_INFINITY: f64 = 80.0;

/// `λ(T) = ∫ ϱ^T |f∞|² / ∫ |f∞|²` over the group in Cartan coordinates
/// `k_θ a_r`, with Haar weight `sinh r`.
pub fn lambda_t_discrete(profile: &TruncationProfile, spec: &QuadratureSpec) -> Result<Approx> {
    let tt = profile.radius();
    let slot = ErrorSlot::new();
    let density = |r: f64, theta: f64| {
        let g = mat_mul(&rotation(theta), &cartan_torus(r));
        slot.take(matrix_coeff(&g, 2).map(|v| v.norm().powi(2))) * r.sinh()
    };
    let plane = |a: f64, b: f64, weighted: bool| {
        integrate_plane(
            |r, theta| {
                let w = if weighted { profile.weight(r) } else { 1.0 };
                w * density(r, theta)
            },
            a,
            b,
            |_| 0.0,
            |_| 2.0 * PI,
            spec,
        )
    };
    let core = plane(0.0, tt, false);
    let collar = plane(tt, tt + 1.0, true);
    let tail = plane(tt, R_INFINITY.max(tt + 1.0), false);
    slot.check()?;
    let core = Approx::from_estimate(core, "λ(T) core")?;
    let collar = Approx::from_estimate(collar, "λ(T) collar")?;
    let tail = Approx::from_estimate(tail, "λ(T) tail")?;
    let num = core.value + collar.value;
    let den = core.value + tail.value;
    let value = num / den;
    let error = (core.error + collar.error) / den + value * (core.error + tail.error) / den;
    Ok(Approx { value, error })
}
