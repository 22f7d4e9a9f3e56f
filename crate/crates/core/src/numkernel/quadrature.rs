use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum QuadratureMethod {
    AdaptiveGauss,
    TanhSinh,
    TruncatedInfinite,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub method: QuadratureMethod,
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_nodes: usize,
    pub max_depth: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            method: QuadratureMethod::AdaptiveGauss,
            abs_tol: 1e-12,
            rel_tol: 1e-10,
            max_nodes: 400_000,
            max_depth: 40,
        }
    }
}

impl QuadratureSpec {
    pub fn new(
        method: QuadratureMethod,
        abs_tol: f64,
        rel_tol: f64,
        max_nodes: usize,
        max_depth: usize,
    ) -> Result<Self> {
        let spec = Self {
            method,
            abs_tol,
            rel_tol,
            max_nodes,
            max_depth,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0) || !(self.rel_tol > 0.0) {
            return Err(Error::Config("quadrature tolerances must be positive".into()));
        }
        if self.max_nodes < 16 {
            return Err(Error::Config("max_nodes must be at least 16".into()));
        }
        Ok(())
    }

    pub fn with_method(mut self, method: QuadratureMethod) -> Self {
        self.method = method;
        self
    }

    pub fn with_tol(mut self, abs_tol: f64, rel_tol: f64) -> Self {
        self.abs_tol = abs_tol;
        self.rel_tol = rel_tol;
        self
    }

    pub fn with_max_nodes(mut self, max_nodes: usize) -> Self {
        self.max_nodes = max_nodes;
        self
    }

    fn target(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.abs())
    }
}

/// Values that can be integrated: `f64` and `Complex64`.
pub trait QuadValue:
    Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> + Send + Sync
{
    fn zero() -> Self;
    fn magnitude(self) -> f64;
    fn is_finite_value(self) -> bool;
}

impl QuadValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn magnitude(self) -> f64 {
        self.abs()
    }
    fn is_finite_value(self) -> bool {
        self.is_finite()
    }
}

impl QuadValue for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn magnitude(self) -> f64 {
        self.norm()
    }
    fn is_finite_value(self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}

/// Quadrature result. `converged` is false when the budget ran out before the
/// requested tolerance was met; `error` is always populated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate<V = f64> {
    pub value: V,
    pub error: f64,
    pub evaluations: usize,
    pub converged: bool,
}

impl<V: QuadValue> Estimate<V> {
    pub fn into_result(self, context: &str) -> Result<Self> {
        if !self.value.is_finite_value() || !self.error.is_finite() {
            return Err(Error::NonFinite(context.to_string()));
        }
        if self.converged {
            Ok(self)
        } else {
            Err(Error::NonConvergence {
                context: context.to_string(),
                value: self.value.magnitude(),
                error: self.error,
            })
        }
    }

    pub fn combine(self, other: Self) -> Self {
        Self {
            value: self.value + other.value,
            error: self.error + other.error,
            evaluations: self.evaluations + other.evaluations,
            converged: self.converged && other.converged,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Domain {
    Interval(f64, f64),
    /// `[start, ∞)`; `scale` is the length over which the integrand decays appreciably.
    HalfLine { start: f64, scale: f64 },
    /// `(-∞, ∞)` split at `center`.
    RealLine { center: f64, scale: f64 },
}

const XGK: [f64; 11] = [
    0.995657163025808080735527280689003,
    0.973906528517171720077964012084452,
    0.930157491355708226001207180059508,
    0.865063366688984510732096688423493,
    0.780817726586416897063717578345042,
    0.679409568299024406234327365114874,
    0.562757134668604683339000099272694,
    0.433395394129247190799265943165784,
    0.294392862701460198131126603103866,
    0.148874338981631210884826001129720,
    0.0,
];

const WGK: [f64; 11] = [
    0.011694638867371874278064396062192,
    0.032558162307964727478818972459390,
    0.054755896574351996031381300244580,
    0.075039674810919952767043140916190,
    0.093125454583697605535065465083366,
    0.109387158802297641899210590325805,
    0.123491976262065851077208932372358,
    0.134709217311473325928054001771707,
    0.142775938577060080797094273138717,
    0.147739104901338491374841515972068,
    0.149445554002916905664936468389821,
];

const WG: [f64; 5] = [
    0.066671344308688137593568809893332,
    0.149451349150580593145776339657697,
    0.219086362515982043995534934228163,
    0.269266719309996355091226921569469,
    0.295524224714752870173892994651338,
];

/// One 21-point Gauss-Kronrod panel with the QUADPACK error heuristic.
fn qk21<V: QuadValue, F: Fn(f64) -> V>(f: &F, a: f64, b: f64) -> (V, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut resk = fc * WGK[10];
    let mut resg = V::zero();
    let mut resabs = fc.magnitude() * WGK[10];
    let mut fv1 = [V::zero(); 10];
    let mut fv2 = [V::zero(); 10];
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        resk = resk + (f1 + f2) * WGK[j];
        resabs += WGK[j] * (f1.magnitude() + f2.magnitude());
        if j % 2 == 1 {
            resg = resg + (f1 + f2) * WG[j / 2];
        }
    }
    let reskh = resk * 0.5;
    let mut resasc = WGK[10] * (fc - reskh).magnitude();
    for j in 0..10 {
        resasc += WGK[j] * ((fv1[j] - reskh).magnitude() + (fv2[j] - reskh).magnitude());
    }
    let result = resk * half;
    let resabs = resabs * half.abs();
    let resasc = resasc * half.abs();
    let mut err = ((resk - resg) * half).magnitude();
    if resasc != 0.0 && err != 0.0 {
        err = resasc * (200.0 * err / resasc).powf(1.5).min(1.0);
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * resabs);
    }
    (result, err)
}

#[derive(Clone, Copy)]
struct Segment<V> {
    a: f64,
    b: f64,
    value: V,
    error: f64,
    depth: usize,
}

/// Globally adaptive 21-point Gauss-Kronrod on `[a, b]`, optionally seeded with
/// interior breakpoints.
pub fn gauss_kronrod<V: QuadValue, F: Fn(f64) -> V>(
    f: F,
    a: f64,
    b: f64,
    spec: &QuadratureSpec,
) -> Estimate<V> {
    gauss_kronrod_breaks(f, a, b, &[], spec)
}

pub fn gauss_kronrod_breaks<V: QuadValue, F: Fn(f64) -> V>(
    f: F,
    a: f64,
    b: f64,
    breaks: &[f64],
    spec: &QuadratureSpec,
) -> Estimate<V> {
    if a == b {
        return Estimate {
            value: V::zero(),
            error: 0.0,
            evaluations: 0,
            converged: true,
        };
    }
    let mut pts = vec![a];
    for &p in breaks {
        if (p - a) * (b - p) > 0.0 {
            pts.push(p);
        }
    }
    pts.push(b);
    if a < b {
        pts.sort_by(|x, y| x.partial_cmp(y).unwrap());
    } else {
        pts.sort_by(|x, y| y.partial_cmp(x).unwrap());
    }
    let mut segs: Vec<Segment<V>> = Vec::new();
    let mut evals = 0usize;
    for w in pts.windows(2) {
        let (v, e) = qk21(&f, w[0], w[1]);
        evals += 21;
        segs.push(Segment {
            a: w[0],
            b: w[1],
            value: v,
            error: e,
            depth: 0,
        });
    }
    loop {
        let mut total = V::zero();
        let mut total_err = 0.0;
        for s in &segs {
            total = total + s.value;
            total_err += s.error;
        }
        if !total.is_finite_value() {
            return Estimate {
                value: total,
                error: f64::INFINITY,
                evaluations: evals,
                converged: false,
            };
        }
        if total_err <= spec.target(total.magnitude()) {
            return Estimate {
                value: total,
                error: total_err,
                evaluations: evals,
                converged: true,
            };
        }
        let mut worst = None;
        let mut worst_err = -1.0;
        for (i, s) in segs.iter().enumerate() {
            if s.depth < spec.max_depth && s.error > worst_err {
                worst_err = s.error;
                worst = Some(i);
            }
        }
        let Some(i) = worst else {
            return Estimate {
                value: total,
                error: total_err,
                evaluations: evals,
                converged: false,
            };
        };
        if evals + 42 > spec.max_nodes {
            return Estimate {
                value: total,
                error: total_err,
                evaluations: evals,
                converged: false,
            };
        }
        let s = segs[i];
        let mid = 0.5 * (s.a + s.b);
        let (v1, e1) = qk21(&f, s.a, mid);
        let (v2, e2) = qk21(&f, mid, s.b);
        evals += 42;
        segs[i] = Segment {
            a: s.a,
            b: mid,
            value: v1,
            error: e1,
            depth: s.depth + 1,
        };
        segs.insert(
            i + 1,
            Segment {
                a: mid,
                b: s.b,
                value: v2,
                error: e2,
                depth: s.depth + 1,
            },
        );
    }
}

/// Double-exponential (tanh-sinh) quadrature on `[a, b]` with level doubling.
/// Tolerates integrable endpoint singularities; the integrand is never
/// evaluated at the endpoints themselves.
pub fn tanh_sinh<V: QuadValue, F: Fn(f64) -> V>(
    f: F,
    a: f64,
    b: f64,
    spec: &QuadratureSpec,
) -> Estimate<V> {
    let c = 0.5 * (a + b);
    let hw = 0.5 * (b - a);
    const T_MAX: f64 = 6.5;
    let half_pi = std::f64::consts::FRAC_PI_2;
    // Nodes closer to an endpoint than its ulp are dropped on that side only.
    let contrib = |t: f64| -> Option<(V, usize)> {
        let s = half_pi * t.sinh();
        let cs = s.cosh();
        let u = (-s).exp() / cs; // 1 - tanh(s)
        let w = half_pi * t.cosh() / (cs * cs);
        let d = hw * u;
        if d.abs() <= f64::MIN_POSITIVE || w == 0.0 || !w.is_finite() {
            return None;
        }
        let xr = b - d;
        let xl = a + d;
        let mut acc = V::zero();
        let mut n = 0;
        if xr != b {
            acc = acc + f(xr);
            n += 1;
        }
        if xl != a {
            acc = acc + f(xl);
            n += 1;
        }
        if n == 0 {
            return None;
        }
        Some((acc * w, n))
    };
    let mut evals = 1usize;
    let mut sum = f(c) * half_pi;
    let mut h = 1.0;
    let mut k = 1usize;
    loop {
        let t = k as f64 * h;
        if t > T_MAX {
            break;
        }
        match contrib(t) {
            Some((v, n)) => {
                sum = sum + v;
                evals += n;
            }
            None => break,
        }
        k += 1;
    }
    let mut estimate = sum * (h * hw);
    let mut error = f64::INFINITY;
    let max_level = spec.max_depth.clamp(3, 14);
    for level in 1..=max_level {
        h *= 0.5;
        let mut k = 1usize;
        loop {
            let t = k as f64 * h;
            if t > T_MAX {
                break;
            }
            match contrib(t) {
                Some((v, n)) => {
                    sum = sum + v;
                    evals += n;
                }
                None => break,
            }
            k += 2;
        }
        let next = sum * (h * hw);
        error = (next - estimate).magnitude();
        estimate = next;
        if !estimate.is_finite_value() {
            break;
        }
        if level >= 3 && error <= spec.target(estimate.magnitude()) {
            return Estimate {
                value: estimate,
                error,
                evaluations: evals,
                converged: true,
            };
        }
        if evals > spec.max_nodes {
            break;
        }
    }
    Estimate {
        value: estimate,
        error,
        evaluations: evals,
        converged: false,
    }
}

fn finite_interval<V: QuadValue, F: Fn(f64) -> V>(
    f: &F,
    a: f64,
    b: f64,
    spec: &QuadratureSpec,
) -> Estimate<V> {
    match spec.method {
        QuadratureMethod::TanhSinh => tanh_sinh(f, a, b, spec),
        _ => gauss_kronrod(f, a, b, spec),
    }
}

fn half_line<V: QuadValue, F: Fn(f64) -> V>(
    f: &F,
    start: f64,
    scale: f64,
    spec: &QuadratureSpec,
) -> Estimate<V> {
    match spec.method {
        QuadratureMethod::TruncatedInfinite => {
            // Panels of width `scale` until three consecutive panels are negligible.
            let mut total = Estimate {
                value: V::zero(),
                error: 0.0,
                evaluations: 0,
                converged: true,
            };
            let mut quiet = 0;
            let mut j = 0usize;
            loop {
                let a = start + j as f64 * scale;
                let panel = gauss_kronrod(f, a, a + scale, spec);
                total = total.combine(panel);
                let size = panel.value.magnitude() + panel.error;
                let floor = 0.01 * spec.target(total.value.magnitude());
                if size <= floor {
                    quiet += 1;
                } else {
                    quiet = 0;
                }
                if quiet >= 3 {
                    break;
                }
                j += 1;
                if total.evaluations > spec.max_nodes {
                    total.converged = false;
                    break;
                }
            }
            total
        }
        _ => {
            let g = |u: f64| {
                let v = 1.0 - u;
                let x = start + scale * u / v;
                let jac = scale / (v * v);
                let y = f(x);
                if jac.is_finite() && y.magnitude() != 0.0 {
                    y * jac
                } else {
                    V::zero()
                }
            };
            finite_interval(&g, 0.0, 1.0, spec)
        }
    }
}

/// Integrate `f` over `domain`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, domain: Domain, spec: &QuadratureSpec) -> Estimate<f64> {
    integrate_generic(f, domain, spec)
}

pub fn integrate_complex<F: Fn(f64) -> Complex64>(
    f: F,
    domain: Domain,
    spec: &QuadratureSpec,
) -> Estimate<Complex64> {
    integrate_generic(f, domain, spec)
}

pub fn integrate_generic<V: QuadValue, F: Fn(f64) -> V>(
    f: F,
    domain: Domain,
    spec: &QuadratureSpec,
) -> Estimate<V> {
    match domain {
        Domain::Interval(a, b) => finite_interval(&f, a, b, spec),
        Domain::HalfLine { start, scale } => half_line(&f, start, scale, spec),
        Domain::RealLine { center, scale } => {
            let right = half_line(&f, center, scale, spec);
            let g = |x: f64| f(2.0 * center - x);
            let left = half_line(&g, center, scale, spec);
            right.combine(left)
        }
    }
}

/// Nested integral over `{(x, y): x0 <= x <= x1, lo(x) <= y <= hi(x)}`.
pub fn integrate_plane<F, L, H>(
    f: F,
    x0: f64,
    x1: f64,
    lo: L,
    hi: H,
    spec: &QuadratureSpec,
) -> Estimate<f64>
where
    F: Fn(f64, f64) -> f64,
    L: Fn(f64) -> f64,
    H: Fn(f64) -> f64,
{
    let inner_spec = spec.with_tol(spec.abs_tol * 0.1, spec.rel_tol * 0.1);
    let flag = std::cell::Cell::new(true);
    let inner_err = std::cell::Cell::new(0.0f64);
    let evals = std::cell::Cell::new(0usize);
    let outer = |x: f64| {
        let est = finite_interval(&|y| f(x, y), lo(x), hi(x), &inner_spec);
        if !est.converged {
            flag.set(false);
        }
        inner_err.set(inner_err.get().max(est.error));
        evals.set(evals.get() + est.evaluations);
        est.value
    };
    let mut est = finite_interval(&outer, x0, x1, spec);
    est.error += inner_err.get() * (x1 - x0).abs();
    est.evaluations += evals.get();
    est.converged &= flag.get();
    est
}

/// Wynn epsilon extrapolation of a sequence of partial sums. Returns the
/// extrapolated limit and a crude error estimate.
pub fn wynn_epsilon(seq: &[Complex64]) -> (Complex64, f64) {
    let n = seq.len();
    if n < 3 {
        let last = *seq.last().unwrap_or(&Complex64::new(0.0, 0.0));
        let err = if n == 2 { (seq[1] - seq[0]).norm() } else { f64::INFINITY };
        return (last, err);
    }
    let mut prev: Vec<Complex64> = vec![Complex64::new(0.0, 0.0); n + 1];
    let mut cur: Vec<Complex64> = seq.to_vec();
    let mut best = seq[n - 1];
    let mut best_err = (seq[n - 1] - seq[n - 2]).norm();
    let mut k = 0;
    while cur.len() >= 2 {
        let mut next = Vec::with_capacity(cur.len() - 1);
        for i in 0..cur.len() - 1 {
            let d = cur[i + 1] - cur[i];
            if d.norm() == 0.0 {
                return (cur[i + 1], 0.0);
            }
            next.push(prev[i + 1] + d.inv());
        }
        k += 1;
        if k % 2 == 0 && next.len() >= 2 {
            let m = next.len();
            let err = (next[m - 1] - next[m - 2]).norm();
            if err < best_err {
                best_err = err;
                best = next[m - 1];
            }
        }
        prev = cur;
        cur = next;
    }
    (best, best_err)
}

/// `∫_a^∞ g(τ) e^{iωτ} dτ` for slowly decaying `g`, by half-period panels and
/// epsilon extrapolation of the partial sums.
pub fn integrate_fourier<F: Fn(f64) -> Complex64>(
    g: F,
    a: f64,
    omega: f64,
    spec: &QuadratureSpec,
) -> Estimate<Complex64> {
    let period = std::f64::consts::PI / omega.abs();
    let integrand = |t: f64| g(t) * Complex64::from_polar(1.0, omega * t);
    let panel_spec = spec.with_tol(spec.abs_tol * 0.01, spec.rel_tol * 0.01);
    let mut partial = Vec::new();
    let mut acc = Complex64::new(0.0, 0.0);
    let mut evals = 0;
    let mut panel_err = 0.0;
    let mut converged_panels = true;
    let mut last_est: Option<Complex64> = None;
    let max_panels = 400;
    for j in 0..max_panels {
        let x0 = a + j as f64 * period;
        let est = gauss_kronrod(integrand, x0, x0 + period, &panel_spec);
        evals += est.evaluations;
        panel_err += est.error;
        converged_panels &= est.converged;
        acc += est.value;
        partial.push(acc);
        if partial.len() >= 8 {
            let start = partial.len().saturating_sub(40);
            let (lim, err) = wynn_epsilon(&partial[start..]);
            if let Some(prev) = last_est {
                let diff = (lim - prev).norm();
                let total_err = diff.max(err) + panel_err;
                if diff.max(err) <= 0.1 * spec.target(lim.norm()) {
                    return Estimate {
                        value: lim,
                        error: total_err,
                        evaluations: evals,
                        converged: converged_panels,
                    };
                }
            }
            last_est = Some(lim);
        }
        if evals > spec.max_nodes {
            break;
        }
    }
    let (lim, err) = wynn_epsilon(&partial[partial.len().saturating_sub(40)..]);
    Estimate {
        value: lim,
        error: err + panel_err,
        evaluations: evals,
        converged: false,
    }
}

/// `∫_{-∞}^{∞} g(τ) e^{iωτ} dτ`, split at `center`.
pub fn integrate_fourier_line<F: Fn(f64) -> Complex64>(
    g: F,
    center: f64,
    omega: f64,
    spec: &QuadratureSpec,
) -> Estimate<Complex64> {
    let right = integrate_fourier(&g, center, omega, spec);
    // τ = 2c - s maps (-∞, c] to [c, ∞); e^{iωτ} = e^{2iωc} e^{-iωs}
    let phase = Complex64::from_polar(1.0, 2.0 * omega * center);
    let left = integrate_fourier(|s| g(2.0 * center - s) * phase, center, -omega, spec);
    right.combine(left)
}
