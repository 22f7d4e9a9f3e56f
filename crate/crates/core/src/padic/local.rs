//! Local test functions, p-adic matrices and local orbital integrals.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use num_rational::Ratio;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::arith::{is_prime, mod_inv, nu, pow, valuation};
use crate::error::{Error, Result};
use crate::numkernel::{CompensatedComplex, ComplexValue};

/// Exact rationals used for p-adic matrix entries.
pub type Rational = Ratio<i128>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LocalKind {
    /// `ν(p^r)` times the indicator of `Z(Q_p) K_0(p^r)`.
    Congruence,
    /// Newform projector. Representable, but has no pointwise formula and is
    /// rejected by every numerical routine.
    NewformProjector,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalTestFunction {
    p: u64,
    r: u32,
    kind: LocalKind,
}

impl LocalTestFunction {
    pub fn new(p: u64, r: u32) -> Result<Self> {
        Self::with_kind(p, r, LocalKind::Congruence)
    }

    pub fn newform_projector(p: u64, r: u32) -> Result<Self> {
        Self::with_kind(p, r, LocalKind::NewformProjector)
    }

    fn with_kind(p: u64, r: u32, kind: LocalKind) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::Domain(format!("{p} is not prime")));
        }
        Ok(Self { p, r, kind })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn kind(&self) -> LocalKind {
        self.kind
    }

    /// `ν(p^r)`.
    pub fn scale(&self) -> f64 {
        nu(pow(self.p, self.r)) as f64
    }

    pub(crate) fn require_congruence(&self) -> Result<()> {
        match self.kind {
            LocalKind::Congruence => Ok(()),
            LocalKind::NewformProjector => Err(Error::UnsupportedVariant(format!(
                "newform projector at p = {} has no pointwise formula",
                self.p
            ))),
        }
    }
}

/// `f = ⊗ f_p`, with `f_p` the congruence indicator of exponent `r_p`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "BTreeMap<u64, u32>", into = "BTreeMap<u64, u32>")]
pub struct GlobalTestFunction {
    locals: BTreeMap<u64, u32>,
}

impl TryFrom<BTreeMap<u64, u32>> for GlobalTestFunction {
    type Error = Error;
    fn try_from(map: BTreeMap<u64, u32>) -> Result<Self> {
        Self::new(map)
    }
}

impl From<GlobalTestFunction> for BTreeMap<u64, u32> {
    fn from(f: GlobalTestFunction) -> Self {
        f.locals
    }
}

impl GlobalTestFunction {
    pub fn new(locals: BTreeMap<u64, u32>) -> Result<Self> {
        for &p in locals.keys() {
            if !is_prime(p) {
                return Err(Error::Domain(format!("level map key {p} is not prime")));
            }
        }
        let locals: BTreeMap<u64, u32> = locals.into_iter().filter(|&(_, r)| r > 0).collect();
        let f = Self { locals };
        f.level_checked()?;
        Ok(f)
    }

    /// Level one: `f_p` is the unit indicator everywhere.
    pub fn trivial() -> Self {
        Self {
            locals: BTreeMap::new(),
        }
    }

    /// The congruence family of level `n`.
    pub fn of_level(n: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain("level must be positive".into()));
        }
        Self::new(super::arith::factorize(n).into_iter().collect())
    }

    fn level_checked(&self) -> Result<u64> {
        self.locals.iter().try_fold(1u64, |acc, (&p, &r)| {
            p.checked_pow(r)
                .and_then(|q| acc.checked_mul(q))
                .ok_or_else(|| Error::Domain("level overflows u64".into()))
        })
    }

    /// `N = ∏ p^{r_p}`.
    pub fn level(&self) -> u64 {
        self.level_checked().expect("validated at construction")
    }

    /// `f(1) = ν(N)`.
    pub fn value_at_identity(&self) -> f64 {
        nu(self.level()) as f64
    }

    pub fn local(&self, p: u64) -> LocalTestFunction {
        LocalTestFunction {
            p,
            r: self.locals.get(&p).copied().unwrap_or(0),
            kind: LocalKind::Congruence,
        }
    }

    pub fn ramified_primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.locals.keys().copied()
    }

    pub fn locals(&self) -> &BTreeMap<u64, u32> {
        &self.locals
    }
}

/// 2×2 matrix over `Q`, viewed in `GL_2(Q_p)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PAdicMatrix {
    entries: [Rational; 4],
    p: u64,
}

impl PAdicMatrix {
    pub fn new(a: Rational, b: Rational, c: Rational, d: Rational, p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::Domain(format!("{p} is not prime")));
        }
        let m = Self {
            entries: [a, b, c, d],
            p,
        };
        if m.det().is_zero() {
            return Err(Error::Domain("singular p-adic matrix".into()));
        }
        Ok(m)
    }

    pub fn from_integers(a: i128, b: i128, c: i128, d: i128, p: u64) -> Result<Self> {
        Self::new(
            Rational::from_integer(a),
            Rational::from_integer(b),
            Rational::from_integer(c),
            Rational::from_integer(d),
            p,
        )
    }

    pub fn det(&self) -> Rational {
        let [a, b, c, d] = &self.entries;
        a * d - b * c
    }

    pub fn entries(&self) -> &[Rational; 4] {
        &self.entries
    }

    pub fn p(&self) -> u64 {
        self.p
    }
}

/// `v_p(x)`, `None` for zero.
pub fn rational_valuation(x: &Rational, p: u64) -> Option<i64> {
    if x.is_zero() {
        return None;
    }
    Some(valuation(*x.numer(), p) as i64 - valuation(*x.denom(), p) as i64)
}

/// Whether `g ∈ Z(Q_p) K_0(p^r)`: rescale by `p^{-min valuation}`, then require a
/// unit determinant and lower-left valuation at least `r`.
pub fn in_z_k0(g: &PAdicMatrix, r: u32) -> bool {
    let p = g.p;
    let vals: Vec<Option<i64>> = g.entries.iter().map(|e| rational_valuation(e, p)).collect();
    let vmin = vals.iter().flatten().copied().min().expect("nonzero matrix");
    let vdet = rational_valuation(&g.det(), p).expect("nonsingular");
    if vdet - 2 * vmin != 0 {
        return false;
    }
    match vals[2] {
        None => true,
        Some(vc) => vc - vmin >= r as i64,
    }
}

/// `r_p(x)` as `(a, e)` meaning `a / p^e` with `0 <= a < p^e`.
pub fn principal_part(x: &Rational, p: u64) -> (i128, u32) {
    if x.is_zero() {
        return (0, 0);
    }
    let e = valuation(*x.denom(), p);
    if e == 0 {
        return (0, 0);
    }
    let q = (p as i128).pow(e);
    let rest = *x.denom() / q;
    let inv = mod_inv_i128(rest.rem_euclid(q), q);
    let a = (x.numer().rem_euclid(q) * inv).rem_euclid(q);
    (a, e)
}

fn mod_inv_i128(a: i128, m: i128) -> i128 {
    let (mut old_r, mut r) = (a, m);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    debug_assert_eq!(old_r.abs(), 1);
    (old_s * old_r.signum()).rem_euclid(m)
}

/// `θ_p(x) = e(r_p(x))`.
pub fn theta_p(x: &Rational, p: u64) -> Complex64 {
    let (a, e) = principal_part(x, p);
    if e == 0 {
        return Complex64::new(1.0, 0.0);
    }
    let q = (p as i128).pow(e);
    unit_root(a, q)
}

/// `e(a / q)` with the numerator reduced first.
#[inline]
pub fn unit_root(a: i128, q: i128) -> Complex64 {
    let a = a.rem_euclid(q);
    if a == 0 {
        return Complex64::new(1.0, 0.0);
    }
    let ang = 2.0 * PI * (a as f64 / q as f64);
    let (s, c) = ang.sin_cos();
    Complex64::new(c, s)
}

/// Cap on the number of cosets a single enumeration may visit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumerationBudget {
    pub max_cells: u64,
}

impl Default for EnumerationBudget {
    fn default() -> Self {
        Self {
            max_cells: 5_000_000,
        }
    }
}

/// Result of an enumeration, with the depths used and whether the
/// depth-stability guard ran and passed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LocalIntegral {
    pub value: ComplexValue,
    pub support_depth: u32,
    pub constancy_depth: u32,
    pub cells: u64,
    /// `Some(true)` when raising either depth by one left the value unchanged,
    /// `None` when the guard would have exceeded the budget.
    pub depth_certified: Option<bool>,
}

const STABILITY_TOL: f64 = 1e-12;

fn cells_2d(p: u64, a: u32, d: u32) -> Option<u64> {
    p.checked_pow(2 * (a + d))
}

fn enumerate_orbital(
    fp: &LocalTestFunction,
    m: i64,
    n: i64,
    mu: &Rational,
    a_depth: u32,
    d_depth: u32,
) -> Result<Complex64> {
    let p = fp.p;
    let reps = (p as i128).pow(a_depth + d_depth);
    let den = Rational::from_integer((p as i128).pow(a_depth));
    let measure = (p as f64).powi(-2 * d_depth as i32);
    let one = Rational::one();
    let mut acc = CompensatedComplex::new();
    for a1 in 0..reps {
        let t1 = Rational::from_integer(a1) / den;
        for a2 in 0..reps {
            let t2 = Rational::from_integer(a2) / den;
            let g = PAdicMatrix {
                entries: [-t1, -mu - t1 * t2, one, t2],
                p,
            };
            if in_z_k0(&g, fp.r) {
                let arg = t1 * Rational::from_integer(m as i128) - t2 * Rational::from_integer(n as i128);
                acc.add(theta_p(&arg, p));
            }
        }
    }
    Ok(acc.value() * (fp.scale() * measure))
}

fn certify<F>(base: Complex64, run: F, p: u64, a: u32, d: u32, budget: &EnumerationBudget) -> Result<Option<bool>>
where
    F: Fn(u32, u32) -> Result<Complex64>,
{
    match cells_2d(p, a, d + 1) {
        Some(c) if c <= budget.max_cells => {}
        _ => return Ok(None),
    }
    for (aa, dd) in [(a, d + 1), (a + 1, d)] {
        let v = run(aa, dd)?;
        let diff = (v - base).norm();
        if diff > STABILITY_TOL * (1.0 + base.norm()) {
            return Err(Error::DepthInstability {
                depth: aa.max(dd),
                difference: diff,
            });
        }
    }
    Ok(Some(true))
}

/// Support depth for the orbital integral: `t_1, t_2` range over `p^{-A} Z_p`
/// with `A = max(r, k)`, where `p^{-2k}` is the `p`-part of `μ`.
fn orbital_support_depth(fp: &LocalTestFunction, mu: &Rational) -> u32 {
    let v = rational_valuation(mu, fp.p).expect("mu nonzero");
    let k = if v < 0 { ((-v + 1) / 2) as u32 } else { 0 };
    k.max(fp.r)
}

/// `∬ f_p(n(-t_1) (0, -μ; 1, 0) n(t_2)) θ_p(m t_1 - n t_2) dt_1 dt_2` by
/// enumerating cosets of `p^D Z_p` in `p^{-A} Z_p`. The integrand is invariant
/// under `Z_p`-translation of either variable, so `D = 0`; the value is
/// re-computed with `D + 1` and `A + 1` whenever the budget allows.
pub fn local_orbital_integral_with(
    fp: &LocalTestFunction,
    m: i64,
    n: i64,
    mu: Rational,
    budget: &EnumerationBudget,
) -> Result<LocalIntegral> {
    fp.require_congruence()?;
    if mu.is_zero() {
        return Err(Error::Domain("mu must be nonzero".into()));
    }
    let a = orbital_support_depth(fp, &mu);
    let d = 0;
    let cells = cells_2d(fp.p, a, d).filter(|&c| c <= budget.max_cells).ok_or(Error::Budget {
        cells: cells_2d(fp.p, a, d).unwrap_or(u64::MAX),
        cap: budget.max_cells,
    })?;
    let run = |aa: u32, dd: u32| enumerate_orbital(fp, m, n, &mu, aa, dd);
    let value = run(a, d)?;
    let depth_certified = certify(value, run, fp.p, a, d, budget)?;
    Ok(LocalIntegral {
        value: ComplexValue::try_from(value)?,
        support_depth: a,
        constancy_depth: d,
        cells,
        depth_certified,
    })
}

pub fn local_orbital_integral(fp: &LocalTestFunction, m: i64, n: i64, mu: Rational) -> Result<ComplexValue> {
    Ok(local_orbital_integral_with(fp, m, n, mu, &EnumerationBudget::default())?.value)
}

fn enumerate_diagonal(fp: &LocalTestFunction, m: i64, a_depth: u32, d_depth: u32) -> Result<Complex64> {
    let p = fp.p;
    let reps = (p as i128).pow(a_depth + d_depth);
    let den = Rational::from_integer((p as i128).pow(a_depth));
    let measure = (p as f64).powi(-(d_depth as i32));
    let one = Rational::one();
    let zero = Rational::zero();
    let mut acc = CompensatedComplex::new();
    for a1 in 0..reps {
        let t = Rational::from_integer(a1) / den;
        let g = PAdicMatrix {
            entries: [one, t, zero, one],
            p,
        };
        if in_z_k0(&g, fp.r) {
            acc.add(theta_p(&(-t * Rational::from_integer(m as i128)), p));
        }
    }
    Ok(acc.value() * (fp.scale() * measure))
}

/// `∫ f_p(n(t)) θ_p(-m t) dt` by coset enumeration, starting one level beyond
/// `Z_p` and certified by re-running one level deeper in each direction.
pub fn local_diagonal_integral_with(
    fp: &LocalTestFunction,
    m: i64,
    budget: &EnumerationBudget,
) -> Result<LocalIntegral> {
    fp.require_congruence()?;
    let (a, d) = (1u32, 0u32);
    let cells = fp.p.pow(a + d);
    if cells > budget.max_cells {
        return Err(Error::Budget {
            cells,
            cap: budget.max_cells,
        });
    }
    let value = enumerate_diagonal(fp, m, a, d)?;
    let mut certified = Some(true);
    for (aa, dd) in [(a, d + 1), (a + 1, d)] {
        if fp.p.checked_pow(aa + dd).map_or(true, |c| c > budget.max_cells) {
            certified = None;
            continue;
        }
        let v = enumerate_diagonal(fp, m, aa, dd)?;
        let diff = (v - value).norm();
        if diff > STABILITY_TOL * (1.0 + value.norm()) {
            return Err(Error::DepthInstability {
                depth: aa.max(dd),
                difference: diff,
            });
        }
    }
    Ok(LocalIntegral {
        value: ComplexValue::try_from(value)?,
        support_depth: a,
        constancy_depth: d,
        cells,
        depth_certified: certified,
    })
}

pub fn local_diagonal_integral(fp: &LocalTestFunction, m: i64) -> Result<ComplexValue> {
    Ok(local_diagonal_integral_with(fp, m, &EnumerationBudget::default())?.value)
}

/// The same orbital integral organised by fibres over `t_1`: membership forces
/// `t_i = x_i / p^k` with `u + x_1 x_2 ≡ 0 (mod p^k)`, `u = μ p^{2k}`, so each
/// unit `x_1` determines a single `Z_p`-coset of `t_2`. Cost `O(p^k)`.
pub fn local_orbital_fibered(fp: &LocalTestFunction, m: i64, n: i64, mu: &Rational) -> Result<Complex64> {
    fp.require_congruence()?;
    if mu.is_zero() {
        return Err(Error::Domain("mu must be nonzero".into()));
    }
    let p = fp.p;
    let v = rational_valuation(mu, p).expect("nonzero");
    if v > 0 || v % 2 != 0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let k = (-v / 2) as u32;
    if k < fp.r {
        return Ok(Complex64::new(0.0, 0.0));
    }
    if k == 0 {
        return Ok(Complex64::new(fp.scale(), 0.0));
    }
    let q = pow(p, k) as i128;
    // μ p^{2k} is a p-adic unit; reduce it mod p^k
    let den_rest = *mu.denom() / (q * q);
    let u = (mu.numer().rem_euclid(q) * mod_inv_i128(den_rest.rem_euclid(q), q)).rem_euclid(q);
    let mq = (m as i128).rem_euclid(q);
    let nq = (n as i128).rem_euclid(q);
    let qi = q as i64;
    let mut acc = CompensatedComplex::new();
    for x in 1..q {
        if x % p as i128 == 0 {
            continue;
        }
        let xinv = mod_inv(x as i64, qi).expect("unit") as i128;
        let y = (-u * xinv).rem_euclid(q);
        acc.add(unit_root(mq * x - nq * y, q));
    }
    Ok(acc.value() * fp.scale())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(a: i128, b: i128) -> Rational {
        Rational::new(a, b)
    }

    #[test]
    fn z_k0_membership() {
        let id = PAdicMatrix::from_integers(1, 0, 0, 1, 5).unwrap();
        assert!(in_z_k0(&id, 0) && in_z_k0(&id, 3));
        let w = PAdicMatrix::from_integers(0, -1, 1, 0, 5).unwrap();
        assert!(in_z_k0(&w, 0));
        assert!(!in_z_k0(&w, 1));
        let s = PAdicMatrix::from_integers(5, 0, 0, 5, 5).unwrap();
        assert!(in_z_k0(&s, 0));
        let nonint = PAdicMatrix::new(r(1, 1), r(1, 5), r(0, 1), r(1, 1), 5).unwrap();
        assert!(!in_z_k0(&nonint, 0));
    }

    #[test]
    fn principal_parts() {
        assert_eq!(principal_part(&r(3, 4), 2), (3, 2));
        assert_eq!(principal_part(&r(1, 6), 2), (1, 1)); // 1/6 = 1/2 - 1/3
        assert_eq!(principal_part(&r(1, 6), 3), (2, 1)); // 1/6 ≡ 2/3 mod Z_3
        assert_eq!(principal_part(&r(5, 7), 2), (0, 0));
    }

    #[test]
    fn singular_rejected() {
        assert!(PAdicMatrix::from_integers(1, 2, 2, 4, 3).is_err());
    }
}
