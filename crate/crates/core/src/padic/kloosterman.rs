//! Classical and generalised Kloosterman sums.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::arith::{ext_gcd, factorize, gcd, mod_inv, split_modulus, tau};
use super::local::{local_orbital_fibered, GlobalTestFunction, Rational};
use crate::error::{Error, Result};
use crate::numkernel::{CompensatedSum, ComplexValue};

/// `S(m, n, c) = Σ_{x mod c, (x, c) = 1} e((m x + n x̄) / c)`. The sum is real
/// (the terms at `x` and `-x` are conjugate), so only cosines are accumulated.
pub fn kloosterman_classical(m: i64, n: i64, c: u64) -> f64 {
    assert!(c >= 1, "modulus must be positive");
    if c == 1 {
        return 1.0;
    }
    let ci = c as i64;
    let mr = m.rem_euclid(ci) as i128;
    let nr = n.rem_euclid(ci) as i128;
    let cq = ci as i128;
    let scale = 2.0 * PI / c as f64;
    let mut acc = CompensatedSum::new();
    for x in 1..ci {
        let (g, s, _) = ext_gcd(x, ci);
        if g != 1 {
            continue;
        }
        let xinv = s.rem_euclid(ci) as i128;
        let phase = (mr * x as i128 + nr * xinv).rem_euclid(cq);
        acc.add((scale * phase as f64).cos());
    }
    acc.value()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum KloostermanPath {
    ExactLocal,
    ClassicalFast,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KloostermanValue {
    pub m: i64,
    pub n: i64,
    pub c: u64,
    pub value: ComplexValue,
    pub path: KloostermanPath,
}

/// `H(m, n, c)` for the congruence family `f`.
///
/// The exact path multiplies the local orbital integrals at every prime
/// dividing `cN`. Once [`KloostermanEngine::validate_fast_path`] has confirmed
/// the factorisation against the exact path for this `f`, the part of `c`
/// prime to `N` is delegated to [`kloosterman_classical`].
#[derive(Debug, Clone)]
pub struct KloostermanEngine {
    f: GlobalTestFunction,
    fast_path: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FactorizationCase {
    pub m: i64,
    pub n: i64,
    pub c: u64,
    pub exact: f64,
    pub exact_im: f64,
    pub factorized: f64,
    pub relative_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FactorizationReport {
    pub level: u64,
    pub tolerance: f64,
    pub cases: Vec<FactorizationCase>,
    pub max_relative_error: f64,
    pub pass: bool,
}

impl KloostermanEngine {
    pub fn new(f: GlobalTestFunction) -> Self {
        Self { f, fast_path: false }
    }

    pub fn test_function(&self) -> &GlobalTestFunction {
        &self.f
    }

    pub fn fast_path_enabled(&self) -> bool {
        self.fast_path
    }

    /// Product of local factors at the primes dividing `cN`.
    pub fn exact_complex(&self, m: i64, n: i64, c: u64) -> Result<Complex64> {
        if c == 0 {
            return Err(Error::Domain("modulus must be positive".into()));
        }
        let mu = Rational::new(1, (c as i128) * (c as i128));
        let mut primes: Vec<u64> = factorize(c).into_iter().map(|(p, _)| p).collect();
        primes.extend(self.f.ramified_primes());
        primes.sort_unstable();
        primes.dedup();
        let mut value = Complex64::new(1.0, 0.0);
        for p in primes {
            value *= local_orbital_fibered(&self.f.local(p), m, n, &mu)?;
            if value.norm() == 0.0 {
                break;
            }
        }
        Ok(value)
    }

    pub fn exact(&self, m: i64, n: i64, c: u64) -> Result<KloostermanValue> {
        let v = self.exact_complex(m, n, c)?;
        Ok(KloostermanValue {
            m,
            n,
            c,
            value: ComplexValue::try_from(v)?,
            path: KloostermanPath::ExactLocal,
        })
    }

    /// The `N`-part `H(m, n, c_N)` with `c_N` supported on primes dividing `N`.
    fn n_part(&self, m: i64, n: i64, c_n: u64) -> Result<Complex64> {
        let mu = Rational::new(1, (c_n as i128) * (c_n as i128));
        let mut value = Complex64::new(1.0, 0.0);
        for p in self.f.ramified_primes() {
            value *= local_orbital_fibered(&self.f.local(p), m, n, &mu)?;
        }
        Ok(value)
    }

    /// Right-hand side of `H(m,n,c) = S(c̄_N m, c̄_N n, c_0) H(m c̄_0, n c̄_0, c_N)`.
    pub fn factorized(&self, m: i64, n: i64, c: u64) -> Result<Complex64> {
        let level = self.f.level();
        let (c0, c_n) = split_modulus(c, level);
        let c0_inv = mod_inv(c0 as i64, c_n as i64).expect("coprime parts");
        let h_n = self.n_part(
            (m as i128 * c0_inv as i128).rem_euclid(c_n.max(1) as i128) as i64,
            (n as i128 * c0_inv as i128).rem_euclid(c_n.max(1) as i128) as i64,
            c_n,
        )?;
        if h_n.norm() == 0.0 {
            return Ok(h_n);
        }
        let cn_inv = mod_inv(c_n as i64, c0 as i64).expect("coprime parts") as i128;
        let s = kloosterman_classical(
            (m as i128 * cn_inv).rem_euclid(c0 as i128) as i64,
            (n as i128 * cn_inv).rem_euclid(c0 as i128) as i64,
            c0,
        );
        Ok(h_n * s)
    }

    /// Compare exact and factorised values on `cases`; enables the fast path
    /// only if every case agrees to `tol` relative.
    pub fn validate_fast_path(&mut self, cases: &[(i64, i64, u64)], tol: f64) -> Result<FactorizationReport> {
        let rows: Vec<Result<FactorizationCase>> = cases
            .par_iter()
            .map(|&(m, n, c)| {
                let exact = self.exact_complex(m, n, c)?;
                let fact = self.factorized(m, n, c)?;
                let scale = exact.norm().max(fact.norm()).max(1.0);
                Ok(FactorizationCase {
                    m,
                    n,
                    c,
                    exact: exact.re,
                    exact_im: exact.im,
                    factorized: fact.re,
                    relative_error: (exact - fact).norm() / scale,
                })
            })
            .collect();
        let cases: Vec<FactorizationCase> = rows.into_iter().collect::<Result<_>>()?;
        let max_relative_error = cases.iter().map(|c| c.relative_error).fold(0.0, f64::max);
        let pass = !cases.is_empty() && max_relative_error <= tol;
        self.fast_path = pass;
        Ok(FactorizationReport {
            level: self.f.level(),
            tolerance: tol,
            cases,
            max_relative_error,
            pass,
        })
    }

    /// `H(m, n, c)`, by the fast path when validated.
    pub fn evaluate(&self, m: i64, n: i64, c: u64) -> Result<KloostermanValue> {
        if !self.fast_path {
            return self.exact(m, n, c);
        }
        let v = self.factorized(m, n, c)?;
        Ok(KloostermanValue {
            m,
            n,
            c,
            value: ComplexValue::real(v.re)?,
            path: KloostermanPath::ClassicalFast,
        })
    }
}

/// `H(m, n, c)` by exact local enumeration.
pub fn kloosterman_generalized(f: &GlobalTestFunction, m: i64, n: i64, c: u64) -> Result<KloostermanValue> {
    KloostermanEngine::new(f.clone()).exact(m, n, c)
}

/// Deterministic sweep of `count` triples whose modulus has both a nontrivial
/// `N`-part divisible by `N` and a nontrivial part prime to `N`.
pub fn factorization_cases(level: u64, count: usize) -> Vec<(i64, i64, u64)> {
    let mut out = Vec::with_capacity(count);
    let mut c = level.max(2);
    let mut i = 0i64;
    while out.len() < count {
        let (c0, c_n) = split_modulus(c, level);
        if c0 > 1 && c_n % level == 0 {
            let m = 1 + (i % 7);
            let n = 1 + ((3 * i + 2) % 11);
            out.push((m, n, c));
            i += 1;
        }
        c += 1;
    }
    out
}

/// `|H(m, n, c)| <= c κ f(1)`, with `κ = N` for the congruence family.
pub fn trivial_bound(f: &GlobalTestFunction, c: u64) -> f64 {
    c as f64 * f.level() as f64 * f.value_at_identity()
}

/// `τ(c) gcd(m, n, c)^{1/2} c^{1/2}`.
pub fn weil_bound(m: i64, n: i64, c: u64) -> f64 {
    let g = gcd(gcd(m, n), c as i64).unsigned_abs().max(1);
    tau(c) as f64 * (g as f64).sqrt() * (c as f64).sqrt()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModuliReport {
    pub c_max: u64,
    pub admissible: Vec<u64>,
    /// gcd of the admissible set found; an estimate of the geometric
    /// conductor, which a finite scan can only bound. `None` if nothing was found.
    pub conductor_estimate: Option<u64>,
}

pub const NONZERO_THRESHOLD: f64 = 1e-9;

/// All `c <= c_max` with `|H(m, n, c)| > 1e-9` for some pair in `grid`.
pub fn admissible_moduli(f: &GlobalTestFunction, c_max: u64, grid: &[(i64, i64)]) -> Result<ModuliReport> {
    if c_max == 0 {
        return Err(Error::Domain("c_max must be positive".into()));
    }
    if grid.is_empty() {
        return Err(Error::Domain("(m, n) grid must be nonempty".into()));
    }
    let engine = KloostermanEngine::new(f.clone());
    let flags: Vec<Result<bool>> = (1..=c_max)
        .into_par_iter()
        .map(|c| {
            for &(m, n) in grid {
                if engine.exact_complex(m, n, c)?.norm() > NONZERO_THRESHOLD {
                    return Ok(true);
                }
            }
            Ok(false)
        })
        .collect();
    let mut admissible = Vec::new();
    for (c, flag) in (1..=c_max).zip(flags) {
        if flag? {
            admissible.push(c);
        }
    }
    let conductor_estimate = admissible
        .iter()
        .copied()
        .reduce(|a, b| gcd(a as i64, b as i64) as u64);
    Ok(ModuliReport {
        c_max,
        admissible,
        conductor_estimate,
    })
}
