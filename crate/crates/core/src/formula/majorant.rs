//! Rigorous majorants for the Kloosterman-weighted sums over moduli.

use crate::padic::arith::{gcd, mod_inv, split_modulus, tau};
use crate::padic::{GlobalTestFunction, KloostermanEngine};
use crate::error::Result;

/// `ζ(3/2)`.
const ZETA_THREE_HALVES: f64 = 2.612_375_348_685_488;

/// Largest `N`-part for which `max_u |H(m₁u, m₂u, c_N)|` is computed exactly.
pub const EXACT_N_PART_LIMIT: u64 = 2000;

/// `N`-parts are enumerated up to this size; beyond it a Rankin bound is used.
const N_PART_ENUMERATION_LIMIT: f64 = 1e30;

/// `Σ_{b > n} b^{−3/2} ≤ 2/√n` for `n ≥ 1`.
fn tail_zeta(n: u64) -> f64 {
    2.0 / (n as f64).sqrt()
}

/// Upper bound for `Σ_{n > z} τ(n) n^{−3/2}`.
///
/// Writing `n = ab`, every pair with `ab > X = ⌊z⌋` has `a ≤ s`, `b ≤ s`, or
/// both `a, b > s` where `s = ⌊√X⌋`; the three pieces are bounded separately.
pub fn divisor_tail(z: f64) -> f64 {
    if z < 1.0 {
        return ZETA_THREE_HALVES * ZETA_THREE_HALVES;
    }
    let x = z.floor() as u64;
    let s = (x as f64).sqrt().floor() as u64;
    let s = if (s + 1) * (s + 1) <= x { s + 1 } else if s * s > x { s - 1 } else { s };
    let mut acc = 0.0;
    for a in 1..=s {
        acc += (a as f64).powf(-1.5) * tail_zeta(x / a);
    }
    let t = tail_zeta(s);
    2.0 * acc + t * t
}

/// The `N`-parts `c_N` with `N | c_N` and prime support in `N`, ascending.
pub fn n_parts(f: &GlobalTestFunction, limit: f64) -> Vec<f64> {
    let mut parts = vec![1.0f64];
    for (&p, &r) in f.locals() {
        let mut next = Vec::new();
        for &base in &parts {
            let mut q = base * (p as f64).powi(r as i32);
            while q <= limit {
                next.push(q);
                q *= p as f64;
            }
        }
        parts = next;
    }
    parts.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    parts
}

/// Per-modulus bound `|H(m₁, m₂, c)| ≤ τ(c₀) √(gcd(m₁, m₂, c₀) c₀) B_N(c_N)` from
/// the factorisation `H = S(·, ·, c₀) H(·, ·, c_N)`, with `B_N` exact for small
/// `c_N` and the trivial bound `c_N κ f(1)` otherwise.
#[derive(Debug, Clone)]
pub struct KloostermanMajorant {
    level: u64,
    trivial_scale: f64,
    m_gcd: u64,
    exact: Vec<(u64, f64)>,
}

impl KloostermanMajorant {
    pub fn new(f: &GlobalTestFunction, m1: i64, m2: i64) -> Result<Self> {
        let level = f.level();
        let engine = KloostermanEngine::new(f.clone());
        let mut exact = Vec::new();
        for c_n in n_parts(f, EXACT_N_PART_LIMIT as f64) {
            let c_n = c_n as u64;
            let mut best = 0.0f64;
            for u in 1..=c_n {
                if gcd(u as i64, c_n as i64) != 1 {
                    continue;
                }
                let a = (m1 as i128 * u as i128).rem_euclid(c_n as i128) as i64;
                let b = (m2 as i128 * u as i128).rem_euclid(c_n as i128) as i64;
                best = best.max(engine.exact_complex(a, b, c_n)?.norm());
            }
            exact.push((c_n, best));
        }
        Ok(Self {
            level,
            trivial_scale: level as f64 * f.value_at_identity(),
            m_gcd: gcd(m1, m2).unsigned_abs().max(1),
            exact,
        })
    }

    /// `B_N(c_N)`.
    pub fn n_part_bound(&self, c_n: f64) -> f64 {
        self.exact
            .iter()
            .find(|&&(c, _)| c as f64 == c_n)
            .map(|&(_, b)| b)
            .unwrap_or(c_n * self.trivial_scale)
    }

    pub fn kloosterman_bound(&self, c: u64) -> f64 {
        let (c0, c_n) = split_modulus(c, self.level);
        debug_assert!(c_n == 1 || mod_inv(c0 as i64, c_n as i64).is_some());
        let g = gcd(self.m_gcd as i64, c0 as i64).unsigned_abs().max(1);
        tau(c0) as f64 * ((g * c0) as f64).sqrt() * self.n_part_bound(c_n as f64)
    }

    /// Bound for `Σ_{c > c_max, N | c} |H(m₁, m₂, c)| / c^2`.
    pub fn inverse_square_tail(&self, f: &GlobalTestFunction, c_max: u64) -> f64 {
        let g = (self.m_gcd as f64).sqrt();
        let mut acc = 0.0;
        for c_n in n_parts(f, N_PART_ENUMERATION_LIMIT) {
            acc += self.n_part_bound(c_n) / (c_n * c_n) * divisor_tail(c_max as f64 / c_n);
        }
        g * (acc + self.rankin_remainder(f))
    }

    /// `Σ_{c_N > L} κ f(1)/c_N · ζ(3/2)² ≤ κ f(1) ζ(3/2)² L^{−1/2} ∏_{p|N} (1 − p^{−1/2})^{−1}`.
    fn rankin_remainder(&self, f: &GlobalTestFunction) -> f64 {
        if self.level == 1 {
            return 0.0;
        }
        let euler: f64 = f.ramified_primes().map(|p| 1.0 / (1.0 - (p as f64).powf(-0.5))).product();
        self.trivial_scale * ZETA_THREE_HALVES * ZETA_THREE_HALVES * euler / N_PART_ENUMERATION_LIMIT.sqrt()
    }
}
