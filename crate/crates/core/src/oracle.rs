//! Independent ground truth: Hecke eigenvalues of the level-11 weight-2
//! newform via the elliptic curve `y² + y = x³ − x² − 10x − 20`, and
//! brute-force reference computations.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::padic::arith::{factorize, gcd, is_prime};

/// Weierstrass data `[a1, a2, a3, a4, a6]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct EllipticCurve11a {
    pub a: [i64; 5],
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CurveInvariants {
    pub b2: i64,
    pub b4: i64,
    pub b6: i64,
    pub b8: i64,
    pub c4: i64,
    pub c6: i64,
    pub discriminant: i64,
}

pub const BAD_PRIME: u64 = 11;

impl Default for EllipticCurve11a {
    fn default() -> Self {
        Self::new()
    }
}

impl EllipticCurve11a {
    pub const fn new() -> Self {
        Self { a: [0, -1, 1, -10, -20] }
    }

    pub fn invariants(&self) -> CurveInvariants {
        let [a1, a2, a3, a4, a6] = self.a;
        let b2 = a1 * a1 + 4 * a2;
        let b4 = 2 * a4 + a1 * a3;
        let b6 = a3 * a3 + 4 * a6;
        let b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
        let c4 = b2 * b2 - 24 * b4;
        let c6 = -b2 * b2 * b2 + 36 * b2 * b4 - 216 * b6;
        let discriminant = -b2 * b2 * b8 - 8 * b4 * b4 * b4 - 27 * b6 * b6 + 9 * b2 * b4 * b6;
        CurveInvariants {
            b2,
            b4,
            b6,
            b8,
            c4,
            c6,
            discriminant,
        }
    }

    /// Conductor from the reduction types: the model is minimal when every
    /// `v_p(Δ) < 12`, and a prime `p >= 5` dividing `Δ` but not `c4` is a
    /// place of multiplicative reduction, contributing `p^1`. Other bad
    /// primes are outside what this check decides.
    pub fn conductor(&self) -> Result<u64> {
        let inv = self.invariants();
        if inv.discriminant == 0 {
            return Err(Error::Domain("singular curve".into()));
        }
        let mut n = 1u64;
        for (p, e) in factorize(inv.discriminant.unsigned_abs()) {
            if e >= 12 {
                return Err(Error::Domain(format!("model may be non-minimal at {p}")));
            }
            if p < 5 || inv.c4.rem_euclid(p as i64) == 0 {
                return Err(Error::Domain(format!("additive or small-prime reduction at {p} is not handled")));
            }
            n *= p;
        }
        Ok(n)
    }

    /// `#E(F_p)` by enumerating `x` and counting roots of `y² + a1 x y + a3 y = rhs`.
    pub fn count_points(&self, p: u64) -> u64 {
        let [a1, a2, a3, a4, a6] = self.a.map(|v| v.rem_euclid(p as i64) as u64);
        let pm = |v: u64| v % p;
        let mut count = 1u64; // point at infinity
        if p == 2 {
            for x in 0..2 {
                for y in 0..2 {
                    let lhs = pm(y * y + a1 * x * y + a3 * y);
                    let rhs = pm(x * x * x + a2 * x * x + a4 * x + a6);
                    if lhs == rhs {
                        count += 1;
                    }
                }
            }
            return count;
        }
        let mut is_square = vec![false; p as usize];
        for y in 0..p {
            is_square[(y * y % p) as usize] = true;
        }
        for x in 0..p {
            // (2y + a1 x + a3)² = 4 rhs + (a1 x + a3)²
            let rhs = pm(pm(pm(x * x) * x) + pm(a2 * pm(x * x)) + pm(a4 * x) + a6);
            let s = pm(a1 * x + a3);
            let d = pm(4 * rhs + s * s);
            count += if d == 0 {
                1
            } else if is_square[d as usize] {
                2
            } else {
                0
            };
        }
        count
    }
}

/// `a_p = p + 1 − #E(F_p)`.
pub fn ec_ap(p: u64) -> Result<i64> {
    if !is_prime(p) {
        return Err(Error::Domain(format!("{p} is not prime")));
    }
    if p == BAD_PRIME {
        return Err(Error::Domain("p = 11 is the prime of bad reduction".into()));
    }
    Ok(p as i64 + 1 - EllipticCurve11a::new().count_points(p) as i64)
}

/// `a_m` by Hecke multiplicativity and the prime-power recursion.
pub fn ec_am(m: u64) -> Result<i64> {
    if m == 0 || gcd(m as i64, BAD_PRIME as i64) != 1 {
        return Err(Error::Domain(format!("m = {m} must be positive and prime to 11")));
    }
    let mut out = 1i64;
    for (p, e) in factorize(m) {
        let ap = ec_ap(p)?;
        let (mut prev, mut cur) = (1i64, ap);
        for _ in 1..e {
            let next = ap * cur - p as i64 * prev;
            prev = cur;
            cur = next;
        }
        out *= cur;
    }
    Ok(out)
}

/// `λ(m) = a_m / √m`.
pub fn lambda_oracle(m: u64) -> Result<f64> {
    Ok(ec_am(m)? as f64 / (m as f64).sqrt())
}

/// Hasse bound `|a_p| <= 2√p`.
pub fn hasse_check(p: u64) -> bool {
    match ec_ap(p) {
        Ok(a) => (a * a) as u64 <= 4 * p,
        Err(_) => false,
    }
}

/// `S(m, n, c)` with complex phases and inverses found by search. Quadratic
/// in `c`; only for cross-checks.
pub fn kloosterman_brute_force(m: i64, n: i64, c: u64) -> Complex64 {
    let c = c as i64;
    let mut s = Complex64::new(0.0, 0.0);
    for x in 0..c {
        if let Some(xi) = (0..c).find(|y| (x * y).rem_euclid(c) == 1 % c) {
            let ph = (m * x + n * xi).rem_euclid(c) as f64 / c as f64;
            s += Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * ph);
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn invariants_of_11a() {
        let inv = EllipticCurve11a::new().invariants();
        assert_eq!(inv.discriminant, -161051);
        assert_eq!(inv.c4, 496);
        assert_eq!(EllipticCurve11a::new().conductor().unwrap(), 11);
    }
}
