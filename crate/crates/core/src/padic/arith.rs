//! Integer helpers: gcds, inverses, valuations, factorisations.

use num_integer::Integer;

/// Extended Euclid: returns `(g, x, y)` with `a x + b y = g = gcd(a, b)`.
pub fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    let (mut old_r, mut r) = (a, b);
    let (mut old_s, mut s) = (1i64, 0i64);
    let (mut old_t, mut t) = (0i64, 1i64);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
        (old_t, t) = (t, old_t - q * t);
    }
    if old_r < 0 {
        (-old_r, -old_s, -old_t)
    } else {
        (old_r, old_s, old_t)
    }
}

/// Inverse of `a` modulo `m`, if it exists. The result lies in `[0, m)`.
pub fn mod_inv(a: i64, m: i64) -> Option<i64> {
    if m == 1 {
        return Some(0);
    }
    let (g, x, _) = ext_gcd(a.rem_euclid(m), m);
    if g != 1 {
        None
    } else {
        Some(x.rem_euclid(m))
    }
}

pub fn gcd(a: i64, b: i64) -> i64 {
    a.gcd(&b)
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Prime factorisation by trial division, primes ascending.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            let mut e = 0;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// `v_p(n)` for `n != 0`.
pub fn valuation(mut n: i128, p: u64) -> u32 {
    debug_assert!(n != 0);
    let p = p as i128;
    let mut v = 0;
    while n % p == 0 {
        n /= p;
        v += 1;
    }
    v
}

/// Number of divisors.
pub fn tau(n: u64) -> u64 {
    factorize(n).iter().map(|&(_, e)| e as u64 + 1).product()
}

/// `ν(n) = n ∏_{p | n} (1 + 1/p)`, the index of `Γ_0(n)` in `SL_2(Z)`.
pub fn nu(n: u64) -> u64 {
    factorize(n)
        .iter()
        .fold(n, |acc, &(p, _)| acc / p * (p + 1))
}

pub fn pow(p: u64, e: u32) -> u64 {
    p.checked_pow(e).expect("prime power overflows u64")
}

/// Split `c` into `(c0, c_n)` with `c_n` the part supported on primes dividing `n`.
pub fn split_modulus(c: u64, n: u64) -> (u64, u64) {
    let mut c0 = c;
    let mut cn = 1;
    for (p, _) in factorize(n) {
        while c0 % p == 0 {
            c0 /= p;
            cn *= p;
        }
    }
    (c0, cn)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverses() {
        for m in 2..60i64 {
            for a in 0..m {
                match mod_inv(a, m) {
                    Some(x) => assert_eq!((a * x) % m, 1),
                    None => assert_ne!(gcd(a, m), 1),
                }
            }
        }
    }

    #[test]
    fn arithmetic_functions() {
        assert_eq!(nu(1), 1);
        assert_eq!(nu(11), 12);
        assert_eq!(nu(4), 6);
        assert_eq!(nu(12), 24);
        assert_eq!(tau(12), 6);
        assert_eq!(split_modulus(2 * 121 * 9, 11), (18, 121));
        assert_eq!(factorize(360), vec![(2, 3), (3, 2), (5, 1)]);
    }
}
