use num_complex::Complex64;
use std::f64::consts::PI;

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// Principal-branch-agnostic `ln Γ(z)`: only `exp` of the result is meaningful
/// beyond the real part. Lanczos (g = 7, n = 9) with reflection for `Re z < 1/2`.
pub fn ln_gamma_complex(z: Complex64) -> Complex64 {
    if z.re < 0.5 {
        // Γ(z)Γ(1-z) = π / sin(πz)
        let s = (z * PI).sin();
        return Complex64::new(PI.ln(), 0.0) - ln_sin_safe(s, z) - ln_gamma_complex(1.0 - z);
    }
    let z = z - 1.0;
    let mut x = Complex64::new(LANCZOS[0], 0.0);
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        x += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + x.ln()
}

fn ln_sin_safe(s: Complex64, z: Complex64) -> Complex64 {
    // for large |Im z| sin(πz) overflows; use the exponential form instead
    if (PI * z.im).abs() > 600.0 {
        let sign = z.im.signum();
        // sin(πz) ≈ (i/2)·sign·e^{-iπz·sign}... computed in log form
        let w = Complex64::new(0.0, -sign) * PI * z;
        return w + Complex64::new(0.5f64.ln(), 0.0) + Complex64::new(0.0, sign * PI / 2.0);
    }
    s.ln()
}

/// `Γ(z)` for complex `z`.
pub fn gamma_complex(z: Complex64) -> Complex64 {
    ln_gamma_complex(z).exp()
}

/// `ln |Γ(x)|` for real positive x.
pub fn ln_gamma(x: f64) -> f64 {
    ln_gamma_complex(Complex64::new(x, 0.0)).re
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn half_integer() {
        let g = gamma_complex(Complex64::new(0.5, 0.0));
        assert!((g.re - PI.sqrt()).abs() < 1e-14);
        assert!(g.im.abs() < 1e-14);
    }

    #[test]
    fn factorials() {
        let mut f = 1.0;
        for n in 1..20 {
            f *= n as f64;
            let g = gamma_complex(Complex64::new(n as f64 + 1.0, 0.0));
            assert!((g.re / f - 1.0).abs() < 1e-13, "n = {n}");
        }
    }

    #[test]
    fn modulus_on_imaginary_line() {
        // |Γ(1+iy)|² = πy / sinh(πy)
        for &y in &[0.1, 1.0, 5.0, 20.0, 80.0] {
            let lg = ln_gamma_complex(Complex64::new(1.0, y));
            let want = 0.5 * (PI * y).ln() - 0.5 * ((PI * y).sinh()).ln();
            assert!((lg.re - want).abs() < 1e-13 * want.abs().max(1.0), "y = {y}");
        }
    }

    #[test]
    fn recurrence_and_reflection() {
        for &(x, y) in &[(0.3, 2.0), (-1.7, 0.4), (2.5, -7.0), (0.1, 40.0)] {
            let z = Complex64::new(x, y);
            let lhs = gamma_complex(z + 1.0);
            let rhs = z * gamma_complex(z);
            assert!((lhs - rhs).norm() <= 1e-12 * lhs.norm(), "z = {z}");
        }
    }
}
