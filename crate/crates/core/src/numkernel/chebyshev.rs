//! Chebyshev interpolation on an interval.

use crate::error::{Error, Result};

/// Interpolant `Σ c_k T_k(s)` with `s` the affine image of `[a, b]` on `[-1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Chebyshev {
    a: f64,
    b: f64,
    coeffs: Vec<f64>,
}

impl Chebyshev {
    /// Interpolate at `n` Chebyshev points of the first kind.
    pub fn fit<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, n: usize) -> Self {
        assert!(n >= 1 && b > a);
        let nf = n as f64;
        let values: Vec<f64> = (0..n)
            .map(|j| {
                let s = (std::f64::consts::PI * (j as f64 + 0.5) / nf).cos();
                f(0.5 * (a + b) + 0.5 * (b - a) * s)
            })
            .collect();
        let coeffs = (0..n)
            .map(|k| {
                let sum: f64 = values
                    .iter()
                    .enumerate()
                    .map(|(j, v)| v * (std::f64::consts::PI * k as f64 * (j as f64 + 0.5) / nf).cos())
                    .sum();
                sum * if k == 0 { 1.0 / nf } else { 2.0 / nf }
            })
            .collect();
        Self { a, b, coeffs }
    }

    /// Double the node count from `n0` until the trailing coefficients fall
    /// below `tol` (absolute), up to `n_max` nodes.
    pub fn fit_adaptive<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, n0: usize, n_max: usize, tol: f64) -> Result<Self> {
        let mut n = n0.max(8);
        loop {
            let c = Self::fit(&mut f, a, b, n);
            if c.tail_magnitude() <= tol {
                return Ok(c);
            }
            if 2 * n > n_max {
                return Err(Error::NonConvergence {
                    context: "Chebyshev interpolation".into(),
                    value: c.coeffs[0],
                    error: c.tail_magnitude(),
                });
            }
            n *= 2;
        }
    }

    /// Largest magnitude among the last three coefficients.
    pub fn tail_magnitude(&self) -> f64 {
        self.coeffs.iter().rev().take(3).fold(0.0, |m, c| m.max(c.abs()))
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.a, self.b)
    }

    /// Clenshaw evaluation; `x` outside `[a, b]` extrapolates.
    pub fn eval(&self, x: f64) -> f64 {
        let s = (2.0 * x - self.a - self.b) / (self.b - self.a);
        let (mut b1, mut b2) = (0.0, 0.0);
        for &c in self.coeffs.iter().skip(1).rev() {
            let b0 = 2.0 * s * b1 - b2 + c;
            b2 = b1;
            b1 = b0;
        }
        s * b1 - b2 + self.coeffs[0]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproduces_exponential() {
        let c = Chebyshev::fit_adaptive(|x: f64| (-x).exp(), 0.0, 4.0, 8, 256, 1e-15).unwrap();
        for x in [0.0, 0.3, 1.7, 4.0] {
            assert!((c.eval(x) - (-x).exp()).abs() < 1e-14);
        }
    }

    #[test]
    fn low_degree_is_exact() {
        let c = Chebyshev::fit(|x| 3.0 * x * x - x + 2.0, -1.0, 2.0, 5);
        assert!((c.eval(1.5) - (3.0 * 2.25 - 1.5 + 2.0)).abs() < 1e-13);
    }
}
