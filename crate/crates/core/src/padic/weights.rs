//! Local weights `δ_p` and the local factors `L_π(1)`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::arith::{is_prime, pow};
use super::local::LocalTestFunction;
use crate::error::{Error, Result};

/// `|P^1(Z/p^r)| = p^r + p^{r-1}` for `r >= 1`.
fn projective_line_size(p: u64, r: u32) -> u64 {
    if r == 0 {
        1
    } else {
        pow(p, r) + pow(p, r - 1)
    }
}

/// `δ_p` for the congruence indicator. `π(f_p)` is `ν(p^r)` times the
/// projection onto `K_0(p^r)`-fixed vectors, so the Plancherel integral of its
/// squared Hilbert-Schmidt norm is `‖f_p‖²_{L²} = ν(p^r)² vol(K_0(p^r))`, with
/// `vol(K_0(p^r)) = 1 / [K_p : K_0(p^r)] = 1 / |P^1(Z/p^r)|`.
pub fn local_weight_delta_p(fp: &LocalTestFunction) -> Result<f64> {
    fp.require_congruence()?;
    let index = projective_line_size(fp.p(), fp.r()) as f64;
    let scale = fp.scale();
    Ok(scale * scale / index)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LocalRepKind {
    /// Unramified principal series with Satake parameter `θ`.
    Unramified,
    /// Conductor exponent one.
    ConductorOne,
    /// Conductor exponent at least two.
    ConductorAtLeastTwo,
}

/// `L_π(1)` in its three cases. For the unramified case `θ` is either real in
/// `[0, π]` or `i τ log p` with `τ ∈ (0, 1/2)`.
pub fn l_pi_one(kind: LocalRepKind, theta: Complex64, p: u64) -> Result<Complex64> {
    if !is_prime(p) {
        return Err(Error::Domain(format!("{p} is not prime")));
    }
    let pf = p as f64;
    match kind {
        LocalRepKind::ConductorOne => Ok(Complex64::new(1.0 / (1.0 + 1.0 / pf), 0.0)),
        LocalRepKind::ConductorAtLeastTwo => Ok(Complex64::new(1.0 - 1.0 / pf, 0.0)),
        LocalRepKind::Unramified => {
            let tempered = theta.im == 0.0 && (0.0..=std::f64::consts::PI).contains(&theta.re);
            let tau = theta.im / pf.ln();
            let complementary = theta.re == 0.0 && tau > 0.0 && tau < 0.5;
            if !(tempered || complementary) {
                return Err(Error::Domain(format!(
                    "Satake parameter {theta} outside [0, π] ∪ i(0, 1/2) log p"
                )));
            }
            let e = (Complex64::new(0.0, 2.0) * theta).exp();
            let num = 1.0 - 1.0 / (pf * pf);
            let den = (1.0 - e / pf) * (1.0 - 1.0 / pf) * (1.0 - e.inv() / pf);
            Ok(num / den)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn projective_line() {
        assert_eq!(projective_line_size(11, 1), 12);
        assert_eq!(projective_line_size(2, 2), 6);
        assert_eq!(projective_line_size(3, 3), 36);
    }
}
