//! End-to-end check of the weight-2 Petersson formula at level 11 against
//! Hecke eigenvalues of the elliptic curve `11a`.

use serde::{Deserialize, Serialize};

use super::petersson::{petersson2_geometric, DiagonalNormalization, GeometricSideResult};
use crate::error::{Error, Result};
use crate::oracle::{lambda_oracle, BAD_PRIME};
use crate::padic::GlobalTestFunction;

/// `|G(1,1)|` must exceed this multiple of its tail majorant.
pub const ILL_CONDITIONED_FACTOR: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VerificationRow {
    pub m: u64,
    pub lambda_computed: f64,
    pub lambda_oracle: f64,
    pub abs_error: f64,
    /// Tail majorant of `G(1, m)`.
    pub tail_majorant: f64,
    /// Bound on the ratio error propagated from both tail majorants.
    pub ratio_error_bound: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub level: u64,
    pub c_max: u64,
    pub tolerance: f64,
    pub g11: f64,
    pub g11_tail_majorant: f64,
    pub rows: Vec<VerificationRow>,
    pub pass: bool,
}

/// `λ(m) = G(1, m)/G(1, 1)` from the level-11 geometric side, compared with
/// `a_m/√m`.
pub fn verify_weight2_level11(m_list: &[u64], c_max: u64, tol: f64) -> Result<VerificationReport> {
    if !(tol > 0.0) {
        return Err(Error::Config(format!("tolerance must be positive, got {tol}")));
    }
    if let Some(&m) = m_list.iter().find(|&&m| m == 0 || m % BAD_PRIME == 0) {
        return Err(Error::Precondition(format!("m = {m} must be positive and prime to 11")));
    }
    let f = GlobalTestFunction::of_level(BAD_PRIME)?;
    let side = |m: u64| -> Result<GeometricSideResult> {
        petersson2_geometric(&f, 1, m, c_max, DiagonalNormalization::Theorem)
    };
    let base = side(1)?;
    let (g, e1) = (base.value, base.tail_majorant);
    if g.abs() <= ILL_CONDITIONED_FACTOR * e1 {
        return Err(Error::IllConditioned { value: g.abs(), majorant: e1 });
    }
    let mut rows = Vec::with_capacity(m_list.len());
    for &m in m_list {
        let (value, em) = if m == 1 { (g, e1) } else {
            let s = side(m)?;
            (s.value, s.tail_majorant)
        };
        let ratio = if m == 1 { 1.0 } else { value / g };
        let oracle = lambda_oracle(m)?;
        let abs_error = (ratio - oracle).abs();
        let ratio_error_bound = if m == 1 { 0.0 } else { (em + ratio.abs() * e1) / (g.abs() - e1) };
        rows.push(VerificationRow {
            m,
            lambda_computed: ratio,
            lambda_oracle: oracle,
            abs_error,
            tail_majorant: em,
            ratio_error_bound,
            pass: abs_error <= tol,
        });
    }
    let pass = rows.iter().all(|r| r.pass);
    Ok(VerificationReport {
        level: BAD_PRIME,
        c_max,
        tolerance: tol,
        g11: g,
        g11_tail_majorant: e1,
        rows,
        pass,
    })
}
