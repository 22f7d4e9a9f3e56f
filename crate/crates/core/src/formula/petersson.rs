//! Geometric side of the weight-2 Petersson formula.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::majorant::KloostermanMajorant;
use crate::error::{Error, Result};
use crate::numkernel::{bessel_j1, compensated_sum};
use crate::padic::arith::gcd;
use crate::padic::{factorization_cases, local_weight_delta_p, GlobalTestFunction, KloostermanEngine};

/// Tolerance for enabling the factorised Kloosterman path.
pub const FAST_PATH_TOLERANCE: f64 = 1e-9;
const FAST_PATH_CASES: usize = 50;

/// Scaling of the diagonal term at `m₁ = m₂ = m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DiagonalNormalization {
    /// `δ/(4π)`.
    #[default]
    Theorem,
    /// `m δ/(4π)`, from dividing the cell limits by `16π²√(m₁m₂) e^{−2π(m₁+m₂)}`.
    LimitQuotient,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeometricTerm {
    pub c: u64,
    /// `H(m₁, m₂, c)` (real part).
    pub kloosterman: f64,
    /// Archimedean kernel at `4π√|m₁m₂|/c`.
    pub kernel: f64,
    pub term: f64,
    /// Proven bound on `|term|`.
    pub majorant: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeometricSideResult {
    pub value: f64,
    pub partial_terms: Vec<GeometricTerm>,
    /// Bound on the omitted terms `c > c_max`.
    pub tail_majorant: f64,
    pub c_max: u64,
    pub diagonal_term: f64,
    /// Summed quadrature error of the kernel values.
    pub quadrature_error: f64,
}

impl GeometricSideResult {
    pub(crate) fn assemble(diagonal_term: f64, partial_terms: Vec<GeometricTerm>, tail_majorant: f64, c_max: u64, quadrature_error: f64) -> Self {
        let mut values: Vec<f64> = Vec::with_capacity(partial_terms.len() + 1);
        values.push(diagonal_term);
        values.extend(partial_terms.iter().map(|t| t.term));
        Self {
            value: compensated_sum(&values),
            partial_terms,
            tail_majorant,
            c_max,
            diagonal_term,
            quadrature_error,
        }
    }
}

/// `δ = ∏_p δ_p`.
pub fn diagonal_weight(f: &GlobalTestFunction) -> Result<f64> {
    f.ramified_primes().try_fold(1.0, |acc, p| Ok(acc * local_weight_delta_p(&f.local(p))?))
}

/// Kloosterman engine with the factorised path enabled when it validates.
pub(crate) fn validated_engine(f: &GlobalTestFunction) -> Result<KloostermanEngine> {
    let mut engine = KloostermanEngine::new(f.clone());
    engine.validate_fast_path(&factorization_cases(f.level(), FAST_PATH_CASES), FAST_PATH_TOLERANCE)?;
    Ok(engine)
}

/// Admissible moduli `c ≤ c_max` with `N | c`.
pub(crate) fn moduli(level: u64, c_max: u64) -> Vec<u64> {
    (1..=c_max / level).map(|j| j * level).collect()
}

fn check_coprime(f: &GlobalTestFunction, m: i64) -> Result<()> {
    let level = f.level() as i64;
    if gcd(m, level).abs() != 1 {
        return Err(Error::Precondition(format!("gcd({m}, {level}) ≠ 1")));
    }
    Ok(())
}

fn check_c_max(f: &GlobalTestFunction, c_max: u64) -> Result<()> {
    if c_max < f.level() {
        return Err(Error::Precondition(format!("c_max = {c_max} is below the level {}", f.level())));
    }
    Ok(())
}

/// `(1/4π) δ_{m₁=m₂} δ − (1/2) Σ_{N | c ≤ c_max} H(m₁, m₂, c)/c · J₁(4π√(m₁m₂)/c)`.
pub fn petersson2_geometric(
    f: &GlobalTestFunction,
    m1: u64,
    m2: u64,
    c_max: u64,
    normalization: DiagonalNormalization,
) -> Result<GeometricSideResult> {
    if m1 == 0 || m2 == 0 {
        return Err(Error::Precondition("m₁, m₂ must be positive".into()));
    }
    let (m1i, m2i) = (m1 as i64, m2 as i64);
    check_coprime(f, m1i * m2i)?;
    check_c_max(f, c_max)?;
    let engine = validated_engine(f)?;
    let majorant = KloostermanMajorant::new(f, m1i, m2i)?;
    let root = ((m1 * m2) as f64).sqrt();
    let terms: Vec<GeometricTerm> = moduli(f.level(), c_max)
        .into_par_iter()
        .map(|c| {
            let h = engine.evaluate(m1i, m2i, c)?.value.re();
            let x = 4.0 * PI * root / c as f64;
            let kernel = bessel_j1(x);
            Ok(GeometricTerm {
                c,
                kloosterman: h,
                kernel,
                term: -0.5 * h / c as f64 * kernel,
                majorant: 0.5 * majorant.kloosterman_bound(c) / c as f64 * 0.5 * x,
            })
        })
        .collect::<Result<_>>()?;
    // |J₁(x)| ≤ x/2, so the tail is at most π√(m₁m₂) Σ |H|/c²
    let tail = PI * root * majorant.inverse_square_tail(f, c_max);
    let diagonal = if m1 == m2 {
        let delta = diagonal_weight(f)?;
        let scale = match normalization {
            DiagonalNormalization::Theorem => 1.0,
            DiagonalNormalization::LimitQuotient => m1 as f64,
        };
        scale * delta / (4.0 * PI)
    } else {
        0.0
    };
    Ok(GeometricSideResult::assemble(diagonal, terms, tail, c_max, 0.0))
}
