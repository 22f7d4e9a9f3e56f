//! Exact non-archimedean computations: local test functions, p-adic orbital
//! integrals, Kloosterman sums, admissible moduli and local weights.

pub mod arith;
mod kloosterman;
mod local;
mod weights;

pub use kloosterman::{
    admissible_moduli, factorization_cases, kloosterman_classical, kloosterman_generalized,
    trivial_bound, weil_bound, FactorizationCase, FactorizationReport, KloostermanEngine,
    KloostermanPath, KloostermanValue, ModuliReport, NONZERO_THRESHOLD,
};
pub use local::{
    in_z_k0, local_diagonal_integral, local_diagonal_integral_with, local_orbital_fibered,
    local_orbital_integral, local_orbital_integral_with, principal_part, rational_valuation,
    theta_p, EnumerationBudget, GlobalTestFunction, LocalIntegral, LocalKind, LocalTestFunction,
    PAdicMatrix, Rational,
};
pub use weights::{l_pi_one, local_weight_delta_p, LocalRepKind};
