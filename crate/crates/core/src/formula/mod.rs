//! Geometric sides of the trace formulas and the level-11 verification.

mod kuznetsov;
mod majorant;
mod petersson;
mod verify;

pub use kuznetsov::{bk_opposite_geometric, parity_bound_demo, ParityReport, I_FORM_LIMIT, PARITY_CONSTANT_LIMIT};
pub use majorant::{divisor_tail, n_parts, KloostermanMajorant, EXACT_N_PART_LIMIT};
pub use petersson::{
    diagonal_weight, petersson2_geometric, DiagonalNormalization, GeometricSideResult, GeometricTerm,
    FAST_PATH_TOLERANCE,
};
pub use verify::{verify_weight2_level11, VerificationReport, VerificationRow, ILL_CONDITIONED_FACTOR};
