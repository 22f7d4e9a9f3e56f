//! Archimedean test functions and integral transforms.

mod cells;
mod holomorphic;
mod selberg;
mod testfn;
mod transforms;
mod zagier;

pub use cells::{
    first_cell_arch, first_cell_arch_quadrature, second_cell_abs_closed_form, second_cell_abs_integral,
    second_cell_arch, CellRoute,
};
pub use holomorphic::{
    cartan_radius, cartan_torus, lambda_t_discrete, lambda_t_principal, mat_mul, matrix_coeff, rotation, smoothstep,
    HyperbolicPoint, Matrix2, TruncationProfile, SPECTRAL_GAP,
};
pub use selberg::{selberg_kernel, KernelSummary, SelbergKernel};
pub use testfn::{f_infty_identity, h_eval, Approx, ArchTestFunction, SpectralPoint};
pub use transforms::{
    h_minus_bound_check, h_minus_bound_constant, h_minus_majorant, h_minus_transform, modified_zagier_fourier,
    modified_zagier_hat, HMinusBoundCheck, HMinusBoundRow, HMinusRoute,
};
pub use zagier::{modified_zagier, zagier_transform, PrefactorFit, ZagierEngine, ZagierRoute, DEFAULT_FIT_POINTS};
