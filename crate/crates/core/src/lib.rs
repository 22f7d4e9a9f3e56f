//! Generalised Kloosterman sums by exact p-adic integration, Bessel-kernel
//! transforms of imaginary order, and the geometric sides of the weight-2
//! Petersson formula and the opposite-sign Kuznetsov formula.

pub mod archimedean;
pub mod cli;
pub mod error;
pub mod formula;
pub mod numkernel;
pub mod oracle;
pub mod padic;

pub use error::{Error, Result};
