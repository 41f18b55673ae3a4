//! Dense complex matrices and the kernels that apply them to factored state vectors.

mod commute;
pub mod kernel;
mod matrix;

pub use commute::{
    commutes_with_translations, commutes_with_translations_opts, CheckMode, CommutationReport,
    OffsetResidual,
};
pub use matrix::{
    gates, herm_exp, hermitian_eigenvalues, is_unitary, trace_distance, ComplexMatrix, C64,
};
pub(crate) use matrix::{ONE, ZERO};
