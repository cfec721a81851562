//! Truncated two-mode Fock-space representation used as a numerical oracle
//! for the closed-form spectra.

mod basis;
mod hamiltonians;
mod linalg;
mod operators;
mod oracle;

pub use basis::{FockBasisSpec, DEFAULT_DIMENSION_CAP};
pub use hamiltonians::{
    build_h2_hat, build_jz_hat, build_kinetic_hat, h2_deformed_form, h2_effective_form, jz_form, kinetic_form, H2Hat,
    DUAL_TOLERANCE,
};
pub use linalg::{
    commutator, eigen_defect, eigh, eigvalsh, expectation, hermiticity_gap, hermitize, max_abs, max_abs_on, submatrix,
    weight_on, CMat, Eigh,
};
pub use operators::{build_operators, pull_back, single_mode, sum_of_squares, FockOperatorSet, QuadraticForm};
pub use oracle::*;
