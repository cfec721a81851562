//! Exact phase-space polynomial algebra and the constrained reduction of the
//! lowest-kinetic-level dynamics.
//!
//! Brackets are classical: {x, p} = 1. The quantum commutator is iħ times the
//! bracket and is only used by the Fock-space oracle.

mod bopp_check;
mod constraints;
mod derivation;
mod parse;
mod poly;
mod scalar;

pub use bopp_check::{bopp_bracket_check, bopp_matrix_gap, bopp_polynomials, BoppBrackets};
pub use constraints::{
    dirac_bracket, lagrange_multipliers, preservation_residual, primary_constraints, velocities, ConstraintSet,
};
pub use derivation::{
    reduce_to_one_dof, replay, replay_with, Check, Derivation, DiracReport, ReducedHamiltonian, DEFAULT_HAMILTONIAN,
};
pub use parse::{parse_coeff, parse_poly};
pub use poly::{poisson, Exp, PhasePolynomial, Var, VAR_NAMES};
pub use scalar::{Coeff, SymExp, Symbol, N_SYMBOLS, SYMBOLS};
