//! Spectra and noncommutative-space signals of a trapped ion in crossed
//! electric and magnetic fields.
//!
//! * [`spectra`]: closed-form effective parameters, levels and signals.
//! * [`dirac`]: exact polynomial Poisson/Dirac bracket engine and the
//!   constraint reduction replay.
//! * [`fock`]: truncated two-mode Fock-space oracle.
//! * [`planner`]: experimental sensitivity and rate estimates.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod bopp;
pub mod dirac;
pub mod error;
pub mod exact;
pub mod fock;
pub mod format;
pub mod nc;
pub mod planner;
pub mod spectra;
pub mod trap;
pub mod units;

pub use bopp::{bopp_map, BoppMap};
pub use error::{Error, Result};
pub use nc::{b_eta, c_from, deformed_ladder_coeffs, eta_from_c, xi_factor, LadderCoeffs, NCParams, XiFactor};
pub use spectra::{EffectiveParams, Precision, SpectrumReport};
pub use trap::TrapConfig;
pub use units::{si, UnitMode, UnitSystem, CONSTANTS};
