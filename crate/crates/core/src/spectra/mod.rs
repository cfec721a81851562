//! Closed-form spectra: effective parameters, kinetic and reduced levels,
//! normal modes, and the angular-momentum signals.

mod effective;
mod reduced;
mod report;
mod signal;

pub use effective::{effective_params, effective_params_with, evaluate, Effective, EffectiveParams, Inputs, Precision};
pub use reduced::{chiral_frequencies, kinetic_levels, reduced_spectrum, Chiral, KineticLevels, ReducedSystem};
pub use report::{LevelRow, SpectrumReport, CSV_HEADER};
pub use signal::{
    dev_star_terms, dev_tilde_c_form, dev_tilde_exact, dev_tilde_ratio, jz_star_signal, jz_star_signal_exact,
    jz_tilde_signal, tilde_limit, AngularSignal, Breakdown, LimitMode, SignalKind, StarSignal, TildeParams,
};
