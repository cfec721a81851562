//! Shared fixtures for the benchmarks.

use nctrap_core::{NCParams, TrapConfig};

/// Trap-unit example: ω_c = 0.5, θ = 0.1, η = 0.04.
pub fn example() -> (TrapConfig, NCParams) {
    (
        TrapConfig::trap_units(0.5).expect("valid trap"),
        NCParams::new(0.1, 0.04, 1.0).expect("valid parameters"),
    )
}
