use super::linalg::{hermitize, max_abs_on, CMat};
use super::operators::{sum_of_squares, FockOperatorSet, QuadraticForm};
use crate::error::{Error, Result};
use crate::nc::NCParams;
use crate::spectra::EffectiveParams;
use crate::trap::TrapConfig;

pub const DUAL_TOLERANCE: f64 = 1e-10;

/// p̂²/2μ + (ω_c/2)(p̂₁x̂₂ − p̂₂x̂₁) + μω_P²x̂²/2 in deformed variables.
pub fn h2_deformed_form(trap: &TrapConfig) -> QuadraticForm {
    let mut q = [[0.0; 4]; 4];
    let kin = 1.0 / (2.0 * trap.mass());
    let pot = trap.mass() * trap.omega_p_sq() / 2.0;
    let rot = trap.omega_c() / 2.0;
    q[0][0] = pot;
    q[1][1] = pot;
    q[2][2] = kin;
    q[3][3] = kin;
    q[2][1] = rot;
    q[3][0] = -rot;
    q
}

/// p²/2M + (G/2M)(p₁x₂ − p₂x₁) + MΩ_P²x²/2 in canonical variables.
pub fn h2_effective_form(ep: &EffectiveParams) -> QuadraticForm {
    let mut q = [[0.0; 4]; 4];
    let kin = 1.0 / (2.0 * ep.mass);
    let pot = ep.m_omega_p_sq / 2.0;
    let rot = ep.coupling / (2.0 * ep.mass);
    q[0][0] = pot;
    q[1][1] = pot;
    q[2][2] = kin;
    q[3][3] = kin;
    q[2][1] = rot;
    q[3][0] = -rot;
    q
}

/// x₁p₂ − x₂p₁ − (ξ²/2ħ)(θp² + ηx²).
pub fn jz_form(nc: &NCParams) -> QuadraticForm {
    let c = nc.xi_sq() / (2.0 * nc.hbar());
    let mut q = [[0.0; 4]; 4];
    q[0][3] = 1.0;
    q[1][2] = -1.0;
    q[0][0] = -c * nc.eta();
    q[1][1] = -c * nc.eta();
    q[2][2] = -c * nc.theta();
    q[3][3] = -c * nc.theta();
    q
}

/// (K₁² + K₂²)/2M with K₁ = p₁ + (G/2)x₂, K₂ = p₂ − (G/2)x₁.
pub fn kinetic_form(ep: &EffectiveParams) -> QuadraticForm {
    let h = ep.coupling / 2.0;
    sum_of_squares(&[[0.0, h, 1.0, 0.0], [-h, 0.0, 0.0, 1.0]], 2.0 * ep.mass)
}

#[derive(Debug, Clone)]
pub struct H2Hat {
    /// Hermitized deformed-variable form.
    pub matrix: CMat,
    /// Hermitized effective-parameter form.
    pub effective: CMat,
    /// Interior max-norm of the difference.
    pub dual_gap: f64,
}

/// Builds Ĥ₂ from the deformed operators and from the effective parameters,
/// failing when the two disagree on the interior.
pub fn build_h2_hat(ops: &FockOperatorSet, trap: &TrapConfig, ep: &EffectiveParams) -> Result<H2Hat> {
    let a = hermitize(&ops.deformed_quadratic(&h2_deformed_form(trap)));
    let b = hermitize(&ops.quadratic(&h2_effective_form(ep)));
    let int = ops.basis().interior();
    let dual_gap = max_abs_on(&(&a - &b), &int, Default::default());
    let scale = max_abs_on(&a, &int, Default::default()).max(1.0);
    if !(dual_gap <= DUAL_TOLERANCE * scale) {
        return Err(Error::Consistency(format!(
            "deformed and effective forms of H2 differ by {dual_gap:e} on the interior"
        )));
    }
    Ok(H2Hat {
        matrix: a,
        effective: b,
        dual_gap,
    })
}

pub fn build_jz_hat(ops: &FockOperatorSet, nc: &NCParams) -> CMat {
    hermitize(&ops.quadratic(&jz_form(nc)))
}

pub fn build_kinetic_hat(ops: &FockOperatorSet, ep: &EffectiveParams) -> CMat {
    hermitize(&ops.quadratic(&kinetic_form(ep)))
}
