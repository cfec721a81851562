//! Effective mass, coupling, frequency and stiffness of the deformed planar
//! Hamiltonian, exact in θ and η.
//!
//! With u = θη/4ħ², δ = μω_cθ/4ħ, s = μκθ²/4ħ² and D = (1+δ)² + s the
//! definitions reduce to
//!
//! ```text
//! M = μ(1+u)/D
//! G = (2c₁c₂ + μκθ/ħ)/D
//! K = κ(1−u)²/((1+u)D)
//! MΩ_P² = (c₂²/μ + κ)/(1+u)
//! ```
//!
//! and the deviations from the commutative values are expanded so that no
//! near-equal totals are subtracted.

use num_rational::BigRational;
use serde::Serialize;

use crate::exact::Field;
use crate::nc::NCParams;
use crate::trap::TrapConfig;

/// Which arithmetic evaluates the closed forms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Precision {
    #[default]
    Double,
    /// Exact rational evaluation of the formulas, rounded once at the end.
    Extended,
}

impl std::str::FromStr for Precision {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim().to_ascii_lowercase().as_str() {
            "double" => Ok(Precision::Double),
            "extended" => Ok(Precision::Extended),
            other => Err(format!("unknown precision {other:?} (expected double|extended)")),
        }
    }
}

/// Raw model inputs in a single arithmetic.
#[derive(Debug, Clone, PartialEq)]
pub struct Inputs<R> {
    pub mass: R,
    pub omega_rho_sq: R,
    pub omega_c: R,
    pub theta: R,
    pub eta: R,
    pub hbar: R,
}

impl Inputs<f64> {
    pub fn new(trap: &TrapConfig, nc: &NCParams) -> Self {
        Inputs {
            mass: trap.mass(),
            omega_rho_sq: trap.omega_rho() * trap.omega_rho(),
            omega_c: trap.omega_c(),
            theta: nc.theta(),
            eta: nc.eta(),
            hbar: nc.hbar(),
        }
    }
}

impl Inputs<BigRational> {
    /// Exact image of the floating-point configuration (ω_c = qB/μ and ω_ρ²
    /// formed in rationals).
    pub fn exact(trap: &TrapConfig, nc: &NCParams) -> Self {
        let r = <BigRational as Field>::from_f64;
        let mass = r(trap.mass());
        let omega_rho = r(trap.omega_rho());
        Inputs {
            omega_c: r(trap.charge()) * r(trap.b_field()) / mass.clone(),
            omega_rho_sq: omega_rho.clone() * omega_rho,
            mass,
            theta: r(nc.theta()),
            eta: r(nc.eta()),
            hbar: r(nc.hbar()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Effective<R> {
    pub mass: R,
    pub coupling: R,
    pub m_omega_p_sq: R,
    pub stiffness: R,
    pub c1: R,
    pub c2: R,
    pub xi_sq: R,
    /// M − μ
    pub dev_mass: R,
    /// G − μω_c
    pub dev_coupling: R,
    /// K − κ
    pub dev_stiffness: R,
    pub hbar: R,
}

/// Double-precision effective parameters.
pub type EffectiveParams = Effective<f64>;

pub fn evaluate<R: Field>(inp: &Inputs<R>) -> Effective<R> {
    let one = R::one();
    let two = R::from_i64(2);
    let four = R::from_i64(4);
    let mu = inp.mass.clone();
    let hbar = inp.hbar.clone();
    let theta = inp.theta.clone();
    let eta = inp.eta.clone();
    let kappa = mu.clone() * inp.omega_rho_sq.clone();
    let hbar_sq = hbar.sq();

    let u = theta.clone() * eta.clone() / (four.clone() * hbar_sq.clone());
    let one_u = one.clone() + u.clone();
    let delta = mu.clone() * inp.omega_c.clone() * theta.clone() / (four.clone() * hbar.clone());
    let s = mu.clone() * kappa.clone() * theta.sq() / (four.clone() * hbar_sq);
    // D - 1, kept separate from the leading 1
    let e = two.clone() * delta.clone() + delta.sq() + s.clone();
    let d = one.clone() + e.clone();

    let c1 = one.clone() + delta.clone();
    let c2_0 = mu.clone() * inp.omega_c.clone() / two.clone();
    let b = eta.clone() / (two.clone() * hbar.clone());
    let c2 = c2_0.clone() + b.clone();

    let mass = mu.clone() * one_u.clone() / d.clone();
    let dev_mass = mu.clone() * (u.clone() - e.clone()) / d.clone();

    let twist = mu.clone() * kappa.clone() * theta / hbar;
    let coupling = (two.clone() * c1.clone() * c2.clone() + twist.clone()) / d.clone();
    let dev_coupling = (two.clone() * b.clone() - two.clone() * delta.clone() * c2_0.clone()
        + two.clone() * delta.clone() * b
        + twist
        - two.clone() * c2_0.clone() * delta.sq()
        - two * c2_0 * s)
        / d.clone();

    let one_minus_u = one.clone() - u.clone();
    let stiffness = kappa.clone() * one_minus_u.sq() / (one_u.clone() * d.clone());
    let three = R::from_i64(3);
    let dev_stiffness = kappa.clone() * (u.sq() - three * u.clone() - e * one_u.clone()) / (one_u.clone() * d);

    let m_omega_p_sq = (c2.sq() / mu + kappa) / one_u.clone();

    Effective {
        mass,
        coupling,
        m_omega_p_sq,
        stiffness,
        c1,
        c2,
        xi_sq: one / one_u,
        dev_mass,
        dev_coupling,
        dev_stiffness,
        hbar: inp.hbar.clone(),
    }
}

impl<R: Field> Effective<R> {
    pub fn to_f64(&self) -> EffectiveParams {
        Effective {
            mass: self.mass.to_f64(),
            coupling: self.coupling.to_f64(),
            m_omega_p_sq: self.m_omega_p_sq.to_f64(),
            stiffness: self.stiffness.to_f64(),
            c1: self.c1.to_f64(),
            c2: self.c2.to_f64(),
            xi_sq: self.xi_sq.to_f64(),
            dev_mass: self.dev_mass.to_f64(),
            dev_coupling: self.dev_coupling.to_f64(),
            dev_stiffness: self.dev_stiffness.to_f64(),
            hbar: self.hbar.to_f64(),
        }
    }

    /// K − (MΩ_P² − G²/4M); identically zero.
    pub fn identity_residual(&self) -> R {
        let four = R::from_i64(4);
        self.stiffness.clone() - (self.m_omega_p_sq.clone() - self.coupling.sq() / (four * self.mass.clone()))
    }

    pub fn omega_p_sq(&self) -> R {
        self.m_omega_p_sq.clone() / self.mass.clone()
    }
}

impl EffectiveParams {
    pub fn omega_p(&self) -> f64 {
        self.omega_p_sq().sqrt()
    }
}

pub fn effective_params(trap: &TrapConfig, nc: &NCParams) -> EffectiveParams {
    evaluate(&Inputs::new(trap, nc))
}

pub fn effective_params_with(trap: &TrapConfig, nc: &NCParams, precision: Precision) -> EffectiveParams {
    match precision {
        Precision::Double => effective_params(trap, nc),
        Precision::Extended => evaluate(&Inputs::exact(trap, nc)).to_f64(),
    }
}
