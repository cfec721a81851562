use serde::Serialize;

use crate::error::{domain, Result};
use crate::units::{si, Quantity, UnitSystem};

/// An ion in the combined trap: mass μ, charge q, axial field B and the radial
/// and axial trap frequencies. All values share one unit system.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrapConfig {
    mass: f64,
    charge: f64,
    b_field: f64,
    omega_rho: f64,
    omega_z: f64,
}

impl TrapConfig {
    pub fn new(mass: f64, charge: f64, b_field: f64, omega_rho: f64, omega_z: f64) -> Result<Self> {
        let positive = [("mass", mass), ("charge", charge), ("omega_rho", omega_rho)];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return domain(format!("{name} must be finite and positive, got {v}"));
            }
        }
        if !(b_field.is_finite() && b_field >= 0.0) {
            return domain(format!("B must be finite and non-negative, got {b_field}"));
        }
        if !(omega_z.is_finite() && omega_z >= 0.0) {
            return domain(format!("omega_z must be finite and non-negative, got {omega_z}"));
        }
        Ok(TrapConfig {
            mass,
            charge,
            b_field,
            omega_rho,
            omega_z,
        })
    }

    /// Dimensionless trap with μ = q = ω_ρ = 1, where B equals ω_c/ω_ρ.
    pub fn trap_units(omega_c: f64) -> Result<Self> {
        Self::new(1.0, 1.0, omega_c, 1.0, 0.0)
    }

    /// SI trap for an ion of mass number `mass_number` and charge state `charge_state`.
    pub fn si_ion(mass_number: f64, charge_state: f64, b_tesla: f64, omega_rho: f64, omega_z: f64) -> Result<Self> {
        Self::new(
            mass_number * si::AMU,
            charge_state * si::E_CHARGE,
            b_tesla,
            omega_rho,
            omega_z,
        )
    }

    /// Re-express an SI trap in `units`.
    pub fn convert_from_si(&self, units: &UnitSystem) -> Result<Self> {
        Self::new(
            units.from_si(Quantity::Mass, self.mass),
            units.from_si(Quantity::Charge, self.charge),
            units.from_si(Quantity::MagneticField, self.b_field),
            units.from_si(Quantity::Frequency, self.omega_rho),
            units.from_si(Quantity::Frequency, self.omega_z),
        )
    }

    pub fn with_b_field(&self, b_field: f64) -> Result<Self> {
        Self::new(self.mass, self.charge, b_field, self.omega_rho, self.omega_z)
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }
    pub fn charge(&self) -> f64 {
        self.charge
    }
    pub fn b_field(&self) -> f64 {
        self.b_field
    }
    pub fn omega_rho(&self) -> f64 {
        self.omega_rho
    }
    pub fn omega_z(&self) -> f64 {
        self.omega_z
    }

    /// κ = μω_ρ².
    pub fn kappa(&self) -> f64 {
        self.mass * self.omega_rho * self.omega_rho
    }

    /// ω_c = qB/μ.
    pub fn omega_c(&self) -> f64 {
        self.charge * self.b_field / self.mass
    }

    pub fn omega_p_sq(&self) -> f64 {
        let wc = self.omega_c();
        self.omega_rho * self.omega_rho + wc * wc / 4.0
    }

    /// ω_P = (ω_ρ² + ω_c²/4)^(1/2).
    pub fn omega_p(&self) -> f64 {
        self.omega_rho.hypot(self.omega_c() / 2.0)
    }
}
