//! Physical constants and the two unit systems used throughout the crate.
//!
//! Internal formulas are written in SI form (ω_c = qB/μ, B_η = η/(qħ)). The
//! dimensionless trap system sets ħ = μ = ω_ρ = 1 and measures charge in units
//! of the ion charge, so every SI formula holds unchanged with those values.

use serde::Serialize;

/// CODATA 2018 values. `hbar` is rounded; the others are exact by definition
/// of the SI except `amu`.
pub mod si {
    pub const HBAR: f64 = 1.054_571_817e-34;
    pub const C_LIGHT: f64 = 299_792_458.0;
    pub const E_CHARGE: f64 = 1.602_176_634e-19;
    pub const AMU: f64 = 1.660_539_066_60e-27;
    pub const EV: f64 = 1.602_176_634e-19;

    pub(crate) const HBAR_STR: &str = "1.054571817e-34";
    pub(crate) const C_LIGHT_STR: &str = "299792458";
    pub(crate) const E_CHARGE_STR: &str = "1.602176634e-19";
    pub(crate) const AMU_STR: &str = "1.66053906660e-27";
    pub(crate) const EV_STR: &str = "1.602176634e-19";
}

/// The constants table, values as decimal strings so no digits are lost.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConstantsTable {
    pub hbar_si: &'static str,
    pub c_light_si: &'static str,
    pub e_charge_si: &'static str,
    pub amu_si: &'static str,
    pub ev_si: &'static str,
}

pub const CONSTANTS: ConstantsTable = ConstantsTable {
    hbar_si: si::HBAR_STR,
    c_light_si: si::C_LIGHT_STR,
    e_charge_si: si::E_CHARGE_STR,
    amu_si: si::AMU_STR,
    ev_si: si::EV_STR,
};

impl ConstantsTable {
    /// `constants.json` contents.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("constants table serializes")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum UnitMode {
    Si,
    TrapUnits,
}

/// Dimension of a quantity, used to pick the conversion scale.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quantity {
    Mass,
    Length,
    Time,
    Frequency,
    Momentum,
    Action,
    Energy,
    /// θ, m².
    Area,
    /// η, (kg·m/s)².
    MomentumSq,
    Charge,
    MagneticField,
    /// The constant relating η = θ/c², dimension s/kg.
    CConst,
    /// κ, K: N/m.
    Stiffness,
    /// G: kg/s.
    Coupling,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitSystem {
    mode: UnitMode,
    mass: f64,
    omega: f64,
    charge: f64,
}

impl UnitSystem {
    pub const fn si() -> Self {
        UnitSystem {
            mode: UnitMode::Si,
            mass: 1.0,
            omega: 1.0,
            charge: 1.0,
        }
    }

    /// Dimensionless system anchored on an ion of mass `mass_kg`, charge
    /// `charge_c` and radial trap frequency `omega_rho` (rad/s).
    pub fn trap(mass_kg: f64, omega_rho: f64, charge_c: f64) -> crate::Result<Self> {
        for (name, v) in [("mass", mass_kg), ("omega_rho", omega_rho), ("charge", charge_c)] {
            if !(v.is_finite() && v > 0.0) {
                return crate::error::domain(format!("trap unit anchor {name} must be positive, got {v}"));
            }
        }
        Ok(UnitSystem {
            mode: UnitMode::TrapUnits,
            mass: mass_kg,
            omega: omega_rho,
            charge: charge_c,
        })
    }

    pub fn mode(&self) -> UnitMode {
        self.mode
    }

    /// ħ expressed in this system.
    pub fn hbar(&self) -> f64 {
        match self.mode {
            UnitMode::Si => si::HBAR,
            UnitMode::TrapUnits => 1.0,
        }
    }

    /// SI value of one unit of `q` in this system.
    pub fn scale(&self, q: Quantity) -> f64 {
        if self.mode == UnitMode::Si {
            return 1.0;
        }
        let (m, w, e, hbar) = (self.mass, self.omega, self.charge, si::HBAR);
        let length = (hbar / (m * w)).sqrt();
        match q {
            Quantity::Mass => m,
            Quantity::Length => length,
            Quantity::Time => 1.0 / w,
            Quantity::Frequency => w,
            Quantity::Momentum => (hbar * m * w).sqrt(),
            Quantity::Action => hbar,
            Quantity::Energy => hbar * w,
            Quantity::Area => hbar / (m * w),
            Quantity::MomentumSq => hbar * m * w,
            Quantity::Charge => e,
            Quantity::MagneticField => m * w / e,
            Quantity::CConst => 1.0 / (m * w),
            Quantity::Stiffness => m * w * w,
            Quantity::Coupling => m * w,
        }
    }

    /// Convert a value expressed in this system to SI.
    pub fn to_si(&self, q: Quantity, value: f64) -> f64 {
        value * self.scale(q)
    }

    /// Convert an SI value into this system.
    pub fn from_si(&self, q: Quantity, value: f64) -> f64 {
        value / self.scale(q)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const ALL: [Quantity; 14] = [
        Quantity::Mass,
        Quantity::Length,
        Quantity::Time,
        Quantity::Frequency,
        Quantity::Momentum,
        Quantity::Action,
        Quantity::Energy,
        Quantity::Area,
        Quantity::MomentumSq,
        Quantity::Charge,
        Quantity::MagneticField,
        Quantity::CConst,
        Quantity::Stiffness,
        Quantity::Coupling,
    ];

    #[test]
    fn constants_positive() {
        for c in [si::HBAR, si::C_LIGHT, si::E_CHARGE, si::AMU, si::EV] {
            assert!(c > 0.0);
        }
        // strings and floats describe the same numbers
        assert_eq!(CONSTANTS.hbar_si.parse::<f64>().unwrap(), si::HBAR);
        assert_eq!(CONSTANTS.amu_si.parse::<f64>().unwrap(), si::AMU);
        assert_eq!(CONSTANTS.c_light_si.parse::<f64>().unwrap(), si::C_LIGHT);
    }

    #[test]
    fn constants_json_keys() {
        let v: serde_json::Value = serde_json::from_str(&CONSTANTS.to_json()).unwrap();
        for key in ["hbar_si", "c_light_si", "e_charge_si", "amu_si", "ev_si"] {
            assert!(v[key].is_string(), "{key}");
        }
    }

    #[test]
    fn trap_round_trip() {
        let units = UnitSystem::trap(100.0 * si::AMU, 2.0 * std::f64::consts::PI * 1e5, si::E_CHARGE).unwrap();
        let samples = [3.89e-40, 2.85e-67, 1e-9, 7.3, 1.0e-25, 42.0e3];
        for q in ALL {
            for &v in &samples {
                let back = units.to_si(q, units.from_si(q, v));
                assert!(((back - v) / v).abs() < 1e-12, "{q:?} {v} -> {back}");
            }
        }
    }

    #[test]
    fn trap_units_have_unit_anchors() {
        let mass = 40.0 * si::AMU;
        let units = UnitSystem::trap(mass, 1.3e6, si::E_CHARGE).unwrap();
        assert_eq!(units.hbar(), 1.0);
        assert!((units.from_si(Quantity::Mass, mass) - 1.0).abs() < 1e-15);
        assert!((units.from_si(Quantity::Frequency, 1.3e6) - 1.0).abs() < 1e-15);
        assert!((units.from_si(Quantity::Action, si::HBAR) - 1.0).abs() < 1e-15);
        // ω_c = qB/μ in trap units equals B measured in μω_ρ/q
        let b = 1e-3;
        let wc_si = si::E_CHARGE * b / mass;
        let wc_trap = units.from_si(Quantity::Frequency, wc_si);
        assert!((wc_trap - units.from_si(Quantity::MagneticField, b)).abs() < 1e-12 * wc_trap);
    }

    #[test]
    fn rejects_bad_anchor() {
        assert!(UnitSystem::trap(0.0, 1.0, 1.0).is_err());
        assert!(UnitSystem::trap(1.0, f64::NAN, 1.0).is_err());
    }
}
