//! Sensitivity and feasibility arithmetic at the current experimental bounds.

mod rate;

pub use rate::{hard_sphere_sigma, required_current, RateInputs, RatePlan, DEFAULT_SIGMA, TARGET_RATE};

use serde::Serialize;

use crate::error::{domain, Result};
use crate::format::{csv_num, ser, to_json};
use crate::nc::{b_eta, NCParams};
use crate::spectra::{evaluate, jz_star_signal_exact, Inputs};
use crate::trap::TrapConfig;
use crate::units::si;

/// Energy scale bounding √θ: θ/(ħc)² ≤ (10 TeV)⁻².
pub const THETA_BOUND_EV: f64 = 1e13;
/// Momentum scale bounding √η: |√η| ≤ 1 μeV/c.
pub const ETA_BOUND_EV: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundsConfig {
    #[serde(serialize_with = "ser::f64")]
    pub theta_max: f64,
    #[serde(serialize_with = "ser::f64")]
    pub eta_max: f64,
}

pub fn default_bounds() -> BoundsConfig {
    let hbar_c_ev = si::HBAR * si::C_LIGHT / si::EV;
    let p = ETA_BOUND_EV * si::EV / si::C_LIGHT;
    BoundsConfig {
        theta_max: (hbar_c_ev / THETA_BOUND_EV).powi(2),
        eta_max: p * p,
    }
}

impl BoundsConfig {
    pub fn scaled(&self, s: f64) -> Self {
        BoundsConfig {
            theta_max: self.theta_max * s,
            eta_max: self.eta_max * s,
        }
    }

    pub fn nc(&self) -> Result<NCParams> {
        NCParams::new(self.theta_max, self.eta_max, si::HBAR)
    }
}

/// Ratio for the "much greater / much smaller" regime flags.
pub const REGIME_RATIO: f64 = 10.0;
/// Gθ/4ħ is reported negligible below this fraction of η/Għ.
pub const NEGLIGIBLE_FRACTION: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScenarioFlags {
    /// The kinetic gap ħω₀ exceeds the reduced spacing ħω* by the regime ratio.
    pub limit_reached: bool,
    pub b_much_greater_than_b_eta: bool,
    pub theta_term_negligible: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DevTerms {
    /// Gθ/4ħ
    #[serde(serialize_with = "ser::f64")]
    pub theta_term: f64,
    /// η/Għ
    #[serde(serialize_with = "ser::f64")]
    pub eta_term: f64,
    #[serde(serialize_with = "ser::f64")]
    pub dev_star: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScenarioReport {
    #[serde(rename = "B", serialize_with = "ser::f64")]
    pub b_field: f64,
    #[serde(rename = "B_eta", serialize_with = "ser::f64")]
    pub b_eta: f64,
    pub dev_terms: DevTerms,
    #[serde(serialize_with = "ser::f64")]
    pub delta_j0_hbar: f64,
    #[serde(serialize_with = "ser::f64")]
    pub omega_0: f64,
    #[serde(serialize_with = "ser::f64")]
    pub omega_star: f64,
    pub flags: ScenarioFlags,
}

/// Deviation terms and Δ𝒥̂₀* for an SI trap at field `b_field`, with θ and η
/// at the bounds. The effective parameters are evaluated in exact arithmetic.
pub fn scenario(b_field: f64, trap: &TrapConfig, bounds: &BoundsConfig) -> Result<ScenarioReport> {
    if !(b_field > 0.0 && b_field.is_finite()) {
        return domain(format!(
            "scenario needs B > 0, got {b_field}; use the B = 0 signal (jz_tilde_signal) instead"
        ));
    }
    let trap = trap.with_b_field(b_field)?;
    let nc = bounds.nc()?;
    let ep = evaluate(&Inputs::exact(&trap, &nc));
    let star = jz_star_signal_exact(&ep, &nc, 0)?;
    let bd = star.signal.breakdown.expect("star signal carries its breakdown");
    let epf = ep.to_f64();
    let omega_0 = epf.coupling / epf.mass;
    let omega_star = epf.stiffness / epf.coupling;
    let b_eta = b_eta(nc.eta(), trap.charge(), nc.hbar())?;
    Ok(ScenarioReport {
        b_field,
        b_eta,
        dev_terms: DevTerms {
            theta_term: bd.theta_term,
            eta_term: bd.eta_term,
            dev_star: star.signal.dev,
        },
        delta_j0_hbar: star.delta_j0_hbar,
        omega_0,
        omega_star,
        flags: ScenarioFlags {
            limit_reached: omega_0 >= REGIME_RATIO * omega_star,
            b_much_greater_than_b_eta: b_field >= REGIME_RATIO * b_eta,
            theta_term_negligible: bd.theta_term < NEGLIGIBLE_FRACTION * bd.eta_term,
        },
    })
}

/// 10⁻⁶ × (1 eV per 1 m/s), in kg·m/s.
pub const DEFAULT_P_BAR: f64 = 1e-6 * si::EV;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NonlimitEstimates {
    #[serde(serialize_with = "ser::f64")]
    pub p_bar: f64,
    #[serde(serialize_with = "ser::f64")]
    pub x_bar: f64,
    /// θp̄²/ħ², in units of ħ.
    #[serde(serialize_with = "ser::f64")]
    pub theta_term: f64,
    /// ηx̄²/ħ², in units of ħ.
    #[serde(serialize_with = "ser::f64")]
    pub eta_term: f64,
}

/// x̄ = ħ/p̄; returns θp̄²/ħ² and ηx̄²/ħ².
pub fn nonlimit_estimates(p_bar: f64, bounds: &BoundsConfig) -> Result<NonlimitEstimates> {
    if !(p_bar > 0.0 && p_bar.is_finite()) {
        return domain(format!("p_bar must be positive, got {p_bar}"));
    }
    let hbar = si::HBAR;
    let x_bar = hbar / p_bar;
    Ok(NonlimitEstimates {
        p_bar,
        x_bar,
        theta_term: bounds.theta_max * p_bar * p_bar / (hbar * hbar),
        eta_term: bounds.eta_max * x_bar * x_bar / (hbar * hbar),
    })
}

/// p̄ = A·amu·v̄.
pub fn nonlimit_from_velocity(mass_number: f64, v_bar: f64, bounds: &BoundsConfig) -> Result<NonlimitEstimates> {
    if !(mass_number > 0.0) {
        return domain(format!("mass number must be positive, got {mass_number}"));
    }
    nonlimit_estimates(mass_number * si::AMU * v_bar, bounds)
}

/// Order-of-magnitude distance |round(log₁₀ a) − round(log₁₀ b)|.
pub fn order_distance(a: f64, b: f64) -> i32 {
    (a.abs().log10().round() - b.abs().log10().round()).abs() as i32
}

/// Values quoted in the literature for comparison with the computed ones.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuotedValues {
    #[serde(serialize_with = "ser::f64")]
    pub theta_term_star: f64,
    #[serde(serialize_with = "ser::f64")]
    pub nonlimit_theta_term: f64,
    #[serde(serialize_with = "ser::f64")]
    pub nonlimit_eta_term: f64,
    #[serde(serialize_with = "ser::f64")]
    pub rate: f64,
}

pub const QUOTED: QuotedValues = QuotedValues {
    theta_term_star: 1e-36,
    nonlimit_theta_term: 1e-20,
    nonlimit_eta_term: 1e-17,
    rate: TARGET_RATE,
};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SensitivityInputs {
    #[serde(serialize_with = "ser::f64")]
    pub mass_number: f64,
    #[serde(serialize_with = "ser::f64")]
    pub charge_state: f64,
    #[serde(serialize_with = "ser::f64")]
    pub omega_rho: f64,
    #[serde(serialize_with = "ser::f64")]
    pub p_bar: f64,
}

impl Default for SensitivityInputs {
    fn default() -> Self {
        SensitivityInputs {
            mass_number: 100.0,
            charge_state: 1.0,
            omega_rho: 1e6,
            p_bar: DEFAULT_P_BAR,
        }
    }
}

impl SensitivityInputs {
    pub fn trap(&self) -> Result<TrapConfig> {
        TrapConfig::si_ion(self.mass_number, self.charge_state, 0.0, self.omega_rho, 0.0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SensitivityReport {
    pub inputs: SensitivityInputs,
    pub bounds: BoundsConfig,
    pub scenarios: Vec<ScenarioReport>,
    pub nonlimit: NonlimitEstimates,
    pub rate_plan: RatePlan,
    pub quoted: QuotedValues,
}

pub const DEFAULT_FIELDS: [f64; 2] = [1e-9, 1e-12];

pub const SCENARIO_CSV_HEADER: &str =
    "B,B_eta,theta_term,eta_term,dev_star,delta_J0_hbar,limit_reached,b_much_greater_than_b_eta,theta_term_negligible";

pub fn sensitivity(
    inputs: &SensitivityInputs,
    bounds: &BoundsConfig,
    fields: &[f64],
    rate: &RateInputs,
) -> Result<SensitivityReport> {
    let trap = inputs.trap()?;
    let scenarios = fields
        .iter()
        .map(|&b| scenario(b, &trap, bounds))
        .collect::<Result<Vec<_>>>()?;
    Ok(SensitivityReport {
        inputs: *inputs,
        bounds: *bounds,
        scenarios,
        nonlimit: nonlimit_estimates(inputs.p_bar, bounds)?,
        rate_plan: rate.plan()?,
        quoted: QUOTED,
    })
}

impl SensitivityReport {
    pub fn to_json(&self) -> String {
        to_json(self)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(SCENARIO_CSV_HEADER);
        out.push('\n');
        for s in &self.scenarios {
            let nums = [
                s.b_field,
                s.b_eta,
                s.dev_terms.theta_term,
                s.dev_terms.eta_term,
                s.dev_terms.dev_star,
                s.delta_j0_hbar,
            ];
            let mut row: Vec<String> = nums.iter().map(|&x| csv_num(x)).collect();
            row.extend(
                [
                    s.flags.limit_reached,
                    s.flags.b_much_greater_than_b_eta,
                    s.flags.theta_term_negligible,
                ]
                .iter()
                .map(|b| b.to_string()),
            );
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}
