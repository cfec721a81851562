use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::format::ser;

pub const DEFAULT_SIGMA: f64 = 1e-20;
pub const TARGET_RATE: f64 = 1e-5;
/// n·σ/A must stay below this for single scattering.
pub const THIN_TARGET_LIMIT: f64 = 1e-2;

/// σ = π(2r)² for two hard spheres of radius r.
pub fn hard_sphere_sigma(radius: f64) -> f64 {
    std::f64::consts::PI * (2.0 * radius).powi(2)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RateInputs {
    pub sigma_total: f64,
    /// Acceptance of one detector as a fraction of 4π.
    pub solid_angle_fraction: f64,
    pub n_trapped: f64,
    pub beam_current: f64,
    pub beam_area: f64,
    pub events_needed: f64,
}

impl Default for RateInputs {
    fn default() -> Self {
        RateInputs {
            sigma_total: DEFAULT_SIGMA,
            solid_angle_fraction: 0.01,
            n_trapped: 1e10,
            beam_current: 1e9,
            beam_area: 1.0,
            events_needed: 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RatePlan {
    #[serde(serialize_with = "ser::f64")]
    pub sigma_total: f64,
    #[serde(serialize_with = "ser::f64")]
    pub solid_angle_fraction: f64,
    #[serde(serialize_with = "ser::f64")]
    pub coincidence_efficiency: f64,
    #[serde(serialize_with = "ser::f64")]
    pub n_trapped: f64,
    #[serde(serialize_with = "ser::f64")]
    pub beam_current: f64,
    #[serde(serialize_with = "ser::f64")]
    pub beam_area: f64,
    #[serde(serialize_with = "ser::f64")]
    pub thin_target: f64,
    #[serde(serialize_with = "ser::f64")]
    pub rate: f64,
    #[serde(serialize_with = "ser::f64")]
    pub events_needed: f64,
    #[serde(serialize_with = "ser::f64")]
    pub runtime_for_spectrum: f64,
}

impl RateInputs {
    fn validate(&self) -> Result<()> {
        let fields = [
            ("sigma_total", self.sigma_total),
            ("solid_angle_fraction", self.solid_angle_fraction),
            ("n_trapped", self.n_trapped),
            ("beam_current", self.beam_current),
            ("beam_area", self.beam_area),
            ("events_needed", self.events_needed),
        ];
        for (name, v) in fields {
            if !(v > 0.0 && v.is_finite()) {
                return domain(format!("{name} must be positive, got {v}"));
            }
        }
        if self.solid_angle_fraction > 1.0 {
            return domain("solid_angle_fraction must not exceed 1");
        }
        let thin = self.thin_target();
        if !(thin < THIN_TARGET_LIMIT) {
            return Err(Error::ModelValidity(format!(
                "n*sigma/A = {thin:e} is not thin (limit {THIN_TARGET_LIMIT:e})"
            )));
        }
        Ok(())
    }

    pub fn thin_target(&self) -> f64 {
        self.n_trapped * self.sigma_total / self.beam_area
    }

    /// Both fragments detected: the single-detector acceptance squared.
    pub fn coincidence_efficiency(&self) -> f64 {
        self.solid_angle_fraction * self.solid_angle_fraction
    }

    /// rate = I · (N σ / A) · ε.
    pub fn plan(&self) -> Result<RatePlan> {
        self.validate()?;
        let eff = self.coincidence_efficiency();
        let rate = self.beam_current * self.thin_target() * eff;
        Ok(RatePlan {
            sigma_total: self.sigma_total,
            solid_angle_fraction: self.solid_angle_fraction,
            coincidence_efficiency: eff,
            n_trapped: self.n_trapped,
            beam_current: self.beam_current,
            beam_area: self.beam_area,
            thin_target: self.thin_target(),
            rate,
            events_needed: self.events_needed,
            runtime_for_spectrum: self.events_needed / rate,
        })
    }
}

/// Beam current giving `target_rate` with the other inputs fixed.
pub fn required_current(inputs: &RateInputs, target_rate: f64) -> Result<f64> {
    if !(target_rate > 0.0 && target_rate.is_finite()) {
        return domain(format!("target rate must be positive, got {target_rate}"));
    }
    inputs.validate()?;
    Ok(target_rate / (inputs.thin_target() * inputs.coincidence_efficiency()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_plan_is_one_per_day() {
        let p = RateInputs::default().plan().unwrap();
        assert!((p.coincidence_efficiency - 1e-4).abs() < 1e-20);
        assert!((p.rate / TARGET_RATE - 1.0).abs() < 1e-12, "{}", p.rate);
        assert!(p.runtime_for_spectrum > 86_400.0 && p.runtime_for_spectrum < 2.0 * 86_400.0);
    }

    #[test]
    fn linearity() {
        let base = RateInputs::default();
        let r0 = base.plan().unwrap().rate;
        let twice_i = RateInputs {
            beam_current: 2e9,
            ..base
        }
        .plan()
        .unwrap()
        .rate;
        let twice_a = RateInputs { beam_area: 2.0, ..base }.plan().unwrap().rate;
        assert!((twice_i / r0 - 2.0).abs() < 1e-12);
        assert!((twice_a / r0 - 0.5).abs() < 1e-12);
        let i = required_current(&base, 2e-5).unwrap();
        assert!((i / 2e9 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn validity() {
        let thick = RateInputs {
            beam_area: 1e-12,
            ..Default::default()
        };
        assert!(matches!(thick.plan(), Err(Error::ModelValidity(_))));
        let neg = RateInputs {
            n_trapped: -1.0,
            ..Default::default()
        };
        assert!(neg.plan().is_err());
        let s = hard_sphere_sigma(1e-10);
        assert!((s / 1.2566370614359173e-19 - 1.0).abs() < 1e-12);
    }
}
