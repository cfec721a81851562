//! Run configuration: a single JSON document, overridable with dotted paths.
//!
//! Missing sections fall back to defaults chosen by the unit system. In trap
//! units (the default) ħ = 1 and the trap keys are `mass`, `charge`, `B`,
//! `omega_rho`, `omega_z`. In SI the keys are `mass_amu` or `mass_kg`,
//! `charge_e`, `B_tesla`, `omega_rho`, `omega_z`.

use std::path::{Path, PathBuf};

use serde::Deserialize;
use serde_json::{Map, Value};

use nctrap_core::fock::OracleTolerances;
use nctrap_core::planner::{
    default_bounds, BoundsConfig, RateInputs, SensitivityInputs, DEFAULT_FIELDS, DEFAULT_P_BAR,
};
use nctrap_core::{si, NCParams, Precision, TrapConfig, UnitMode};

use crate::error::Failure;

pub const PRECISION_ENV: &str = "NCTRAP_PRECISION";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum UnitChoice {
    Trap,
    Si,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrapSection {
    pub mass: Option<f64>,
    pub charge: Option<f64>,
    #[serde(rename = "B")]
    pub b: Option<f64>,
    pub mass_amu: Option<f64>,
    pub mass_kg: Option<f64>,
    pub charge_e: Option<f64>,
    #[serde(rename = "B_tesla")]
    pub b_tesla: Option<f64>,
    pub omega_rho: Option<f64>,
    pub omega_z: Option<f64>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NcSection {
    pub theta: Option<f64>,
    pub eta: Option<f64>,
    pub c_const: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SpectraSection {
    pub n_max: usize,
}

impl Default for SpectraSection {
    fn default() -> Self {
        SpectraSection { n_max: 10 }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OracleSection {
    pub n_per_mode: usize,
    pub levels: usize,
    pub tolerances: OracleTolerances,
}

impl Default for OracleSection {
    fn default() -> Self {
        OracleSection {
            n_per_mode: 30,
            levels: 10,
            tolerances: OracleTolerances::default(),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SensitivitySection {
    pub fields: Vec<f64>,
    pub mass_number: f64,
    pub charge_state: f64,
    pub omega_rho: f64,
    pub p_bar: f64,
    pub theta_max: Option<f64>,
    pub eta_max: Option<f64>,
    pub rate: RateInputs,
}

impl Default for SensitivitySection {
    fn default() -> Self {
        let inputs = SensitivityInputs::default();
        SensitivitySection {
            fields: DEFAULT_FIELDS.to_vec(),
            mass_number: inputs.mass_number,
            charge_state: inputs.charge_state,
            omega_rho: inputs.omega_rho,
            p_bar: DEFAULT_P_BAR,
            theta_max: None,
            eta_max: None,
            rate: RateInputs::default(),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LogRange {
    pub start: f64,
    pub stop: f64,
    pub points: usize,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    pub path: String,
    pub values: Option<Vec<f64>>,
    pub log_range: Option<LogRange>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    pub format: Option<Format>,
    pub path: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub unit_system: Option<UnitChoice>,
    pub precision: Option<String>,
    #[serde(default)]
    pub trap: TrapSection,
    #[serde(default)]
    pub nc: NcSection,
    #[serde(default)]
    pub spectra: SpectraSection,
    #[serde(default)]
    pub oracle: OracleSection,
    #[serde(default)]
    pub sensitivity: SensitivitySection,
    pub sweep: Option<SweepSection>,
    #[serde(default)]
    pub output: OutputSection,
}

/// Physical inputs after defaults and unit handling.
#[derive(Debug, Clone, Copy)]
pub struct Model {
    pub trap: TrapConfig,
    pub nc: NCParams,
    pub units: UnitMode,
}

fn config_err(msg: impl Into<String>) -> Failure {
    Failure::Config(msg.into())
}

/// Reads the config file (or an empty document) and applies `--set` overrides.
pub fn load_value(path: Option<&Path>, sets: &[String]) -> Result<Value, Failure> {
    let mut value = match path {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| Failure::Io(format!("{}: {e}", p.display())))?;
            serde_json::from_str(&text).map_err(|e| config_err(format!("{}: {e}", p.display())))?
        }
        None => Value::Object(Map::new()),
    };
    if !value.is_object() {
        return Err(config_err("config root must be a JSON object"));
    }
    for s in sets {
        let (key, raw) = s
            .split_once('=')
            .ok_or_else(|| config_err(format!("--set expects key=value, got {s:?}")))?;
        let v = serde_json::from_str(raw.trim()).unwrap_or_else(|_| Value::String(raw.to_string()));
        set_path(&mut value, key.trim(), v)?;
    }
    Ok(value)
}

/// Sets a dotted path, creating intermediate objects. Setting one of
/// `nc.eta` / `nc.c_const` drops the other, and `nc.c_sq` is shorthand for
/// `nc.c_const = sqrt(value)`.
pub fn set_path(root: &mut Value, path: &str, value: Value) -> Result<(), Failure> {
    let (path, value) = if path == "nc.c_sq" {
        let c_sq = value
            .as_f64()
            .ok_or_else(|| config_err(format!("nc.c_sq must be a number, got {value}")))?;
        (
            "nc.c_const",
            serde_json::Number::from_f64(c_sq.sqrt())
                .map(Value::Number)
                .unwrap_or(Value::Null),
        )
    } else {
        (path, value)
    };
    let keys: Vec<&str> = path.split('.').collect();
    if keys.iter().any(|k| k.is_empty()) {
        return Err(config_err(format!("malformed path {path:?}")));
    }
    let mut node = root;
    for k in &keys[..keys.len() - 1] {
        let obj = node
            .as_object_mut()
            .ok_or_else(|| config_err(format!("{path}: {k} is not inside an object")))?;
        node = obj.entry(k.to_string()).or_insert_with(|| Value::Object(Map::new()));
    }
    let obj = node
        .as_object_mut()
        .ok_or_else(|| config_err(format!("{path}: parent is not an object")))?;
    match path {
        "nc.eta" => {
            obj.remove("c_const");
        }
        "nc.c_const" => {
            obj.remove("eta");
        }
        _ => {}
    }
    obj.insert(keys[keys.len() - 1].to_string(), value);
    Ok(())
}

impl RunConfig {
    pub fn from_value(value: &Value) -> Result<Self, Failure> {
        let cfg: RunConfig = serde_json::from_value(value.clone()).map_err(|e| config_err(e.to_string()))?;
        if let Some(s) = &cfg.sweep {
            s.values()?;
        }
        Ok(cfg)
    }

    pub fn units(&self) -> UnitChoice {
        self.unit_system.unwrap_or(UnitChoice::Trap)
    }

    /// Config value, overridden by `NCTRAP_PRECISION` when set.
    pub fn precision(&self) -> Result<Precision, Failure> {
        let raw = match std::env::var(PRECISION_ENV) {
            Ok(v) => Some(v),
            Err(std::env::VarError::NotPresent) => self.precision.clone(),
            Err(e) => return Err(config_err(format!("{PRECISION_ENV}: {e}"))),
        };
        match raw {
            Some(s) => s.parse().map_err(|e: String| config_err(e)),
            None => Ok(Precision::Double),
        }
    }

    pub fn model(&self) -> Result<Model, Failure> {
        let t = &self.trap;
        let units = self.units();
        let (trap, hbar, mode) = match units {
            UnitChoice::Trap => {
                let si_keys = [
                    ("mass_amu", t.mass_amu),
                    ("mass_kg", t.mass_kg),
                    ("charge_e", t.charge_e),
                    ("B_tesla", t.b_tesla),
                ];
                if let Some((k, _)) = si_keys.iter().find(|(_, v)| v.is_some()) {
                    return Err(config_err(format!("trap.{k} is an SI key; set unit_system to \"si\"")));
                }
                let trap = TrapConfig::new(
                    t.mass.unwrap_or(1.0),
                    t.charge.unwrap_or(1.0),
                    t.b.unwrap_or(0.5),
                    t.omega_rho.unwrap_or(1.0),
                    t.omega_z.unwrap_or(0.0),
                )?;
                (trap, 1.0, UnitMode::TrapUnits)
            }
            UnitChoice::Si => {
                let trap_keys = [("mass", t.mass), ("charge", t.charge), ("B", t.b)];
                if let Some((k, _)) = trap_keys.iter().find(|(_, v)| v.is_some()) {
                    return Err(config_err(format!("trap.{k} is a trap-unit key; use its SI form")));
                }
                let mass = match (t.mass_amu, t.mass_kg) {
                    (Some(_), Some(_)) => return Err(config_err("give only one of trap.mass_amu and trap.mass_kg")),
                    (Some(a), None) => a * si::AMU,
                    (None, Some(kg)) => kg,
                    (None, None) => 100.0 * si::AMU,
                };
                let trap = TrapConfig::new(
                    mass,
                    t.charge_e.unwrap_or(1.0) * si::E_CHARGE,
                    t.b_tesla.unwrap_or(1e-9),
                    t.omega_rho.unwrap_or(1e6),
                    t.omega_z.unwrap_or(0.0),
                )?;
                (trap, si::HBAR, UnitMode::Si)
            }
        };
        let (theta0, eta0) = match units {
            UnitChoice::Trap => (0.1, 0.04),
            UnitChoice::Si => {
                let b = default_bounds();
                (b.theta_max, b.eta_max)
            }
        };
        let n = &self.nc;
        let theta = n.theta.unwrap_or(theta0);
        let nc = match (n.eta, n.c_const) {
            (Some(_), Some(_)) => return Err(config_err("give exactly one of nc.eta and nc.c_const")),
            (Some(eta), None) => NCParams::new(theta, eta, hbar)?,
            (None, Some(c)) => NCParams::from_c(theta, c, hbar)?,
            (None, None) => NCParams::new(theta, eta0, hbar)?,
        };
        Ok(Model { trap, nc, units: mode })
    }

    pub fn sensitivity_inputs(&self) -> Result<(SensitivityInputs, BoundsConfig), Failure> {
        if self.unit_system == Some(UnitChoice::Trap) {
            return Err(config_err(
                "sensitivity runs in SI; set unit_system to \"si\" or leave it unset",
            ));
        }
        let s = &self.sensitivity;
        let inputs = SensitivityInputs {
            mass_number: s.mass_number,
            charge_state: s.charge_state,
            omega_rho: s.omega_rho,
            p_bar: s.p_bar,
        };
        let d = default_bounds();
        let bounds = BoundsConfig {
            theta_max: s.theta_max.unwrap_or(d.theta_max),
            eta_max: s.eta_max.unwrap_or(d.eta_max),
        };
        Ok((inputs, bounds))
    }
}

impl SweepSection {
    /// The sweep points in order.
    pub fn values(&self) -> Result<Vec<f64>, Failure> {
        let vals = match (&self.values, &self.log_range) {
            (Some(v), None) => v.clone(),
            (None, Some(r)) => {
                if !(r.start > 0.0 && r.stop > 0.0 && r.start.is_finite() && r.stop.is_finite()) {
                    return Err(config_err("sweep.log_range bounds must be finite and positive"));
                }
                match r.points {
                    0 => Vec::new(),
                    1 => vec![r.start],
                    p => {
                        let (a, b) = (r.start.log10(), r.stop.log10());
                        let step = (b - a) / (p - 1) as f64;
                        (0..p)
                            .map(|i| match i {
                                0 => r.start,
                                i if i == p - 1 => r.stop,
                                i => 10f64.powf(a + step * i as f64),
                            })
                            .collect()
                    }
                }
            }
            _ => return Err(config_err("sweep needs exactly one of values and log_range")),
        };
        if vals.is_empty() {
            return Err(config_err("sweep has no values"));
        }
        if let Some(v) = vals.iter().find(|v| !v.is_finite()) {
            return Err(config_err(format!("sweep value {v} is not finite")));
        }
        Ok(vals)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    fn cfg(v: Value) -> Result<RunConfig, Failure> {
        RunConfig::from_value(&v)
    }

    #[test]
    fn defaults_are_the_trap_unit_example() {
        let m = cfg(json!({})).unwrap().model().unwrap();
        assert_eq!(m.trap.omega_c(), 0.5);
        assert_eq!((m.nc.theta(), m.nc.eta(), m.nc.hbar()), (0.1, 0.04, 1.0));
    }

    #[test]
    fn eta_and_c_are_exclusive() {
        assert!(cfg(json!({"nc": {"theta": 0.1, "eta": 0.1, "c_const": 2.0}}))
            .unwrap()
            .model()
            .is_err());
        let mut v = json!({"nc": {"eta": 0.1}});
        set_path(&mut v, "nc.c_sq", json!(4.0)).unwrap();
        assert_eq!(v, json!({"nc": {"c_const": 2.0}}));
        let m = cfg(v).unwrap().model().unwrap();
        assert!((m.nc.eta() - 0.025).abs() < 1e-15);
    }

    #[test]
    fn unit_keys_must_match() {
        assert!(cfg(json!({"trap": {"B_tesla": 1e-9}})).unwrap().model().is_err());
        assert!(cfg(json!({"unit_system": "si", "trap": {"B": 1.0}}))
            .unwrap()
            .model()
            .is_err());
        let m = cfg(json!({"unit_system": "si", "trap": {"mass_amu": 40, "B_tesla": 1.0}}))
            .unwrap()
            .model()
            .unwrap();
        assert_eq!(m.units, UnitMode::Si);
        assert!((m.trap.mass() / (40.0 * si::AMU) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn unknown_keys_rejected() {
        assert!(cfg(json!({"trap": {"Bfield": 1.0}})).is_err());
        assert!(cfg(json!({"extra": 1})).is_err());
    }

    #[test]
    fn set_overrides() {
        let v = load_value(
            None,
            &["trap.B=0".into(), "spectra.n_max=3".into(), "unit_system=trap".into()],
        )
        .unwrap();
        let c = cfg(v).unwrap();
        assert_eq!(c.spectra.n_max, 3);
        assert_eq!(c.model().unwrap().trap.b_field(), 0.0);
        assert!(load_value(None, &["novalue".into()]).is_err());
        assert!(load_value(None, &["a..b=1".into()]).is_err());
    }

    #[test]
    fn sweep_values() {
        let s = SweepSection {
            path: "nc.c_sq".into(),
            values: None,
            log_range: Some(LogRange {
                start: 1e-2,
                stop: 1e2,
                points: 5,
            }),
        };
        let v = s.values().unwrap();
        assert_eq!(v.len(), 5);
        assert_eq!((v[0], v[4]), (1e-2, 1e2));
        assert!((v[2] - 1.0).abs() < 1e-15);
        let bad = SweepSection {
            values: Some(vec![]),
            log_range: None,
            ..s.clone()
        };
        assert!(bad.values().is_err());
        let both = SweepSection {
            values: Some(vec![1.0]),
            ..s
        };
        assert!(both.values().is_err());
    }
}
