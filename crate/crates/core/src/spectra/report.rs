use serde::Serialize;

use crate::error::Result;
use crate::format::{csv_num, ser, to_json};
use crate::nc::NCParams;
use crate::trap::TrapConfig;
use crate::units::UnitMode;

use super::effective::{evaluate, EffectiveParams, Inputs, Precision};
use super::reduced::{chiral_frequencies, ReducedSystem};
use super::signal::{dev_star_terms, jz_tilde_signal, tilde_limit, AngularSignal, Breakdown, LimitMode, SignalKind};
use crate::exact::Field;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportInputs {
    pub unit_system: UnitMode,
    pub precision: Precision,
    #[serde(serialize_with = "ser::f64")]
    pub mass: f64,
    #[serde(serialize_with = "ser::f64")]
    pub charge: f64,
    #[serde(serialize_with = "ser::f64")]
    pub b_field: f64,
    #[serde(serialize_with = "ser::f64")]
    pub omega_rho: f64,
    #[serde(serialize_with = "ser::f64")]
    pub omega_z: f64,
    #[serde(serialize_with = "ser::f64")]
    pub theta: f64,
    #[serde(serialize_with = "ser::f64")]
    pub eta: f64,
    #[serde(serialize_with = "ser::opt")]
    pub c_const: Option<f64>,
    #[serde(serialize_with = "ser::f64")]
    pub hbar: f64,
    pub n_max: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportEffective {
    #[serde(rename = "M", serialize_with = "ser::f64")]
    pub mass: f64,
    #[serde(rename = "G", serialize_with = "ser::f64")]
    pub coupling: f64,
    #[serde(rename = "Omega_P", serialize_with = "ser::f64")]
    pub omega_p: f64,
    #[serde(rename = "K", serialize_with = "ser::f64")]
    pub stiffness: f64,
    #[serde(serialize_with = "ser::f64")]
    pub c1: f64,
    #[serde(serialize_with = "ser::f64")]
    pub c2: f64,
    #[serde(serialize_with = "ser::f64")]
    pub xi_sq: f64,
    #[serde(rename = "dM", serialize_with = "ser::f64")]
    pub dev_mass: f64,
    #[serde(rename = "dG", serialize_with = "ser::f64")]
    pub dev_coupling: f64,
    #[serde(rename = "dK", serialize_with = "ser::f64")]
    pub dev_stiffness: f64,
}

impl From<&EffectiveParams> for ReportEffective {
    fn from(ep: &EffectiveParams) -> Self {
        ReportEffective {
            mass: ep.mass,
            coupling: ep.coupling,
            omega_p: ep.omega_p(),
            stiffness: ep.stiffness,
            c1: ep.c1,
            c2: ep.c2,
            xi_sq: ep.xi_sq,
            dev_mass: ep.dev_mass,
            dev_coupling: ep.dev_coupling,
            dev_stiffness: ep.dev_stiffness,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportReduced {
    #[serde(serialize_with = "ser::f64")]
    pub mu_star: f64,
    #[serde(serialize_with = "ser::f64")]
    pub omega_star: f64,
    #[serde(rename = "E_k0", serialize_with = "ser::f64")]
    pub e_k0: f64,
    #[serde(serialize_with = "ser::f64")]
    pub omega_0: f64,
    #[serde(serialize_with = "ser::f64")]
    pub omega_plus: f64,
    #[serde(serialize_with = "ser::f64")]
    pub omega_minus: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LevelRow {
    pub n: usize,
    #[serde(rename = "E_h0", serialize_with = "ser::f64")]
    pub e_h0: f64,
    #[serde(rename = "J_z_hbar", serialize_with = "ser::f64")]
    pub jz_hbar: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportBreakdown {
    #[serde(serialize_with = "ser::f64")]
    pub theta_term: f64,
    #[serde(serialize_with = "ser::f64")]
    pub eta_term: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportSignal {
    #[serde(serialize_with = "ser::f64")]
    pub dev_star: f64,
    #[serde(serialize_with = "ser::opt")]
    pub dev_tilde: Option<f64>,
    #[serde(rename = "J0_hbar", serialize_with = "ser::f64")]
    pub j0_hbar: f64,
    #[serde(serialize_with = "ser::f64")]
    pub interval_hbar: f64,
    #[serde(rename = "delta_J0_hbar", serialize_with = "ser::f64")]
    pub delta_j0_hbar: f64,
    pub breakdown: ReportBreakdown,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportTilde {
    #[serde(rename = "M_tilde", serialize_with = "ser::f64")]
    pub mass: f64,
    #[serde(rename = "G_tilde", serialize_with = "ser::f64")]
    pub coupling: f64,
    #[serde(rename = "Omega_tilde", serialize_with = "ser::f64")]
    pub omega: f64,
    #[serde(rename = "K_tilde", serialize_with = "ser::f64")]
    pub stiffness: f64,
    #[serde(serialize_with = "ser::f64")]
    pub mu_tilde: f64,
    #[serde(serialize_with = "ser::f64")]
    pub omega_tilde: f64,
    #[serde(serialize_with = "ser::f64")]
    pub dev_tilde: f64,
    #[serde(rename = "J0_hbar", serialize_with = "ser::f64")]
    pub j0_hbar: f64,
    #[serde(serialize_with = "ser::f64")]
    pub interval_hbar: f64,
    pub first_order: bool,
}

/// Levels and signals for one configuration.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumReport {
    pub inputs: ReportInputs,
    pub effective_params: ReportEffective,
    pub reduced: ReportReduced,
    pub levels: Vec<LevelRow>,
    pub signal: ReportSignal,
    pub tilde: Option<ReportTilde>,
}

pub const CSV_HEADER: &str = "n,E_h0,J_z_hbar";

impl SpectrumReport {
    /// Fails with `UndefinedReduction` when G = 0.
    pub fn compute(
        trap: &TrapConfig,
        nc: &NCParams,
        n_max: usize,
        precision: Precision,
        unit_system: UnitMode,
    ) -> Result<Self> {
        let (ep, reduced, star) = match precision {
            Precision::Double => build(&Inputs::new(trap, nc))?,
            Precision::Extended => build(&Inputs::exact(trap, nc))?,
        };
        let chiral = chiral_frequencies(&ep)?;
        let dev_tilde = if nc.is_commutative() {
            None
        } else {
            Some(jz_tilde_signal(trap, nc)?.dev)
        };
        let tilde = if trap.b_field() == 0.0 && !nc.is_commutative() {
            let tp = tilde_limit(trap, nc, LimitMode::Enforced)?;
            let sig = jz_tilde_signal(trap, nc)?;
            Some(ReportTilde {
                mass: tp.mass,
                coupling: tp.coupling,
                omega: tp.omega,
                stiffness: tp.stiffness,
                mu_tilde: tp.mu_tilde(),
                omega_tilde: tp.omega_tilde(),
                dev_tilde: sig.dev,
                j0_hbar: sig.j0_hbar,
                interval_hbar: sig.interval_hbar,
                first_order: tp.first_order,
            })
        } else {
            None
        };
        let levels = (0..=n_max)
            .map(|n| LevelRow {
                n,
                e_h0: reduced.level(n),
                jz_hbar: star.level_hbar(n),
            })
            .collect();
        let b = star.breakdown.expect("star signal has a breakdown");
        Ok(SpectrumReport {
            inputs: ReportInputs {
                unit_system,
                precision,
                mass: trap.mass(),
                charge: trap.charge(),
                b_field: trap.b_field(),
                omega_rho: trap.omega_rho(),
                omega_z: trap.omega_z(),
                theta: nc.theta(),
                eta: nc.eta(),
                c_const: nc.c_const(),
                hbar: nc.hbar(),
                n_max,
            },
            effective_params: ReportEffective::from(&ep),
            reduced: ReportReduced {
                mu_star: reduced.mu_star,
                omega_star: reduced.omega_star,
                e_k0: reduced.e_k0,
                omega_0: reduced.omega_0,
                omega_plus: chiral.omega_plus,
                omega_minus: chiral.omega_minus,
            },
            levels,
            signal: ReportSignal {
                dev_star: star.dev,
                dev_tilde,
                j0_hbar: star.j0_hbar,
                interval_hbar: star.interval_hbar,
                delta_j0_hbar: star.delta_j0_hbar(),
                breakdown: ReportBreakdown {
                    theta_term: b.theta_term,
                    eta_term: b.eta_term,
                },
            },
            tilde,
        })
    }

    pub fn to_json(&self) -> String {
        to_json(self)
    }

    /// One row per level under [`CSV_HEADER`].
    pub fn to_csv(&self) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for row in &self.levels {
            out.push_str(&format!("{},{},{}\n", row.n, csv_num(row.e_h0), csv_num(row.jz_hbar)));
        }
        out
    }

    /// Every scalar field in a fixed order, for sweep tables.
    pub fn scalars(&self) -> Vec<(&'static str, f64)> {
        let e = &self.effective_params;
        let r = &self.reduced;
        let s = &self.signal;
        vec![
            ("M", e.mass),
            ("G", e.coupling),
            ("Omega_P", e.omega_p),
            ("K", e.stiffness),
            ("c1", e.c1),
            ("c2", e.c2),
            ("xi_sq", e.xi_sq),
            ("dM", e.dev_mass),
            ("dG", e.dev_coupling),
            ("dK", e.dev_stiffness),
            ("mu_star", r.mu_star),
            ("omega_star", r.omega_star),
            ("E_k0", r.e_k0),
            ("omega_0", r.omega_0),
            ("omega_plus", r.omega_plus),
            ("omega_minus", r.omega_minus),
            ("dev_star", s.dev_star),
            ("dev_tilde", s.dev_tilde.unwrap_or(f64::NAN)),
            ("J0_hbar", s.j0_hbar),
            ("interval_hbar", s.interval_hbar),
            ("delta_J0_hbar", s.delta_j0_hbar),
            ("theta_term", s.breakdown.theta_term),
            ("eta_term", s.breakdown.eta_term),
        ]
    }

    pub fn scalar_names() -> Vec<&'static str> {
        vec![
            "M",
            "G",
            "Omega_P",
            "K",
            "c1",
            "c2",
            "xi_sq",
            "dM",
            "dG",
            "dK",
            "mu_star",
            "omega_star",
            "E_k0",
            "omega_0",
            "omega_plus",
            "omega_minus",
            "dev_star",
            "dev_tilde",
            "J0_hbar",
            "interval_hbar",
            "delta_J0_hbar",
            "theta_term",
            "eta_term",
        ]
    }
}

fn build<R: Field>(inp: &Inputs<R>) -> Result<(EffectiveParams, ReducedSystem, AngularSignal)> {
    let eff = evaluate(inp);
    let reduced = ReducedSystem::from_effective(&eff)?;
    let (t, e, d) = dev_star_terms(&eff, &inp.theta, &inp.eta)?;
    let star = AngularSignal::from_dev(
        SignalKind::Star,
        d.to_f64(),
        Some(Breakdown {
            theta_term: t.to_f64(),
            eta_term: e.to_f64(),
        }),
    );
    Ok((eff.to_f64(), reduced, star))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    fn example() -> SpectrumReport {
        SpectrumReport::compute(
            &TrapConfig::trap_units(0.5).unwrap(),
            &NCParams::new(0.1, 0.04, 1.0).unwrap(),
            4,
            Precision::Double,
            UnitMode::TrapUnits,
        )
        .unwrap()
    }

    #[test]
    fn json_shape() {
        let r = example();
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        let dev = v["signal"]["dev_star"].as_f64().unwrap();
        assert!((dev - 0.079212).abs() < 1e-6);
        assert_eq!(v["levels"].as_array().unwrap().len(), 5);
        assert!(v["signal"]["breakdown"]["theta_term"].is_number());
        assert!(v["tilde"].is_null());
        for key in ["inputs", "effective_params", "levels", "signal"] {
            assert!(!v[key].is_null(), "{key}");
        }
    }

    #[test]
    fn csv_shape() {
        let csv = example().to_csv();
        let lines: Vec<_> = csv.lines().collect();
        assert_eq!(lines[0], "n,E_h0,J_z_hbar");
        assert_eq!(lines.len(), 6);
        assert!(lines[1].starts_with("0,1.09383199908e0,"));
    }

    #[test]
    fn extended_agrees_with_double() {
        let trap = TrapConfig::trap_units(0.5).unwrap();
        let nc = NCParams::new(0.1, 0.04, 1.0).unwrap();
        let d = SpectrumReport::compute(&trap, &nc, 2, Precision::Double, UnitMode::TrapUnits).unwrap();
        let x = SpectrumReport::compute(&trap, &nc, 2, Precision::Extended, UnitMode::TrapUnits).unwrap();
        for ((name, a), (_, b)) in d.scalars().into_iter().zip(x.scalars()) {
            assert!((a - b).abs() <= 1e-14 * b.abs().max(1e-300), "{name}: {a} vs {b}");
        }
    }

    #[test]
    fn tilde_section_at_zero_field() {
        let r = SpectrumReport::compute(
            &TrapConfig::trap_units(0.0).unwrap(),
            &NCParams::new(0.1, 0.04, 1.0).unwrap(),
            1,
            Precision::Double,
            UnitMode::TrapUnits,
        )
        .unwrap();
        let t = r.tilde.unwrap();
        assert!((t.dev_tilde - 2.0 / 7.0).abs() < 1e-15);
    }

    #[test]
    fn commutative_zero_field_is_undefined() {
        let err = SpectrumReport::compute(
            &TrapConfig::trap_units(0.0).unwrap(),
            &NCParams::commutative(1.0),
            1,
            Precision::Double,
            UnitMode::TrapUnits,
        )
        .unwrap_err();
        assert!(matches!(err, Error::UndefinedReduction(_)));
    }

    #[test]
    fn scalar_names_match() {
        let names: Vec<_> = example().scalars().into_iter().map(|(n, _)| n).collect();
        assert_eq!(names, SpectrumReport::scalar_names());
    }
}
