use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::exact::Field;

use super::effective::{Effective, EffectiveParams};

/// One-degree-of-freedom system left after restricting to the lowest kinetic level.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReducedSystem {
    pub mu_star: f64,
    pub omega_star: f64,
    pub e_k0: f64,
    pub omega_0: f64,
    pub hbar: f64,
}

impl ReducedSystem {
    /// μ* = G²/2K, ω* = K/G, E_k0 = ħG/2M, ω₀ = G/M, evaluated in the
    /// arithmetic of `ep` and rounded once.
    pub fn from_effective<R: Field>(ep: &Effective<R>) -> Result<Self> {
        let zero = R::zero();
        if ep.coupling.is_zero() {
            return Err(undefined());
        }
        if ep.coupling < zero {
            return domain(format!("coupling G must be positive, got {:?}", ep.coupling.to_f64()));
        }
        if !(ep.stiffness > zero) || !(ep.mass > zero) {
            return domain("reduced system needs M > 0 and K > 0");
        }
        let two = R::from_i64(2);
        let g = &ep.coupling;
        Ok(ReducedSystem {
            mu_star: (g.sq() / (two.clone() * ep.stiffness.clone())).to_f64(),
            omega_star: (ep.stiffness.clone() / g.clone()).to_f64(),
            e_k0: (ep.hbar.clone() * g.clone() / (two * ep.mass.clone())).to_f64(),
            omega_0: (g.clone() / ep.mass.clone()).to_f64(),
            hbar: ep.hbar.to_f64(),
        })
    }

    /// ħω*(n + 1/2) + E_k0.
    pub fn level(&self, n: usize) -> f64 {
        self.hbar * self.omega_star * (n as f64 + 0.5) + self.e_k0
    }

    pub fn levels(&self, n_max: usize) -> Vec<f64> {
        (0..=n_max).map(|n| self.level(n)).collect()
    }
}

pub(crate) fn undefined() -> Error {
    Error::UndefinedReduction(
        "G = 0 (commutative limit with B = 0): the reduced frequency and ladder operators cannot be defined".into(),
    )
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KineticLevels {
    pub omega_0: f64,
    pub levels: Vec<f64>,
    /// Set when G = 0: no Landau quantization, the kinetic spectrum is a continuum.
    pub flat: bool,
}

/// Ê_{k,n} = ħω₀(n + 1/2) with ω₀ = G/M.
pub fn kinetic_levels(ep: &EffectiveParams, n_max: usize) -> KineticLevels {
    let omega_0 = ep.coupling / ep.mass;
    KineticLevels {
        omega_0,
        levels: (0..=n_max).map(|n| ep.hbar * omega_0 * (n as f64 + 0.5)).collect(),
        flat: ep.coupling == 0.0,
    }
}

pub fn reduced_spectrum(ep: &EffectiveParams, n_max: usize) -> Result<(ReducedSystem, Vec<f64>)> {
    let rs = ReducedSystem::from_effective(ep)?;
    let levels = rs.levels(n_max);
    Ok((rs, levels))
}

/// Normal-mode frequencies of the full planar Hamiltonian.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Chiral {
    pub omega_plus: f64,
    pub omega_minus: f64,
    /// ω₋ ≤ 0: the spectrum is not bounded below.
    pub inverted: bool,
}

/// ω± = Ω_P ± G/2M, with ω₋ taken from ω₊ω₋ = K/M.
pub fn chiral_frequencies(ep: &EffectiveParams) -> Result<Chiral> {
    if !(ep.mass > 0.0) || !(ep.stiffness > 0.0) {
        return domain("chiral frequencies need M > 0 and K > 0");
    }
    let half_g = ep.coupling / (2.0 * ep.mass);
    let omega_p = (ep.stiffness / ep.mass + half_g * half_g).sqrt();
    let (omega_plus, omega_minus) = if half_g >= 0.0 {
        let plus = omega_p + half_g;
        (plus, ep.stiffness / ep.mass / plus)
    } else {
        let minus = omega_p - half_g;
        (ep.stiffness / ep.mass / minus, minus)
    };
    Ok(Chiral {
        omega_plus,
        omega_minus,
        inverted: !(omega_minus > 0.0),
    })
}

impl Chiral {
    /// ħω₊(n₊+1/2) + ħω₋(n₋+1/2), the `count` lowest values in ascending order.
    pub fn lowest_levels(&self, hbar: f64, count: usize) -> Result<Vec<f64>> {
        if self.inverted {
            return domain("inverted regime: spectrum unbounded below");
        }
        let mut all = Vec::with_capacity(count * count);
        for a in 0..count {
            for b in 0..count {
                all.push(hbar * (self.omega_plus * (a as f64 + 0.5) + self.omega_minus * (b as f64 + 0.5)));
            }
        }
        all.sort_by(f64::total_cmp);
        all.truncate(count);
        Ok(all)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nc::NCParams;
    use crate::spectra::effective::effective_params;
    use crate::trap::TrapConfig;

    fn example(theta: f64, eta: f64) -> EffectiveParams {
        effective_params(
            &TrapConfig::trap_units(0.5).unwrap(),
            &NCParams::new(theta, eta, 1.0).unwrap(),
        )
    }

    #[test]
    fn commutative_levels() {
        let ep = example(0.0, 0.0);
        let kl = kinetic_levels(&ep, 2);
        assert_eq!(kl.levels, vec![0.25, 0.75, 1.25]);
        assert!(!kl.flat);
        let (rs, levels) = reduced_spectrum(&ep, 1).unwrap();
        assert_eq!(rs.omega_star, 2.0);
        assert_eq!(levels, vec![1.25, 3.25]);
    }

    #[test]
    fn deformed_levels() {
        let ep = example(0.1, 0.04);
        let (rs, levels) = reduced_spectrum(&ep, 3).unwrap();
        assert!((rs.omega_star - 1.541_560_102_054_883_7).abs() < 1e-14);
        assert!((rs.omega_0 - 0.646_103_896_103_896_1).abs() < 1e-14);
        assert!((rs.e_k0 - 0.323_051_948_051_948_03).abs() < 1e-14);
        assert!((rs.mu_star - 0.204_125_899_855_657_3).abs() < 1e-14);
        assert!((levels[0] - 1.093_831_999_079_389_9).abs() < 1e-14);
        assert!((rs.mu_star * rs.omega_star.powi(2) - ep.stiffness / 2.0).abs() < 1e-14);
        assert!((rs.mu_star * rs.omega_star - ep.coupling / 2.0).abs() < 1e-14);
        let kl = kinetic_levels(&ep, 5);
        assert_eq!(kl.levels[0], rs.e_k0);
        for w in kl.levels.windows(2) {
            assert!((w[1] - w[0] - kl.omega_0).abs() < 1e-14);
        }
    }

    #[test]
    fn zero_coupling_is_typed() {
        let ep = effective_params(&TrapConfig::trap_units(0.0).unwrap(), &NCParams::commutative(1.0));
        assert!(matches!(reduced_spectrum(&ep, 3), Err(Error::UndefinedReduction(_))));
        let kl = kinetic_levels(&ep, 3);
        assert!(kl.flat);
        assert!(kl.levels.iter().all(|&e| e == 0.0));
    }

    #[test]
    fn chiral_examples() {
        let ch = chiral_frequencies(&example(0.0, 0.0)).unwrap();
        assert!((ch.omega_plus - (1.0625f64.sqrt() + 0.25)).abs() < 1e-15);
        assert!((ch.omega_minus - (1.0625f64.sqrt() - 0.25)).abs() < 1e-15);
        assert!((ch.omega_plus - 1.280776).abs() < 1e-6);
        assert!((ch.omega_minus - 0.780776).abs() < 1e-6);
        assert!(!ch.inverted);

        let iso = chiral_frequencies(&effective_params(
            &TrapConfig::trap_units(0.0).unwrap(),
            &NCParams::commutative(1.0),
        ))
        .unwrap();
        assert_eq!(iso.omega_plus, iso.omega_minus);

        let ep = example(0.1, 0.04);
        let ch = chiral_frequencies(&ep).unwrap();
        assert!((ch.omega_plus - ch.omega_minus - ep.coupling / ep.mass).abs() < 1e-14);
        let levels = ch.lowest_levels(1.0, 10).unwrap();
        assert_eq!(levels.len(), 10);
        assert!((levels[0] - 0.5 * (ch.omega_plus + ch.omega_minus)).abs() < 1e-15);
        assert!(levels.windows(2).all(|w| w[0] <= w[1]));
    }
}
