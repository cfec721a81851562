use faer::{c64, Scale};
use serde::{Deserialize, Serialize};

use super::basis::FockBasisSpec;
use super::hamiltonians::{build_h2_hat, build_jz_hat, build_kinetic_hat, DUAL_TOLERANCE};
use super::linalg::{
    commutator, eigen_defect, eigh, eigvalsh, expectation, hermiticity_gap, max_abs_on, weight_on, CMat, Eigh,
};
use super::operators::{build_operators, FockOperatorSet};
use crate::error::{Error, Result};
use crate::format::{ser, to_json};
use crate::nc::NCParams;
use crate::spectra::{chiral_frequencies, effective_params, jz_star_signal, EffectiveParams, ReducedSystem};
use crate::trap::TrapConfig;

pub const ALGEBRA_TOLERANCE: f64 = 1e-10;
pub const CANONICAL_TOLERANCE: f64 = 1e-12;
pub const SPECTRUM_TOLERANCE: f64 = 1e-8;
pub const REDUCED_TOLERANCE: f64 = 1e-6;
pub const HERMITIAN_IMAG_TOLERANCE: f64 = 1e-12;
pub const DEFAULT_LEVELS: usize = 20;

/// Interior max-norms of the commutator identities.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct AlgebraResiduals {
    #[serde(serialize_with = "ser::f64")]
    pub canonical_xp: f64,
    #[serde(serialize_with = "ser::f64")]
    pub canonical_hermiticity: f64,
    #[serde(serialize_with = "ser::f64")]
    pub deformed_x1x2: f64,
    #[serde(serialize_with = "ser::f64")]
    pub deformed_p1p2: f64,
    #[serde(serialize_with = "ser::f64")]
    pub deformed_xp: f64,
}

impl AlgebraResiduals {
    pub fn pass(&self) -> bool {
        self.canonical_xp < CANONICAL_TOLERANCE
            && self.canonical_hermiticity == 0.0
            && self.deformed_x1x2 < ALGEBRA_TOLERANCE
            && self.deformed_p1p2 < ALGEBRA_TOLERANCE
            && self.deformed_xp < ALGEBRA_TOLERANCE
    }
}

/// [x_i, p_j] = iħδ_ij, [x̂₁, x̂₂] = iξ²θ, [p̂₁, p̂₂] = iξ²η, [x̂_i, p̂_j] = iħδ_ij.
pub fn algebra_residuals(ops: &FockOperatorSet) -> AlgebraResiduals {
    let int = ops.basis().interior();
    let nc = ops.nc();
    let hbar = nc.hbar();
    let i = |v: f64| c64::new(0.0, v);
    let zero = c64::new(0.0, 0.0);
    let canon: Vec<CMat> = (0..4).map(|v| ops.canonical(v)).collect();
    let deformed: Vec<CMat> = (0..4).map(|v| ops.deformed(v)).collect();
    let mut canonical_xp: f64 = 0.0;
    let mut deformed_xp: f64 = 0.0;
    for a in 0..2 {
        for b in 0..2 {
            let target = if a == b { i(hbar) } else { zero };
            canonical_xp = canonical_xp.max(max_abs_on(&commutator(&canon[a], &canon[2 + b]), &int, target));
            deformed_xp = deformed_xp.max(max_abs_on(&commutator(&deformed[a], &deformed[2 + b]), &int, target));
        }
    }
    // same-type canonical pairs commute
    canonical_xp = canonical_xp.max(max_abs_on(&commutator(&canon[0], &canon[1]), &int, zero));
    canonical_xp = canonical_xp.max(max_abs_on(&commutator(&canon[2], &canon[3]), &int, zero));
    AlgebraResiduals {
        canonical_xp,
        canonical_hermiticity: canon.iter().map(hermiticity_gap).fold(0.0, f64::max),
        deformed_x1x2: max_abs_on(
            &commutator(&deformed[0], &deformed[1]),
            &int,
            i(nc.xi_sq() * nc.theta()),
        ),
        deformed_p1p2: max_abs_on(&commutator(&deformed[2], &deformed[3]), &int, i(nc.xi_sq() * nc.eta())),
        deformed_xp,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SpectrumComparison {
    #[serde(serialize_with = "ser::vec")]
    pub eigenvalues: Vec<f64>,
    #[serde(serialize_with = "ser::vec")]
    pub closed_form: Vec<f64>,
    #[serde(serialize_with = "ser::vec")]
    pub abs_errors: Vec<f64>,
    #[serde(serialize_with = "ser::f64")]
    pub max_imag: f64,
}

impl SpectrumComparison {
    pub fn max_error(&self) -> f64 {
        self.abs_errors.iter().copied().fold(0.0, f64::max)
    }
}

/// Lowest `count` eigenvalues of Ĥ₂ against ħω₊(n₊+½) + ħω₋(n₋+½).
pub fn compare_chiral(evd: &Eigh, ep: &EffectiveParams, count: usize) -> Result<SpectrumComparison> {
    let closed_form = chiral_frequencies(ep)?.lowest_levels(ep.hbar, count)?;
    let eigenvalues: Vec<f64> = evd.values.iter().take(count).copied().collect();
    let abs_errors = eigenvalues
        .iter()
        .zip(&closed_form)
        .map(|(a, b)| (a - b).abs())
        .collect();
    Ok(SpectrumComparison {
        eigenvalues,
        closed_form,
        abs_errors,
        max_imag: evd.max_imag,
    })
}

/// Interior max-norm of [Ĥ₂, Ĵ_z].
pub fn h2_jz_residual(ops: &FockOperatorSet, h2: &CMat, jz: &CMat) -> f64 {
    max_abs_on(&commutator(h2, jz), &ops.basis().interior(), c64::new(0.0, 0.0))
}

/// Coefficient λ in [Ĥ₂, Ĵ_z] = λ[p², x²], from the θp² and ηx² pieces of Ĵ_z
/// acting on the isotropic part of Ĥ₂.
pub fn commutator_prefactor(ep: &EffectiveParams, nc: &NCParams) -> f64 {
    -(nc.xi_sq() / (2.0 * nc.hbar())) * (nc.eta() / (2.0 * ep.mass) - nc.theta() * ep.m_omega_p_sq / 2.0)
}

/// The interior residual of [Ĥ₂, Ĵ_z] − λ[p², x²].
pub fn commutator_prediction_gap(ops: &FockOperatorSet, h2: &CMat, jz: &CMat, lambda: f64) -> f64 {
    let mut pp = [[0.0; 4]; 4];
    let mut xx = [[0.0; 4]; 4];
    pp[2][2] = 1.0;
    pp[3][3] = 1.0;
    xx[0][0] = 1.0;
    xx[1][1] = 1.0;
    let pred = commutator(&ops.quadratic(&pp), &ops.quadratic(&xx)) * Scale(c64::new(lambda, 0.0));
    max_abs_on(
        &(commutator(h2, jz) - pred),
        &ops.basis().interior(),
        c64::new(0.0, 0.0),
    )
}

/// η solving η = θM²Ω_P² (the effective parameters depend on η), where
/// [Ĥ₂, Ĵ_z] vanishes identically.
pub fn commuting_eta(trap: &TrapConfig, theta: f64, hbar: f64) -> Result<f64> {
    let mut eta = theta * trap.mass() * trap.mass() * trap.omega_p_sq();
    for _ in 0..200 {
        let ep = effective_params(trap, &NCParams::new(theta, eta, hbar)?);
        let next = theta * ep.mass * ep.m_omega_p_sq;
        if (next - eta).abs() <= 1e-15 * eta.abs().max(1e-300) {
            return Ok(next);
        }
        eta = next;
    }
    Err(Error::Consistency(
        "fixed point for the commuting eta did not converge".into(),
    ))
}

/// ‖Ĵ_z u − ⟨Ĵ_z⟩u‖ for the lowest `count` eigenvectors u of Ĥ₂.
pub fn joint_eigen_defects(evd: &Eigh, jz: &CMat, count: usize) -> Vec<f64> {
    (0..count.min(evd.values.len()))
        .map(|c| eigen_defect(jz, &evd.vectors, c))
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct ReducedLimitReport {
    pub basis: FockBasisSpec,
    pub band_candidates: usize,
    pub band_states: usize,
    #[serde(serialize_with = "ser::vec")]
    pub h2_levels: Vec<f64>,
    #[serde(serialize_with = "ser::f64")]
    pub expected_h2_spacing: f64,
    #[serde(serialize_with = "ser::f64")]
    pub h2_spacing_error: f64,
    /// Ĵ_z expectations in units of ħ, ordered by energy.
    #[serde(serialize_with = "ser::vec")]
    pub jz_hbar: Vec<f64>,
    #[serde(serialize_with = "ser::f64")]
    pub expected_jz_spacing_hbar: f64,
    #[serde(serialize_with = "ser::f64")]
    pub jz_spacing_error: f64,
    /// Largest off-diagonal Ĵ_z element between selected band states.
    #[serde(serialize_with = "ser::f64")]
    pub jz_offdiag: f64,
    pub pass: bool,
}

impl ReducedLimitReport {
    pub fn max_error(&self) -> f64 {
        self.h2_spacing_error.max(self.jz_spacing_error)
    }
}

pub const MIN_BAND_STATES: usize = 3;
pub const BAND_TOLERANCE: f64 = 1e-6;
const EDGE_WEIGHT_LIMIT: f64 = 1e-10;

/// Selects the lowest kinetic band of Ĥ_k, diagonalizes Ĥ₂ inside it and
/// compares the level and Ĵ_z spacings with ħω* and ħ(1 − dev_star).
/// Uses the Landau reference scale m_ref = M, w_ref = G/2M.
pub fn verify_reduced_limit(trap: &TrapConfig, nc: &NCParams, n_per_mode: usize) -> Result<ReducedLimitReport> {
    let ep = effective_params(trap, nc);
    let reduced = ReducedSystem::from_effective(&ep)?;
    let basis = FockBasisSpec::landau(n_per_mode, &ep)?;
    let ops = build_operators(&basis, nc);
    let hk = build_kinetic_hat(&ops, &ep);
    let h2 = build_h2_hat(&ops, trap, &ep)?.matrix;
    let jz = build_jz_hat(&ops, nc);
    let hbar = nc.hbar();
    let omega_0 = ep.coupling / ep.mass;

    let kin = eigh(&hk)?;
    let band: Vec<usize> = (0..kin.values.len())
        .filter(|&c| (kin.values[c] - hbar * omega_0 / 2.0).abs() < BAND_TOLERANCE * hbar * omega_0)
        .collect();
    let insufficient = |found: usize| Error::InsufficientTruncation {
        n_per_mode,
        found,
        needed: MIN_BAND_STATES,
        suggested: (n_per_mode * 2).max(20),
    };
    if band.len() < MIN_BAND_STATES {
        return Err(insufficient(band.len()));
    }
    let d = basis.dim();
    let v = faer::Mat::from_fn(d, band.len(), |i, j| kin.vectors[(i, band[j])]);
    let hb = v.adjoint() * &h2 * &v;
    let hb = super::linalg::hermitize(&hb);
    let inner = eigh(&hb)?;
    let u = &v * &inner.vectors;
    let edge = basis.edge();
    let keep: Vec<usize> = (0..u.ncols())
        .filter(|&c| weight_on(&u, c, &edge) < EDGE_WEIGHT_LIMIT)
        .collect();
    if keep.len() < MIN_BAND_STATES {
        return Err(insufficient(keep.len()));
    }
    let h2_levels: Vec<f64> = keep.iter().map(|&c| inner.values[c]).collect();
    let jz_hbar: Vec<f64> = keep.iter().map(|&c| expectation(&jz, &u, c).re / hbar).collect();
    let mut jz_offdiag: f64 = 0.0;
    let ju = &jz * &u;
    for (a, &ca) in keep.iter().enumerate() {
        for &cb in &keep[a + 1..] {
            let mut s = c64::new(0.0, 0.0);
            for i in 0..d {
                s += u[(i, ca)].conj() * ju[(i, cb)];
            }
            jz_offdiag = jz_offdiag.max(s.norm() / hbar);
        }
    }

    let expected_h2_spacing = hbar * reduced.omega_star;
    let expected_jz_spacing_hbar = jz_star_signal(&ep, nc, 1)?.signal.interval_hbar;
    let max_dev = |xs: &[f64], target: f64| xs.windows(2).map(|w| (w[1] - w[0] - target).abs()).fold(0.0, f64::max);
    let h2_spacing_error = max_dev(&h2_levels, expected_h2_spacing);
    let jz_spacing_error = max_dev(&jz_hbar, expected_jz_spacing_hbar);
    let pass = h2_spacing_error < REDUCED_TOLERANCE && jz_spacing_error < REDUCED_TOLERANCE;
    Ok(ReducedLimitReport {
        basis,
        band_candidates: band.len(),
        band_states: keep.len(),
        h2_levels,
        expected_h2_spacing,
        h2_spacing_error,
        jz_hbar,
        expected_jz_spacing_hbar,
        jz_spacing_error,
        jz_offdiag,
        pass,
    })
}

/// Errors at each truncation, and whether they are non-increasing once
/// roundoff (`floor`) is allowed for.
pub fn reduced_limit_convergence(
    trap: &TrapConfig,
    nc: &NCParams,
    sizes: &[usize],
    floor: f64,
) -> Result<(Vec<f64>, bool)> {
    let errors = sizes
        .iter()
        .map(|&n| verify_reduced_limit(trap, nc, n).map(|r| r.max_error()))
        .collect::<Result<Vec<_>>>()?;
    let monotone = errors.windows(2).all(|w| w[1] <= w[0].max(floor));
    Ok((errors, monotone))
}

#[derive(Debug, Clone, Serialize)]
pub struct ResidualNorms {
    #[serde(flatten)]
    pub algebra: AlgebraResiduals,
    #[serde(serialize_with = "ser::f64")]
    pub dual_construction: f64,
    #[serde(serialize_with = "ser::f64")]
    pub h2_jz_commutator: f64,
    #[serde(serialize_with = "ser::f64")]
    pub h2_jz_predicted_gap: f64,
    #[serde(serialize_with = "ser::f64")]
    pub jz_joint_eigen_defect: f64,
    #[serde(serialize_with = "ser::f64")]
    pub max_eigen_imag: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct OracleCheck {
    pub name: String,
    #[serde(serialize_with = "ser::f64")]
    pub value: f64,
    #[serde(serialize_with = "ser::f64")]
    pub tolerance: f64,
    pub pass: bool,
}

impl OracleCheck {
    fn new(name: &str, value: f64, tolerance: f64) -> Self {
        OracleCheck {
            name: name.into(),
            value,
            tolerance,
            pass: value < tolerance,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct OracleReport {
    pub basis: FockBasisSpec,
    pub residual_norms: ResidualNorms,
    #[serde(serialize_with = "ser::vec")]
    pub eigenvalues: Vec<f64>,
    #[serde(serialize_with = "ser::vec")]
    pub closed_form: Vec<f64>,
    #[serde(serialize_with = "ser::vec")]
    pub abs_errors: Vec<f64>,
    /// Eigenvalues match the closed form and the operator identities hold.
    pub converged: bool,
    #[serde(serialize_with = "ser::f64")]
    pub commutator_prefactor: f64,
    pub reduced_limit: Option<ReducedLimitReport>,
    pub checks: Vec<OracleCheck>,
}

impl OracleReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failed(&self) -> Vec<&OracleCheck> {
        self.checks.iter().filter(|c| !c.pass).collect()
    }

    pub fn to_json(&self) -> String {
        to_json(self)
    }
}

/// Pass thresholds for [`run_oracle_with`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OracleTolerances {
    pub canonical: f64,
    pub algebra: f64,
    pub dual: f64,
    pub spectrum: f64,
    pub reduced: f64,
    pub imag: f64,
}

impl Default for OracleTolerances {
    fn default() -> Self {
        OracleTolerances {
            canonical: CANONICAL_TOLERANCE,
            algebra: ALGEBRA_TOLERANCE,
            dual: DUAL_TOLERANCE,
            spectrum: SPECTRUM_TOLERANCE,
            reduced: REDUCED_TOLERANCE,
            imag: HERMITIAN_IMAG_TOLERANCE,
        }
    }
}

/// Full oracle pass at the default reference scale (M, Ω_P).
pub fn run_oracle(trap: &TrapConfig, nc: &NCParams, n_per_mode: usize, levels: usize) -> Result<OracleReport> {
    run_oracle_with(trap, nc, n_per_mode, levels, &OracleTolerances::default())
}

pub fn run_oracle_with(
    trap: &TrapConfig,
    nc: &NCParams,
    n_per_mode: usize,
    levels: usize,
    tol: &OracleTolerances,
) -> Result<OracleReport> {
    let ep = effective_params(trap, nc);
    let basis = FockBasisSpec::for_effective(n_per_mode, &ep)?;
    let ops = build_operators(&basis, nc);
    let algebra = algebra_residuals(&ops);
    let h2 = build_h2_hat(&ops, trap, &ep)?;
    let jz = build_jz_hat(&ops, nc);
    let evd = eigh(&h2.matrix)?;
    let spectrum = compare_chiral(&evd, &ep, levels)?;
    let h2_jz_commutator = h2_jz_residual(&ops, &h2.matrix, &jz);
    let lambda = commutator_prefactor(&ep, nc);
    let h2_jz_predicted_gap = commutator_prediction_gap(&ops, &h2.matrix, &jz, lambda);
    let defects = joint_eigen_defects(&evd, &jz, levels);
    let jz_joint_eigen_defect = defects.iter().copied().fold(0.0, f64::max);
    let reduced_limit = if ep.coupling > 0.0 {
        Some(verify_reduced_limit(trap, nc, n_per_mode)?)
    } else {
        None
    };

    let mut checks = vec![
        OracleCheck::new("canonical_commutators", algebra.canonical_xp, tol.canonical),
        OracleCheck::new(
            "canonical_hermiticity",
            algebra.canonical_hermiticity,
            f64::MIN_POSITIVE,
        ),
        OracleCheck::new("deformed_x1x2", algebra.deformed_x1x2, tol.algebra),
        OracleCheck::new("deformed_p1p2", algebra.deformed_p1p2, tol.algebra),
        OracleCheck::new("deformed_xp", algebra.deformed_xp, tol.algebra),
        OracleCheck::new("dual_construction", h2.dual_gap, tol.dual),
        OracleCheck::new("eigen_imaginary_parts", spectrum.max_imag, tol.imag),
        OracleCheck::new("chiral_spectrum", spectrum.max_error(), tol.spectrum),
        OracleCheck::new("h2_jz_commutator", h2_jz_commutator, tol.algebra),
        OracleCheck::new("jz_joint_eigenstates", jz_joint_eigen_defect, tol.spectrum),
    ];
    // the canonical matrices are built exactly Hermitian
    checks[1].pass = algebra.canonical_hermiticity == 0.0;
    if let Some(r) = &reduced_limit {
        checks.push(OracleCheck::new("reduced_h2_spacing", r.h2_spacing_error, tol.reduced));
        checks.push(OracleCheck::new("reduced_jz_spacing", r.jz_spacing_error, tol.reduced));
    }
    let converged = checks[..8].iter().all(|c| c.pass);
    Ok(OracleReport {
        basis,
        residual_norms: ResidualNorms {
            algebra,
            dual_construction: h2.dual_gap,
            h2_jz_commutator,
            h2_jz_predicted_gap,
            jz_joint_eigen_defect,
            max_eigen_imag: spectrum.max_imag,
        },
        eigenvalues: spectrum.eigenvalues,
        closed_form: spectrum.closed_form,
        abs_errors: spectrum.abs_errors,
        converged,
        commutator_prefactor: lambda,
        reduced_limit,
        checks,
    })
}

/// Largest change in the lowest `levels` eigenvalues of Ĥ₂ between two truncations.
pub fn eigenvalue_convergence(trap: &TrapConfig, nc: &NCParams, n_a: usize, n_b: usize, levels: usize) -> Result<f64> {
    let ep = effective_params(trap, nc);
    let lowest = |n: usize| -> Result<Vec<f64>> {
        let ops = build_operators(&FockBasisSpec::for_effective(n, &ep)?, nc);
        let h2 = build_h2_hat(&ops, trap, &ep)?;
        Ok(eigvalsh(&h2.matrix)?.into_iter().take(levels).collect())
    };
    let a = lowest(n_a)?;
    let b = lowest(n_b)?;
    Ok(a.iter().zip(&b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max))
}
