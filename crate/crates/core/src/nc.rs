//! Noncommutative parameters: θ (position), η (momentum), the scaling factor
//! ξ, and the relations tying them together.

use serde::Serialize;

use crate::error::{domain, Result};

/// ξ = (1 + θη/4ħ²)^(-1/2), with its deviation from one kept separately.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct XiFactor {
    /// u = θη/4ħ².
    pub u: f64,
    pub xi: f64,
    pub xi_sq: f64,
    /// 1 − ξ, evaluated without subtracting near-equal numbers.
    pub deviation: f64,
}

pub fn xi_factor(theta: f64, eta: f64, hbar: f64) -> Result<XiFactor> {
    check_nonneg("theta", theta)?;
    check_nonneg("eta", eta)?;
    check_pos("hbar", hbar)?;
    let u = theta * eta / (4.0 * hbar * hbar);
    let root = (1.0 + u).sqrt();
    Ok(XiFactor {
        u,
        xi: 1.0 / root,
        xi_sq: 1.0 / (1.0 + u),
        deviation: u / ((1.0 + u) + root),
    })
}

/// η = θ/c².
pub fn eta_from_c(theta: f64, c_const: f64) -> Result<f64> {
    check_nonneg("theta", theta)?;
    check_pos("c_const", c_const)?;
    Ok(theta / (c_const * c_const))
}

/// c = √(θ/η), the inverse of [`eta_from_c`].
pub fn c_from(theta: f64, eta: f64) -> Result<f64> {
    check_pos("theta", theta)?;
    check_pos("eta", eta)?;
    Ok((theta / eta).sqrt())
}

/// Intrinsic field scale B_η = η/(qħ) (SI form).
pub fn b_eta(eta: f64, charge: f64, hbar: f64) -> Result<f64> {
    check_nonneg("eta", eta)?;
    check_pos("charge", charge)?;
    check_pos("hbar", hbar)?;
    Ok(eta / (charge * hbar))
}

fn check_nonneg(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v >= 0.0 {
        Ok(())
    } else {
        domain(format!("{name} must be finite and non-negative, got {v}"))
    }
}

fn check_pos(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        domain(format!("{name} must be finite and positive, got {v}"))
    }
}

/// Planar noncommutativity θ₃ = θ, η₃ = η, immutable once built.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NCParams {
    theta: f64,
    eta: f64,
    c_const: Option<f64>,
    hbar: f64,
    xi: XiFactor,
}

impl NCParams {
    pub fn new(theta: f64, eta: f64, hbar: f64) -> Result<Self> {
        let xi = xi_factor(theta, eta, hbar)?;
        Ok(NCParams {
            theta,
            eta,
            c_const: None,
            hbar,
            xi,
        })
    }

    /// η fixed through η = θ/c².
    pub fn from_c(theta: f64, c_const: f64, hbar: f64) -> Result<Self> {
        let eta = eta_from_c(theta, c_const)?;
        let mut nc = Self::new(theta, eta, hbar)?;
        nc.c_const = Some(c_const);
        Ok(nc)
    }

    pub fn commutative(hbar: f64) -> Self {
        Self::new(0.0, 0.0, hbar).expect("zero parameters are admissible")
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }
    pub fn eta(&self) -> f64 {
        self.eta
    }
    pub fn hbar(&self) -> f64 {
        self.hbar
    }
    pub fn xi(&self) -> &XiFactor {
        &self.xi
    }
    pub fn xi_sq(&self) -> f64 {
        self.xi.xi_sq
    }

    /// c as given at construction, or √(θ/η) when both are positive.
    pub fn c_const(&self) -> Option<f64> {
        self.c_const.or_else(|| c_from(self.theta, self.eta).ok())
    }

    pub fn is_commutative(&self) -> bool {
        self.theta == 0.0 && self.eta == 0.0
    }

    /// Same parameters with θ and η both multiplied by `t`.
    pub fn scaled(&self, t: f64) -> Result<Self> {
        let mut nc = Self::new(self.theta * t, self.eta * t, self.hbar)?;
        nc.c_const = self.c_const;
        Ok(nc)
    }
}

/// Coefficients of the deformed annihilation operator
/// â_i = s (x̂_i + i·m·p̂_i), s = √(√(η/θ)/2ħ), m = (η/θ)^(-1/2).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LadderCoeffs {
    pub scale: f64,
    pub mixing: f64,
}

impl LadderCoeffs {
    /// Undeformed a_i = (2cħ)^(-1/2) (x_i + i c p_i).
    pub fn undeformed(c_const: f64, hbar: f64) -> Result<Self> {
        check_pos("c_const", c_const)?;
        check_pos("hbar", hbar)?;
        Ok(LadderCoeffs {
            scale: (1.0 / (2.0 * c_const * hbar)).sqrt(),
            mixing: c_const,
        })
    }
}

pub fn deformed_ladder_coeffs(nc: &NCParams) -> Result<LadderCoeffs> {
    if nc.theta <= 0.0 || nc.eta <= 0.0 {
        return domain("ladder coefficients need theta > 0 and eta > 0 (eta/theta undefined)");
    }
    let ratio_root = (nc.eta / nc.theta).sqrt();
    Ok(LadderCoeffs {
        scale: (ratio_root / (2.0 * nc.hbar)).sqrt(),
        mixing: 1.0 / ratio_root,
    })
}
