use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::spectra::EffectiveParams;

pub const DEFAULT_DIMENSION_CAP: usize = 4096;

/// Two-mode truncated Fock basis; the total dimension is `n_per_mode²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FockBasisSpec {
    pub n_per_mode: usize,
    pub m_ref: f64,
    pub w_ref: f64,
    pub hbar: f64,
    pub dimension_cap: usize,
}

impl FockBasisSpec {
    pub fn new(n_per_mode: usize, m_ref: f64, w_ref: f64, hbar: f64) -> Result<Self> {
        Self::with_cap(n_per_mode, m_ref, w_ref, hbar, DEFAULT_DIMENSION_CAP)
    }

    pub fn with_cap(n_per_mode: usize, m_ref: f64, w_ref: f64, hbar: f64, dimension_cap: usize) -> Result<Self> {
        if n_per_mode < 4 {
            return domain(format!("n_per_mode must be >= 4, got {n_per_mode}"));
        }
        if !(m_ref > 0.0 && m_ref.is_finite()) || !(w_ref > 0.0 && w_ref.is_finite()) {
            return domain(format!(
                "reference scale must be positive, got m_ref = {m_ref}, w_ref = {w_ref}"
            ));
        }
        if !(hbar > 0.0 && hbar.is_finite()) {
            return domain("hbar must be positive");
        }
        let dim = n_per_mode.checked_mul(n_per_mode).ok_or(Error::DimensionCap {
            dim: usize::MAX,
            cap: dimension_cap,
        })?;
        if dim > dimension_cap {
            return Err(Error::DimensionCap {
                dim,
                cap: dimension_cap,
            });
        }
        Ok(FockBasisSpec {
            n_per_mode,
            m_ref,
            w_ref,
            hbar,
            dimension_cap,
        })
    }

    /// m_ref = M, w_ref = Ω_P.
    pub fn for_effective(n_per_mode: usize, ep: &EffectiveParams) -> Result<Self> {
        Self::new(n_per_mode, ep.mass, ep.omega_p(), ep.hbar)
    }

    /// m_ref = M, w_ref = G/2M: the symmetric-gauge Landau scale.
    pub fn landau(n_per_mode: usize, ep: &EffectiveParams) -> Result<Self> {
        if !(ep.coupling > 0.0) {
            return Err(Error::UndefinedReduction(format!(
                "G = {} must be positive",
                ep.coupling
            )));
        }
        Self::new(n_per_mode, ep.mass, ep.coupling / (2.0 * ep.mass), ep.hbar)
    }

    pub fn dim(&self) -> usize {
        self.n_per_mode * self.n_per_mode
    }

    pub fn index(&self, n1: usize, n2: usize) -> usize {
        n1 * self.n_per_mode + n2
    }

    pub fn quanta(&self, index: usize) -> (usize, usize) {
        (index / self.n_per_mode, index % self.n_per_mode)
    }

    /// States with both quantum numbers below `n_per_mode − 2`.
    pub fn interior(&self) -> Vec<usize> {
        (0..self.dim())
            .filter(|&i| {
                let (a, b) = self.quanta(i);
                a + 2 < self.n_per_mode && b + 2 < self.n_per_mode
            })
            .collect()
    }

    pub fn edge(&self) -> Vec<usize> {
        (0..self.dim())
            .filter(|&i| {
                let (a, b) = self.quanta(i);
                a + 2 >= self.n_per_mode || b + 2 >= self.n_per_mode
            })
            .collect()
    }

    /// Complete shells n₁ + n₂ ≤ n_per_mode − 3.
    pub fn full_shells(&self) -> Vec<usize> {
        (0..self.dim())
            .filter(|&i| {
                let (a, b) = self.quanta(i);
                a + b + 3 <= self.n_per_mode
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(FockBasisSpec::new(3, 1.0, 1.0, 1.0).is_err());
        assert!(FockBasisSpec::new(4, 0.0, 1.0, 1.0).is_err());
        assert!(FockBasisSpec::new(4, 1.0, -1.0, 1.0).is_err());
        assert!(matches!(
            FockBasisSpec::new(65, 1.0, 1.0, 1.0),
            Err(Error::DimensionCap { dim: 4225, cap: 4096 })
        ));
        let b = FockBasisSpec::new(64, 1.0, 1.0, 1.0).unwrap();
        assert_eq!(b.dim(), 4096);
    }

    #[test]
    fn index_sets() {
        let b = FockBasisSpec::new(5, 1.0, 1.0, 1.0).unwrap();
        assert_eq!(b.interior().len(), 9);
        assert_eq!(b.edge().len(), 16);
        assert_eq!(b.full_shells().len(), 6);
        assert_eq!(b.quanta(b.index(3, 4)), (3, 4));
    }
}
