//! Canonical and deformed position/momentum matrices on the two-mode Fock space.

use faer::{c64, Mat, Scale};

use super::basis::FockBasisSpec;
use super::linalg::CMat;
use crate::bopp::{bopp_map, BoppMap};
use crate::nc::NCParams;

/// Real coefficients of Σ Q_ab v_a v_b in the ordering (x₁, x₂, p₁, p₂).
pub type QuadraticForm = [[f64; 4]; 4];

/// Single-mode x and p at (m_ref, w_ref), truncated to `n` levels.
pub fn single_mode(n: usize, m: f64, w: f64, hbar: f64) -> (CMat, CMat) {
    let sx = (hbar / (2.0 * m * w)).sqrt();
    let sp = (m * hbar * w / 2.0).sqrt();
    // a|k⟩ = √k|k−1⟩, so a_{k−1,k} = √k
    let lad = |i: usize, j: usize| -> f64 {
        if j == i + 1 {
            (j as f64).sqrt()
        } else {
            0.0
        }
    };
    let x = Mat::from_fn(n, n, |i, j| c64::new(sx * (lad(i, j) + lad(j, i)), 0.0));
    let p = Mat::from_fn(n, n, |i, j| c64::new(0.0, sp * (lad(j, i) - lad(i, j))));
    (x, p)
}

/// Immutable operator set. Dense two-mode matrices are assembled on demand
/// from the single-mode blocks, so products of canonical operators are exact
/// Kronecker products of single-mode products.
#[derive(Debug, Clone)]
pub struct FockOperatorSet {
    basis: FockBasisSpec,
    x: CMat,
    p: CMat,
    id: CMat,
    map: BoppMap,
    nc: NCParams,
}

pub fn build_operators(basis: &FockBasisSpec, nc: &NCParams) -> FockOperatorSet {
    let n = basis.n_per_mode;
    let (x, p) = single_mode(n, basis.m_ref, basis.w_ref, basis.hbar);
    FockOperatorSet {
        basis: *basis,
        x,
        p,
        id: Mat::identity(n, n),
        map: bopp_map(nc),
        nc: *nc,
    }
}

impl FockOperatorSet {
    pub fn basis(&self) -> &FockBasisSpec {
        &self.basis
    }

    pub fn nc(&self) -> &NCParams {
        &self.nc
    }

    pub fn map(&self) -> &BoppMap {
        &self.map
    }

    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    /// (mode, single-mode matrix) for canonical variable `v`.
    fn factor(&self, v: usize) -> (usize, &CMat) {
        match v {
            0 => (0, &self.x),
            1 => (1, &self.x),
            2 => (0, &self.p),
            3 => (1, &self.p),
            _ => panic!("variable index {v} out of range"),
        }
    }

    fn on_modes(&self, first: &CMat, second: &CMat) -> CMat {
        first.kron(second)
    }

    /// Canonical operator x₁, x₂, p₁ or p₂ (index 0..4).
    pub fn canonical(&self, v: usize) -> CMat {
        let (mode, f) = self.factor(v);
        if mode == 0 {
            self.on_modes(f, &self.id)
        } else {
            self.on_modes(&self.id, f)
        }
    }

    /// The ordered product v_a v_b of canonical operators.
    pub fn product(&self, a: usize, b: usize) -> CMat {
        let (ma, fa) = self.factor(a);
        let (mb, fb) = self.factor(b);
        match (ma, mb) {
            (0, 0) => self.on_modes(&(fa * fb), &self.id),
            (1, 1) => self.on_modes(&self.id, &(fa * fb)),
            (0, _) => self.on_modes(fa, fb),
            _ => self.on_modes(fb, fa),
        }
    }

    pub fn linear(&self, coeffs: &[f64; 4]) -> CMat {
        let d = self.dim();
        let mut out = Mat::<c64>::zeros(d, d);
        for (v, &c) in coeffs.iter().enumerate() {
            if c != 0.0 {
                out += self.canonical(v) * Scale(c64::new(c, 0.0));
            }
        }
        out
    }

    /// Deformed operator x̂₁, x̂₂, p̂₁ or p̂₂ as a combination of canonical ones.
    pub fn deformed(&self, v: usize) -> CMat {
        self.linear(&self.map.matrix[v])
    }

    pub fn quadratic(&self, q: &QuadraticForm) -> CMat {
        let d = self.dim();
        let mut out = Mat::<c64>::zeros(d, d);
        for (a, row) in q.iter().enumerate() {
            for (b, &c) in row.iter().enumerate() {
                if c != 0.0 {
                    out += self.product(a, b) * Scale(c64::new(c, 0.0));
                }
            }
        }
        out
    }

    /// A quadratic form in the deformed variables, rewritten in canonical
    /// ones with operator order preserved: v̂_a v̂_b = Σ B_ac B_bd v_c v_d.
    pub fn deformed_quadratic(&self, q: &QuadraticForm) -> CMat {
        self.quadratic(&pull_back(q, &self.map))
    }

    pub fn identity(&self) -> CMat {
        Mat::identity(self.dim(), self.dim())
    }
}

pub fn pull_back(q: &QuadraticForm, map: &BoppMap) -> QuadraticForm {
    let b = &map.matrix;
    let mut out = [[0.0; 4]; 4];
    for (c, row) in out.iter_mut().enumerate() {
        for (d, slot) in row.iter_mut().enumerate() {
            let mut s = 0.0;
            for a in 0..4 {
                for e in 0..4 {
                    s += q[a][e] * b[a][c] * b[e][d];
                }
            }
            *slot = s;
        }
    }
    out
}

/// Q_cd = Σ_k L_k,c L_k,d / norm for a list of linear forms L_k.
pub fn sum_of_squares(forms: &[[f64; 4]], norm: f64) -> QuadraticForm {
    let mut out = [[0.0; 4]; 4];
    for l in forms {
        for c in 0..4 {
            for d in 0..4 {
                out[c][d] += l[c] * l[d] / norm;
            }
        }
    }
    out
}
