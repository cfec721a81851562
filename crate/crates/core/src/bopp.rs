//! Linear realization of the deformed variables in terms of canonical ones:
//!
//! x̂_i = ξ(x_i − θ ε_ij p_j / 2ħ),   p̂_i = ξ(p_i + η ε_ij x_j / 2ħ).

use serde::Serialize;

use crate::nc::NCParams;

/// Ordering of phase-space variables used by every 4-vector in the crate.
pub const VARS: [&str; 4] = ["x1", "x2", "p1", "p2"];

/// Rows give (x̂₁, x̂₂, p̂₁, p̂₂) as combinations of (x₁, x₂, p₁, p₂).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoppMap {
    pub matrix: [[f64; 4]; 4],
}

pub fn bopp_map(nc: &NCParams) -> BoppMap {
    let xi = nc.xi().xi;
    let a = xi * nc.theta() / (2.0 * nc.hbar());
    let b = xi * nc.eta() / (2.0 * nc.hbar());
    BoppMap {
        matrix: [
            [xi, 0.0, 0.0, -a],
            [0.0, xi, a, 0.0],
            [0.0, b, xi, 0.0],
            [-b, 0.0, 0.0, xi],
        ],
    }
}

impl BoppMap {
    pub fn identity() -> Self {
        let mut matrix = [[0.0; 4]; 4];
        for (i, row) in matrix.iter_mut().enumerate() {
            row[i] = 1.0;
        }
        BoppMap { matrix }
    }

    /// Deformed coordinates of a canonical phase-space point.
    pub fn apply(&self, v: [f64; 4]) -> [f64; 4] {
        let mut out = [0.0; 4];
        for (o, row) in out.iter_mut().zip(&self.matrix) {
            *o = row.iter().zip(&v).map(|(m, x)| m * x).sum();
        }
        out
    }

    pub fn determinant(&self) -> f64 {
        // Laplace expansion is fine at 4x4.
        fn det(m: &[Vec<f64>]) -> f64 {
            if m.len() == 1 {
                return m[0][0];
            }
            (0..m.len())
                .map(|c| {
                    let minor: Vec<Vec<f64>> = m[1..]
                        .iter()
                        .map(|row| {
                            row.iter()
                                .enumerate()
                                .filter(|&(j, _)| j != c)
                                .map(|(_, v)| *v)
                                .collect()
                        })
                        .collect();
                    let sign = if c % 2 == 0 { 1.0 } else { -1.0 };
                    sign * m[0][c] * det(&minor)
                })
                .sum()
        }
        let rows: Vec<Vec<f64>> = self.matrix.iter().map(|r| r.to_vec()).collect();
        det(&rows)
    }
}
