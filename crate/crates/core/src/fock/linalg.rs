use faer::{c64, Mat, Side};

use crate::error::{Error, Result};

pub type CMat = Mat<c64>;

pub fn hermitize(a: &CMat) -> CMat {
    let n = a.nrows();
    Mat::from_fn(n, n, |i, j| (a[(i, j)] + a[(j, i)].conj()) * 0.5)
}

pub fn commutator(a: &CMat, b: &CMat) -> CMat {
    a * b - b * a
}

/// max |a_ij − (c·1)_ij| over rows and columns in `idx`.
pub fn max_abs_on(a: &CMat, idx: &[usize], diag_shift: c64) -> f64 {
    let mut m: f64 = 0.0;
    for &i in idx {
        for &j in idx {
            let v = if i == j { a[(i, j)] - diag_shift } else { a[(i, j)] };
            m = m.max(v.norm());
        }
    }
    m
}

pub fn max_abs(a: &CMat) -> f64 {
    let mut m: f64 = 0.0;
    for j in 0..a.ncols() {
        for i in 0..a.nrows() {
            m = m.max(a[(i, j)].norm());
        }
    }
    m
}

/// max |a − a†|.
pub fn hermiticity_gap(a: &CMat) -> f64 {
    let n = a.nrows();
    let mut m: f64 = 0.0;
    for j in 0..n {
        for i in 0..=j {
            m = m.max((a[(i, j)] - a[(j, i)].conj()).norm());
        }
    }
    m
}

pub fn submatrix(a: &CMat, idx: &[usize]) -> CMat {
    Mat::from_fn(idx.len(), idx.len(), |i, j| a[(idx[i], idx[j])])
}

/// Ascending eigenvalues of a Hermitian matrix.
pub fn eigvalsh(a: &CMat) -> Result<Vec<f64>> {
    a.self_adjoint_eigenvalues(Side::Lower)
        .map_err(|e| Error::Eigen(format!("{e:?}")))
}

pub struct Eigh {
    pub values: Vec<f64>,
    /// Largest imaginary part reported by the solver.
    pub max_imag: f64,
    pub vectors: CMat,
}

pub fn eigh(a: &CMat) -> Result<Eigh> {
    let evd = a
        .self_adjoint_eigen(Side::Lower)
        .map_err(|e| Error::Eigen(format!("{e:?}")))?;
    let s = evd.S().column_vector();
    let values = (0..s.nrows()).map(|i| s[i].re).collect();
    let max_imag = (0..s.nrows()).map(|i| s[i].im.abs()).fold(0.0, f64::max);
    Ok(Eigh {
        values,
        max_imag,
        vectors: evd.U().to_owned(),
    })
}

/// ⟨u|A|u⟩ for a column u of `vectors`.
pub fn expectation(a: &CMat, vectors: &CMat, col: usize) -> c64 {
    let u = vectors.col(col);
    let au = a * u;
    let mut s = c64::new(0.0, 0.0);
    for i in 0..u.nrows() {
        s += u[i].conj() * au[i];
    }
    s
}

/// ‖A u − ⟨A⟩u‖ for a normalized column u.
pub fn eigen_defect(a: &CMat, vectors: &CMat, col: usize) -> f64 {
    let u = vectors.col(col);
    let au = a * u;
    let mean = expectation(a, vectors, col);
    (0..u.nrows())
        .map(|i| (au[i] - mean * u[i]).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

/// Σ_{i∈idx} |u_i|².
pub fn weight_on(vectors: &CMat, col: usize, idx: &[usize]) -> f64 {
    idx.iter().map(|&i| vectors[(i, col)].norm_sqr()).sum()
}
