use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)] // only needed without std
use num_traits::Float;

use super::{dot, sym_eigen, Matrix, DEFAULT_EIGEN_TOL};
use crate::{Error, Result};

const ORTHONORMAL_TOL: f64 = 1e-9;
const DEPENDENT_ROW_TOL: f64 = 1e-12;

/// A data matrix shifted to zero column mean.
#[derive(Clone, Debug)]
pub struct CenteredData {
    /// `F×N`, `z_n = v_n − mean`.
    pub z: Matrix,
    pub mean: Vec<f64>,
}

pub fn center(v: &Matrix) -> Result<CenteredData> {
    let (f, n) = v.shape();
    if n == 0 {
        return Err(Error::validation("cannot center a matrix with no columns"));
    }
    let mut mean = vec![0.0; f];
    for col in v.columns() {
        for (m, x) in mean.iter_mut().zip(col) {
            *m += x;
        }
    }
    let inv = 1.0 / n as f64;
    mean.iter_mut().for_each(|m| *m *= inv);

    let mut z = v.clone();
    for j in 0..n {
        for (x, m) in z.column_mut(j).iter_mut().zip(&mean) {
            *x -= m;
        }
    }
    Ok(CenteredData { z, mean })
}

/// Spectrum of the scatter matrix `S = ZᵀZ`.
#[derive(Clone, Debug)]
pub struct ScatterSpectrum {
    /// Top `F` eigenvalues of `S`, non-increasing. The remaining `N − F`
    /// eigenvalues are zero.
    pub eigenvalues: Vec<f64>,
    /// `tr(S) = ‖Z‖_F²`.
    pub trace: f64,
}

/// Eigenvalues of `S = ZᵀZ` obtained as `N · eig(Z Zᵀ / N)`; the `N×N`
/// problem is never formed. Requires `N > F`.
pub fn scatter_spectrum(z: &Matrix) -> Result<ScatterSpectrum> {
    let (f, n) = z.shape();
    if n <= f {
        return Err(Error::UnsupportedRegime { n, f });
    }
    let cov = z.gram_rows().scaled(1.0 / n as f64);
    let e = sym_eigen(&cov, DEFAULT_EIGEN_TOL)?;
    let eigenvalues = e.values.iter().map(|l| (l * n as f64).max(0.0)).collect();
    Ok(ScatterSpectrum {
        eigenvalues,
        trace: z.frobenius_norm_sq(),
    })
}

/// Non-increasing eigenvalues of `S = ZᵀZ` in any shape regime: the
/// smaller of the `F×F` and `N×N` Gram problems is solved (their nonzero
/// spectra coincide). Returns `min(F, N)` values; all others are zero.
pub fn scatter_eigenvalues(z: &Matrix) -> Result<Vec<f64>> {
    let (f, n) = z.shape();
    let gram = if f <= n { z.gram_rows() } else { z.gram_cols() };
    let e = sym_eigen(&gram, DEFAULT_EIGEN_TOL)?;
    Ok(e.values.into_iter().map(|l| l.max(0.0)).collect())
}

/// `‖BᵀB − I‖_F`.
pub fn orthonormality_error(b: &Matrix) -> f64 {
    let g = b.gram_cols();
    (&g - &Matrix::identity(b.cols())).frobenius_norm()
}

/// Distance between the column spaces of two orthonormal bases:
/// `‖B₁B₁ᵀ − B₂B₂ᵀ‖_F`. Invariant to the choice of basis within each
/// subspace.
pub fn projector_distance(b1: &Matrix, b2: &Matrix) -> Result<f64> {
    if b1.rows() != b2.rows() {
        return Err(Error::DimensionMismatch {
            expected: b1.rows(),
            got: b2.rows(),
        });
    }
    if b1.cols() != b2.cols() {
        return Err(Error::DimensionMismatch {
            expected: b1.cols(),
            got: b2.cols(),
        });
    }
    for b in [b1, b2] {
        let deviation = orthonormality_error(b);
        if !(deviation <= ORTHONORMAL_TOL) {
            return Err(Error::NotOrthonormal { deviation });
        }
    }
    Ok((&b1.gram_rows() - &b2.gram_rows()).frobenius_norm())
}

/// Orthonormalizes the rows of `m` by modified Gram–Schmidt with a second
/// re-orthogonalization pass. A row that is numerically dependent on the
/// previous ones (residual below `1e-12` of its original norm) becomes a
/// zero row.
pub fn orthonormalize_rows(m: &Matrix) -> Matrix {
    // rows of m are the columns of mᵀ, which are contiguous
    let mut t = m.transpose();
    let k = t.cols();
    let mut kept: Vec<usize> = Vec::with_capacity(k);
    for j in 0..k {
        let original = dot(t.column(j), t.column(j)).sqrt();
        for _pass in 0..2 {
            for &i in &kept {
                let proj = dot(t.column(i), t.column(j));
                let (qi, vj) = two_columns(&mut t, i, j);
                for (x, q) in vj.iter_mut().zip(qi.iter()) {
                    *x -= proj * q;
                }
            }
        }
        let norm = dot(t.column(j), t.column(j)).sqrt();
        let col = t.column_mut(j);
        if original > 0.0 && norm > DEPENDENT_ROW_TOL * original {
            col.iter_mut().for_each(|x| *x /= norm);
            kept.push(j);
        } else {
            col.iter_mut().for_each(|x| *x = 0.0);
        }
    }
    t.transpose()
}

/// Borrow column `i` immutably and column `j` mutably (`i != j`).
fn two_columns(m: &mut Matrix, i: usize, j: usize) -> (&[f64], &mut [f64]) {
    let rows = m.rows();
    let data = m.as_mut_slice();
    if i < j {
        let (a, b) = data.split_at_mut(j * rows);
        (&a[i * rows..(i + 1) * rows], &mut b[..rows])
    } else {
        let (a, b) = data.split_at_mut(i * rows);
        (&b[..rows], &mut a[j * rows..(j + 1) * rows])
    }
}

/// Spectral norm of a symmetric matrix, `max |λ|`.
pub fn spectral_norm_sym(a: &Matrix) -> Result<f64> {
    let e = sym_eigen(a, DEFAULT_EIGEN_TOL)?;
    Ok(e.values.iter().fold(0.0, |m: f64, l| m.max(l.abs())))
}
