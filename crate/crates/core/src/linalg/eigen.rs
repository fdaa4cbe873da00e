use alloc::vec::Vec;

#[allow(unused_imports)] // only needed without std
use num_traits::Float;

use super::Matrix;
use crate::{Error, Result};

/// Off-diagonal stopping threshold, relative to `‖A‖_F`.
pub const DEFAULT_EIGEN_TOL: f64 = 1e-12;

const MAX_SWEEPS: usize = 100;
const SYMMETRY_TOL: f64 = 1e-9;

/// Eigen-decomposition `A = Q Λ Qᵀ` of a symmetric matrix.
///
/// `values` are sorted non-increasing and column `i` of `vectors` pairs with
/// `values[i]`. Each eigenvector is signed so that its largest-magnitude
/// entry is positive. Within a repeated eigenvalue the individual vectors
/// are not canonical; compare subspaces with [`super::projector_distance`].
#[derive(Clone, Debug)]
pub struct SymmetricEigen {
    pub values: Vec<f64>,
    pub vectors: Matrix,
}

impl SymmetricEigen {
    /// The `k`-th largest eigenvalue (0-based), or `0.0` past the end.
    pub fn value(&self, k: usize) -> f64 {
        self.values.get(k).copied().unwrap_or(0.0)
    }

    /// Orthonormal basis of the top-`k` eigenvectors.
    pub fn leading_vectors(&self, k: usize) -> Matrix {
        self.vectors.leading_columns(k)
    }

    /// `Q Λ Qᵀ`.
    pub fn reconstruct(&self) -> Matrix {
        let n = self.values.len();
        let mut out = Matrix::zeros(n, n);
        for (i, &lambda) in self.values.iter().enumerate() {
            let q = self.vectors.column(i);
            out.add_outer(lambda, q, q);
        }
        out
    }
}

/// Cyclic Jacobi eigen-decomposition of a symmetric matrix.
///
/// Sweeps until the off-diagonal Frobenius norm drops to `tol · ‖A‖_F`
/// (at most 100 sweeps). Rejects input whose asymmetry exceeds
/// `1e-9 · ‖A‖_F`; the symmetric part is decomposed otherwise.
pub fn sym_eigen(a: &Matrix, tol: f64) -> Result<SymmetricEigen> {
    let n = a.rows();
    if a.cols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: a.cols(),
        });
    }
    let norm = a.frobenius_norm();
    let mut asym = 0.0;
    for j in 0..n {
        for i in 0..j {
            let d = a[(i, j)] - a[(j, i)];
            asym += 2.0 * d * d;
        }
    }
    let asym = asym.sqrt();
    if asym > SYMMETRY_TOL * norm {
        return Err(Error::NotSymmetric { asymmetry: asym / norm });
    }

    let mut w = Matrix::zeros(n, n);
    for j in 0..n {
        for i in 0..n {
            w[(i, j)] = 0.5 * (a[(i, j)] + a[(j, i)]);
        }
    }
    let mut q = Matrix::identity(n);

    let target = tol * norm;
    let mut sweeps = 0;
    while off_diagonal_norm(&w) > target {
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence { sweeps });
        }
        for p in 0..n.saturating_sub(1) {
            for r in (p + 1)..n {
                rotate(&mut w, &mut q, p, r);
            }
        }
        sweeps += 1;
    }

    let diag: Vec<f64> = (0..n).map(|i| w[(i, i)]).collect();
    let mut order: Vec<usize> = (0..n).collect();
    // stable: ties keep their original relative order
    order.sort_by(|&i, &j| diag[j].partial_cmp(&diag[i]).unwrap_or(core::cmp::Ordering::Equal));

    let mut values = Vec::with_capacity(n);
    let mut vectors = Matrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        values.push(diag[src]);
        let col = q.column(src);
        let mut pivot = 0;
        for (i, x) in col.iter().enumerate() {
            if x.abs() > col[pivot].abs() {
                pivot = i;
            }
        }
        let sign = if col[pivot] < 0.0 { -1.0 } else { 1.0 };
        for (d, &x) in vectors.column_mut(dst).iter_mut().zip(col) {
            *d = sign * x;
        }
    }
    Ok(SymmetricEigen { values, vectors })
}

fn off_diagonal_norm(w: &Matrix) -> f64 {
    let n = w.rows();
    let mut s = 0.0;
    for j in 0..n {
        for i in 0..n {
            if i != j {
                s += w[(i, j)] * w[(i, j)];
            }
        }
    }
    s.sqrt()
}

/// One Jacobi rotation annihilating `w[p][r]`; accumulates into `q`.
fn rotate(w: &mut Matrix, q: &mut Matrix, p: usize, r: usize) {
    let apr = w[(p, r)];
    if apr == 0.0 {
        return;
    }
    let app = w[(p, p)];
    let arr = w[(r, r)];
    let theta = (arr - app) / (2.0 * apr);
    let t = if theta.abs() > 1e150 {
        0.5 / theta
    } else {
        let t = 1.0 / (theta.abs() + (theta * theta + 1.0).sqrt());
        if theta < 0.0 {
            -t
        } else {
            t
        }
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    let n = w.rows();

    // W ← W J on columns p, r
    for k in 0..n {
        let wkp = w[(k, p)];
        let wkr = w[(k, r)];
        w[(k, p)] = c * wkp - s * wkr;
        w[(k, r)] = s * wkp + c * wkr;
    }
    // W ← Jᵀ W on rows p, r
    for k in 0..n {
        let wpk = w[(p, k)];
        let wrk = w[(r, k)];
        w[(p, k)] = c * wpk - s * wrk;
        w[(r, k)] = s * wpk + c * wrk;
    }
    w[(p, r)] = 0.0;
    w[(r, p)] = 0.0;

    for k in 0..n {
        let qkp = q[(k, p)];
        let qkr = q[(k, r)];
        q[(k, p)] = c * qkp - s * qkr;
        q[(k, r)] = s * qkp + c * qkr;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    fn random_symmetric(n: usize, seed: u64) -> Matrix {
        let mut rng = crate::stream_rng(seed, 0);
        let mut a = Matrix::zeros(n, n);
        for j in 0..n {
            for i in 0..=j {
                let x: f64 = rng.random_range(-1.0..1.0);
                a[(i, j)] = x;
                a[(j, i)] = x;
            }
        }
        a
    }

    fn check_invariants(a: &Matrix, e: &SymmetricEigen) {
        let n = a.rows();
        let scale = a.frobenius_norm().max(f64::MIN_POSITIVE);
        for i in 0..n {
            let q = e.vectors.column(i);
            let aq = a.matmul(&Matrix::from_columns(&[q]).unwrap()).unwrap();
            let resid: f64 = aq
                .as_slice()
                .iter()
                .zip(q)
                .map(|(x, y)| (x - e.values[i] * y).powi(2))
                .sum::<f64>()
                .sqrt();
            assert!(resid <= 1e-9 * scale, "residual {resid}");
        }
        let qtq = e.vectors.t_matmul(&e.vectors).unwrap();
        assert!((&qtq - &Matrix::identity(n)).frobenius_norm() <= 1e-9);
        for w in e.values.windows(2) {
            assert!(w[0] >= w[1]);
        }
    }

    #[test]
    fn identity_has_unit_spectrum() {
        let e = sym_eigen(&Matrix::identity(3), DEFAULT_EIGEN_TOL).unwrap();
        assert_eq!(e.values, [1.0, 1.0, 1.0]);
    }

    #[test]
    fn diagonal_input_sorted_with_unit_vectors() {
        let a = Matrix::from_diagonal(&[1.0, 3.0]);
        let e = sym_eigen(&a, DEFAULT_EIGEN_TOL).unwrap();
        assert_eq!(e.values, [3.0, 1.0]);
        assert_eq!(e.vectors.column(0), &[0.0, 1.0]);
        assert_eq!(e.vectors.column(1), &[1.0, 0.0]);
    }

    #[test]
    fn random_symmetric_reconstructs() {
        for seed in 0..20 {
            let a = random_symmetric(6, seed);
            let e = sym_eigen(&a, DEFAULT_EIGEN_TOL).unwrap();
            check_invariants(&a, &e);
            let err = (&e.reconstruct() - &a).frobenius_norm();
            assert!(err <= 1e-9 * a.frobenius_norm(), "reconstruction error {err}");
        }
    }

    #[test]
    fn larger_matrix_meets_invariants() {
        let a = random_symmetric(40, 99);
        let e = sym_eigen(&a, DEFAULT_EIGEN_TOL).unwrap();
        check_invariants(&a, &e);
    }

    #[test]
    fn sign_convention_makes_largest_entry_positive() {
        let a = random_symmetric(5, 3);
        let e = sym_eigen(&a, DEFAULT_EIGEN_TOL).unwrap();
        for i in 0..5 {
            let col = e.vectors.column(i);
            let big = col.iter().fold(0.0f64, |m, x| if x.abs() > m.abs() { *x } else { m });
            assert!(big > 0.0);
        }
    }

    #[test]
    fn deterministic_for_identical_input() {
        let a = random_symmetric(8, 5);
        let e1 = sym_eigen(&a, DEFAULT_EIGEN_TOL).unwrap();
        let e2 = sym_eigen(&a, DEFAULT_EIGEN_TOL).unwrap();
        assert_eq!(e1.values, e2.values);
        assert_eq!(e1.vectors, e2.vectors);
    }

    #[test]
    fn asymmetric_input_is_rejected() {
        let a = Matrix::from_rows(&[[1.0, 2.0], [0.0, 1.0]]).unwrap();
        assert!(matches!(
            sym_eigen(&a, DEFAULT_EIGEN_TOL),
            Err(Error::NotSymmetric { .. })
        ));
    }

    #[test]
    fn zero_matrix_is_fine() {
        let e = sym_eigen(&Matrix::zeros(3, 3), DEFAULT_EIGEN_TOL).unwrap();
        assert_eq!(e.values, [0.0; 3]);
    }
}
