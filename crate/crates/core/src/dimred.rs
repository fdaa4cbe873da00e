//! Dimensionality reduction before clustering: PCA, uncentered k-SVD,
//! Gaussian random projection and randomized SVD.

use alloc::format;
use alloc::vec::Vec;

use rand::Rng;
use rand_distr::StandardNormal;

use crate::clustering::{centroids, distortion, Clustering};
use crate::linalg::{center, orthonormalize_rows, sq_dist, sym_eigen, thin_svd, Matrix, DEFAULT_EIGEN_TOL};
use crate::{stream_rng, Error, Result};

/// Oversampling used for the default randomized-SVD sketch, `D = K + 10`.
pub const DEFAULT_SKETCH_OVERSAMPLING: usize = 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReductionMethod {
    Pca,
    Svd,
    RandomProjection,
    RandomizedSvd,
}

/// A `d×N` reduced dataset with the `F×d` orthonormal basis it was
/// projected onto (`Ṽ = Bᵀ V`).
#[derive(Clone, Debug)]
pub struct ReducedDataset {
    pub data: Matrix,
    pub method: ReductionMethod,
    pub basis: Option<Matrix>,
    pub dim: usize,
}

fn check_dim(v: &Matrix, d: usize) -> Result<()> {
    if d == 0 || d > v.rows() {
        return Err(Error::validation(format!(
            "target dimension must be in 1..={}, got {d}",
            v.rows()
        )));
    }
    Ok(())
}

/// `Σ̄_N = ZZᵀ/N` (centered) or `Σ_N = VVᵀ/N` (uncentered).
pub fn sample_covariance(v: &Matrix, centered: bool) -> Result<Matrix> {
    let n = v.cols();
    if n == 0 {
        return Err(Error::validation("covariance of zero samples"));
    }
    let gram = if centered {
        center(v)?.z.gram_rows()
    } else {
        v.gram_rows()
    };
    Ok(gram.scaled(1.0 / n as f64))
}

fn project_onto_top(v: &Matrix, cov: &Matrix, d: usize, method: ReductionMethod) -> Result<ReducedDataset> {
    let basis = sym_eigen(cov, DEFAULT_EIGEN_TOL)?.leading_vectors(d);
    Ok(ReducedDataset {
        data: basis.t_matmul(v)?,
        method,
        basis: Some(basis),
        dim: d,
    })
}

/// Projects the uncentered `V` onto the top-`d` eigenvectors of the
/// centered sample covariance `ZZᵀ/N`. The result is not re-centered;
/// distortion is translation invariant.
pub fn pca_reduce(v: &Matrix, d: usize) -> Result<ReducedDataset> {
    check_dim(v, d)?;
    if v.cols() < 2 {
        return Err(Error::validation("PCA needs N >= 2"));
    }
    project_onto_top(v, &sample_covariance(v, true)?, d, ReductionMethod::Pca)
}

/// As [`pca_reduce`] with the uncentered second moment `VVᵀ/N`.
pub fn svd_reduce(v: &Matrix, d: usize) -> Result<ReducedDataset> {
    check_dim(v, d)?;
    if v.cols() < 2 {
        return Err(Error::validation("SVD reduction needs N >= 2"));
    }
    project_onto_top(v, &sample_covariance(v, false)?, d, ReductionMethod::Svd)
}

fn gaussian_matrix(rows: usize, cols: usize, seed: u64) -> Matrix {
    let mut rng = stream_rng(seed, 0);
    let data = (0..rows * cols).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
    Matrix::from_col_major(rows, cols, data).expect("length matches")
}

/// `Ṽ = RV` where `R` is a `d×F` standard Gaussian matrix with
/// orthonormalized rows.
pub fn random_projection(v: &Matrix, d: usize, seed: u64) -> Result<ReducedDataset> {
    check_dim(v, d)?;
    let r = orthonormalize_rows(&gaussian_matrix(d, v.rows(), seed));
    Ok(ReducedDataset {
        data: r.matmul(v)?,
        method: ReductionMethod::RandomProjection,
        basis: Some(r.transpose()),
        dim: d,
    })
}

/// Randomized SVD with a `sketch`-row Gaussian test matrix `L`:
/// `A = LV`, `B` = `A` with orthonormalized rows, `Z_K` = top-`K` left
/// singular vectors of `VBᵀ`, `Ṽ = Z_Kᵀ V`.
pub fn randomized_svd(v: &Matrix, k: usize, sketch: usize, seed: u64) -> Result<ReducedDataset> {
    let (f, n) = v.shape();
    if k == 0 || sketch < k {
        return Err(Error::validation(format!(
            "need 1 <= K <= D, got K = {k}, D = {sketch}"
        )));
    }
    if sketch > f.min(n) {
        return Err(Error::validation(format!(
            "sketch size {sketch} exceeds min(F, N) = {}",
            f.min(n)
        )));
    }
    let a = gaussian_matrix(sketch, f, seed).matmul(v)?;
    let b = orthonormalize_rows(&a);
    let y = v.matmul(&b.transpose())?;
    let basis = thin_svd(&y)?.u.leading_columns(k);
    Ok(ReducedDataset {
        data: basis.t_matmul(v)?,
        method: ReductionMethod::RandomizedSvd,
        basis: Some(basis),
        dim: k,
    })
}

/// `D(V, C_reduced) / D(V, C_opt)`, both measured on the original data.
/// Returns `1` when both are zero and `+∞` when only the denominator is.
pub fn gamma_factor(v: &Matrix, reduced_opt: &Clustering, opt: &Clustering) -> Result<f64> {
    let num = distortion(v, reduced_opt)?;
    let den = distortion(v, opt)?;
    Ok(if den > 0.0 {
        num / den
    } else if num > 0.0 {
        f64::INFINITY
    } else {
        1.0
    })
}

/// `‖x − WWᵀx‖²` for an orthonormal basis `W`.
pub fn subspace_distance_sq(x: &[f64], w: &Matrix) -> f64 {
    let mut resid = x.to_vec();
    for b in w.columns() {
        let c = crate::linalg::dot(b, x);
        for (r, bi) in resid.iter_mut().zip(b) {
            *r -= c * bi;
        }
    }
    resid.iter().map(|r| r * r).sum()
}

/// Both sides of the centroid-to-subspace inequality
/// `Σ_k n_k d(c̄_k, W)² ≤ (K−1) Σ_k n_k σ²_{k,W}(V)`, where `c̄_k` are
/// centroids relative to the data mean and `σ²_{k,W}` is the largest
/// variance of cluster `k` along a direction in `W`.
pub fn centroid_subspace_sides(v: &Matrix, c: &Clustering, w: &Matrix) -> Result<(f64, f64)> {
    if w.rows() != v.rows() {
        return Err(Error::DimensionMismatch {
            expected: v.rows(),
            got: w.rows(),
        });
    }
    let mean = center(v)?.mean;
    let (cent, sizes) = centroids(v, c)?;
    let dim = w.cols();
    let mut lhs = 0.0;
    let mut rhs = 0.0;
    for (k, &nk) in sizes.iter().enumerate() {
        if nk == 0 {
            continue;
        }
        let rel: Vec<f64> = cent.column(k).iter().zip(&mean).map(|(a, b)| a - b).collect();
        lhs += nk as f64 * subspace_distance_sq(&rel, w);

        // W-coordinates of the cluster's deviations from its centroid
        let mut scatter = Matrix::zeros(dim, dim);
        for n in c.members(k) {
            let dev: Vec<f64> = v.column(n).iter().zip(cent.column(k)).map(|(a, b)| a - b).collect();
            let coords: Vec<f64> = w.columns().map(|b| crate::linalg::dot(b, &dev)).collect();
            scatter.add_outer(1.0, &coords, &coords);
        }
        // n_k σ²_{k,W} = λ_max of the summed scatter
        let top = if dim == 0 {
            0.0
        } else {
            sym_eigen(&scatter, DEFAULT_EIGEN_TOL)?.value(0)
        };
        rhs += top.max(0.0);
    }
    Ok((lhs, (c.k() - 1) as f64 * rhs))
}

/// `Σ_k w_k d(u_k − ū, W)²` for population means and weights.
pub fn weighted_mean_subspace_distance(weights: &[f64], means: &[Vec<f64>], w: &Matrix) -> f64 {
    let f = w.rows();
    let mut mean = alloc::vec![0.0; f];
    for (wk, u) in weights.iter().zip(means) {
        for (m, x) in mean.iter_mut().zip(u) {
            *m += wk * x;
        }
    }
    weights
        .iter()
        .zip(means)
        .map(|(wk, u)| {
            let rel: Vec<f64> = u.iter().zip(&mean).map(|(a, b)| a - b).collect();
            wk * subspace_distance_sq(&rel, w)
        })
        .sum()
}

/// Squared distances between all pairs of columns, used to check
/// distance preservation in tests and diagnostics.
pub fn pairwise_sq_distances(m: &Matrix) -> Vec<f64> {
    let n = m.cols();
    let mut out = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for j in 0..n {
        for i in 0..j {
            out.push(sq_dist(m.column(i), m.column(j)));
        }
    }
    out
}
