use alloc::vec::Vec;

#[allow(unused_imports)] // only needed without std
use num_traits::Float;

use super::{dot, Matrix};
use crate::{Error, Result};

const MAX_SWEEPS: usize = 60;
const ORTHO_TOL: f64 = 1e-15;

/// Thin SVD `A = U diag(s) Vᵀ` with `r = min(rows, cols)` triplets sorted
/// by non-increasing singular value. Columns of `u` for zero singular values
/// are left as zero vectors.
#[derive(Clone, Debug)]
pub struct ThinSvd {
    pub u: Matrix,
    pub s: Vec<f64>,
    pub v: Matrix,
}

/// One-sided (Hestenes) Jacobi SVD.
///
/// Works on the columns directly rather than on `AᵀA`, so singular values
/// far below the largest one keep their relative accuracy. That matters for
/// rank decisions at thresholds like `1e-10 · σ_max`.
pub fn thin_svd(a: &Matrix) -> Result<ThinSvd> {
    if a.rows() < a.cols() {
        let t = thin_svd(&a.transpose())?;
        return Ok(ThinSvd { u: t.v, s: t.s, v: t.u });
    }
    let n = a.cols();
    let mut w = a.clone();
    let mut v = Matrix::identity(n);

    let mut sweeps = 0;
    loop {
        let mut rotated = false;
        for p in 0..n.saturating_sub(1) {
            for q in (p + 1)..n {
                let alpha = dot(w.column(p), w.column(p));
                let beta = dot(w.column(q), w.column(q));
                let gamma = dot(w.column(p), w.column(q));
                if gamma == 0.0 || gamma.abs() <= ORTHO_TOL * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                rotate_columns(&mut w, p, q, c, s);
                rotate_columns(&mut v, p, q, c, s);
            }
        }
        if !rotated {
            break;
        }
        sweeps += 1;
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence { sweeps });
        }
    }

    let norms: Vec<f64> = (0..n).map(|j| dot(w.column(j), w.column(j)).sqrt()).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| norms[j].partial_cmp(&norms[i]).unwrap_or(core::cmp::Ordering::Equal));

    let mut u = Matrix::zeros(a.rows(), n);
    let mut vs = Matrix::zeros(n, n);
    let mut s = Vec::with_capacity(n);
    for (dst, &src) in order.iter().enumerate() {
        let sigma = norms[src];
        s.push(sigma);
        if sigma > 0.0 {
            for (d, &x) in u.column_mut(dst).iter_mut().zip(w.column(src)) {
                *d = x / sigma;
            }
        }
        vs.column_mut(dst).copy_from_slice(v.column(src));
    }
    Ok(ThinSvd { u, s, v: vs })
}

fn rotate_columns(m: &mut Matrix, p: usize, q: usize, c: f64, s: f64) {
    for k in 0..m.rows() {
        let xp = m[(k, p)];
        let xq = m[(k, q)];
        m[(k, p)] = c * xp - s * xq;
        m[(k, q)] = s * xp + c * xq;
    }
}
