//! Misclassification-error distance, the `τ`/`ζ` functions and the
//! distortion-based bounds on the distance between good clusterings.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)] // only needed without std
use num_traits::Float;

use crate::clustering::{distortion, Clustering, ScatterSummary};
use crate::dimred::pca_reduce;
use crate::linalg::Matrix;
use crate::mixture::{check_non_degeneracy, separability_report, MixtureModel, DEFAULT_RANK_TOL};
use crate::{Error, Result};

/// Arguments this far outside a domain are clamped rather than rejected.
const DOMAIN_SLACK: f64 = 1e-12;

/// Largest `K` accepted by [`me_distance_brute`].
pub const BRUTE_FORCE_MAX_K: usize = 8;

fn check_pair(a: &Clustering, b: &Clustering) -> Result<()> {
    if a.n() != b.n() {
        return Err(Error::DimensionMismatch {
            expected: a.n(),
            got: b.n(),
        });
    }
    if a.k() != b.k() {
        return Err(Error::DimensionMismatch {
            expected: a.k(),
            got: b.k(),
        });
    }
    if a.n() == 0 {
        return Err(Error::validation("clusterings of zero points"));
    }
    Ok(())
}

/// `overlap[i][j] = |A_i ∩ B_j|`, row-major `K×K`.
fn overlap(a: &Clustering, b: &Clustering) -> Vec<i64> {
    let k = a.k();
    let mut m = vec![0i64; k * k];
    for (&x, &y) in a.assignment().iter().zip(b.assignment()) {
        m[x * k + y] += 1;
    }
    m
}

/// `1 − (1/N) max_π Σ_k |A_k ∩ B_π(k)|`, in `[0, 1 − 1/K]`.
///
/// The maximizing permutation comes from an `O(K³)` Hungarian solve on the
/// negated overlap matrix.
pub fn me_distance(a: &Clustering, b: &Clustering) -> Result<f64> {
    check_pair(a, b)?;
    let k = a.k();
    let cost: Vec<i64> = overlap(a, b).into_iter().map(|x| -x).collect();
    let perm = min_cost_assignment(&cost, k);
    let matched: i64 = perm.iter().enumerate().map(|(i, &j)| -cost[i * k + j]).sum();
    Ok(1.0 - matched as f64 / a.n() as f64)
}

/// Same value as [`me_distance`], maximizing over all `K!` permutations.
/// Refuses `K > 8`.
pub fn me_distance_brute(a: &Clustering, b: &Clustering) -> Result<f64> {
    check_pair(a, b)?;
    let k = a.k();
    if k > BRUTE_FORCE_MAX_K {
        return Err(Error::SearchSpaceTooLarge {
            size: (1..=k as u128).product(),
            limit: (1..=BRUTE_FORCE_MAX_K as u128).product(),
        });
    }
    let m = overlap(a, b);
    let score = |p: &[usize]| -> i64 { p.iter().enumerate().map(|(i, &j)| m[i * k + j]).sum() };
    // Heap's algorithm
    let mut p: Vec<usize> = (0..k).collect();
    let mut c = vec![0usize; k];
    let mut best = score(&p);
    let mut i = 1;
    while i < k {
        if c[i] < i {
            if i % 2 == 0 {
                p.swap(0, i);
            } else {
                p.swap(c[i], i);
            }
            best = best.max(score(&p));
            c[i] += 1;
            i = 1;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    Ok(1.0 - best as f64 / a.n() as f64)
}

/// Hungarian method (shortest augmenting paths with potentials) on a
/// row-major `n×n` cost matrix. Returns the column assigned to each row.
fn min_cost_assignment(cost: &[i64], n: usize) -> Vec<usize> {
    const INF: i64 = i64::MAX / 4;
    // 1-based with a virtual column 0
    let mut u = vec![0i64; n + 1];
    let mut v = vec![0i64; n + 1];
    let mut row_of = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for i in 1..=n {
        row_of[0] = i;
        let mut j0 = 0;
        let mut minv = vec![INF; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = row_of[j0];
            let mut delta = INF;
            let mut j1 = 0;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                let cur = cost[(i0 - 1) * n + (j - 1)] - u[i0] - v[j];
                if cur < minv[j] {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[row_of[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if row_of[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            row_of[j0] = row_of[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut col_of = vec![0usize; n];
    for j in 1..=n {
        col_of[row_of[j] - 1] = j - 1;
    }
    col_of
}

fn require_k(k: usize) -> Result<f64> {
    if k < 2 {
        return Err(Error::validation(format!("need K >= 2, got {k}")));
    }
    Ok((k - 1) as f64)
}

fn clamp_to(what: &'static str, x: f64, lo: f64, hi: f64) -> Result<f64> {
    if x >= lo - DOMAIN_SLACK && x <= hi + DOMAIN_SLACK {
        Ok(x.max(lo).min(hi))
    } else {
        Err(Error::Domain { what, value: x, lo, hi })
    }
}

/// `τ(δ) = 2δ(1 − δ/(K−1))` on `[0, K−1]`.
pub fn tau(delta: f64, k: usize) -> Result<f64> {
    let km1 = require_k(k)?;
    let d = clamp_to("delta", delta, 0.0, km1)?;
    Ok(2.0 * d * (1.0 - d / km1))
}

/// `τ(δ, δ′) = 2√(δδ′(1 − δ/(K−1))(1 − δ′/(K−1)))`; `τ(δ, δ) = τ(δ)`.
pub fn tau2(delta: f64, delta_prime: f64, k: usize) -> Result<f64> {
    let km1 = require_k(k)?;
    let a = clamp_to("delta", delta, 0.0, km1)?;
    let b = clamp_to("delta", delta_prime, 0.0, km1)?;
    // fixed evaluation order keeps the result exactly symmetric
    let (d, e) = if a <= b { (a, b) } else { (b, a) };
    let prod = d * e * (1.0 - d / km1) * (1.0 - e / km1);
    Ok(2.0 * prod.max(0.0).sqrt())
}

/// `ζ(p) = p / (1 + √(1 − 2p/(K−1)))` on `[0, (K−1)/2]`, the inverse of
/// `τ` on that interval.
pub fn zeta(p: f64, k: usize) -> Result<f64> {
    let km1 = require_k(k)?;
    let p = clamp_to("p", p, 0.0, km1 / 2.0)?;
    Ok(p / (1.0 + (1.0 - 2.0 * p / km1).max(0.0).sqrt()))
}

/// `(D(V,C) − D*(V)) / (λ_{K−1}(S) − λ_K(S))`.
pub fn delta_of_clustering(v: &Matrix, c: &Clustering) -> Result<f64> {
    delta_gamma(v, c, 1.0)
}

/// `(γ D(V,C) − D*(V)) / (λ_{K−1}(S) − λ_K(S))` for `γ ≥ 1`.
pub fn delta_gamma(v: &Matrix, c: &Clustering, gamma: f64) -> Result<f64> {
    if !(gamma >= 1.0 && gamma.is_finite()) {
        return Err(Error::validation(format!("gamma must be finite and >= 1, got {gamma}")));
    }
    let d = distortion(v, c)?;
    let summary = ScatterSummary::of(v)?;
    delta_from_parts(gamma * d, &summary, c.k())
}

/// `δ` from a distortion value and a precomputed scatter spectrum, so many
/// clusterings of one dataset share a single eigensolve.
pub fn delta_from_parts(distortion: f64, summary: &ScatterSummary, k: usize) -> Result<f64> {
    require_k(k)?;
    let gap = summary.gap(k);
    if !(gap > 0.0) || gap < 1e-12 * summary.trace {
        return Err(Error::SpectralGap {
            gap,
            trace: summary.trace,
        });
    }
    let delta = (distortion - summary.lower_bound(k)) / gap;
    Ok(if (-1e-10..0.0).contains(&delta) { 0.0 } else { delta })
}

/// Which bound a [`theorem_bound`] call evaluates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Theorem {
    /// Spherical Gaussian mixture, original data (`δ₀`).
    T1,
    /// Spherical Gaussian mixture, post-`(K−1)`-PCA data (`δ₁`).
    T2,
    /// Log-concave mixture, original data (`δ₂`).
    T4,
    /// Log-concave mixture, post-`(K−1)`-PCA data (`δ₃`).
    T5,
}

impl Theorem {
    pub fn uses_pca(self) -> bool {
        matches!(self, Theorem::T2 | Theorem::T5)
    }
}

/// Where a bound's inputs come from.
#[derive(Clone, Copy, Debug)]
pub enum BoundSource<'a> {
    /// Population separability index, `w_min`, `w_max`.
    Population(&'a MixtureModel),
    /// `δ` of the correct target clustering on the sample and its cluster
    /// fractions.
    Empirical { data: &'a Matrix, truth: &'a Clustering },
}

/// Tag recorded in a [`BoundReport`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundInputs {
    Direct,
    Population,
    Empirical,
}

/// An upper bound on the ME distance between a clustering and an optimal
/// one.
///
/// `bound` is `Some` exactly when both applicability flags hold. `nominal`
/// carries `p_max · τ(δ)` whenever `δ` lies in the domain of `τ`, so a
/// value can be reported and compared even where the hypotheses fail.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundReport {
    pub delta: Option<f64>,
    pub bound: Option<f64>,
    pub nominal: Option<f64>,
    pub delta_leq_half_k_minus_1: bool,
    pub tau_leq_p_min: bool,
    pub inputs: BoundInputs,
    pub reason: Option<String>,
}

impl BoundReport {
    pub fn is_applicable(&self) -> bool {
        self.bound.is_some()
    }

    fn undefined(inputs: BoundInputs, reason: String) -> Self {
        Self {
            delta: None,
            bound: None,
            nominal: None,
            delta_leq_half_k_minus_1: false,
            tau_leq_p_min: false,
            inputs,
            reason: Some(reason),
        }
    }
}

/// `p_max · τ(δ)` when `δ ≤ (K−1)/2` and `τ(δ) ≤ p_min`; inapplicable
/// otherwise. `p_min` and `p_max` are the cluster fractions of the
/// clustering `δ` was measured on.
pub fn bound_from_delta(delta: f64, p_min: f64, p_max: f64, k: usize) -> BoundReport {
    bound_with_inputs(delta, p_min, p_max, k, BoundInputs::Direct)
}

fn bound_with_inputs(delta: f64, p_min: f64, p_max: f64, k: usize, inputs: BoundInputs) -> BoundReport {
    let half = (k.max(1) - 1) as f64 / 2.0;
    let t = tau(delta, k).ok();
    let delta_ok = k >= 2 && delta <= half + DOMAIN_SLACK;
    let tau_ok = t.is_some_and(|t| t <= p_min);
    let nominal = t.map(|t| p_max * t);
    let reason = match (delta_ok, tau_ok) {
        (true, true) => None,
        (false, true) => Some("delta exceeds (K-1)/2".into()),
        (true, false) => Some("tau(delta) exceeds p_min".into()),
        (false, false) => Some("delta exceeds (K-1)/2 and tau(delta) exceeds p_min".into()),
    };
    BoundReport {
        delta: Some(delta),
        bound: if delta_ok && tau_ok { nominal } else { None },
        nominal,
        delta_leq_half_k_minus_1: delta_ok,
        tau_leq_p_min: tau_ok,
        inputs,
        reason,
    }
}

/// Evaluates one of the theorem bounds.
///
/// Population bounds use the separability index with `ε = 0` and the
/// mixture weights: `τ(δ) · w_max`. Empirical bounds use `δ` of the correct
/// target clustering measured on `V` (or on its post-`(K−1)`-PCA image for
/// [`Theorem::T2`]/[`Theorem::T5`]) and that clustering's `p_max`; the
/// empirical `δ` does not depend on the mixture family, so `T1`/`T4` and
/// `T2`/`T5` coincide there.
///
/// An undefined `δ` (degenerate model, non-spherical components for
/// `T1`/`T2`, collapsed spectral gap) yields an inapplicable report.
pub fn theorem_bound(which: Theorem, source: BoundSource<'_>) -> Result<BoundReport> {
    match source {
        BoundSource::Population(model) => {
            let inputs = BoundInputs::Population;
            let nd = check_non_degeneracy(model, DEFAULT_RANK_TOL)?;
            if !nd.holds {
                return Ok(BoundReport::undefined(
                    inputs,
                    format!("non-degenerate condition fails: {}", nd.diagnostic),
                ));
            }
            let report = separability_report(model)?;
            let index = match which {
                Theorem::T1 => &report.delta0,
                Theorem::T2 => &report.delta1,
                Theorem::T4 => &report.delta2,
                Theorem::T5 => &report.delta3,
            };
            match index.value {
                Some(d) => Ok(bound_with_inputs(d, report.w_min, report.w_max, report.k, inputs)),
                None => Ok(BoundReport::undefined(
                    inputs,
                    index
                        .reason
                        .clone()
                        .unwrap_or_else(|| "separability index undefined".into()),
                )),
            }
        }
        BoundSource::Empirical { data, truth } => {
            let inputs = BoundInputs::Empirical;
            let k = truth.k();
            require_k(k)?;
            let delta = if which.uses_pca() {
                let reduced = pca_reduce(data, k - 1)?;
                delta_of_clustering(&reduced.data, truth)
            } else {
                delta_of_clustering(data, truth)
            };
            match delta {
                Ok(d) => Ok(bound_with_inputs(d, truth.p_min(), truth.p_max(), k, inputs)),
                Err(e @ Error::SpectralGap { .. }) => Ok(BoundReport::undefined(inputs, format!("{e}"))),
                Err(e) => Err(e),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clustering::brute_force_optimal;

    fn cl(a: &[usize], k: usize) -> Clustering {
        Clustering::new(a.to_vec(), k).unwrap()
    }

    #[test]
    fn me_distance_examples() {
        let a = cl(&[0, 0, 1, 1], 2);
        assert_eq!(me_distance(&a, &a).unwrap(), 0.0);
        assert_eq!(me_distance(&a, &cl(&[1, 1, 0, 0], 2)).unwrap(), 0.0);
        let b = cl(&[0, 0, 0, 1], 2);
        assert_eq!(me_distance(&b, &a).unwrap(), 0.25);
        assert_eq!(me_distance_brute(&b, &a).unwrap(), 0.25);
        assert_eq!(me_distance_brute(&a, &cl(&[0, 1, 0, 1], 2)).unwrap(), 0.5);
    }

    #[test]
    fn me_distance_rejects_mismatches() {
        assert!(me_distance(&cl(&[0, 1], 2), &cl(&[0, 1, 1], 2)).is_err());
        assert!(me_distance(&cl(&[0, 1], 2), &cl(&[0, 1], 3)).is_err());
        let big = cl(&[0, 1, 2, 3, 4, 5, 6, 7, 8], 9);
        assert!(matches!(
            me_distance_brute(&big, &big),
            Err(Error::SearchSpaceTooLarge { .. })
        ));
        assert_eq!(me_distance(&big, &big).unwrap(), 0.0);
    }

    #[test]
    fn hungarian_matches_brute_on_small_random_pairs() {
        use rand::Rng;
        let mut rng = crate::stream_rng(17, 0);
        for _ in 0..200 {
            let k = rng.random_range(1..=5);
            let n = rng.random_range(1..=12);
            let a: Vec<usize> = (0..n).map(|_| rng.random_range(0..k)).collect();
            let b: Vec<usize> = (0..n).map(|_| rng.random_range(0..k)).collect();
            let (a, b) = (cl(&a, k), cl(&b, k));
            assert_eq!(me_distance(&a, &b).unwrap(), me_distance_brute(&a, &b).unwrap());
        }
    }

    #[test]
    fn tau_and_zeta_endpoints() {
        for k in 2..6 {
            let km1 = (k - 1) as f64;
            assert_eq!(tau(0.0, k).unwrap(), 0.0);
            assert_eq!(zeta(0.0, k).unwrap(), 0.0);
            assert!((tau(km1 / 2.0, k).unwrap() - km1 / 2.0).abs() < 1e-15);
            assert!((zeta(km1 / 2.0, k).unwrap() - km1 / 2.0).abs() < 1e-15);
        }
    }

    #[test]
    fn zeta_inverts_tau() {
        for p in [0.1, 0.3, 0.45] {
            assert!((tau(zeta(p, 2).unwrap(), 2).unwrap() - p).abs() < 1e-12);
        }
    }

    #[test]
    fn domain_guard_clamps_then_rejects() {
        assert_eq!(tau(-1e-13, 2).unwrap(), 0.0);
        assert!(matches!(tau(-1e-6, 2), Err(Error::Domain { .. })));
        assert!(matches!(tau(1.5, 2), Err(Error::Domain { .. })));
        assert!(matches!(zeta(0.6, 2), Err(Error::Domain { .. })));
        assert!(tau(0.2, 1).is_err());
    }

    #[test]
    fn tau2_on_the_diagonal() {
        for d in [0.0, 0.1, 0.37, 0.5, 0.9] {
            assert!((tau2(d, d, 2).unwrap() - tau(d, 2).unwrap()).abs() < 1e-15);
        }
    }

    #[test]
    fn bound_examples() {
        let r = bound_from_delta(0.0, 0.5, 0.5, 2);
        assert_eq!(r.bound, Some(0.0));
        let r = bound_from_delta(0.12482, 0.5, 0.5, 2);
        let want = 2.0 * 0.12482 * (1.0 - 0.12482) * 0.5;
        assert!((r.bound.unwrap() - want).abs() < 1e-15);
        assert!((want - 0.10924).abs() < 1e-5);
        let r = bound_from_delta(0.6, 0.5, 0.5, 2);
        assert_eq!(r.bound, None);
        assert!(!r.delta_leq_half_k_minus_1);
        assert!(r.nominal.is_some());
    }

    #[test]
    fn bound_fails_when_tau_exceeds_p_min() {
        let r = bound_from_delta(0.3, 0.1, 0.9, 2);
        assert!(r.delta_leq_half_k_minus_1);
        assert!(!r.tau_leq_p_min);
        assert_eq!(r.bound, None);
    }

    #[test]
    fn delta_with_singletons_is_zero() {
        let v = Matrix::from_columns(&[[0.0, 1.0], [3.0, 0.5]]).unwrap();
        let c = cl(&[0, 1], 2);
        assert_eq!(delta_of_clustering(&v, &c).unwrap(), 0.0);
    }

    #[test]
    fn optimal_clustering_has_the_smallest_delta() {
        let v = Matrix::from_rows(&[
            [0.1, 0.5, -0.3, 2.0, 2.2, 1.9, 0.0, 2.5],
            [1.0, 0.2, 0.4, -1.0, -0.7, -1.3, 0.8, -0.9],
        ])
        .unwrap();
        let (opt, _) = brute_force_optimal(&v, 2).unwrap();
        let d_opt = delta_of_clustering(&v, &opt).unwrap();
        crate::clustering::for_each_partition(8, 2, |l| {
            let d = delta_of_clustering(&v, &cl(l, 2)).unwrap();
            assert!(d >= 0.0);
            assert!(d >= d_opt - 1e-12);
        })
        .unwrap();
    }

    #[test]
    fn delta_gamma_is_monotone() {
        let v = Matrix::from_rows(&[[0.0, 0.2, 0.1, 3.0, 3.1, 2.7], [0.0, 0.3, -0.2, 1.0, 1.2, 0.8]]).unwrap();
        let c = cl(&[0, 0, 0, 1, 1, 1], 2);
        let d1 = delta_of_clustering(&v, &c).unwrap();
        assert_eq!(delta_gamma(&v, &c, 1.0).unwrap(), d1);
        assert!(delta_gamma(&v, &c, 2.0).unwrap() >= d1);
        assert!(delta_gamma(&v, &c, 0.5).is_err());
    }

    #[test]
    fn collapsed_gap_is_an_error() {
        // isotropic square: λ1 = λ2
        let v = Matrix::from_columns(&[[1.0, 0.0], [-1.0, 0.0], [0.0, 1.0], [0.0, -1.0]]).unwrap();
        let c = cl(&[0, 0, 1, 1], 2);
        assert!(matches!(delta_of_clustering(&v, &c), Err(Error::SpectralGap { .. })));
    }
}
