//! Sum-of-squares distortion, Lloyd's algorithm and the spectral lower
//! bound on distortion over all `K`-clusterings.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::linalg::{center, scatter_eigenvalues, sq_dist, Matrix};
use crate::{stream_rng, Error, Result};

/// Exhaustive search refuses more partitions than this.
pub const BRUTE_FORCE_LIMIT: u128 = 10_000_000;

/// A partition of `0..N` into `K` labelled clusters. Clusters may be empty.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Clustering {
    assignment: Vec<usize>,
    k: usize,
}

impl Clustering {
    pub fn new(assignment: Vec<usize>, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::validation("a clustering needs K >= 1"));
        }
        if let Some(&bad) = assignment.iter().find(|&&a| a >= k) {
            return Err(Error::validation(format!(
                "cluster index {bad} is out of range for K = {k}"
            )));
        }
        Ok(Self { assignment, k })
    }

    /// All points in cluster 0.
    pub fn single(n: usize, k: usize) -> Result<Self> {
        Self::new(vec![0; n], k)
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.assignment.len()
    }

    pub fn sizes(&self) -> Vec<usize> {
        let mut s = vec![0; self.k];
        for &a in &self.assignment {
            s[a] += 1;
        }
        s
    }

    /// Indices in cluster `k`, increasing.
    pub fn members(&self, k: usize) -> Vec<usize> {
        (0..self.n()).filter(|&n| self.assignment[n] == k).collect()
    }

    /// Smallest cluster fraction `min_k |C_k| / N` (0 if a cluster is empty).
    pub fn p_min(&self) -> f64 {
        let n = self.n().max(1) as f64;
        self.sizes().into_iter().min().unwrap_or(0) as f64 / n
    }

    /// Largest cluster fraction `max_k |C_k| / N`.
    pub fn p_max(&self) -> f64 {
        let n = self.n().max(1) as f64;
        self.sizes().into_iter().max().unwrap_or(0) as f64 / n
    }

    /// Renames cluster `k` to `perm[k]`.
    pub fn relabeled(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.k {
            return Err(Error::DimensionMismatch {
                expected: self.k,
                got: perm.len(),
            });
        }
        Self::new(self.assignment.iter().map(|&a| perm[a]).collect(), self.k)
    }
}

fn check_shape(v: &Matrix, c: &Clustering) -> Result<()> {
    if v.cols() != c.n() {
        return Err(Error::DimensionMismatch {
            expected: v.cols(),
            got: c.n(),
        });
    }
    Ok(())
}

/// Cluster means as columns of an `F×K` matrix plus cluster sizes. Empty
/// clusters get a zero column.
pub fn centroids(v: &Matrix, c: &Clustering) -> Result<(Matrix, Vec<usize>)> {
    check_shape(v, c)?;
    let mut cent = Matrix::zeros(v.rows(), c.k());
    let mut sizes = vec![0usize; c.k()];
    for (col, &a) in v.columns().zip(c.assignment()) {
        sizes[a] += 1;
        for (d, x) in cent.column_mut(a).iter_mut().zip(col) {
            *d += x;
        }
    }
    for (k, &s) in sizes.iter().enumerate() {
        if s > 0 {
            let inv = 1.0 / s as f64;
            cent.column_mut(k).iter_mut().for_each(|x| *x *= inv);
        }
    }
    Ok((cent, sizes))
}

/// `Σ_k Σ_{n ∈ C_k} ‖v_n − c_k‖²` with `c_k` the mean of cluster `k`.
pub fn distortion(v: &Matrix, c: &Clustering) -> Result<f64> {
    let (cent, _) = centroids(v, c)?;
    Ok(v.columns()
        .zip(c.assignment())
        .map(|(col, &a)| sq_dist(col, cent.column(a)))
        .sum())
}

/// Spectrum of the centered scatter `S = ZᵀZ` of a data matrix.
#[derive(Clone, Debug)]
pub struct ScatterSummary {
    /// `tr(S)`.
    pub trace: f64,
    /// The `min(F, N)` leading eigenvalues of `S`, non-increasing.
    pub eigenvalues: Vec<f64>,
}

impl ScatterSummary {
    pub fn of(v: &Matrix) -> Result<Self> {
        let z = center(v)?.z;
        Ok(Self {
            trace: z.frobenius_norm_sq(),
            eigenvalues: scatter_eigenvalues(&z)?,
        })
    }

    /// The `i`-th largest eigenvalue of `S`, 1-based; zero past the rank.
    pub fn lambda(&self, i: usize) -> f64 {
        debug_assert!(i >= 1);
        self.eigenvalues.get(i - 1).copied().unwrap_or(0.0)
    }

    /// `tr(S) − Σ_{i<K} λ_i(S)`, clamped at zero.
    pub fn lower_bound(&self, k: usize) -> f64 {
        let top: f64 = self.eigenvalues.iter().take(k.saturating_sub(1)).sum();
        let d = self.trace - top;
        // trace and eigenvalue sum agree only to rounding
        if d <= 1e-12 * self.trace {
            0.0
        } else {
            d
        }
    }

    /// `λ_{K−1}(S) − λ_K(S)`.
    pub fn gap(&self, k: usize) -> f64 {
        self.lambda(k - 1) - self.lambda(k)
    }
}

/// Lower bound `D*(V) = tr(S) − Σ_{k=1}^{K−1} λ_k(S)` on the distortion of
/// every `K`-clustering of `V`.
///
/// Whichever of the `F×F` and `N×N` Gram problems is smaller gets solved.
/// `N = K` is allowed (the bound is then zero).
pub fn distortion_lower_bound(v: &Matrix, k: usize) -> Result<f64> {
    if k == 0 || k > v.cols() {
        return Err(Error::validation(format!(
            "lower bound needs 1 <= K <= N, got K = {k}, N = {}",
            v.cols()
        )));
    }
    Ok(ScatterSummary::of(v)?.lower_bound(k))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Seeding {
    #[default]
    KMeansPlusPlus,
    UniformRandom,
}

#[derive(Clone, Debug, PartialEq)]
pub struct KMeansConfig {
    pub restarts: usize,
    pub max_iter: usize,
    /// Stop once a Lloyd step improves distortion by less than this
    /// fraction.
    pub rel_tol: f64,
    pub seeding: Seeding,
    pub seed: u64,
}

impl Default for KMeansConfig {
    fn default() -> Self {
        Self {
            restarts: 10,
            max_iter: 1000,
            rel_tol: 1e-10,
            seeding: Seeding::KMeansPlusPlus,
            seed: 0,
        }
    }
}

impl KMeansConfig {
    pub fn with_seed(seed: u64) -> Self {
        Self {
            seed,
            ..Self::default()
        }
    }

    fn validate(&self) -> Result<()> {
        if self.restarts == 0 || self.max_iter == 0 {
            return Err(Error::validation("restarts and max_iter must be >= 1"));
        }
        if !(self.rel_tol >= 0.0) {
            return Err(Error::validation("rel_tol must be >= 0"));
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct KMeansResult {
    pub clustering: Clustering,
    /// Exactly `distortion(V, clustering)`.
    pub distortion: f64,
    /// Lloyd iterations of the winning restart.
    pub iterations: usize,
    /// Index of the winning restart.
    pub restart: usize,
    /// Distortion after seeding and after each iteration of the winning
    /// restart; non-increasing.
    pub history: Vec<f64>,
}

/// Best of `cfg.restarts` Lloyd runs. Restart `r` draws from the stream
/// `(cfg.seed, r)`; the lowest distortion wins, ties going to the lower
/// restart index.
pub fn kmeans(v: &Matrix, k: usize, cfg: &KMeansConfig) -> Result<KMeansResult> {
    cfg.validate()?;
    let n = v.cols();
    if k == 0 || k > n {
        return Err(Error::validation(format!(
            "k-means needs 1 <= K <= N, got K = {k}, N = {n}"
        )));
    }
    let mut best: Option<KMeansResult> = None;
    for r in 0..cfg.restarts {
        let mut rng = stream_rng(cfg.seed, r as u64);
        let seeds = match cfg.seeding {
            Seeding::KMeansPlusPlus => seed_plus_plus(v, k, &mut rng),
            Seeding::UniformRandom => rand::seq::index::sample(&mut rng, n, k).into_vec(),
        };
        let mut init = Matrix::zeros(v.rows(), k);
        for (j, &s) in seeds.iter().enumerate() {
            init.column_mut(j).copy_from_slice(v.column(s));
        }
        let mut run = lloyd(v, init, cfg)?;
        run.restart = r;
        if best.as_ref().map_or(true, |b| run.distortion < b.distortion) {
            best = Some(run);
        }
    }
    Ok(best.expect("at least one restart"))
}

/// k-means++: first center uniform, then proportional to squared distance
/// from the nearest chosen center.
fn seed_plus_plus(v: &Matrix, k: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let n = v.cols();
    let mut chosen = Vec::with_capacity(k);
    chosen.push(rng.random_range(0..n));
    let mut d2: Vec<f64> = v.columns().map(|c| sq_dist(c, v.column(chosen[0]))).collect();
    while chosen.len() < k {
        let total: f64 = d2.iter().sum();
        let next = if total > 0.0 {
            let target = rng.random::<f64>() * total;
            let mut acc = 0.0;
            let mut pick = None;
            for (i, &d) in d2.iter().enumerate() {
                acc += d;
                if d > 0.0 && acc > target {
                    pick = Some(i);
                    break;
                }
            }
            // rounding can leave target just past the running sum
            pick.unwrap_or_else(|| d2.iter().rposition(|&d| d > 0.0).unwrap())
        } else {
            rng.random_range(0..n)
        };
        chosen.push(next);
        let c = v.column(next);
        for (d, col) in d2.iter_mut().zip(v.columns()) {
            *d = d.min(sq_dist(col, c));
        }
    }
    chosen
}

/// Nearest centroid per point; ties go to the lower cluster index.
fn assign(v: &Matrix, cent: &Matrix) -> Vec<usize> {
    v.columns()
        .map(|col| {
            let mut best = 0;
            let mut best_d = f64::INFINITY;
            for (k, c) in cent.columns().enumerate() {
                let d = sq_dist(col, c);
                if d < best_d {
                    best_d = d;
                    best = k;
                }
            }
            best
        })
        .collect()
}

/// Refills empty clusters: the point farthest from its own centroid, taken
/// from a cluster with at least two members, becomes a singleton.
fn repair_empty(v: &Matrix, c: &mut Clustering) -> Result<()> {
    loop {
        let (cent, sizes) = centroids(v, c)?;
        let Some(empty) = sizes.iter().position(|&s| s == 0) else {
            return Ok(());
        };
        let mut far = None;
        let mut far_d = -1.0;
        for (n, (col, &a)) in v.columns().zip(c.assignment()).enumerate() {
            if sizes[a] < 2 {
                continue;
            }
            let d = sq_dist(col, cent.column(a));
            if d > far_d {
                far_d = d;
                far = Some(n);
            }
        }
        let n = far.expect("K <= N leaves a cluster with two members");
        c.assignment[n] = empty;
    }
}

fn lloyd(v: &Matrix, init: Matrix, cfg: &KMeansConfig) -> Result<KMeansResult> {
    let k = init.cols();
    let mut current = Clustering::new(assign(v, &init), k)?;
    repair_empty(v, &mut current)?;
    let mut cost = distortion(v, &current)?;
    let mut history = vec![cost];
    let mut iterations = 0;

    while iterations < cfg.max_iter {
        iterations += 1;
        let (cent, _) = centroids(v, &current)?;
        let mut next = Clustering::new(assign(v, &cent), k)?;
        repair_empty(v, &mut next)?;
        let next_cost = distortion(v, &next)?;
        debug_assert!(
            next_cost <= cost * (1.0 + 1e-12) + 1e-300,
            "Lloyd step increased distortion: {cost} -> {next_cost}"
        );
        history.push(next_cost);
        if next == current {
            break;
        }
        let improvement = cost - next_cost;
        current = next;
        let done = improvement <= cfg.rel_tol * cost;
        cost = next_cost;
        if done {
            break;
        }
    }
    Ok(KMeansResult {
        clustering: current,
        distortion: cost,
        iterations,
        restart: 0,
        history,
    })
}

/// Number of partitions of `n` items into at most `k` non-empty blocks,
/// `Σ_{j ≤ k} S(n, j)`, saturating.
pub fn partition_count(n: usize, k: usize) -> u128 {
    // stirling[j] = S(i, j) for the current row i
    let mut stirling = vec![0u128; k + 1];
    stirling[0] = 1;
    for _ in 0..n {
        for j in (1..=k).rev() {
            stirling[j] = (j as u128).saturating_mul(stirling[j]).saturating_add(stirling[j - 1]);
        }
        stirling[0] = 0;
    }
    stirling[1..].iter().fold(0u128, |a, &s| a.saturating_add(s))
}

/// Calls `visit` with every partition of `0..n` into at most `k` blocks,
/// each represented once as a restricted growth string (first occurrence
/// of label `j` precedes that of `j + 1`).
pub fn for_each_partition<F: FnMut(&[usize])>(n: usize, k: usize, mut visit: F) -> Result<()> {
    let size = partition_count(n, k);
    if size > BRUTE_FORCE_LIMIT {
        return Err(Error::SearchSpaceTooLarge {
            size,
            limit: BRUTE_FORCE_LIMIT,
        });
    }
    if n == 0 || k == 0 {
        return Ok(());
    }
    let mut labels = vec![0usize; n];
    // prefix_max[i] = max(labels[..i])
    let mut prefix_max = vec![0usize; n];
    loop {
        visit(&labels);
        // rightmost position that can still be incremented
        let mut i = n - 1;
        loop {
            if i == 0 {
                return Ok(());
            }
            let cap = (prefix_max[i] + 1).min(k - 1);
            if labels[i] < cap {
                break;
            }
            i -= 1;
        }
        labels[i] += 1;
        for j in i + 1..n {
            labels[j] = 0;
            prefix_max[j] = prefix_max[j - 1].max(labels[j - 1]);
        }
    }
}

/// Global minimizer of the distortion by exhaustive enumeration. Refuses
/// when there are more than [`BRUTE_FORCE_LIMIT`] partitions.
pub fn brute_force_optimal(v: &Matrix, k: usize) -> Result<(Clustering, f64)> {
    let n = v.cols();
    if k == 0 || n == 0 {
        return Err(Error::validation("exhaustive search needs K >= 1 and N >= 1"));
    }
    let mut best: Option<(Vec<usize>, f64)> = None;
    let mut err = None;
    for_each_partition(n, k, |labels| {
        let c = Clustering {
            assignment: labels.to_vec(),
            k,
        };
        match distortion(v, &c) {
            Ok(d) => {
                if best.as_ref().map_or(true, |(_, b)| d < *b) {
                    best = Some((labels.to_vec(), d));
                }
            }
            Err(e) => err = Some(e),
        }
    })?;
    if let Some(e) = err {
        return Err(e);
    }
    let (assignment, d) = best.expect("at least one partition");
    Ok((Clustering { assignment, k }, d))
}
