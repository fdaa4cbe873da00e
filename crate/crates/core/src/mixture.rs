//! Mixture models: definition, seeded sampling and the population-level
//! quantities the separability indices are built from.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)] // only needed without std
use num_traits::Float;
use rand::distr::Open01;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::clustering::Clustering;
use crate::linalg::{sym_eigen, thin_svd, Matrix, DEFAULT_EIGEN_TOL};
use crate::metrics::zeta;
use crate::{stream_rng, Error, Result};

const WEIGHT_SUM_TOL: f64 = 1e-12;

/// Eigenvalues of the centered mean scatter below this fraction of the
/// largest one are treated as zero when reading off `λ_min`.
pub const LAMBDA_MIN_RELATIVE_TOL: f64 = 1e-12;

/// Default singular-value threshold (relative to the largest) for the
/// rank test in [`check_non_degeneracy`].
pub const DEFAULT_RANK_TOL: f64 = 1e-10;

/// A log-concave component law, centered at the component mean.
///
/// Per-coordinate parameters must have length `F`. All families have a
/// diagonal covariance.
#[derive(Clone, Debug, PartialEq)]
pub enum ComponentDistribution {
    /// `N(0, σ² I)`; `σ² = 0` is a point mass.
    SphericalGaussian { variance: f64 },
    /// `N(0, diag(variances))`.
    DiagonalGaussian { variances: Vec<f64> },
    /// Independent Laplace coordinates, variance `2 b²`.
    Laplace { scales: Vec<f64> },
    /// Uniform on the box `[-h, h]` per coordinate, variance `h² / 3`.
    UniformBox { half_widths: Vec<f64> },
}

impl ComponentDistribution {
    pub fn is_spherical_gaussian(&self) -> bool {
        matches!(self, Self::SphericalGaussian { .. })
    }

    pub fn family_name(&self) -> &'static str {
        match self {
            Self::SphericalGaussian { .. } => "spherical_gaussian",
            Self::DiagonalGaussian { .. } => "diagonal_gaussian",
            Self::Laplace { .. } => "laplace",
            Self::UniformBox { .. } => "uniform_box",
        }
    }

    /// Diagonal of the covariance matrix in dimension `f`.
    pub fn coordinate_variances(&self, f: usize) -> Vec<f64> {
        match self {
            Self::SphericalGaussian { variance } => vec![*variance; f],
            Self::DiagonalGaussian { variances } => variances.clone(),
            Self::Laplace { scales } => scales.iter().map(|b| 2.0 * b * b).collect(),
            Self::UniformBox { half_widths } => half_widths.iter().map(|h| h * h / 3.0).collect(),
        }
    }

    fn validate(&self, f: usize) -> Result<()> {
        let (name, params): (&str, &[f64]) = match self {
            Self::SphericalGaussian { variance } => {
                if !(variance.is_finite() && *variance >= 0.0) {
                    return Err(Error::validation(format!(
                        "spherical variance must be finite and >= 0, got {variance}"
                    )));
                }
                return Ok(());
            }
            Self::DiagonalGaussian { variances } => ("variances", variances),
            Self::Laplace { scales } => ("scales", scales),
            Self::UniformBox { half_widths } => ("half_widths", half_widths),
        };
        if params.len() != f {
            return Err(Error::validation(format!(
                "{name} has length {}, expected F = {f}",
                params.len()
            )));
        }
        if let Some(bad) = params.iter().find(|x| !(x.is_finite() && **x > 0.0)) {
            return Err(Error::validation(format!("{name} must be finite and > 0, got {bad}")));
        }
        Ok(())
    }

    /// Writes `mean + draw` into `out`.
    fn draw<R: Rng>(&self, rng: &mut R, mean: &[f64], out: &mut [f64]) {
        match self {
            Self::SphericalGaussian { variance } => {
                let sd = variance.sqrt();
                for (o, m) in out.iter_mut().zip(mean) {
                    let z: f64 = rng.sample(StandardNormal);
                    *o = m + sd * z;
                }
            }
            Self::DiagonalGaussian { variances } => {
                for ((o, m), v) in out.iter_mut().zip(mean).zip(variances) {
                    let z: f64 = rng.sample(StandardNormal);
                    *o = m + v.sqrt() * z;
                }
            }
            Self::Laplace { scales } => {
                for ((o, m), b) in out.iter_mut().zip(mean).zip(scales) {
                    // inverse CDF on the open unit interval
                    let u: f64 = rng.sample::<f64, _>(Open01) - 0.5;
                    *o = m - b * u.signum() * (1.0 - 2.0 * u.abs()).ln();
                }
            }
            Self::UniformBox { half_widths } => {
                for ((o, m), h) in out.iter_mut().zip(mean).zip(half_widths) {
                    let u: f64 = rng.random();
                    *o = m + h * (2.0 * u - 1.0);
                }
            }
        }
    }
}

/// A `K`-component mixture in `ℝ^F`.
#[derive(Clone, Debug, PartialEq)]
pub struct MixtureModel {
    weights: Vec<f64>,
    means: Vec<Vec<f64>>,
    components: Vec<ComponentDistribution>,
}

impl MixtureModel {
    /// Validates and builds a model. Weights must be non-negative and sum
    /// to one within `1e-12`; all means share one dimension `F ≥ 1`.
    pub fn new(weights: Vec<f64>, means: Vec<Vec<f64>>, components: Vec<ComponentDistribution>) -> Result<Self> {
        let k = weights.len();
        if k == 0 {
            return Err(Error::validation("a mixture needs at least one component"));
        }
        if means.len() != k || components.len() != k {
            return Err(Error::validation(format!(
                "got {k} weights, {} means and {} components",
                means.len(),
                components.len()
            )));
        }
        if let Some(w) = weights.iter().find(|w| !(w.is_finite() && **w >= 0.0)) {
            return Err(Error::validation(format!("weights must be finite and >= 0, got {w}")));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > WEIGHT_SUM_TOL {
            return Err(Error::validation(format!("weights sum to {total}, expected 1")));
        }
        let f = means[0].len();
        if f == 0 {
            return Err(Error::validation("means must have dimension >= 1"));
        }
        for m in &means {
            if m.len() != f {
                return Err(Error::DimensionMismatch {
                    expected: f,
                    got: m.len(),
                });
            }
            if m.iter().any(|x| !x.is_finite()) {
                return Err(Error::validation("means must be finite"));
            }
        }
        for c in &components {
            c.validate(f)?;
        }
        Ok(Self {
            weights,
            means,
            components,
        })
    }

    /// Spherical Gaussian mixture with the given per-component variances.
    pub fn spherical(weights: Vec<f64>, means: Vec<Vec<f64>>, variances: &[f64]) -> Result<Self> {
        let comps = variances
            .iter()
            .map(|&variance| ComponentDistribution::SphericalGaussian { variance })
            .collect();
        Self::new(weights, means, comps)
    }

    /// Same weights and means, new component laws.
    pub fn with_components(&self, components: Vec<ComponentDistribution>) -> Result<Self> {
        Self::new(self.weights.clone(), self.means.clone(), components)
    }

    pub fn k(&self) -> usize {
        self.weights.len()
    }

    pub fn dim(&self) -> usize {
        self.means[0].len()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn means(&self) -> &[Vec<f64>] {
        &self.means
    }

    pub fn components(&self) -> &[ComponentDistribution] {
        &self.components
    }

    pub fn w_min(&self) -> f64 {
        self.weights.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn w_max(&self) -> f64 {
        self.weights.iter().copied().fold(0.0, f64::max)
    }

    pub fn is_spherical_gaussian(&self) -> bool {
        self.components.iter().all(|c| c.is_spherical_gaussian())
    }

    /// `F×K` matrix whose columns are the component means.
    pub fn mean_matrix(&self) -> Matrix {
        Matrix::from_columns(&self.means).expect("means validated on construction")
    }
}

/// `k` mean vectors drawn uniformly from the hypercube `[0, 1]^f`.
pub fn hypercube_means(k: usize, f: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = stream_rng(seed, u64::MAX);
    (0..k).map(|_| (0..f).map(|_| rng.random::<f64>()).collect()).collect()
}

/// Samples with their generating component.
#[derive(Clone, Debug)]
pub struct LabeledDataset {
    /// `F×N`, one sample per column.
    pub data: Matrix,
    /// Component index in `0..k` per sample.
    pub labels: Vec<usize>,
    pub k: usize,
    pub model_id: Option<String>,
}

impl LabeledDataset {
    /// The correct target clustering.
    pub fn truth(&self) -> Clustering {
        Clustering::new(self.labels.clone(), self.k).expect("labels are < k by construction")
    }
}

/// Draws `n` labeled samples. Column `j` uses its own ChaCha8 stream
/// `(seed, j)`: a label from `Categorical(w)` first, then the component
/// draw shifted by its mean. Identical arguments give identical output.
pub fn sample(model: &MixtureModel, n: usize, seed: u64) -> Result<LabeledDataset> {
    if n == 0 {
        return Err(Error::validation("sample count must be >= 1"));
    }
    let f = model.dim();
    let mut data = Matrix::zeros(f, n);
    let mut labels = Vec::with_capacity(n);
    let last_positive = model.weights.iter().rposition(|&w| w > 0.0).unwrap_or(0);
    for j in 0..n {
        let mut rng = stream_rng(seed, j as u64);
        let u: f64 = rng.random();
        let mut acc = 0.0;
        let mut label = last_positive;
        for (k, &w) in model.weights.iter().enumerate() {
            acc += w;
            if w > 0.0 && u < acc {
                label = k;
                break;
            }
        }
        model.components[label].draw(&mut rng, &model.means[label], data.column_mut(j));
        labels.push(label);
    }
    Ok(LabeledDataset {
        data,
        labels,
        k: model.k(),
        model_id: None,
    })
}

/// Closed-form second moments of a mixture.
#[derive(Clone, Debug)]
pub struct PopulationMoments {
    /// `ū = Σ w_k u_k`.
    pub mean: Vec<f64>,
    /// `Σ = Σ w_k (u_k u_kᵀ + Σ_k)`.
    pub sigma: Matrix,
    /// `Σ₀ = Σ w_k u_k u_kᵀ`.
    pub sigma0: Matrix,
    /// `Σ̄ = Σ w_k ((u_k − ū)(u_k − ū)ᵀ + Σ_k)`.
    pub sigma_bar: Matrix,
    /// `Σ̄₀ = Σ w_k (u_k − ū)(u_k − ū)ᵀ`.
    pub sigma_bar0: Matrix,
    /// `λ_{K−1}(Σ̄₀)`.
    pub lambda_min: f64,
    /// `Σ w_k σ_k²`, spherical Gaussian mixtures only.
    pub sigma_sq_bar: Option<f64>,
    /// `Σ w_k λ_max(Σ_k)`.
    pub sigma_sq_max: f64,
    /// `Σ w_k λ_min(Σ_k)`.
    pub sigma_sq_min: f64,
    /// `Σ w_k (‖u_k‖² + tr Σ_k)`.
    pub l_bar: f64,
}

pub fn population_moments(model: &MixtureModel) -> Result<PopulationMoments> {
    let f = model.dim();
    let k = model.k();
    let w = &model.weights;

    let mut mean = vec![0.0; f];
    for (wk, u) in w.iter().zip(&model.means) {
        for (m, x) in mean.iter_mut().zip(u) {
            *m += wk * x;
        }
    }

    let mut sigma0 = Matrix::zeros(f, f);
    let mut sigma_bar0 = Matrix::zeros(f, f);
    // columns √w_k (u_k − ū); Σ̄₀ = X Xᵀ
    let mut x = Matrix::zeros(f, k);
    for (j, (wk, u)) in w.iter().zip(&model.means).enumerate() {
        sigma0.add_outer(*wk, u, u);
        let centered: Vec<f64> = u.iter().zip(&mean).map(|(a, b)| a - b).collect();
        sigma_bar0.add_outer(*wk, &centered, &centered);
        let s = wk.sqrt();
        for (d, c) in x.column_mut(j).iter_mut().zip(&centered) {
            *d = s * c;
        }
    }

    let mut noise = vec![0.0; f];
    let mut sigma_sq_max = 0.0;
    let mut sigma_sq_min = 0.0;
    let mut l_bar = 0.0;
    for ((wk, u), comp) in w.iter().zip(&model.means).zip(&model.components) {
        let vars = comp.coordinate_variances(f);
        for (acc, v) in noise.iter_mut().zip(&vars) {
            *acc += wk * v;
        }
        let vmax = vars.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let vmin = vars.iter().copied().fold(f64::INFINITY, f64::min);
        sigma_sq_max += wk * vmax;
        sigma_sq_min += wk * vmin;
        let norm_sq: f64 = u.iter().map(|x| x * x).sum();
        l_bar += wk * (norm_sq + vars.iter().sum::<f64>());
    }
    let mut sigma = sigma0.clone();
    let mut sigma_bar = sigma_bar0.clone();
    for (i, v) in noise.iter().enumerate() {
        sigma[(i, i)] += v;
        sigma_bar[(i, i)] += v;
    }

    // nonzero spectra of X Xᵀ (F×F) and XᵀX (K×K) agree; solve the smaller
    let lambda_min = if k < 2 {
        0.0
    } else {
        let small = if f <= k { sigma_bar0.clone() } else { x.gram_cols() };
        let e = sym_eigen(&small, DEFAULT_EIGEN_TOL)?;
        let top = e.value(0);
        let l = e.value(k - 2);
        if l <= LAMBDA_MIN_RELATIVE_TOL * top {
            0.0
        } else {
            l
        }
    };

    let sigma_sq_bar = model.is_spherical_gaussian().then(|| {
        w.iter()
            .zip(&model.components)
            .map(|(wk, c)| match c {
                ComponentDistribution::SphericalGaussian { variance } => wk * variance,
                _ => unreachable!(),
            })
            .sum()
    });

    Ok(PopulationMoments {
        mean,
        sigma,
        sigma0,
        sigma_bar,
        sigma_bar0,
        lambda_min,
        sigma_sq_bar,
        sigma_sq_max,
        sigma_sq_min,
        l_bar,
    })
}

/// Value and pass/fail state of one separability index.
#[derive(Clone, Debug, PartialEq)]
pub struct SeparabilityIndex {
    /// `None` when the index is undefined for this model.
    pub value: Option<f64>,
    /// The strict inequality `0 < δ < ζ(w_min)` holds (positivity is
    /// automatic for `δ₀`, `δ₁`).
    pub holds: bool,
    pub reason: Option<String>,
}

impl SeparabilityIndex {
    fn undefined(reason: &str) -> Self {
        Self {
            value: None,
            holds: false,
            reason: Some(reason.into()),
        }
    }

    fn ratio(num: f64, den: f64, threshold: f64, require_positive: bool) -> Self {
        if !(den > 0.0) {
            return Self::undefined("denominator is not positive");
        }
        let value = num / den;
        if require_positive && !(value > 0.0) {
            return Self {
                value: Some(value),
                holds: false,
                reason: Some("index is not positive".into()),
            };
        }
        let holds = value < threshold;
        Self {
            value: Some(value),
            holds,
            reason: (!holds).then(|| "index is not below zeta(w_min)".into()),
        }
    }
}

pub const NON_DEGENERATE_FAILS: &str = "non-degenerate condition fails";
const NEEDS_SPHERICAL: &str = "requires spherical Gaussian components";

/// Separability indices of a model.
///
/// - `δ₀ = (K−1)σ̄² / λ_min` (original data, spherical),
/// - `δ₁ = (K−1)σ̄² / (λ_min + σ̄²)` (post-PCA, spherical),
/// - `δ₂ = (Fσ̄²_max − (F−K+1)σ̄²_min) / (λ_min + σ̄²_min − σ̄²_max)`,
/// - `δ₃ = ((K−1)σ̄²_max + a) / (λ_min + σ̄²_min − b)` with
///   `a = (1+K) L̄ r`, `b = (L̄ − ‖ū‖²) r`, `r = √(2(K−1)σ̄²_max / λ_min)`.
///
/// Each is compared against `ζ(w_min)`.
#[derive(Clone, Debug)]
pub struct SeparabilityReport {
    pub k: usize,
    pub f: usize,
    pub w_min: f64,
    pub w_max: f64,
    pub lambda_min: f64,
    pub zeta_wmin: f64,
    pub delta0: SeparabilityIndex,
    pub delta1: SeparabilityIndex,
    pub delta2: SeparabilityIndex,
    pub delta3: SeparabilityIndex,
    pub a: Option<f64>,
    pub b: Option<f64>,
}

pub fn separability_report(model: &MixtureModel) -> Result<SeparabilityReport> {
    let k = model.k();
    if k < 2 {
        return Err(Error::validation("separability needs K >= 2"));
    }
    let f = model.dim();
    let m = population_moments(model)?;
    let w_min = model.w_min();
    let zeta_wmin = zeta(w_min, k)?;
    let km1 = (k - 1) as f64;

    let mut report = SeparabilityReport {
        k,
        f,
        w_min,
        w_max: model.w_max(),
        lambda_min: m.lambda_min,
        zeta_wmin,
        delta0: SeparabilityIndex::undefined(NON_DEGENERATE_FAILS),
        delta1: SeparabilityIndex::undefined(NON_DEGENERATE_FAILS),
        delta2: SeparabilityIndex::undefined(NON_DEGENERATE_FAILS),
        delta3: SeparabilityIndex::undefined(NON_DEGENERATE_FAILS),
        a: None,
        b: None,
    };
    if !(m.lambda_min > 0.0) {
        return Ok(report);
    }
    let lambda = m.lambda_min;

    match m.sigma_sq_bar {
        Some(s2) => {
            report.delta0 = SeparabilityIndex::ratio(km1 * s2, lambda, zeta_wmin, false);
            report.delta1 = SeparabilityIndex::ratio(km1 * s2, lambda + s2, zeta_wmin, false);
        }
        None => {
            report.delta0 = SeparabilityIndex::undefined(NEEDS_SPHERICAL);
            report.delta1 = SeparabilityIndex::undefined(NEEDS_SPHERICAL);
        }
    }

    let (smax, smin) = (m.sigma_sq_max, m.sigma_sq_min);
    let fl = f as f64;
    let num2 = fl * smax - (fl - km1) * smin;
    report.delta2 = SeparabilityIndex::ratio(num2, lambda + smin - smax, zeta_wmin, true);

    let r = (2.0 * km1 * smax / lambda).sqrt();
    let mean_sq: f64 = m.mean.iter().map(|x| x * x).sum();
    let a = (1.0 + k as f64) * m.l_bar * r;
    let b = (m.l_bar - mean_sq) * r;
    report.a = Some(a);
    report.b = Some(b);
    report.delta3 = SeparabilityIndex::ratio(km1 * smax + a, lambda + smin - b, zeta_wmin, true);
    Ok(report)
}

/// Outcome of the non-degeneracy test.
#[derive(Clone, Debug)]
pub struct NonDegeneracy {
    pub holds: bool,
    /// Numerical rank of the `F×K` mean matrix.
    pub rank: usize,
    pub singular_values: Vec<f64>,
    pub min_weight: f64,
    pub diagnostic: String,
}

/// All weights positive and the means spanning a `K`-dimensional subspace,
/// where singular values below `tol · σ_max` count as zero.
pub fn check_non_degeneracy(model: &MixtureModel, tol: f64) -> Result<NonDegeneracy> {
    let k = model.k();
    let svd = thin_svd(&model.mean_matrix())?;
    let smax = svd.s.first().copied().unwrap_or(0.0);
    let rank = svd.s.iter().filter(|&&s| smax > 0.0 && s > tol * smax).count();
    let min_weight = model.w_min();
    let mut problems = Vec::new();
    if !(min_weight > 0.0) {
        problems.push(format!("minimum weight is {min_weight}"));
    }
    if rank < k {
        problems.push(format!("means span {rank} dimensions, need {k}"));
    }
    let holds = problems.is_empty();
    let diagnostic = if holds {
        format!("means span {k} dimensions and all weights are positive")
    } else {
        problems.join("; ")
    };
    Ok(NonDegeneracy {
        holds,
        rank,
        singular_values: svd.s,
        min_weight,
        diagnostic,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_component(var1: f64, var2: f64) -> MixtureModel {
        MixtureModel::spherical(vec![0.5, 0.5], vec![vec![0.0, 0.0], vec![2.0, 0.0]], &[var1, var2]).unwrap()
    }

    #[test]
    fn point_mass_samples_sit_on_the_mean() {
        let m = MixtureModel::spherical(vec![1.0], vec![vec![3.0, -1.0]], &[0.0]).unwrap();
        let d = sample(&m, 3, 5).unwrap();
        for col in d.data.columns() {
            assert_eq!(col, &[3.0, -1.0]);
        }
        assert_eq!(d.labels, [0, 0, 0]);
    }

    #[test]
    fn bad_weights_are_rejected() {
        let r = MixtureModel::spherical(vec![0.5, 0.6], vec![vec![0.0], vec![1.0]], &[1.0, 1.0]);
        assert!(matches!(r, Err(Error::Validation(_))));
        let r = MixtureModel::spherical(vec![1.5, -0.5], vec![vec![0.0], vec![1.0]], &[1.0, 1.0]);
        assert!(r.is_err());
    }

    #[test]
    fn bad_component_parameters_are_rejected() {
        let comps = vec![
            ComponentDistribution::Laplace { scales: vec![1.0, 0.0] },
            ComponentDistribution::SphericalGaussian { variance: 1.0 },
        ];
        let r = MixtureModel::new(vec![0.5, 0.5], vec![vec![0.0; 2], vec![1.0; 2]], comps);
        assert!(r.is_err());
        let comps = vec![
            ComponentDistribution::UniformBox { half_widths: vec![1.0] },
            ComponentDistribution::SphericalGaussian { variance: -1.0 },
        ];
        let r = MixtureModel::new(vec![0.5, 0.5], vec![vec![0.0; 2], vec![1.0; 2]], comps);
        assert!(r.is_err());
    }

    #[test]
    fn mismatched_mean_dimension_is_rejected() {
        let r = MixtureModel::spherical(vec![0.5, 0.5], vec![vec![0.0], vec![1.0, 2.0]], &[1.0, 1.0]);
        assert!(matches!(r, Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn sampling_is_reproducible() {
        let m = two_component(1.0, 1.0);
        let a = sample(&m, 50, 9).unwrap();
        let b = sample(&m, 50, 9).unwrap();
        let c = sample(&m, 50, 10).unwrap();
        assert_eq!(a.data, b.data);
        assert_eq!(a.labels, b.labels);
        assert_ne!(a.data, c.data);
    }

    #[test]
    fn sampling_prefix_is_stable_in_n() {
        // per-column streams: growing N only appends columns
        let m = two_component(1.0, 2.0);
        let a = sample(&m, 10, 3).unwrap();
        let b = sample(&m, 20, 3).unwrap();
        assert_eq!(a.data.as_slice(), &b.data.as_slice()[..a.data.as_slice().len()]);
    }

    #[test]
    fn moments_of_two_point_example() {
        let m = two_component(1.0, 1.0);
        let pm = population_moments(&m).unwrap();
        assert_eq!(pm.mean, [1.0, 0.0]);
        assert!((pm.lambda_min - 1.0).abs() < 1e-14);
        let e1 = Matrix::from_rows(&[[1.0, 0.0], [0.0, 0.0]]).unwrap();
        assert!((&pm.sigma_bar0 - &e1).frobenius_norm() < 1e-14);
        // w1 w2 ‖u1 − u2‖² = 1/4 · 4
        assert!((0.25 * 4.0 - pm.lambda_min).abs() < 1e-14);
    }

    #[test]
    fn coincident_means_have_zero_lambda_min() {
        let m = MixtureModel::spherical(vec![0.5, 0.5], vec![vec![1.0, 1.0]; 2], &[1.0, 1.0]).unwrap();
        assert_eq!(population_moments(&m).unwrap().lambda_min, 0.0);
    }

    #[test]
    fn mean_variance_is_weighted_average() {
        let pm = population_moments(&two_component(1.0, 3.0)).unwrap();
        assert_eq!(pm.sigma_sq_bar, Some(2.0));
        assert_eq!(pm.sigma_sq_max, 2.0);
        assert_eq!(pm.sigma_sq_min, 2.0);
    }

    #[test]
    fn centered_mean_scatter_identity() {
        let m = MixtureModel::spherical(
            vec![0.2, 0.3, 0.5],
            vec![vec![1.0, 0.0, 2.0], vec![0.0, 3.0, 1.0], vec![-1.0, 1.0, 0.5]],
            &[0.5, 1.0, 2.0],
        )
        .unwrap();
        let pm = population_moments(&m).unwrap();
        let mut outer = Matrix::zeros(3, 3);
        outer.add_outer(1.0, &pm.mean, &pm.mean);
        let diff = &(&pm.sigma0 - &outer) - &pm.sigma_bar0;
        assert!(diff.frobenius_norm() < 1e-10);
    }

    #[test]
    fn report_for_unit_example() {
        let r = separability_report(&two_component(1.0, 1.0)).unwrap();
        assert!((r.delta0.value.unwrap() - 1.0).abs() < 1e-14);
        assert!((r.zeta_wmin - 0.5).abs() < 1e-15);
        assert!(!r.delta0.holds);
        assert!((r.delta1.value.unwrap() - 0.5).abs() < 1e-14);
    }

    #[test]
    fn zero_variance_passes_delta0() {
        let r = separability_report(&two_component(0.0, 0.0)).unwrap();
        assert_eq!(r.delta0.value, Some(0.0));
        assert!(r.delta0.holds);
    }

    #[test]
    fn delta2_reduces_to_delta0_for_spherical() {
        let m = MixtureModel::spherical(
            vec![0.3, 0.3, 0.4],
            vec![
                vec![0.0, 0.0, 0.0, 4.0],
                vec![5.0, 0.0, 1.0, 0.0],
                vec![0.0, 6.0, 0.0, 1.0],
            ],
            &[0.2, 0.4, 0.3],
        )
        .unwrap();
        let r = separability_report(&m).unwrap();
        let d0 = r.delta0.value.unwrap();
        let d2 = r.delta2.value.unwrap();
        assert!((d0 - d2).abs() <= 1e-12 * d0);
        assert_eq!(r.delta0.holds, r.delta2.holds);
    }

    #[test]
    fn degenerate_model_makes_every_index_undefined() {
        let m = MixtureModel::spherical(vec![0.5, 0.5], vec![vec![1.0, 1.0]; 2], &[1.0, 1.0]).unwrap();
        let r = separability_report(&m).unwrap();
        for idx in [&r.delta0, &r.delta1, &r.delta2, &r.delta3] {
            assert_eq!(idx.value, None);
            assert!(!idx.holds);
            assert_eq!(idx.reason.as_deref(), Some(NON_DEGENERATE_FAILS));
        }
    }

    #[test]
    fn non_spherical_model_has_no_spherical_indices() {
        let comps = vec![
            ComponentDistribution::Laplace { scales: vec![0.1, 0.1] },
            ComponentDistribution::UniformBox {
                half_widths: vec![0.2, 0.1],
            },
        ];
        let m = MixtureModel::new(vec![0.5, 0.5], vec![vec![0.0, 0.0], vec![3.0, 1.0]], comps).unwrap();
        let r = separability_report(&m).unwrap();
        assert_eq!(r.delta0.value, None);
        assert!(r.delta2.value.is_some());
        assert!(r.a.unwrap() > 0.0 && r.b.unwrap() > 0.0);
    }

    #[test]
    fn non_degeneracy_cases() {
        let ok = two_component(1.0, 1.0);
        // u1 = 0 so the means only span one dimension
        assert!(!check_non_degeneracy(&ok, DEFAULT_RANK_TOL).unwrap().holds);

        let ind = MixtureModel::spherical(vec![0.5, 0.5], vec![vec![1.0, 0.0], vec![0.0, 2.0]], &[1.0, 1.0]).unwrap();
        assert!(check_non_degeneracy(&ind, DEFAULT_RANK_TOL).unwrap().holds);

        let same = MixtureModel::spherical(vec![0.5, 0.5], vec![vec![1.0, 2.0]; 2], &[1.0, 1.0]).unwrap();
        assert!(!check_non_degeneracy(&same, DEFAULT_RANK_TOL).unwrap().holds);

        let u1 = vec![1.0, 0.3, -2.0, 0.7];
        let u2 = vec![0.2, 1.5, 0.4, -1.1];
        let u3: Vec<f64> = u1.iter().zip(&u2).map(|(a, b)| 0.5 * (a + b)).collect();
        let mid = MixtureModel::spherical(vec![0.3, 0.3, 0.4], vec![u1, u2, u3], &[1.0; 3]).unwrap();
        let nd = check_non_degeneracy(&mid, DEFAULT_RANK_TOL).unwrap();
        assert!(!nd.holds);
        assert_eq!(nd.rank, 2);
    }

    #[test]
    fn zero_weight_fails_non_degeneracy() {
        let m = MixtureModel::spherical(vec![1.0, 0.0], vec![vec![1.0, 0.0], vec![0.0, 1.0]], &[1.0; 2]).unwrap();
        let nd = check_non_degeneracy(&m, DEFAULT_RANK_TOL).unwrap();
        assert!(!nd.holds);
        assert!(nd.diagnostic.contains("weight"));
    }

    #[test]
    fn hypercube_means_are_in_range_and_seeded() {
        let a = hypercube_means(3, 10, 1);
        assert_eq!(a, hypercube_means(3, 10, 1));
        assert_ne!(a, hypercube_means(3, 10, 2));
        assert!(a.iter().flatten().all(|&x| (0.0..1.0).contains(&x)));
    }
}
