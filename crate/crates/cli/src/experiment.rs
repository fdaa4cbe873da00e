//! Trials and sweeps of the mixture-model study.

use std::time::Instant;

use mixclust_core::clustering::kmeans;
use mixclust_core::dimred::{
    gamma_factor, pca_reduce, random_projection, randomized_svd, svd_reduce, ReducedDataset,
    DEFAULT_SKETCH_OVERSAMPLING,
};
use mixclust_core::linalg::Matrix;
use mixclust_core::metrics::{me_distance, theorem_bound, zeta};
use mixclust_core::mixture::{hypercube_means, population_moments, sample, separability_report, SeparabilityReport};
use mixclust_core::{
    derive_seed, BoundReport, BoundSource, ComponentDistribution, KMeansConfig, KMeansResult, LabeledDataset,
    MixtureModel, Theorem,
};
use serde::{Deserialize, Serialize};

use crate::config::{ExperimentConfig, ModelSource, Reducer, SeparationCase};
use crate::error::{HarnessError, Result};
use crate::model_file::ModelFile;

/// Replaces every component by a spherical Gaussian with
/// `σ² = m · λ_min ζ(w_min − ε) / (K−1)`, where `m` is the case multiplier.
pub fn set_case_variances(model: &MixtureModel, case: SeparationCase, eps_sep: f64) -> Result<MixtureModel> {
    let Some(mult) = case.multiplier() else {
        return Ok(model.clone());
    };
    let k = model.k();
    if k < 2 {
        return Err(HarnessError::Config("separation cases need K >= 2".into()));
    }
    let lambda_min = population_moments(model)?.lambda_min;
    if !(lambda_min > 0.0) {
        return Err(mixclust_core::Error::Degenerate("lambda_min is zero; the means are degenerate".into()).into());
    }
    let variance = mult * lambda_min * zeta(model.w_min() - eps_sep, k)? / (k - 1) as f64;
    let components = vec![ComponentDistribution::SphericalGaussian { variance }; k];
    Ok(model.with_components(components)?)
}

/// Result of the cost-ratio premise check.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OptRatio {
    /// k-means distortion at `K` over k-means distortion at `K−1`.
    pub ratio_emp: f64,
    /// `Fσ̄² / (λ_min + (F−K+2)σ̄²)`.
    pub ratio_bound: f64,
    /// `ratio_emp ≤ 1.05 · ratio_bound`.
    pub premise_holds: bool,
}

/// Slack for k-means not reaching the optimum.
pub const OPT_RATIO_SLACK: f64 = 1.05;

pub fn opt_ratio_check(v: &Matrix, k: usize, model: &MixtureModel, cfg: &KMeansConfig) -> Result<OptRatio> {
    if k < 2 {
        return Err(HarnessError::Config("the cost-ratio check needs K >= 2".into()));
    }
    let m = population_moments(model)?;
    let s2 = m
        .sigma_sq_bar
        .ok_or_else(|| HarnessError::Config("the cost-ratio check needs a spherical model".into()))?;
    let f = model.dim() as f64;
    let ratio_bound = f * s2 / (m.lambda_min + (f - k as f64 + 2.0) * s2);
    let at_k = kmeans(v, k, cfg)?.distortion;
    let below = kmeans(v, k - 1, cfg)?.distortion;
    let ratio_emp = if below > 0.0 { at_k / below } else { 0.0 };
    Ok(OptRatio {
        ratio_emp,
        ratio_bound,
        premise_holds: ratio_emp <= ratio_bound * OPT_RATIO_SLACK,
    })
}

/// One row of a sweep.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub n: usize,
    pub f: usize,
    pub k: usize,
    pub case: String,
    pub trial: usize,
    pub trial_seed: u64,
    /// ME distance between the correct target clustering and k-means on `V`.
    pub d_org: f64,
    /// `τ(δ) w_max` from the population separability index.
    pub d_org_bound: Option<f64>,
    /// `τ(δ^emp) p_max` from the correct target clustering on `V`.
    pub d_org_bound_emp: Option<f64>,
    pub d_pca: Option<f64>,
    pub d_pca_bound: Option<f64>,
    pub d_pca_bound_emp: Option<f64>,
    pub d_svd: Option<f64>,
    pub gamma_pca: Option<f64>,
    pub gamma_svd: Option<f64>,
    pub d_rp: Option<f64>,
    pub gamma_rp: Option<f64>,
    pub d_rsvd: Option<f64>,
    pub gamma_rsvd: Option<f64>,
    pub t_full_ms: f64,
    pub t_reduce_ms: Option<f64>,
    pub t_reduced_kmeans_ms: Option<f64>,
    pub org_bound_applicable: bool,
    pub org_bound_emp_applicable: bool,
    pub pca_bound_applicable: bool,
    pub pca_bound_emp_applicable: bool,
    pub opt_ratio_emp: Option<f64>,
    pub opt_ratio_bound: Option<f64>,
    pub opt_ratio_premise: Option<bool>,
}

impl TrialRecord {
    pub const COLUMNS: [&'static str; 29] = [
        "n",
        "f",
        "k",
        "case",
        "trial",
        "trial_seed",
        "d_org",
        "d_org_bound",
        "d_org_bound_emp",
        "d_pca",
        "d_pca_bound",
        "d_pca_bound_emp",
        "d_svd",
        "gamma_pca",
        "gamma_svd",
        "d_rp",
        "gamma_rp",
        "d_rsvd",
        "gamma_rsvd",
        "t_full_ms",
        "t_reduce_ms",
        "t_reduced_kmeans_ms",
        "org_bound_applicable",
        "org_bound_emp_applicable",
        "pca_bound_applicable",
        "pca_bound_emp_applicable",
        "opt_ratio_emp",
        "opt_ratio_bound",
        "opt_ratio_premise",
    ];

    pub const TIMING_COLUMNS: [&'static str; 3] = ["t_full_ms", "t_reduce_ms", "t_reduced_kmeans_ms"];

    /// Numeric columns by name, for aggregation and plotting.
    pub fn numeric(&self) -> Vec<(&'static str, Option<f64>)> {
        vec![
            ("d_org", Some(self.d_org)),
            ("d_org_bound", self.d_org_bound),
            ("d_org_bound_emp", self.d_org_bound_emp),
            ("d_pca", self.d_pca),
            ("d_pca_bound", self.d_pca_bound),
            ("d_pca_bound_emp", self.d_pca_bound_emp),
            ("d_svd", self.d_svd),
            ("gamma_pca", self.gamma_pca),
            ("gamma_svd", self.gamma_svd),
            ("d_rp", self.d_rp),
            ("gamma_rp", self.gamma_rp),
            ("d_rsvd", self.d_rsvd),
            ("gamma_rsvd", self.gamma_rsvd),
            ("t_full_ms", Some(self.t_full_ms)),
            ("t_reduce_ms", self.t_reduce_ms),
            ("t_reduced_kmeans_ms", self.t_reduced_kmeans_ms),
            ("opt_ratio_emp", self.opt_ratio_emp),
            ("opt_ratio_bound", self.opt_ratio_bound),
        ]
    }
}

/// The fixed parts of a sweep: the model after the case variances are set
/// and its population bounds.
#[derive(Clone, Debug)]
pub struct Prepared {
    pub model: MixtureModel,
    pub separability: SeparabilityReport,
    pub org_bound: BoundReport,
    pub pca_bound: BoundReport,
}

impl Prepared {
    pub fn new(model: MixtureModel) -> Result<Self> {
        let (t_org, t_pca) = theorems_for(&model);
        Ok(Self {
            separability: separability_report(&model)?,
            org_bound: theorem_bound(t_org, BoundSource::Population(&model))?,
            pca_bound: theorem_bound(t_pca, BoundSource::Population(&model))?,
            model,
        })
    }
}

/// Spherical Gaussian mixtures use the sharper Gaussian bounds; anything
/// else falls back to the log-concave ones.
pub fn theorems_for(model: &MixtureModel) -> (Theorem, Theorem) {
    if model.is_spherical_gaussian() {
        (Theorem::T1, Theorem::T2)
    } else {
        (Theorem::T4, Theorem::T5)
    }
}

fn base_model(cfg: &ExperimentConfig, means_seed: Option<u64>) -> Result<MixtureModel> {
    match &cfg.model {
        ModelSource::File(path) => ModelFile::load(path)?.to_model(),
        &ModelSource::Hypercube { k, f, seed } => {
            if k == 0 || f == 0 {
                return Err(HarnessError::Config("hypercube model needs K, F >= 1".into()));
            }
            let means = hypercube_means(k, f, means_seed.unwrap_or(seed));
            Ok(MixtureModel::spherical(vec![1.0 / k as f64; k], means, &vec![1.0; k])?)
        }
    }
}

/// The model of a sweep with its case variances applied.
pub fn prepare(cfg: &ExperimentConfig) -> Result<Prepared> {
    Prepared::new(set_case_variances(&base_model(cfg, None)?, cfg.case, cfg.eps_sep)?)
}

fn redrawn(cfg: &ExperimentConfig, n_index: usize, trial: usize) -> Result<Prepared> {
    let ModelSource::Hypercube { seed, .. } = cfg.model else {
        return Err(HarnessError::Config("redraw_means needs hypercube means".into()));
    };
    let means_seed = derive_seed(seed, &[n_index as u64, trial as u64]);
    Prepared::new(set_case_variances(
        &base_model(cfg, Some(means_seed))?,
        cfg.case,
        cfg.eps_sep,
    )?)
}

pub fn trial_seed(master: u64, n_index: usize, trial: usize) -> u64 {
    derive_seed(master, &[n_index as u64, trial as u64])
}

/// Everything a trial produced, for callers that need more than the row.
#[derive(Clone, Debug)]
pub struct TrialOutcome {
    pub record: TrialRecord,
    pub data: LabeledDataset,
    pub full: KMeansResult,
    pub pca: Option<(ReducedDataset, KMeansResult)>,
}

fn ms_since(t: Instant) -> f64 {
    t.elapsed().as_secs_f64() * 1e3
}

/// Samples one dataset and measures every configured pipeline on it.
pub fn run_trial(cfg: &ExperimentConfig, prepared: &Prepared, n_index: usize, trial: usize) -> Result<TrialOutcome> {
    let n = *cfg
        .n_grid
        .get(n_index)
        .ok_or_else(|| HarnessError::Config(format!("N index {n_index} out of range")))?;
    let seed = trial_seed(cfg.seed, n_index, trial);
    let model = &prepared.model;
    let (k, f) = (model.k(), model.dim());
    let data = sample(model, n, derive_seed(seed, &[0]))?;
    let truth = data.truth();
    let v = &data.data;
    let km_cfg = cfg.kmeans.to_config(derive_seed(seed, &[1]));
    let (t_org, t_pca) = theorems_for(model);

    let start = Instant::now();
    let full = kmeans(v, k, &km_cfg)?;
    let t_full_ms = ms_since(start);
    let d_org = me_distance(&truth, &full.clustering)?;

    let emp_org = theorem_bound(t_org, BoundSource::Empirical { data: v, truth: &truth })?;
    let emp_pca = theorem_bound(t_pca, BoundSource::Empirical { data: v, truth: &truth })?;

    let reduced_run = |r: &ReducedDataset| -> Result<(f64, f64, KMeansResult)> {
        let res = kmeans(&r.data, k, &km_cfg)?;
        let d = me_distance(&truth, &res.clustering)?;
        let g = gamma_factor(v, &res.clustering, &full.clustering)?;
        Ok((d, g, res))
    };

    let mut record = TrialRecord {
        n,
        f,
        k,
        case: cfg.case.label(),
        trial,
        trial_seed: seed,
        d_org,
        d_org_bound: prepared.org_bound.nominal,
        d_org_bound_emp: emp_org.nominal,
        d_pca: None,
        d_pca_bound: prepared.pca_bound.nominal,
        d_pca_bound_emp: emp_pca.nominal,
        d_svd: None,
        gamma_pca: None,
        gamma_svd: None,
        d_rp: None,
        gamma_rp: None,
        d_rsvd: None,
        gamma_rsvd: None,
        t_full_ms,
        t_reduce_ms: None,
        t_reduced_kmeans_ms: None,
        org_bound_applicable: prepared.org_bound.is_applicable(),
        org_bound_emp_applicable: emp_org.is_applicable(),
        pca_bound_applicable: prepared.pca_bound.is_applicable(),
        pca_bound_emp_applicable: emp_pca.is_applicable(),
        opt_ratio_emp: None,
        opt_ratio_bound: None,
        opt_ratio_premise: None,
    };

    let mut pca = None;
    for reducer in &cfg.reducers {
        match reducer {
            Reducer::Pca => {
                let start = Instant::now();
                let r = pca_reduce(v, (k - 1).max(1))?;
                record.t_reduce_ms = Some(ms_since(start));
                let start = Instant::now();
                let (d, g, res) = reduced_run(&r)?;
                record.t_reduced_kmeans_ms = Some(ms_since(start));
                record.d_pca = Some(d);
                record.gamma_pca = Some(g);
                pca = Some((r, res));
            }
            Reducer::Svd => {
                let (d, g, _) = reduced_run(&svd_reduce(v, k.min(f))?)?;
                record.d_svd = Some(d);
                record.gamma_svd = Some(g);
            }
            Reducer::RandomProjection => {
                let dim = cfg.rp_dim.unwrap_or(10 * k).min(f);
                let (d, g, _) = reduced_run(&random_projection(v, dim, derive_seed(seed, &[2]))?)?;
                record.d_rp = Some(d);
                record.gamma_rp = Some(g);
            }
            Reducer::RandomizedSvd => {
                let target = k.min(f).min(n);
                let sketch = (k + DEFAULT_SKETCH_OVERSAMPLING).min(f).min(n);
                let (d, g, _) = reduced_run(&randomized_svd(v, target, sketch, derive_seed(seed, &[3]))?)?;
                record.d_rsvd = Some(d);
                record.gamma_rsvd = Some(g);
            }
        }
    }

    if cfg.opt_ratio {
        let r = opt_ratio_check(v, k, model, &km_cfg)?;
        record.opt_ratio_emp = Some(r.ratio_emp);
        record.opt_ratio_bound = Some(r.ratio_bound);
        record.opt_ratio_premise = Some(r.premise_holds);
    }

    Ok(TrialOutcome {
        record,
        data,
        full,
        pca,
    })
}

/// All trials of one `N` value.
pub fn run_cell(cfg: &ExperimentConfig, prepared: &Prepared, n_index: usize) -> Result<Vec<TrialRecord>> {
    (0..cfg.trials)
        .map(|trial| {
            if cfg.redraw_means {
                run_trial(cfg, &redrawn(cfg, n_index, trial)?, n_index, trial)
            } else {
                run_trial(cfg, prepared, n_index, trial)
            }
            .map(|o| o.record)
        })
        .collect()
}

/// Mean of each numeric column over one `N` value.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CellSummary {
    pub n: usize,
    pub trials: usize,
    pub means: Vec<(String, f64)>,
    pub org_bound_applicable: usize,
    pub pca_bound_applicable: usize,
}

impl CellSummary {
    pub fn of(n: usize, records: &[TrialRecord]) -> Self {
        let mut means = Vec::new();
        if let Some(first) = records.first() {
            for (i, (name, _)) in first.numeric().iter().enumerate() {
                let vals: Vec<f64> = records.iter().filter_map(|r| r.numeric()[i].1).collect();
                if !vals.is_empty() {
                    means.push((name.to_string(), vals.iter().sum::<f64>() / vals.len() as f64));
                }
            }
        }
        Self {
            n,
            trials: records.len(),
            means,
            org_bound_applicable: records.iter().filter(|r| r.org_bound_applicable).count(),
            pca_bound_applicable: records.iter().filter(|r| r.pca_bound_applicable).count(),
        }
    }

    pub fn mean(&self, column: &str) -> Option<f64> {
        self.means.iter().find(|(c, _)| c == column).map(|&(_, v)| v)
    }
}

#[derive(Clone, Debug)]
pub struct SweepResult {
    pub prepared: Prepared,
    pub records: Vec<TrialRecord>,
    pub cells: Vec<CellSummary>,
}

/// Runs every `(N, trial)` cell. Rows come out ordered by `N`, then trial.
pub fn sweep(cfg: &ExperimentConfig) -> Result<SweepResult> {
    cfg.validate()?;
    let prepared = prepare(cfg)?;
    let mut records = Vec::new();
    let mut cells = Vec::new();
    for (i, &n) in cfg.n_grid.iter().enumerate() {
        let rows = run_cell(cfg, &prepared, i)?;
        cells.push(CellSummary::of(n, &rows));
        records.extend(rows);
    }
    Ok(SweepResult {
        prepared,
        records,
        cells,
    })
}
