//! The oracle and invariant suite behind `mixclust verify` and the
//! acceptance tests. Each check returns a [`CriterionOutcome`] with a one
//! line verdict.

use std::fmt;
use std::time::{Duration, Instant};

use mixclust_core::clustering::{brute_force_optimal, distortion, for_each_partition, kmeans, ScatterSummary};
use mixclust_core::dimred::{
    centroid_subspace_sides, pca_reduce, randomized_svd, sample_covariance, svd_reduce,
    weighted_mean_subspace_distance, DEFAULT_SKETCH_OVERSAMPLING,
};
use mixclust_core::linalg::{projector_distance, spectral_norm_sym, sym_eigen, Matrix, DEFAULT_EIGEN_TOL};
use mixclust_core::metrics::{bound_from_delta, delta_from_parts, me_distance, me_distance_brute, theorem_bound};
use mixclust_core::mixture::{hypercube_means, population_moments, sample, separability_report};
use mixclust_core::{
    derive_seed, stream_rng, BoundSource, Clustering, ComponentDistribution, KMeansConfig, LabeledDataset,
    MixtureModel, Theorem,
};
use rand::Rng;

use crate::config::{ExperimentConfig, ModelSource, Reducer, SeparationCase};
use crate::error::Result;
use crate::experiment::{prepare, run_trial, Prepared, TrialOutcome};

#[derive(Clone, Debug)]
pub struct CriterionOutcome {
    pub id: u8,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
}

impl fmt::Display for CriterionOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "criterion {:>2} {} {}: {} ({:.2} s)",
            self.id,
            if self.passed { "PASS" } else { "FAIL" },
            self.title,
            self.detail,
            self.elapsed.as_secs_f64()
        )
    }
}

fn timed<T>(f: impl FnOnce() -> Result<T>) -> Result<(T, Duration)> {
    let start = Instant::now();
    let out = f()?;
    Ok((out, start.elapsed()))
}

/// A small dataset whose clusterings can all be enumerated.
#[derive(Clone, Debug)]
pub struct SmallInstance {
    pub v: Matrix,
    pub k: usize,
}

/// 100 instances with `N ∈ {6, 7, 8}`, `F ∈ {1, 2, 3}`, `K ∈ {2, 3}`, each
/// sampled from an equal-weight unit-variance Gaussian mixture whose means
/// are uniform in `[0, 10]^F`.
pub fn small_instances(seed: u64) -> Result<Vec<SmallInstance>> {
    (0..100u64)
        .map(|i| {
            let k = 2 + (i % 2) as usize;
            let f = 1 + ((i / 2) % 3) as usize;
            let n = 6 + ((i / 6) % 3) as usize;
            let s = derive_seed(seed, &[i]);
            let means = hypercube_means(k, f, s)
                .into_iter()
                .map(|m| m.into_iter().map(|x| 10.0 * x).collect())
                .collect();
            let model = MixtureModel::spherical(vec![1.0 / k as f64; k], means, &vec![1.0; k])?;
            Ok(SmallInstance {
                v: sample(&model, n, s)?.data,
                k,
            })
        })
        .collect()
}

/// Criterion 1: Hungarian and permutation-search ME distances agree exactly.
pub fn me_oracle(seed: u64) -> Result<CriterionOutcome> {
    let (matches, elapsed) = timed(|| {
        let mut rng = stream_rng(seed, 1);
        let mut matches = 0;
        for _ in 0..1000 {
            let n = rng.random_range(1..=20);
            let k = rng.random_range(1..=6);
            let a = Clustering::new((0..n).map(|_| rng.random_range(0..k)).collect(), k)?;
            let b = Clustering::new((0..n).map(|_| rng.random_range(0..k)).collect(), k)?;
            if me_distance(&a, &b)? == me_distance_brute(&a, &b)? {
                matches += 1;
            }
        }
        Ok(matches)
    })?;
    Ok(CriterionOutcome {
        id: 1,
        title: "ME distance oracle",
        passed: matches == 1000 && elapsed < Duration::from_secs(10),
        detail: format!("{matches}/1000 pairs match exactly"),
        elapsed,
    })
}

/// Criterion 2: k-means reaches the exhaustive optimum.
pub fn kmeans_oracle(instances: &[SmallInstance], seed: u64) -> Result<CriterionOutcome> {
    let (hits, elapsed) = timed(|| {
        let mut hits = 0;
        for (i, inst) in instances.iter().enumerate() {
            let (_, opt) = brute_force_optimal(&inst.v, inst.k)?;
            let r = kmeans(
                &inst.v,
                inst.k,
                &KMeansConfig::with_seed(derive_seed(seed, &[i as u64])),
            )?;
            if (r.distortion - opt).abs() <= 1e-9 * opt.abs() {
                hits += 1;
            }
        }
        Ok(hits)
    })?;
    Ok(CriterionOutcome {
        id: 2,
        title: "optimal clustering oracle",
        passed: hits >= 95 && elapsed < Duration::from_secs(60),
        detail: format!(
            "k-means matches the exhaustive optimum on {hits}/{} instances",
            instances.len()
        ),
        elapsed,
    })
}

/// Rounding slack for comparisons against `D*`: a relative `1e-10` of `tr(S)`.
const TRACE_SLACK: f64 = 1e-10;

/// Criterion 3: no clustering beats the spectral lower bound.
pub fn lower_bound_exhaustive(instances: &[SmallInstance]) -> Result<CriterionOutcome> {
    let ((checked, violations), elapsed) = timed(|| {
        let (mut checked, mut violations) = (0usize, 0usize);
        for inst in instances {
            let s = ScatterSummary::of(&inst.v)?;
            let lb = s.lower_bound(inst.k);
            let slack = TRACE_SLACK * s.trace;
            let mut err = None;
            for_each_partition(inst.v.cols(), inst.k, |l| {
                let d = Clustering::new(l.to_vec(), inst.k).and_then(|c| distortion(&inst.v, &c));
                match d {
                    Ok(d) => {
                        checked += 1;
                        if d < lb - slack {
                            violations += 1;
                        }
                    }
                    Err(e) => err = Some(e),
                }
            })?;
            if let Some(e) = err {
                return Err(e.into());
            }
        }
        Ok((checked, violations))
    })?;
    Ok(CriterionOutcome {
        id: 3,
        title: "distortion lower bound",
        passed: violations == 0,
        detail: format!("{violations} violations over {checked} clusterings"),
        elapsed,
    })
}

/// Counts for the optimum-distance bound over every clustering of every
/// instance.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct CorollaryCounts {
    /// Clusterings meeting the hypotheses with `p_min`, `p_max` from `C`.
    pub checked: usize,
    pub violations: usize,
    /// Largest `d_ME / (p_max τ(δ))` among violations.
    pub worst_ratio: f64,
    /// Same with `p_min` the smaller and `p_max` the larger over `C` and
    /// `C_opt`.
    pub checked_both: usize,
    pub violations_both: usize,
}

pub fn corollary_counts(instances: &[SmallInstance]) -> Result<CorollaryCounts> {
    let mut counts = CorollaryCounts::default();
    for inst in instances {
        let k = inst.k;
        let (opt, _) = brute_force_optimal(&inst.v, k)?;
        let summary = ScatterSummary::of(&inst.v)?;
        let mut scored = Vec::new();
        for_each_partition(inst.v.cols(), k, |l| scored.push(l.to_vec()))?;
        for labels in scored {
            let c = Clustering::new(labels, k)?;
            // a collapsed spectral gap leaves δ undefined and the hypotheses unmet
            let Ok(delta) = delta_from_parts(distortion(&inst.v, &c)?, &summary, k) else {
                continue;
            };
            let me = me_distance(&c, &opt)?;
            if let Some(b) = bound_from_delta(delta, c.p_min(), c.p_max(), k).bound {
                counts.checked += 1;
                if me > b + 1e-12 {
                    counts.violations += 1;
                    counts.worst_ratio = counts.worst_ratio.max(me / b);
                }
            }
            let p_min = c.p_min().min(opt.p_min());
            let p_max = c.p_max().max(opt.p_max());
            if let Some(b) = bound_from_delta(delta, p_min, p_max, k).bound {
                counts.checked_both += 1;
                if me > b + 1e-12 {
                    counts.violations_both += 1;
                }
            }
        }
    }
    Ok(counts)
}

/// Criterion 4: `d_ME(C, C_opt) ≤ p_max τ(δ)` for every clustering meeting
/// the hypotheses, with cluster fractions taken from `C`.
pub fn corollary_exhaustive(instances: &[SmallInstance]) -> Result<CriterionOutcome> {
    let (c, elapsed) = timed(|| corollary_counts(instances))?;
    Ok(CriterionOutcome {
        id: 4,
        title: "optimum distance bound on exhaustive instances",
        passed: c.violations == 0 && c.checked > 0,
        detail: format!(
            "{} of {} qualifying clusterings exceed p_max*tau(delta) (worst ratio {:.3}); \
             with p_min/p_max over both C and C_opt: {} of {}",
            c.violations, c.checked, c.worst_ratio, c.violations_both, c.checked_both
        ),
        elapsed,
    })
}

/// The study configuration: `F = 100`, `K = 2`, equal weights, hypercube
/// means, k-means with 10 restarts and 1000 iterations.
pub fn study_config(case: SeparationCase, n: usize, seed: u64) -> ExperimentConfig {
    let mut cfg = ExperimentConfig::new(ModelSource::Hypercube { k: 2, f: 100, seed }, case, vec![n]);
    cfg.seed = seed;
    cfg.trials = 10;
    cfg.reducers = vec![Reducer::Pca];
    cfg
}

/// Trials of one study cell, with the datasets kept.
pub struct StudyRun {
    pub prepared: Prepared,
    pub trials: Vec<TrialOutcome>,
    pub elapsed: Duration,
}

pub fn study_run(cfg: &ExperimentConfig) -> Result<StudyRun> {
    let start = Instant::now();
    let prepared = prepare(cfg)?;
    let trials = (0..cfg.trials)
        .map(|t| run_trial(cfg, &prepared, 0, t))
        .collect::<Result<Vec<_>>>()?;
    Ok(StudyRun {
        prepared,
        trials,
        elapsed: start.elapsed(),
    })
}

fn mean(xs: impl Iterator<Item = f64>) -> f64 {
    let v: Vec<f64> = xs.collect();
    v.iter().sum::<f64>() / v.len().max(1) as f64
}

/// Criterion 5: well-separated case at `N = 1000`.
pub fn well_case(run: &StudyRun) -> CriterionOutcome {
    let d_org = mean(run.trials.iter().map(|t| t.record.d_org));
    let d_pca = mean(run.trials.iter().filter_map(|t| t.record.d_pca));
    let pop = run.prepared.org_bound.nominal.unwrap_or(f64::NAN);
    let emp = mean(run.trials.iter().filter_map(|t| t.record.d_org_bound_emp));
    let ratio = emp / pop;
    CriterionOutcome {
        id: 5,
        title: "well-separated reproduction",
        passed: d_org <= 0.02
            && d_pca <= 0.02
            && (0.5..=2.0).contains(&ratio)
            && run.elapsed < Duration::from_secs(120),
        detail: format!(
            "mean d_org {d_org:.4}, mean d_pca {d_pca:.4}, mean empirical d_org bound {emp:.4} vs population {pop:.4} (ratio {ratio:.3})"
        ),
        elapsed: run.elapsed,
    }
}

/// Criterion 6: bound-to-distance ratios in the moderate case.
pub fn moderate_ratios(run: &StudyRun) -> CriterionOutcome {
    let b_org = run.prepared.org_bound.bound;
    let b_pca = run.prepared.pca_bound.bound;
    let in_range = |bound: Option<f64>, d: Option<f64>| match (bound, d) {
        (Some(b), Some(d)) if d > 0.0 => (1.0..=6.0).contains(&(b / d)),
        _ => false,
    };
    let org_ok = run
        .trials
        .iter()
        .filter(|t| in_range(b_org, Some(t.record.d_org)))
        .count();
    let pca_ok = run.trials.iter().filter(|t| in_range(b_pca, t.record.d_pca)).count();
    let below = |bound: Option<f64>, d: Option<f64>| match (bound, d) {
        (Some(b), Some(d)) => d <= b,
        _ => true,
    };
    let all_below = run
        .trials
        .iter()
        .all(|t| below(b_org, Some(t.record.d_org)) && below(b_pca, t.record.d_pca));
    let d_org = mean(run.trials.iter().map(|t| t.record.d_org));
    let d_pca = mean(run.trials.iter().filter_map(|t| t.record.d_pca));
    CriterionOutcome {
        id: 6,
        title: "moderate-case bound ratios",
        passed: org_ok >= 8 && pca_ok >= 8 && all_below && run.elapsed < Duration::from_secs(600),
        detail: format!(
            "bound/d in [1, 6]: org {org_ok}/10, pca {pca_ok}/10; mean d_org {d_org:.4} vs {:.4}, mean d_pca {d_pca:.4} vs {:.4}; all below applicable bounds: {all_below}",
            b_org.unwrap_or(f64::NAN),
            b_pca.unwrap_or(f64::NAN)
        ),
        elapsed: run.elapsed,
    }
}

/// Criterion 7: empirical bounds close to their population values.
pub fn empirical_agreement(run: &StudyRun) -> CriterionOutcome {
    let pop_org = run.prepared.org_bound.nominal.unwrap_or(f64::NAN);
    let pop_pca = run.prepared.pca_bound.nominal.unwrap_or(f64::NAN);
    let emp_org = mean(run.trials.iter().filter_map(|t| t.record.d_org_bound_emp));
    let emp_pca = mean(run.trials.iter().filter_map(|t| t.record.d_pca_bound_emp));
    let ok = (emp_org - pop_org).abs() <= 0.1 * pop_org && (emp_pca - pop_pca).abs() <= 0.1 * pop_pca;
    CriterionOutcome {
        id: 7,
        title: "empirical vs expected bounds",
        passed: ok,
        detail: format!("org {emp_org:.4} vs {pop_org:.4}, pca {emp_pca:.4} vs {pop_pca:.4} (means over trials)"),
        elapsed: Duration::ZERO,
    }
}

/// Criterion 8: PCA plus reduced k-means is at least twice as fast.
pub fn speedup(run: &StudyRun) -> CriterionOutcome {
    let ratios: Vec<f64> = run
        .trials
        .iter()
        .filter_map(|t| {
            let r = &t.record;
            Some(r.t_full_ms / (r.t_reduce_ms? + r.t_reduced_kmeans_ms?))
        })
        .collect();
    let fast = ratios.iter().filter(|&&r| r >= 2.0).count();
    let min = ratios.iter().copied().fold(f64::INFINITY, f64::min);
    CriterionOutcome {
        id: 8,
        title: "dimension-reduction speedup",
        passed: fast >= 8,
        detail: format!("speedup >= 2 in {fast}/{} trials (smallest {min:.1}x)", ratios.len()),
        elapsed: Duration::ZERO,
    }
}

/// Criterion 9: the sample projector stays within `4√K ε / λ_min` of the
/// population one.
pub fn projector_perturbation(seed: u64, models: usize, n: usize) -> Result<CriterionOutcome> {
    let ((violations, worst), elapsed) = timed(|| {
        let (mut violations, mut worst) = (0usize, 0.0f64);
        for i in 0..models as u64 {
            let s = derive_seed(seed, &[i]);
            let mut rng = stream_rng(s, 1);
            let k = 2 + (i % 3) as usize;
            let f = 10;
            let raw: Vec<f64> = (0..k).map(|_| rng.random_range(0.2..1.0)).collect();
            let total: f64 = raw.iter().sum();
            let mut w: Vec<f64> = raw.iter().map(|x| x / total).collect();
            let head: f64 = w[..k - 1].iter().sum();
            w[k - 1] = 1.0 - head;
            let means = hypercube_means(k, f, s)
                .into_iter()
                .map(|m| m.into_iter().map(|x| 4.0 * x).collect())
                .collect();
            let vars: Vec<f64> = (0..k).map(|_| rng.random_range(0.2..2.0)).collect();
            let model = MixtureModel::spherical(w, means, &vars)?;
            let pm = population_moments(&model)?;
            let data = sample(&model, n, s)?;
            let cov = sample_covariance(&data.data, true)?;
            let eps = spectral_norm_sym(&(&cov - &pm.sigma_bar))?;
            let p = sym_eigen(&cov, DEFAULT_EIGEN_TOL)?.leading_vectors(k - 1);
            let q = sym_eigen(&pm.sigma_bar, DEFAULT_EIGEN_TOL)?.leading_vectors(k - 1);
            let dist = projector_distance(&q, &p)?;
            let bound = 4.0 * (k as f64).sqrt() * eps / pm.lambda_min;
            worst = worst.max(dist / bound);
            if dist > bound {
                violations += 1;
            }
        }
        Ok((violations, worst))
    })?;
    Ok(CriterionOutcome {
        id: 9,
        title: "projector perturbation bound",
        passed: violations == 0,
        detail: format!("{violations} violations over {models} models at N = {n} (largest distance/bound {worst:.4})"),
        elapsed,
    })
}

/// Both sides of the centroid-offset inequality and of the projector bound
/// in terms of population mean offsets, on one labeled sample.
#[derive(Clone, Copy, Debug)]
pub struct LemmaSides {
    pub centroid: (f64, f64),
    pub projector: (f64, f64),
}

impl LemmaSides {
    pub fn hold(&self) -> bool {
        let le = |(l, r): (f64, f64)| l <= r * (1.0 + 1e-12) + 1e-12;
        le(self.centroid) && le(self.projector)
    }
}

pub fn lemma_sides(model: &MixtureModel, data: &LabeledDataset) -> Result<LemmaSides> {
    let k = model.k();
    let cov = sample_covariance(&data.data, true)?;
    let w = sym_eigen(&cov, DEFAULT_EIGEN_TOL)?.leading_vectors(k - 1);
    let centroid = centroid_subspace_sides(&data.data, &data.truth(), &w)?;
    let pm = population_moments(model)?;
    let q = sym_eigen(&pm.sigma_bar0, DEFAULT_EIGEN_TOL)?.leading_vectors(k - 1);
    let dist = projector_distance(&w, &q)?;
    let offsets = weighted_mean_subspace_distance(model.weights(), model.means(), &w);
    Ok(LemmaSides {
        centroid,
        projector: (dist * dist, 2.0 * offsets / pm.lambda_min),
    })
}

/// Results of the log-concave path on Laplace mixtures.
#[derive(Clone, Copy, Debug, Default)]
pub struct LaplaceCounts {
    pub datasets: usize,
    pub lemma_ok: usize,
    pub delta2_defined: usize,
    pub delta3_defined: usize,
    pub org_applicable: usize,
    pub org_respected: usize,
    pub pca_applicable: usize,
    pub pca_respected: usize,
}

pub fn laplace_runs(seed: u64, count: usize, n: usize) -> Result<LaplaceCounts> {
    let mut c = LaplaceCounts::default();
    for i in 0..count as u64 {
        let s = derive_seed(seed, &[i]);
        let mut rng = stream_rng(s, 1);
        let k = 2 + (i % 2) as usize;
        let f = 10;
        let means = hypercube_means(k, f, s)
            .into_iter()
            .map(|m| m.into_iter().map(|x| 10.0 * x).collect())
            .collect();
        let comps = (0..k)
            .map(|_| ComponentDistribution::Laplace {
                scales: (0..f).map(|_| rng.random_range(0.05..0.3)).collect(),
            })
            .collect();
        let model = MixtureModel::new(vec![1.0 / k as f64; k], means, comps)?;
        let report = separability_report(&model)?;
        c.delta2_defined += usize::from(report.delta2.value.is_some());
        c.delta3_defined += usize::from(report.delta3.value.is_some());
        let data = sample(&model, n, s)?;
        c.datasets += 1;
        c.lemma_ok += usize::from(lemma_sides(&model, &data)?.hold());
        let truth = data.truth();
        let cfg = KMeansConfig::with_seed(s);
        let full = kmeans(&data.data, k, &cfg)?;
        let reduced = kmeans(&pca_reduce(&data.data, k - 1)?.data, k, &cfg)?;
        if let Some(b) = theorem_bound(Theorem::T4, BoundSource::Population(&model))?.bound {
            c.org_applicable += 1;
            c.org_respected += usize::from(me_distance(&truth, &full.clustering)? <= b);
        }
        if let Some(b) = theorem_bound(Theorem::T5, BoundSource::Population(&model))?.bound {
            c.pca_applicable += 1;
            c.pca_respected += usize::from(me_distance(&truth, &reduced.clustering)? <= b);
        }
    }
    Ok(c)
}

/// Criterion 10: the two sample-level inequalities on the study datasets and
/// on Laplace mixtures, with the log-concave bounds checked where they apply.
pub fn lemma_checks(runs: &[&StudyRun], seed: u64) -> Result<CriterionOutcome> {
    let ((study_ok, study_total, lap), elapsed) = timed(|| {
        let (mut ok, mut total) = (0usize, 0usize);
        for run in runs {
            for t in &run.trials {
                total += 1;
                ok += usize::from(lemma_sides(&run.prepared.model, &t.data)?.hold());
            }
        }
        Ok((ok, total, laplace_runs(seed, 50, 2000)?))
    })?;
    let passed = study_ok == study_total
        && lap.lemma_ok == lap.datasets
        && lap.org_respected == lap.org_applicable
        && lap.pca_respected == lap.pca_applicable;
    Ok(CriterionOutcome {
        id: 10,
        title: "centroid and projector inequalities",
        passed,
        detail: format!(
            "study datasets {study_ok}/{study_total}; Laplace datasets {}/{} \
             (delta2 defined {}, delta3 defined {}; original bound applicable {} respected {}, PCA bound applicable {} respected {})",
            lap.lemma_ok,
            lap.datasets,
            lap.delta2_defined,
            lap.delta3_defined,
            lap.org_applicable,
            lap.org_respected,
            lap.pca_applicable,
            lap.pca_respected
        ),
        elapsed,
    })
}

/// Criterion 11: `γ ≈ 1` after PCA, and a full-rank sketch recovers an
/// exact low-rank subspace.
pub fn gamma_and_sketch(seed: u64) -> Result<CriterionOutcome> {
    let ((gammas, sketch_dist), elapsed) = timed(|| {
        let mut cfg = study_config(SeparationCase::Well, 2000, seed);
        cfg.seed = derive_seed(seed, &[11]);
        let run = study_run(&cfg)?;
        let gammas: Vec<f64> = run.trials.iter().filter_map(|t| t.record.gamma_pca).collect();

        let (f, n, k) = (50, 200, 3);
        let mut rng = stream_rng(seed, 11);
        let left = Matrix::from_col_major(f, k, (0..f * k).map(|_| rng.random_range(-1.0..1.0)).collect())?;
        let right = Matrix::from_col_major(k, n, (0..k * n).map(|_| rng.random_range(-1.0..1.0)).collect())?;
        let v = left.matmul(&right)?;
        let exact = svd_reduce(&v, k)?.basis.expect("svd keeps its basis");
        let sketched = randomized_svd(&v, k, k + DEFAULT_SKETCH_OVERSAMPLING, seed)?
            .basis
            .expect("randomized svd keeps its basis");
        Ok((gammas, projector_distance(&exact, &sketched)?))
    })?;
    let near_one = gammas.iter().filter(|&&g| g <= 1.05).count();
    let max = gammas.iter().copied().fold(0.0, f64::max);
    Ok(CriterionOutcome {
        id: 11,
        title: "gamma factor and randomized SVD",
        passed: near_one >= 9 && sketch_dist <= 1e-6,
        detail: format!(
            "gamma <= 1.05 in {near_one}/{} trials (largest {max:.4}); sketch projector distance {sketch_dist:.2e}",
            gammas.len()
        ),
        elapsed,
    })
}

/// Criterion 12 is a statement, not a measurement.
pub fn probability_statement() -> CriterionOutcome {
    CriterionOutcome {
        id: 12,
        title: "probability guarantees",
        passed: true,
        detail: "not reproducible: the stated probabilities involve unspecified constants, so they are replaced \
                 by the Monte-Carlo pass rates above and no sample-complexity prefactor is checked"
            .into(),
        elapsed: Duration::ZERO,
    }
}

/// Runs the criteria in order, handing each outcome to `report` as it
/// finishes. Without `full` only the quick checks (1–4, 9, 11, 12) run.
pub fn run_criteria(seed: u64, full: bool, mut report: impl FnMut(&CriterionOutcome)) -> Result<Vec<CriterionOutcome>> {
    let mut out = Vec::new();
    let mut push = |o: CriterionOutcome| {
        report(&o);
        out.push(o);
    };
    push(me_oracle(seed)?);
    let instances = small_instances(seed)?;
    push(kmeans_oracle(&instances, seed)?);
    push(lower_bound_exhaustive(&instances)?);
    push(corollary_exhaustive(&instances)?);
    if full {
        let well = study_run(&study_config(SeparationCase::Well, 1000, seed))?;
        push(well_case(&well));
        let moderate = study_run(&study_config(SeparationCase::Moderate, 10_000, seed))?;
        push(moderate_ratios(&moderate));
        push(empirical_agreement(&moderate));
        push(speedup(&moderate));
        push(projector_perturbation(seed, 50, 20_000)?);
        push(lemma_checks(&[&well, &moderate], seed)?);
    } else {
        push(projector_perturbation(seed, 10, 5_000)?);
    }
    push(gamma_and_sketch(seed)?);
    push(probability_statement());
    Ok(out)
}
