use mixclust_core::dimred::{sample_covariance, weighted_mean_subspace_distance};
use mixclust_core::linalg::{projector_distance, spectral_norm_sym, sym_eigen, DEFAULT_EIGEN_TOL};
use mixclust_core::mixture::{check_non_degeneracy, population_moments, sample, separability_report, DEFAULT_RANK_TOL};
use mixclust_core::{ComponentDistribution, MixtureModel};
use proptest::prelude::*;

fn weights(k: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.05f64..1.0, k).prop_map(|w| {
        let s: f64 = w.iter().sum();
        let mut w: Vec<f64> = w.iter().map(|x| x / s).collect();
        // renormalize the last entry so the sum is 1 to rounding
        let head: f64 = w[..w.len() - 1].iter().sum();
        *w.last_mut().unwrap() = 1.0 - head;
        w
    })
}

fn component(f: usize) -> impl Strategy<Value = ComponentDistribution> {
    prop_oneof![
        (0.01f64..2.0).prop_map(|variance| ComponentDistribution::SphericalGaussian { variance }),
        prop::collection::vec(0.01f64..2.0, f)
            .prop_map(|variances| ComponentDistribution::DiagonalGaussian { variances }),
        prop::collection::vec(0.01f64..1.0, f).prop_map(|scales| ComponentDistribution::Laplace { scales }),
        prop::collection::vec(0.01f64..2.0, f)
            .prop_map(|half_widths| ComponentDistribution::UniformBox { half_widths }),
    ]
}

fn model() -> impl Strategy<Value = MixtureModel> {
    (2usize..=4, 4usize..=7).prop_flat_map(|(k, f)| {
        (
            weights(k),
            prop::collection::vec(prop::collection::vec(-3.0f64..3.0, f), k),
            prop::collection::vec(component(f), k),
        )
            .prop_map(|(w, m, c)| MixtureModel::new(w, m, c).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn trace_decomposes_into_means_and_noise(m in model()) {
        let pm = population_moments(&m).unwrap();
        let noise: f64 = m.weights().iter().zip(m.components())
            .map(|(w, c)| w * c.coordinate_variances(m.dim()).iter().sum::<f64>()).sum();
        let lhs = pm.sigma_bar.trace();
        let rhs = pm.sigma_bar0.trace() + noise;
        prop_assert!((lhs - rhs).abs() <= 1e-10 * lhs.abs().max(1.0));
        prop_assert!(pm.sigma_sq_min <= pm.sigma_sq_max);
        prop_assert!(pm.lambda_min >= 0.0);
    }

    #[test]
    fn lambda_min_dominates_kth_eigenvalue_of_uncentered_moment(m in model()) {
        let nd = check_non_degeneracy(&m, DEFAULT_RANK_TOL).unwrap();
        prop_assume!(nd.holds);
        let pm = population_moments(&m).unwrap();
        prop_assert!(pm.lambda_min > 0.0);
        let lk = sym_eigen(&pm.sigma0, DEFAULT_EIGEN_TOL).unwrap().value(m.k() - 1);
        prop_assert!(pm.lambda_min >= lk - 1e-10 * lk.abs().max(1.0));
    }

    #[test]
    fn separability_flags_match_their_inequalities(m in model()) {
        let r = separability_report(&m).unwrap();
        for (idx, needs_positive) in [(&r.delta0, false), (&r.delta1, false), (&r.delta2, true), (&r.delta3, true)] {
            match idx.value {
                Some(v) => prop_assert_eq!(idx.holds, (!needs_positive || v > 0.0) && v < r.zeta_wmin),
                None => prop_assert!(!idx.holds),
            }
        }
        if m.is_spherical_gaussian() && r.lambda_min > 0.0 {
            let d0 = r.delta0.value.unwrap();
            let d1 = r.delta1.value.unwrap();
            prop_assert!(d1 < d0);
        }
    }

    /// The projector bound in terms of the population mean offsets from the
    /// sample subspace holds deterministically on every draw.
    #[test]
    fn projector_bound_by_mean_offsets(m in model(), seed in any::<u64>()) {
        let nd = check_non_degeneracy(&m, DEFAULT_RANK_TOL).unwrap();
        prop_assume!(nd.holds);
        let k = m.k();
        let pm = population_moments(&m).unwrap();
        let data = sample(&m, 400, seed).unwrap();
        let p = sym_eigen(&sample_covariance(&data.data, true).unwrap(), DEFAULT_EIGEN_TOL)
            .unwrap().leading_vectors(k - 1);
        let q = sym_eigen(&pm.sigma_bar0, DEFAULT_EIGEN_TOL).unwrap().leading_vectors(k - 1);
        let dist = projector_distance(&p, &q).unwrap();
        let offsets = weighted_mean_subspace_distance(m.weights(), m.means(), &p);
        prop_assert!(dist * dist <= 2.0 * offsets / pm.lambda_min + 1e-9);
    }
}

#[test]
fn balanced_labels_have_balanced_frequencies() {
    let m = MixtureModel::spherical(vec![0.5, 0.5], vec![vec![0.0], vec![3.0]], &[1.0, 1.0]).unwrap();
    for seed in 0..5 {
        let d = sample(&m, 10_000, seed).unwrap();
        let ones = d.labels.iter().filter(|&&l| l == 0).count() as f64 / 10_000.0;
        assert!((0.47..=0.53).contains(&ones), "{ones}");
    }
}

#[test]
fn within_component_sample_variance_concentrates() {
    let m = MixtureModel::spherical(
        vec![0.5, 0.5],
        vec![vec![0.0, 0.0, 0.0], vec![5.0, -1.0, 2.0]],
        &[1.0, 1.0],
    )
    .unwrap();
    let d = sample(&m, 10_000, 42).unwrap();
    for k in 0..2 {
        let members = d.truth().members(k);
        let n = members.len() as f64;
        for i in 0..3 {
            let xs: Vec<f64> = members.iter().map(|&j| d.data[(i, j)]).collect();
            let mean = xs.iter().sum::<f64>() / n;
            let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
            assert!((0.94..=1.06).contains(&var), "component {k}, coordinate {i}: {var}");
        }
    }
}

#[test]
fn non_gaussian_families_have_their_stated_variance() {
    let comps = vec![
        ComponentDistribution::Laplace { scales: vec![0.5, 1.0] },
        ComponentDistribution::UniformBox {
            half_widths: vec![3.0, 0.3],
        },
    ];
    let m = MixtureModel::new(vec![0.5, 0.5], vec![vec![0.0, 0.0], vec![10.0, 10.0]], comps).unwrap();
    let d = sample(&m, 40_000, 7).unwrap();
    for k in 0..2 {
        let want = m.components()[k].coordinate_variances(2);
        let members = d.truth().members(k);
        let n = members.len() as f64;
        for (i, want) in want.iter().enumerate() {
            let xs: Vec<f64> = members.iter().map(|&j| d.data[(i, j)]).collect();
            let mean = xs.iter().sum::<f64>() / n;
            let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
            assert!((var / want - 1.0).abs() < 0.06, "component {k}: {var} vs {want}");
        }
    }
}

#[test]
fn sample_covariance_error_shrinks_with_n() {
    let m = MixtureModel::spherical(
        vec![0.3, 0.7],
        vec![vec![1.0, 0.0, 0.5], vec![-1.0, 2.0, 0.0]],
        &[0.5, 1.5],
    )
    .unwrap();
    let sigma_bar = population_moments(&m).unwrap().sigma_bar;
    let err = |n: usize, seed: u64| {
        let d = sample(&m, n, seed).unwrap();
        spectral_norm_sym(&(&sample_covariance(&d.data, true).unwrap() - &sigma_bar)).unwrap()
    };
    let wins = (0..100u64)
        .filter(|&t| err(50_000, 2 * t) < err(500, 2 * t + 1))
        .count();
    assert!(wins >= 95, "{wins}/100");
}
