use mixclust_core::linalg::{
    center, projector_distance, scatter_spectrum, spectral_norm_sym, sym_eigen, Matrix, DEFAULT_EIGEN_TOL,
};
use proptest::prelude::*;

fn symmetric(n: usize) -> impl Strategy<Value = Matrix> {
    prop::collection::vec(-5.0f64..5.0, n * n).prop_map(move |raw| {
        let mut a = Matrix::zeros(n, n);
        for j in 0..n {
            for i in 0..=j {
                let x = raw[j * n + i];
                a[(i, j)] = x;
                a[(j, i)] = x;
            }
        }
        a
    })
}

fn add(a: &Matrix, b: &Matrix) -> Matrix {
    let data = a.as_slice().iter().zip(b.as_slice()).map(|(x, y)| x + y).collect();
    Matrix::from_col_major(a.rows(), a.cols(), data).unwrap()
}

fn eigenvalues(a: &Matrix) -> Vec<f64> {
    sym_eigen(a, DEFAULT_EIGEN_TOL).unwrap().values
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn eigen_pairs_meet_residual_and_orthonormality(a in symmetric(7)) {
        let e = sym_eigen(&a, DEFAULT_EIGEN_TOL).unwrap();
        let norm = a.frobenius_norm();
        for i in 0..7 {
            let q = Matrix::from_columns(&[e.vectors.column(i)]).unwrap();
            let aq = a.matmul(&q).unwrap();
            let r: f64 = aq.as_slice().iter().zip(q.as_slice())
                .map(|(x, y)| (x - e.values[i] * y).powi(2)).sum::<f64>().sqrt();
            prop_assert!(r <= 1e-9 * norm.max(1e-300));
        }
        let qtq = e.vectors.t_matmul(&e.vectors).unwrap();
        prop_assert!((&qtq - &Matrix::identity(7)).frobenius_norm() <= 1e-9);
    }

    #[test]
    fn weyl_perturbation(a in symmetric(6), e in symmetric(6)) {
        let e = e.scaled(0.1);
        let shift = spectral_norm_sym(&e).unwrap();
        let la = eigenvalues(&a);
        let lae = eigenvalues(&add(&a, &e));
        for (x, y) in la.iter().zip(&lae) {
            prop_assert!((x - y).abs() <= shift + 1e-9);
        }
    }

    #[test]
    fn rank_one_downdate_interlaces(
        a in symmetric(6),
        v in prop::collection::vec(-1.0f64..1.0, 6),
        tau in -3.0f64..0.0,
    ) {
        let mut b = a.clone();
        b.add_outer(tau, &v, &v);
        let la = eigenvalues(&a);
        let lb = eigenvalues(&b);
        for i in 0..6 {
            prop_assert!(lb[i] <= la[i] + 1e-9);
            if i + 1 < 6 {
                prop_assert!(lb[i] >= la[i + 1] - 1e-9);
            }
        }
    }

    #[test]
    fn eigenvalue_sum_bounds(a in symmetric(5), e in symmetric(5)) {
        let la = eigenvalues(&a);
        let le = eigenvalues(&e);
        let lae = eigenvalues(&add(&a, &e));
        for k in 0..5 {
            prop_assert!(la[k] + le[4] <= lae[k] + 1e-9);
            prop_assert!(lae[k] <= la[k] + le[0] + 1e-9);
        }
    }

    #[test]
    fn projector_distance_ignores_basis_rotation(theta in 0.0f64..6.0, phi in 0.0f64..6.0) {
        // two bases of the same plane in R³ differ by an in-plane rotation
        let b1 = Matrix::from_columns(&[[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]]).unwrap();
        let (c, s) = (theta.cos(), theta.sin());
        let b2 = Matrix::from_columns(&[[c, s, 0.0], [-s, c, 0.0]]).unwrap();
        prop_assert!(projector_distance(&b1, &b2).unwrap() < 1e-12);
        let tilted = Matrix::from_columns(&[[1.0, 0.0, 0.0], [0.0, phi.cos(), phi.sin()]]).unwrap();
        let want = 2f64.sqrt() * phi.sin().abs();
        prop_assert!((projector_distance(&b1, &tilted).unwrap() - want).abs() < 1e-12);
    }
}

#[test]
fn scatter_spectrum_matches_the_n_by_n_problem() {
    use rand::Rng;
    let mut rng = mixclust_core::stream_rng(21, 0);
    for _ in 0..10 {
        let data = (0..30).map(|_| rng.random_range(-2.0..2.0)).collect();
        let v = Matrix::from_col_major(3, 10, data).unwrap();
        let z = center(&v).unwrap().z;
        let small = scatter_spectrum(&z).unwrap();
        let big = eigenvalues(&z.gram_cols());
        for (i, l) in small.eigenvalues.iter().enumerate() {
            assert!((l - big[i]).abs() <= 1e-8, "{l} vs {}", big[i]);
        }
        for l in &big[3..] {
            assert!(l.abs() <= 1e-8);
        }
        let trace: f64 = big.iter().sum();
        assert!((small.trace - trace).abs() <= 1e-8);
    }
}
