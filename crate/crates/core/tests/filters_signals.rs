mod common;

use blindcent::filters::{
    apply_filter, centrality_index_in_cy, filter_spectrum, polynomial_matrix, FilterSpec,
    SpectralFunction,
};
use blindcent::graph::{adjacency, Graph};
use blindcent::signals::{
    covariance_deviation, generate_signals, generate_signals_with, population_covariance,
    sample_covariance, Gaussian, Provenance, SignalEnsemble,
};
use blindcent::spectral::{eig_sym, eigvals_sym};
use blindcent::theory::{loglog_slope, median};
use common::{connected_er, max_abs};
use ndarray::{array, Array1, Array2};
use proptest::prelude::*;

fn spec_strategy() -> impl Strategy<Value = FilterSpec> {
    prop_oneof![
        Just(FilterSpec::sqrt()),
        Just(FilterSpec::squared()),
        Just(FilterSpec::sqrt_highpass()),
        Just(FilterSpec::squared_highpass()),
        prop::collection::vec(-1.0f64..1.0, 1..=6).prop_map(FilterSpec::Polynomial),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn eigenbasis_matches_horner(seed in any::<u64>(), n in 4usize..=30, coeffs in prop::collection::vec(-1.0f64..1.0, 1..=6)) {
        let a = adjacency(&connected_er(n, 0.3, seed));
        let h = apply_filter(&FilterSpec::Polynomial(coeffs.clone()), &a).unwrap();
        let direct = polynomial_matrix(&coeffs, a.matrix().view());
        let scale = max_abs(&direct).max(1e-300);
        prop_assert!(max_abs(&(&h.entries - &direct)) <= 1e-6 * scale.max(1.0));
    }

    #[test]
    fn filter_matrix_shares_eigenvectors(seed in any::<u64>(), n in 4usize..=30, spec in spec_strategy()) {
        let a = adjacency(&connected_er(n, 0.3, seed));
        let h = apply_filter(&spec, &a).unwrap();
        let am = a.matrix();
        let comm = h.entries.dot(am) - am.dot(&h.entries);
        let tol = 1e-7 * (1.0 + max_abs(am) * max_abs(&h.entries));
        prop_assert!(max_abs(&comm) <= tol);
        let q = &h.basis.eigenvectors;
        let mut rotated = q.t().dot(&h.entries).dot(q);
        for i in 0..n {
            rotated[[i, i]] = 0.0;
        }
        prop_assert!(max_abs(&rotated) <= 1e-7 * (1.0 + max_abs(&h.entries)));
    }

    #[test]
    fn nonnegative_filters_are_psd(seed in any::<u64>(), n in 4usize..=30, spec in spec_strategy()) {
        let a = adjacency(&connected_er(n, 0.3, seed));
        let h = apply_filter(&spec, &a).unwrap();
        prop_assume!(h.spectrum.iter().all(|&x| x >= 0.0));
        let vals = eigvals_sym(h.entries.view()).unwrap();
        prop_assert!(vals.iter().all(|&v| v >= -1e-10));
        prop_assert!(max_abs(&(&h.entries - &h.entries.t())) == 0.0);
    }

    #[test]
    fn lowpass_highpass_duality(vals in prop::collection::vec(-5.0f64..5.0, 2..30)) {
        let v = Array1::from(vals);
        let lo = v.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        prop_assume!(hi - lo > 1e-6);
        for function in [SpectralFunction::Sqrt, SpectralFunction::Squared, SpectralFunction::Identity] {
            let lp = filter_spectrum(&FilterSpec::Spectral { function, highpass: false }, v.view()).unwrap();
            let hp = filter_spectrum(&FilterSpec::Spectral { function, highpass: true }, v.view()).unwrap();
            for (a, b) in lp.iter().zip(hp.iter()) {
                prop_assert!((a + b - 1.0).abs() <= 1e-15);
            }
        }
    }

    #[test]
    fn monotone_filters_put_centrality_at_the_ends(mut vals in prop::collection::vec(-5.0f64..5.0, 2..30)) {
        vals.sort_by(|a, b| a.total_cmp(b));
        let n = vals.len();
        prop_assume!(vals[n - 1] - vals[n - 2] > 1e-3);
        let v = Array1::from(vals);
        prop_assert_eq!(centrality_index_in_cy(&FilterSpec::sqrt(), v.view()).unwrap(), n - 1);
        prop_assert_eq!(centrality_index_in_cy(&FilterSpec::squared(), v.view()).unwrap(), n - 1);
        prop_assert_eq!(centrality_index_in_cy(&FilterSpec::sqrt_highpass(), v.view()).unwrap(), 0);
        prop_assert_eq!(centrality_index_in_cy(&FilterSpec::squared_highpass(), v.view()).unwrap(), 0);
    }

    #[test]
    fn population_covariance_is_square_of_filter(seed in any::<u64>(), n in 4usize..=30, spec in spec_strategy()) {
        let a = adjacency(&connected_er(n, 0.3, seed));
        let h = apply_filter(&spec, &a).unwrap();
        let cy = population_covariance(&h);
        let squared = h.entries.dot(&h.entries);
        prop_assert!(max_abs(&(&cy.entries - &squared)) <= 1e-8 * max_abs(&squared).max(1.0));
        let am = a.matrix();
        let comm = cy.entries.dot(am) - am.dot(&cy.entries);
        prop_assert!(max_abs(&comm) <= 1e-7 * (1.0 + max_abs(am) * max_abs(&cy.entries)));
    }

    #[test]
    fn sample_covariance_is_permutation_equivariant(rows in prop::collection::vec(-3.0f64..3.0, 12), shift in 0usize..4) {
        let y = Array2::from_shape_vec((3, 4), rows).unwrap();
        let perm: Vec<usize> = (0..4).map(|i| (i + shift) % 4).collect();
        let mut yp = Array2::zeros((3, 4));
        for r in 0..3 {
            for i in 0..4 {
                yp[[r, perm[i]]] = y[[r, i]];
            }
        }
        let c = sample_covariance(&SignalEnsemble::new(y, Provenance::default()).unwrap());
        let cp = sample_covariance(&SignalEnsemble::new(yp, Provenance::default()).unwrap());
        for i in 0..4 {
            for j in 0..4 {
                prop_assert!((c.entries[[i, j]] - cp.entries[[perm[i], perm[j]]]).abs() <= 1e-14);
            }
        }
        let vals = eigvals_sym(c.entries.view()).unwrap();
        prop_assert!(vals.iter().all(|&v| v >= -1e-8));
    }
}

fn p3() -> blindcent::AdjacencyMatrix {
    adjacency(&Graph::path(3).unwrap())
}

#[test]
fn population_covariance_examples() {
    let eye = apply_filter(&FilterSpec::Polynomial(vec![1.0]), &p3()).unwrap();
    assert!(max_abs(&(population_covariance(&eye).entries - Array2::<f64>::eye(3))) < 1e-14);

    let sqrt = apply_filter(&FilterSpec::sqrt(), &p3()).unwrap();
    let cy = population_covariance(&sqrt);
    let spec = eig_sym(cy.entries.view()).unwrap().eigenvalues;
    for (got, want) in spec.iter().zip([0.0, 0.5, 1.0]) {
        assert!((got - want).abs() < 1e-14);
    }

    let lin = apply_filter(&FilterSpec::Polynomial(vec![0.0, 1.0]), &p3()).unwrap();
    let want = array![[1.0, 0.0, 1.0], [0.0, 2.0, 0.0], [1.0, 0.0, 1.0]];
    assert!(max_abs(&(population_covariance(&lin).entries - want)) < 1e-14);
}

#[test]
fn identity_filter_gives_identity_covariance() {
    let e = generate_signals_with(Array2::eye(3).view(), 100_000, 3, &Gaussian).unwrap();
    let c = sample_covariance(&e);
    assert!(max_abs(&(c.entries - Array2::<f64>::eye(3))) < 0.05);
}

#[test]
fn large_sample_covariance_matches_square() {
    let h = apply_filter(&FilterSpec::sqrt(), &p3()).unwrap();
    let e = generate_signals(&h, 100_000, 4).unwrap();
    let c = sample_covariance(&e);
    let want = h.entries.dot(&h.entries);
    assert!(max_abs(&(c.entries - want)) < 0.05);
}

#[test]
fn generation_is_independent_of_thread_count() {
    let h = apply_filter(&FilterSpec::sqrt(), &adjacency(&connected_er(20, 0.3, 1))).unwrap();
    let run = |threads: usize| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| generate_signals(&h, 1000, 77).unwrap().signals)
    };
    let one = run(1);
    assert_eq!(one, run(4));
    assert_eq!(one, generate_signals(&h, 1000, 77).unwrap().signals);
    assert_ne!(one, generate_signals(&h, 1000, 78).unwrap().signals);
}

#[test]
fn deviation_decays_like_inverse_sqrt_m() {
    let g = connected_er(50, 0.2, 5);
    let h = apply_filter(&FilterSpec::sqrt(), &adjacency(&g)).unwrap();
    let cy = population_covariance(&h);
    let grid = [250usize, 500, 1000, 2000, 4000];
    let medians: Vec<f64> = grid
        .iter()
        .map(|&m| {
            let devs: Vec<f64> = (0..20)
                .map(|s| {
                    let e = generate_signals(&h, m, blindcent::seed::derive(9, &[m as u64, s]))
                        .unwrap();
                    covariance_deviation(&sample_covariance(&e), &cy).unwrap()
                })
                .collect();
            median(&devs)
        })
        .collect();
    assert!(medians[4] < medians[0]);
    let xs: Vec<f64> = grid.iter().map(|&m| m as f64).collect();
    let slope = loglog_slope(&xs, &medians).unwrap();
    assert!((-0.65..=-0.35).contains(&slope), "slope {slope}");
}
