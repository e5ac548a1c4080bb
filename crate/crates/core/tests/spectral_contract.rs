mod common;

use blindcent::graph::{adjacency, eigenvector_centrality, watts_strogatz, Graph};
use blindcent::seed::rng_from_seed;
use blindcent::spectral::{eig_sym, eigengap_at, eigvals_sym, rescale_unit_interval, sin_angle};
use common::{connected_er, max_abs, nalgebra_eigh};
use ndarray::{Array1, Array2};
use proptest::prelude::*;

fn symmetric(n: usize, entries: &[f64]) -> Array2<f64> {
    let mut m = Array2::zeros((n, n));
    let mut it = entries.iter().cycle();
    for i in 0..n {
        for j in i..n {
            let v = *it.next().unwrap();
            m[[i, j]] = v;
            m[[j, i]] = v;
        }
    }
    m
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn decomposition_contract(n in 1usize..=50, entries in prop::collection::vec(-10.0f64..10.0, 1..200)) {
        let m = symmetric(n, &entries);
        let dec = eig_sym(m.view()).unwrap();
        let q = &dec.eigenvectors;
        let orth = q.t().dot(q) - Array2::<f64>::eye(n);
        prop_assert!(max_abs(&orth) <= 1e-8);
        let scale = max_abs(&m).max(1.0);
        prop_assert!(max_abs(&(dec.reconstruct() - &m)) <= 1e-7 * scale);
        prop_assert!(dec.eigenvalues.windows(2).into_iter().all(|w| w[0] <= w[1]));
        for col in q.columns() {
            prop_assert!(col.sum() >= -1e-12);
        }

        // independent reference solver
        let (ref_vals, _) = nalgebra_eigh(&m);
        for (a, b) in dec.eigenvalues.iter().zip(&ref_vals) {
            prop_assert!((a - b).abs() <= 1e-9 * scale);
        }
        let vals = eigvals_sym(m.view()).unwrap();
        for (a, b) in vals.iter().zip(dec.eigenvalues.iter()) {
            prop_assert!((a - b).abs() <= 1e-10 * scale);
        }
    }

    #[test]
    fn eigengap_properties(mut vals in prop::collection::vec(-5.0f64..5.0, 2..20), j in 0usize..20) {
        vals.sort_by(|a, b| a.total_cmp(b));
        let j = j % vals.len();
        let gap = eigengap_at(Array1::from(vals.clone()).view(), j).unwrap();
        prop_assert!(gap >= 0.0);
        let touches_repeat = (j > 0 && vals[j] == vals[j - 1]) || (j + 1 < vals.len() && vals[j + 1] == vals[j]);
        prop_assert_eq!(gap == 0.0, touches_repeat);
    }

    #[test]
    fn rescale_preserves_order_and_ratios(mut vals in prop::collection::vec(-50.0f64..50.0, 2..30)) {
        vals.sort_by(|a, b| a.total_cmp(b));
        prop_assume!(vals[vals.len() - 1] - vals[0] > 1e-6);
        let (scaled, map) = rescale_unit_interval(Array1::from(vals.clone()).view()).unwrap();
        let width = vals[vals.len() - 1] - vals[0];
        prop_assert!((map.scale - 1.0 / width).abs() <= 1e-12 / width);
        for w in 0..vals.len() - 1 {
            prop_assert!(scaled[w] <= scaled[w + 1]);
            let g = (vals[w + 1] - vals[w]) / width;
            prop_assert!((scaled[w + 1] - scaled[w] - g).abs() <= 1e-12);
        }
    }

    #[test]
    fn sin_angle_symmetries(a in prop::collection::vec(-1.0f64..1.0, 4), b in prop::collection::vec(-1.0f64..1.0, 4)) {
        let a = Array1::from(a);
        let b = Array1::from(b);
        let (na, nb) = (a.dot(&a).sqrt(), b.dot(&b).sqrt());
        prop_assume!(na > 1e-3 && nb > 1e-3);
        let a = a / na;
        let b = b / nb;
        let s = sin_angle(a.view(), b.view());
        prop_assert!((0.0..=1.0).contains(&s));
        prop_assert_eq!(s, sin_angle(b.view(), a.view()));
        prop_assert_eq!(s, sin_angle((-&a).view(), b.view()));
    }
}

#[test]
fn bit_identical_repeat() {
    let g = connected_er(40, 0.2, 11);
    let a = adjacency(&g);
    let x = eig_sym(a.matrix().view()).unwrap();
    let y = eig_sym(a.matrix().view()).unwrap();
    assert_eq!(x, y);
}

#[test]
fn centrality_matches_reference_solver() {
    for seed in 0..10 {
        let g = connected_er(30, 0.25, seed);
        let a = adjacency(&g);
        let u = eigenvector_centrality(&a).unwrap();
        let (_, vecs) = nalgebra_eigh(a.matrix());
        let top = Array1::from(vecs.last().unwrap().clone());
        assert!(sin_angle(u.values(), top.view()) <= 1e-8);
        assert!(u.min_entry() > 0.0);
        assert!((u.values().dot(&u.values()) - 1.0).abs() < 1e-10);
    }
}

#[test]
fn regular_graphs_have_constant_centrality() {
    let g = watts_strogatz(500, 4, 0.0, &mut rng_from_seed(0)).unwrap();
    let u = eigenvector_centrality(&adjacency(&g)).unwrap();
    let c = 1.0 / 500f64.sqrt();
    assert!(u.values().iter().all(|x| (x - c).abs() < 1e-8));
    assert!((c - 0.044721).abs() < 1e-6);

    let k4 = Graph::complete(4).unwrap();
    let u = eigenvector_centrality(&adjacency(&k4)).unwrap();
    assert!(u.values().iter().all(|x| (x - 0.5).abs() < 1e-8));
}
