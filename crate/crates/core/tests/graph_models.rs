mod common;

use std::collections::BTreeSet;

use blindcent::graph::{
    adjacency, eigenvector_centrality, erdos_renyi, is_connected, watts_strogatz,
};
use blindcent::seed::rng_from_seed;
use common::connected_er;
use proptest::prelude::*;

#[test]
fn er_edge_count_is_binomial() {
    let n = 100usize;
    let p = (n as f64).ln() / n as f64;
    let pairs = (n * (n - 1) / 2) as f64;
    let mean = p * pairs;
    let sd = (pairs * p * (1.0 - p)).sqrt();
    assert!((mean - 227.9).abs() < 0.1);
    for seed in 0..5 {
        let g = erdos_renyi(n, p, &mut rng_from_seed(seed)).unwrap();
        let dev = (g.edge_count() as f64 - mean).abs();
        assert!(dev <= 4.0 * sd, "seed {seed}: {} edges", g.edge_count());
    }
}

#[test]
fn generators_are_reproducible() {
    let a = erdos_renyi(60, 0.1, &mut rng_from_seed(42)).unwrap();
    let b = erdos_renyi(60, 0.1, &mut rng_from_seed(42)).unwrap();
    assert_eq!(a, b);
    let a = watts_strogatz(200, 4, 0.3, &mut rng_from_seed(42)).unwrap();
    let b = watts_strogatz(200, 4, 0.3, &mut rng_from_seed(42)).unwrap();
    assert_eq!(a, b);
    let c = watts_strogatz(200, 4, 0.3, &mut rng_from_seed(43)).unwrap();
    assert_ne!(a, c);
}

#[test]
fn full_rewiring_keeps_edge_count() {
    for seed in 0..5 {
        let g = watts_strogatz(500, 4, 1.0, &mut rng_from_seed(seed)).unwrap();
        assert_eq!(g.edge_count(), 1000);
        let deg = g.degrees();
        assert!(
            deg.iter().any(|&d| d != 4),
            "degrees should vary after rewiring"
        );
        assert_eq!(deg.iter().sum::<usize>(), 2000);
    }
}

#[test]
fn small_rewiring_touches_few_edges() {
    let lattice: BTreeSet<_> = watts_strogatz(500, 4, 0.0, &mut rng_from_seed(0))
        .unwrap()
        .edges()
        .iter()
        .copied()
        .collect();
    let mut moved = 0usize;
    for seed in 0..20 {
        let g = watts_strogatz(500, 4, 0.01, &mut rng_from_seed(seed)).unwrap();
        moved += g.edges().iter().filter(|e| !lattice.contains(e)).count();
    }
    // expected 10 per draw
    let avg = moved as f64 / 20.0;
    assert!((5.0..=15.0).contains(&avg), "average rewired edges {avg}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn ws_graphs_are_simple(n in 6usize..80, half_k in 1usize..3, p in 0.0f64..=1.0, seed in any::<u64>()) {
        let k = 2 * half_k;
        prop_assume!(k < n);
        let g = watts_strogatz(n, k, p, &mut rng_from_seed(seed)).unwrap();
        prop_assert_eq!(g.edge_count(), n * k / 2);
        prop_assert!(g.edges().iter().all(|&(i, j)| i < j && j < n));
    }

    #[test]
    fn centrality_follows_relabeling(seed in any::<u64>(), n in 5usize..25) {
        let g = connected_er(n, 0.35, seed);
        let mut perm: Vec<usize> = (0..n).collect();
        // deterministic shuffle from the seed
        let mut rng = rng_from_seed(seed ^ 0xABCD);
        use rand::seq::SliceRandom;
        perm.shuffle(&mut rng);
        let h = g.permuted(&perm).unwrap();
        prop_assert!(is_connected(&h));
        let u = eigenvector_centrality(&adjacency(&g)).unwrap();
        let w = eigenvector_centrality(&adjacency(&h)).unwrap();
        for (i, &j) in perm.iter().enumerate() {
            prop_assert!((u.values()[i] - w.values()[j]).abs() < 1e-8);
        }
        prop_assert!(u.min_entry() > 0.0);
    }
}
