#![allow(dead_code)]

use blindcent::graph::{erdos_renyi, is_connected, Graph};
use blindcent::seed::{derive, rng_from_seed};
use ndarray::Array2;

/// Connected G(n, p) draw, resampling from derived seeds.
pub fn connected_er(n: usize, p: f64, seed: u64) -> Graph {
    for attempt in 0..1000u64 {
        let mut rng = rng_from_seed(derive(seed, &[attempt]));
        let g = erdos_renyi(n, p, &mut rng).unwrap();
        if is_connected(&g) {
            return g;
        }
    }
    panic!("no connected draw for n={n}, p={p}");
}

pub fn max_abs(m: &Array2<f64>) -> f64 {
    m.iter().fold(0.0f64, |a, x| a.max(x.abs()))
}

/// Reference decomposition from nalgebra: (ascending eigenvalues, columns).
pub fn nalgebra_eigh(m: &Array2<f64>) -> (Vec<f64>, Vec<Vec<f64>>) {
    let n = m.nrows();
    let dm = nalgebra::DMatrix::from_fn(n, n, |i, j| m[[i, j]]);
    let eig = nalgebra::SymmetricEigen::new(dm);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let vals = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vecs = order
        .iter()
        .map(|&i| eig.eigenvectors.column(i).iter().copied().collect())
        .collect();
    (vals, vecs)
}
