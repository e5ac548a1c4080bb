//! Undirected simple graphs, random graph models and eigenvector centrality.

use std::collections::{BTreeSet, VecDeque};
use std::fmt::Write as _;
use std::str::FromStr;

use ndarray::{Array1, Array2, ArrayView1};
use rand::Rng;

use crate::error::{Error, Result};
use crate::spectral::{canonicalize_sign, eig_sym, SpectralDecomposition};

/// Undirected simple graph on nodes `0..n`.
///
/// Edges are stored as sorted `(i, j)` pairs with `i < j`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl Graph {
    /// Build a graph, rejecting self-loops, duplicate pairs and out-of-range
    /// endpoints. `(i, j)` and `(j, i)` denote the same edge.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidGraph("graph needs at least one node".into()));
        }
        let mut set = BTreeSet::new();
        for (a, b) in edges {
            if a >= n || b >= n {
                return Err(Error::InvalidGraph(format!(
                    "edge ({a},{b}) has an endpoint outside 0..{n}"
                )));
            }
            if a == b {
                return Err(Error::InvalidGraph(format!("self-loop at node {a}")));
            }
            if !set.insert((a.min(b), a.max(b))) {
                return Err(Error::InvalidGraph(format!("duplicate edge ({a},{b})")));
            }
        }
        Ok(Graph {
            n,
            edges: set.into_iter().collect(),
        })
    }

    fn from_set(n: usize, set: BTreeSet<(usize, usize)>) -> Self {
        Graph {
            n,
            edges: set.into_iter().collect(),
        }
    }

    pub fn empty(n: usize) -> Result<Self> {
        Graph::new(n, std::iter::empty())
    }

    pub fn complete(n: usize) -> Result<Self> {
        Graph::new(n, (0..n).flat_map(|i| ((i + 1)..n).map(move |j| (i, j))))
    }

    pub fn path(n: usize) -> Result<Self> {
        Graph::new(n, (1..n).map(|i| (i - 1, i)))
    }

    pub fn cycle(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::param("n", "a cycle needs at least 3 nodes"));
        }
        Graph::new(n, (0..n).map(|i| (i, (i + 1) % n)))
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n];
        for &(i, j) in &self.edges {
            deg[i] += 1;
            deg[j] += 1;
        }
        deg
    }

    fn neighbors(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n];
        for &(i, j) in &self.edges {
            adj[i].push(j);
            adj[j].push(i);
        }
        adj
    }

    /// Relabel node `i` as `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: perm.len(),
            });
        }
        Graph::new(self.n, self.edges.iter().map(|&(i, j)| (perm[i], perm[j])))
    }

    /// Serialize to the edge-list text format: `# n=<N>` then `i,j` per line.
    pub fn to_edge_list(&self) -> String {
        let mut s = format!("# n={}\n", self.n);
        for &(i, j) in &self.edges {
            let _ = writeln!(s, "{i},{j}");
        }
        s
    }
}

impl FromStr for Graph {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty edge list".into()))?;
        let n: usize = header
            .strip_prefix('#')
            .map(str::trim)
            .and_then(|h| h.strip_prefix("n="))
            .ok_or_else(|| Error::Parse(format!("expected `# n=<N>` header, got `{header}`")))?
            .trim()
            .parse()
            .map_err(|e| Error::Parse(format!("bad node count: {e}")))?;
        let mut edges = Vec::new();
        for line in lines {
            if line.starts_with('#') {
                continue;
            }
            let (a, b) = line
                .split_once(',')
                .ok_or_else(|| Error::Parse(format!("expected `i,j`, got `{line}`")))?;
            let parse = |s: &str| {
                s.trim()
                    .parse::<usize>()
                    .map_err(|e| Error::Parse(format!("bad node index `{s}`: {e}")))
            };
            edges.push((parse(a)?, parse(b)?));
        }
        Graph::new(n, edges)
    }
}

/// Symmetric 0/1 adjacency matrix with zero diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct AdjacencyMatrix(Array2<f64>);

impl AdjacencyMatrix {
    pub fn matrix(&self) -> &Array2<f64> {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn into_inner(self) -> Array2<f64> {
        self.0
    }
}

pub fn adjacency(g: &Graph) -> AdjacencyMatrix {
    let mut a = Array2::zeros((g.n, g.n));
    for &(i, j) in &g.edges {
        a[[i, j]] = 1.0;
        a[[j, i]] = 1.0;
    }
    AdjacencyMatrix(a)
}

/// G(n, p): each unordered pair is kept independently with probability `p`.
///
/// Pairs are visited in lexicographic order, one uniform draw per pair.
pub fn erdos_renyi<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> Result<Graph> {
    if n == 0 {
        return Err(Error::param("n", "must be at least 1"));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::param("p", format!("{p} is not a probability")));
    }
    let mut set = BTreeSet::new();
    for i in 0..n {
        for j in (i + 1)..n {
            if rng.random::<f64>() < p {
                set.insert((i, j));
            }
        }
    }
    Ok(Graph::from_set(n, set))
}

/// Watts–Strogatz small-world graph.
///
/// Starts from the ring lattice where each node links to its `k/2` nearest
/// neighbours on either side. Lattice offsets are then scanned in increasing
/// order and, for each node `u`, the edge `(u, u+offset)` has its far endpoint
/// moved with probability `p` to a uniform node `w`. Targets that would form a
/// self-loop or duplicate are redrawn up to 100 times; after that the edge is
/// left in place.
pub fn watts_strogatz<R: Rng + ?Sized>(n: usize, k: usize, p: f64, rng: &mut R) -> Result<Graph> {
    const MAX_RETRIES: usize = 100;
    if !k.is_multiple_of(2) {
        return Err(Error::param("k", format!("{k} must be even")));
    }
    if k >= n {
        return Err(Error::param(
            "k",
            format!("{k} must be smaller than n = {n}"),
        ));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::param("p", format!("{p} is not a probability")));
    }
    let key = |a: usize, b: usize| (a.min(b), a.max(b));
    let mut set = BTreeSet::new();
    for u in 0..n {
        for off in 1..=k / 2 {
            set.insert(key(u, (u + off) % n));
        }
    }
    if p > 0.0 {
        for off in 1..=k / 2 {
            for u in 0..n {
                let v = (u + off) % n;
                if rng.random::<f64>() >= p {
                    continue;
                }
                if !set.contains(&key(u, v)) {
                    // already rewired away by an earlier step
                    continue;
                }
                for _ in 0..MAX_RETRIES {
                    let w = rng.random_range(0..n);
                    if w != u && !set.contains(&key(u, w)) {
                        set.remove(&key(u, v));
                        set.insert(key(u, w));
                        break;
                    }
                }
            }
        }
    }
    Ok(Graph::from_set(n, set))
}

/// Breadth-first check for a single connected component.
pub fn is_connected(g: &Graph) -> bool {
    let adj = g.neighbors();
    let mut seen = vec![false; g.n];
    let mut queue = VecDeque::from([0usize]);
    seen[0] = true;
    let mut count = 1;
    while let Some(v) = queue.pop_front() {
        for &w in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                count += 1;
                queue.push_back(w);
            }
        }
    }
    count == g.n
}

/// Unit-norm Perron vector of `A`, with nonnegative entries.
#[derive(Debug, Clone, PartialEq)]
pub struct CentralityVector(Array1<f64>);

impl CentralityVector {
    /// Wrap an arbitrary vector, normalizing it and fixing its sign.
    pub fn from_vector(v: Array1<f64>) -> Result<Self> {
        let norm = v.dot(&v).sqrt();
        if !(norm > 1e-12) {
            return Err(Error::ZeroVector);
        }
        let mut u = v / norm;
        canonicalize_sign(u.view_mut());
        Ok(CentralityVector(u))
    }

    pub fn values(&self) -> ArrayView1<'_, f64> {
        self.0.view()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn min_entry(&self) -> f64 {
        self.0.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max_entry(&self) -> f64 {
        self.0.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Centrality from an already computed decomposition of `A`.
///
/// The caller is responsible for connectivity; only the leading gap is checked.
pub fn centrality_from_decomposition(dec: &SpectralDecomposition) -> Result<CentralityVector> {
    let n = dec.dim();
    if n == 0 {
        return Err(Error::ZeroVector);
    }
    if n >= 2 {
        let gap = dec.eigenvalues[n - 1] - dec.eigenvalues[n - 2];
        if gap < 1e-12 {
            return Err(Error::DegenerateLeadingEigenvalue { gap });
        }
    }
    let mut u = dec.eigenvector(n - 1).to_owned();
    canonicalize_sign(u.view_mut());
    // clean the -0.0 / -1e-17 entries the solver may leave behind
    u.mapv_inplace(|x| if x < 0.0 && x > -1e-12 { 0.0 } else { x });
    Ok(CentralityVector(u))
}

/// Eigenvector centrality of a connected graph from its adjacency matrix.
pub fn eigenvector_centrality(a: &AdjacencyMatrix) -> Result<CentralityVector> {
    let graph = graph_of(a);
    if !is_connected(&graph) {
        return Err(Error::NotConnected);
    }
    let dec = eig_sym(a.matrix().view())?;
    centrality_from_decomposition(&dec)
}

fn graph_of(a: &AdjacencyMatrix) -> Graph {
    let n = a.dim();
    let mut set = BTreeSet::new();
    for i in 0..n {
        for j in (i + 1)..n {
            if a.0[[i, j]] != 0.0 {
                set.insert((i, j));
            }
        }
    }
    Graph::from_set(n, set)
}
