//! Graph draws, single trials and full experiment sweeps.
//!
//! Seeds are derived from the master seed by key path:
//!
//! * graph draw: `[graph, model, n, k, p, graph_id, attempt]`
//! * trial: `[trial, setting, graph_id, trial_id, m]`, where `setting`
//!   hashes model, n, k, p and filter.
//!
//! Labels enter the path through their FNV-1a hash and `p` through its bit
//! pattern. Every job owns its stream, so results do not depend on how jobs
//! are scheduled.

use blindcent::filters::{apply_filter_with, centrality_position, FilterMatrix};
use blindcent::graph::{
    adjacency, centrality_from_decomposition, erdos_renyi, is_connected, watts_strogatz,
};
use blindcent::seed::{derive, label_id, rng_from_seed};
use blindcent::selection::select_from_decomposition;
use blindcent::signals::{
    generate_signals, population_covariance, sample_covariance, CovarianceMatrix,
};
use blindcent::spectral::{eig_sym, eigvals_sym};
use blindcent::theory::{deviation_bound, peak_to_median};
use blindcent::{CentralityVector, FilterSpec, Graph, SignalEnsemble, SpectralDecomposition};
use rayon::prelude::*;

use crate::config::{ExperimentConfig, ModelKind, SampleSize};
use crate::error::{HarnessError, Result};
use crate::records::{TrialMeasurement, TrialOutcome, TrialRecord};

/// Draws attempted before giving up on a connected graph.
pub const MAX_DRAW_ATTEMPTS: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GraphModel {
    pub kind: ModelKind,
    pub n: usize,
    /// Lattice degree, ignored for Erdős–Rényi.
    pub k: usize,
    pub p: f64,
}

impl GraphModel {
    pub fn erdos_renyi(n: usize, p: f64) -> Self {
        GraphModel {
            kind: ModelKind::ErdosRenyi,
            n,
            k: 0,
            p,
        }
    }

    pub fn watts_strogatz(n: usize, k: usize, p: f64) -> Self {
        GraphModel {
            kind: ModelKind::WattsStrogatz,
            n,
            k,
            p,
        }
    }

    pub fn k_field(&self) -> Option<usize> {
        (self.kind == ModelKind::WattsStrogatz).then_some(self.k)
    }

    fn key(&self) -> [u64; 4] {
        [
            label_id(self.kind.tag()),
            self.n as u64,
            self.k as u64,
            self.p.to_bits(),
        ]
    }

    fn sample(&self, seed: u64) -> Result<Graph> {
        let mut rng = rng_from_seed(seed);
        Ok(match self.kind {
            ModelKind::ErdosRenyi => erdos_renyi(self.n, self.p, &mut rng)?,
            ModelKind::WattsStrogatz => watts_strogatz(self.n, self.k, self.p, &mut rng)?,
        })
    }
}

/// A connected draw from a random graph model.
#[derive(Debug, Clone, PartialEq)]
pub struct GraphDraw {
    /// `None` for graphs that were not drawn from a model.
    pub model: Option<GraphModel>,
    pub graph: Graph,
    pub graph_id: usize,
    /// Number of draws needed, 1 when the first one was connected.
    pub attempts: usize,
}

/// Draw graph `graph_id`, resampling disconnected draws.
pub fn draw_graph(model: GraphModel, master_seed: u64, graph_id: usize) -> Result<GraphDraw> {
    let [kind, n, k, p] = model.key();
    for attempt in 0..MAX_DRAW_ATTEMPTS {
        let seed = derive(
            master_seed,
            &[
                label_id("graph"),
                kind,
                n,
                k,
                p,
                graph_id as u64,
                attempt as u64,
            ],
        );
        let graph = model.sample(seed)?;
        if is_connected(&graph) {
            return Ok(GraphDraw {
                model: Some(model),
                graph,
                graph_id,
                attempts: attempt + 1,
            });
        }
    }
    Err(blindcent::Error::NotConnected.into())
}

/// A graph with its adjacency eigendecomposition and centrality.
#[derive(Debug, Clone)]
pub struct PreparedGraph {
    pub draw: GraphDraw,
    pub basis: SpectralDecomposition,
    pub centrality: CentralityVector,
}

impl PreparedGraph {
    pub fn new(draw: GraphDraw) -> Result<Self> {
        let basis = eig_sym(adjacency(&draw.graph).matrix().view())?;
        let centrality = centrality_from_decomposition(&basis)?;
        Ok(PreparedGraph {
            draw,
            basis,
            centrality,
        })
    }

    /// Prepare an arbitrary graph, e.g. one read from a file.
    pub fn from_graph(graph: Graph) -> Result<Self> {
        if !is_connected(&graph) {
            return Err(blindcent::Error::NotConnected.into());
        }
        Self::new(GraphDraw {
            model: None,
            graph,
            graph_id: 0,
            attempts: 1,
        })
    }
}

/// Filter matrix and population covariance for one (graph, filter) pair.
#[derive(Debug, Clone)]
pub struct PreparedFilter {
    pub spec: FilterSpec,
    pub label: String,
    pub filter: FilterMatrix,
    pub population: CovarianceMatrix,
    /// Position of the centrality eigenvector in `C_y`'s ascending spectrum.
    pub centrality_index: usize,
    pub delta: f64,
    pub cy_norm: f64,
}

impl PreparedFilter {
    pub fn new(graph: &PreparedGraph, spec: &FilterSpec) -> Result<Self> {
        let (centrality_index, delta) = centrality_position(spec, graph.basis.eigenvalues.view())?;
        let filter = apply_filter_with(spec, graph.basis.clone())?;
        let population = population_covariance(&filter);
        let cy_norm = filter.spectrum.iter().fold(0.0f64, |acc, x| acc.max(x * x));
        Ok(PreparedFilter {
            spec: spec.clone(),
            label: spec.to_string(),
            filter,
            population,
            centrality_index,
            delta,
            cy_norm,
        })
    }
}

pub fn setting_id(model: &GraphModel, filter_label: &str) -> u64 {
    let [kind, n, k, p] = model.key();
    derive(0, &[kind, n, k, p, label_id(filter_label)])
}

pub fn trial_seed(
    master_seed: u64,
    setting: u64,
    graph_id: usize,
    trial_id: usize,
    m: SampleSize,
) -> u64 {
    derive(
        master_seed,
        &[
            label_id("trial"),
            setting,
            graph_id as u64,
            trial_id as u64,
            m.key(),
        ],
    )
}

/// Run the selection once and compare with the true centrality.
///
/// Returns the generated signals as well when `keep_signals` is set.
pub fn run_trial(
    graph: &PreparedGraph,
    filter: &PreparedFilter,
    m: SampleSize,
    seed: u64,
    eta: f64,
    keep_signals: bool,
) -> Result<(TrialMeasurement, Option<SignalEnsemble>)> {
    let (cov, bound, signals) = match m {
        SampleSize::Population => (filter.population.clone(), 0.0, None),
        SampleSize::Finite(m) => {
            let mut ens = generate_signals(&filter.filter, m, seed)?;
            ens.provenance.filter = Some(filter.label.clone());
            let r = ens.max_squared_norm().max(f64::MIN_POSITIVE);
            let bound = deviation_bound(filter.cy_norm.max(f64::MIN_POSITIVE), r, m, eta, 1.0)?;
            let cov = sample_covariance(&ens);
            (cov, bound, keep_signals.then_some(ens))
        }
    };
    let dec = eig_sym(cov.entries.view())?;
    let mut result = select_from_decomposition(&dec)?;
    result.attach_truth(&dec, &graph.centrality)?;
    let truth = result.diagnostics.truth.expect("truth attached");
    Ok((
        TrialMeasurement {
            chosen_index: result.chosen_index,
            optimal_index: truth.optimal_index,
            cos_true: truth.cos_true,
            score: result.chosen_score(),
            deviation_bound: bound,
        },
        signals,
    ))
}

/// Model tag used in result rows for graphs read from a file.
pub const FILE_MODEL_TAG: &str = "file";

/// One trial on a given graph, keyed like graph 0, trial 0 of an experiment
/// on that graph.
pub fn run_file_trial(
    graph: &PreparedGraph,
    spec: &FilterSpec,
    m: SampleSize,
    master_seed: u64,
    eta: f64,
    keep_signals: bool,
) -> Result<(TrialRecord, Option<SignalEnsemble>)> {
    let n = graph.draw.graph.node_count();
    let filter = PreparedFilter::new(graph, spec)?;
    let setting = derive(
        0,
        &[label_id(FILE_MODEL_TAG), n as u64, label_id(&filter.label)],
    );
    let seed = trial_seed(master_seed, setting, 0, 0, m);
    let (t, signals) = run_trial(graph, &filter, m, seed, eta, keep_signals)?;
    let record = TrialRecord {
        model: FILE_MODEL_TAG.to_string(),
        n,
        k: None,
        p: None,
        filter: filter.label.clone(),
        m,
        graph_id: 0,
        trial_id: 0,
        delta: filter.delta,
        min_u: graph.centrality.min_entry(),
        seed: master_seed,
        outcome: TrialOutcome::Completed(t),
    };
    Ok((record, signals))
}

/// Per-(graph, filter) diagnostics written next to the trial results.
#[derive(Debug, Clone, PartialEq)]
pub struct GraphRow {
    pub model: GraphModel,
    pub filter: String,
    pub graph_id: usize,
    pub attempts: usize,
    pub edges: usize,
    pub centrality_index: Option<usize>,
    pub delta: Option<f64>,
    pub min_u: f64,
    pub max_u: f64,
    pub peak_to_median: f64,
    pub sample_requirement: Option<f64>,
    pub error: Option<String>,
    pub seed: u64,
}

pub const GRAPH_HEADER: [&str; 15] = [
    "model",
    "n",
    "k",
    "p",
    "filter",
    "graph_id",
    "attempts",
    "edges",
    "centrality_index",
    "delta",
    "min_u",
    "max_u",
    "peak_to_median",
    "sample_requirement",
    "seed",
];

impl GraphRow {
    pub fn fields(&self) -> Vec<String> {
        let opt = |x: Option<String>| x.unwrap_or_default();
        vec![
            self.model.kind.tag().to_string(),
            self.model.n.to_string(),
            opt(self.model.k_field().map(|k| k.to_string())),
            self.model.p.to_string(),
            self.filter.clone(),
            self.graph_id.to_string(),
            self.attempts.to_string(),
            self.edges.to_string(),
            opt(self.centrality_index.map(|i| i.to_string())),
            match (&self.delta, &self.error) {
                (_, Some(e)) => format!("error:{e}"),
                (Some(d), None) => d.to_string(),
                (None, None) => String::new(),
            },
            self.min_u.to_string(),
            self.max_u.to_string(),
            self.peak_to_median.to_string(),
            opt(self.sample_requirement.map(|r| r.to_string())),
            self.seed.to_string(),
        ]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentOutput {
    /// Ordered by (p, filter, graph_id, trial_id, m).
    pub records: Vec<TrialRecord>,
    /// Ordered by (p, graph_id, filter).
    pub graphs: Vec<GraphRow>,
}

fn error_tag(e: &HarnessError) -> String {
    match e {
        HarnessError::Numerical(inner) => inner.tag().to_string(),
        other => other.to_string(),
    }
}

/// Everything produced for one graph draw.
fn run_unit(
    cfg: &ExperimentConfig,
    model: GraphModel,
    graph_id: usize,
) -> Result<(Vec<Vec<TrialRecord>>, Vec<GraphRow>)> {
    let graph = PreparedGraph::new(draw_graph(model, cfg.master_seed, graph_id)?)?;
    let u = &graph.centrality;
    let per_filter: Vec<(Vec<TrialRecord>, GraphRow)> = cfg
        .filters
        .par_iter()
        .map(|spec| {
            let label = spec.to_string();
            let prepared = PreparedFilter::new(&graph, spec);
            let requirement = prepared
                .as_ref()
                .ok()
                .and_then(|f| blindcent::theory::sample_requirement(u, f.delta).ok());
            let row = GraphRow {
                model,
                filter: label.clone(),
                graph_id,
                attempts: graph.draw.attempts,
                edges: graph.draw.graph.edge_count(),
                centrality_index: prepared.as_ref().ok().map(|f| f.centrality_index),
                delta: prepared.as_ref().ok().map(|f| f.delta),
                min_u: u.min_entry(),
                max_u: u.max_entry(),
                peak_to_median: peak_to_median(u.values()),
                sample_requirement: requirement,
                error: prepared.as_ref().err().map(error_tag),
                seed: cfg.master_seed,
            };
            let setting = setting_id(&model, &label);
            let jobs: Vec<(usize, SampleSize)> = (0..cfg.trials)
                .flat_map(|t| cfg.m_grid.iter().map(move |&m| (t, m)))
                .collect();
            let records = jobs
                .par_iter()
                .map(|&(trial_id, m)| {
                    let outcome = match &prepared {
                        Err(e) => TrialOutcome::Failed(error_tag(e)),
                        Ok(f) => {
                            let seed = trial_seed(cfg.master_seed, setting, graph_id, trial_id, m);
                            match run_trial(&graph, f, m, seed, cfg.eta, false) {
                                Ok((t, _)) => TrialOutcome::Completed(t),
                                Err(e) => TrialOutcome::Failed(error_tag(&e)),
                            }
                        }
                    };
                    TrialRecord {
                        model: model.kind.tag().to_string(),
                        n: model.n,
                        k: model.k_field(),
                        p: Some(model.p),
                        filter: label.clone(),
                        m,
                        graph_id,
                        trial_id,
                        delta: prepared.as_ref().map(|f| f.delta).unwrap_or(f64::NAN),
                        min_u: u.min_entry(),
                        seed: cfg.master_seed,
                        outcome,
                    }
                })
                .collect();
            (records, row)
        })
        .collect();
    Ok(per_filter.into_iter().unzip())
}

/// Run a full sweep in a pool of `cfg.workers` threads.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentOutput> {
    cfg.validate()?;
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(w) = cfg.workers {
        builder = builder.num_threads(w);
    }
    let pool = builder
        .build()
        .map_err(|e| HarnessError::Usage(format!("cannot start worker pool: {e}")))?;
    let units: Vec<(usize, GraphModel, usize)> = cfg
        .resolved_p()
        .into_iter()
        .enumerate()
        .flat_map(|(pi, p)| {
            let model = match cfg.model {
                ModelKind::ErdosRenyi => GraphModel::erdos_renyi(cfg.n, p),
                ModelKind::WattsStrogatz => GraphModel::watts_strogatz(cfg.n, cfg.k, p),
            };
            (0..cfg.graphs).map(move |g| (pi, model, g))
        })
        .collect();
    let results: Vec<(Vec<Vec<TrialRecord>>, Vec<GraphRow>)> = pool.install(|| {
        units
            .par_iter()
            .map(|&(_, model, graph_id)| run_unit(cfg, model, graph_id))
            .collect::<Result<_>>()
    })?;

    // reorder to (p, filter, graph_id, trial_id, m)
    let n_filters = cfg.filters.len();
    let mut records = Vec::new();
    let mut graphs = Vec::new();
    for p_block in results.chunks(cfg.graphs) {
        for fi in 0..n_filters {
            for (recs, _) in p_block {
                records.extend(recs[fi].iter().cloned());
            }
        }
        for (_, rows) in p_block {
            graphs.extend(rows.iter().cloned());
        }
    }
    Ok(ExperimentOutput { records, graphs })
}

/// Running mean and population variance.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Welford {
    count: usize,
    mean: f64,
    m2: f64,
    min: f64,
    max: f64,
}

impl Welford {
    pub fn push(&mut self, x: f64) {
        if self.count == 0 {
            self.min = x;
            self.max = x;
        }
        self.count += 1;
        let d = x - self.mean;
        self.mean += d / self.count as f64;
        self.m2 += d * (x - self.mean);
        self.min = self.min.min(x);
        self.max = self.max.max(x);
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    /// Divides by the count, so a single value has variance 0.
    pub fn variance(&self) -> f64 {
        if self.count == 0 {
            f64::NAN
        } else {
            self.m2 / self.count as f64
        }
    }

    pub fn min(&self) -> f64 {
        self.min
    }

    pub fn max(&self) -> f64 {
        self.max
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EigengapRow {
    pub n: usize,
    pub k: usize,
    pub p: f64,
    pub filter: String,
    pub stats: Welford,
    pub seed: u64,
}

pub const EIGENGAP_HEADER: [&str; 10] = [
    "n",
    "k",
    "p",
    "filter",
    "reps",
    "mean_delta",
    "var_delta",
    "min_delta",
    "max_delta",
    "seed",
];

impl EigengapRow {
    pub fn fields(&self) -> Vec<String> {
        vec![
            self.n.to_string(),
            self.k.to_string(),
            self.p.to_string(),
            self.filter.clone(),
            self.stats.count().to_string(),
            self.stats.mean().to_string(),
            self.stats.variance().to_string(),
            self.stats.min().to_string(),
            self.stats.max().to_string(),
            self.seed.to_string(),
        ]
    }
}

/// Mean and variance of the covariance eigengap at the centrality index over
/// `reps` Watts-Strogatz draws per `p`. Draw `r` is graph `r` of the
/// corresponding experiment.
pub fn eigengap_table(
    n: usize,
    k: usize,
    p_list: &[f64],
    reps: usize,
    filter: &FilterSpec,
    seed: u64,
) -> Result<Vec<EigengapRow>> {
    if reps == 0 {
        return Err(HarnessError::Usage("reps must be at least 1".into()));
    }
    let jobs: Vec<(usize, usize)> = (0..p_list.len())
        .flat_map(|pi| (0..reps).map(move |r| (pi, r)))
        .collect();
    let deltas = jobs
        .par_iter()
        .map(|&(pi, r)| {
            let draw = draw_graph(GraphModel::watts_strogatz(n, k, p_list[pi]), seed, r)?;
            let vals = eigvals_sym(adjacency(&draw.graph).matrix().view())?;
            Ok(centrality_position(filter, vals.view())?.1)
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(p_list
        .iter()
        .zip(deltas.chunks(reps))
        .map(|(&p, ds)| {
            let mut stats = Welford::default();
            ds.iter().for_each(|&d| stats.push(d));
            EigengapRow {
                n,
                k,
                p,
                filter: filter.to_string(),
                stats,
                seed,
            }
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfileRow {
    pub p: f64,
    pub node: usize,
    /// Position of the node on the ring, in radians.
    pub angle: f64,
    pub centrality: f64,
    /// `1/√n`, the constant profile of a regular graph.
    pub reference: f64,
    pub seed: u64,
}

impl ProfileRow {
    pub fn fields(&self) -> Vec<String> {
        vec![
            self.p.to_string(),
            self.node.to_string(),
            self.angle.to_string(),
            self.centrality.to_string(),
            self.reference.to_string(),
            self.seed.to_string(),
        ]
    }
}

pub const PROFILE_HEADER: [&str; 6] = ["p", "node", "angle", "centrality", "reference", "seed"];

/// Centrality of every node for one Watts-Strogatz draw per `p`.
pub fn localization_profile(
    n: usize,
    k: usize,
    p_list: &[f64],
    seed: u64,
) -> Result<Vec<ProfileRow>> {
    let per_p = p_list
        .par_iter()
        .map(|&p| {
            let g = PreparedGraph::new(draw_graph(GraphModel::watts_strogatz(n, k, p), seed, 0)?)?;
            let reference = 1.0 / (n as f64).sqrt();
            Ok(g.centrality
                .values()
                .iter()
                .enumerate()
                .map(|(node, &c)| ProfileRow {
                    p,
                    node,
                    angle: std::f64::consts::TAU * node as f64 / n as f64,
                    centrality: c,
                    reference,
                    seed,
                })
                .collect::<Vec<_>>())
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(per_p.into_iter().flatten().collect())
}
