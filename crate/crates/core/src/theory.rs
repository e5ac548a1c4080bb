//! Finite-sample bounds and their empirical counterparts.
//!
//! The absolute constants in the bounds are unknown; they are exposed as a
//! scale `c` (with `C0 = c · ‖C_y‖₂`) so that the bounds can be read as
//! order-of-magnitude diagnostics, or fitted once against a simulation and
//! then held fixed. Nothing here is a guarantee.
//!
//! The signal-norm radius `r` enters the deviation bound as `r / m` under the
//! square root, verbatim. Gaussian signals are unbounded, so callers
//! typically pass the largest observed squared signal norm as a stand-in.

use ndarray::ArrayView1;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::filters::{apply_filter, centrality_position, FilterSpec};
use crate::graph::{
    centrality_from_decomposition, is_connected, AdjacencyMatrix, CentralityVector, Graph,
};
use crate::seed::derive;
use crate::signals::{
    covariance_deviation, generate_signals, population_covariance, sample_covariance,
    CovarianceMatrix,
};
use crate::spectral::{eig_sym, sin_angle};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundConstants {
    /// `C0 = c · ‖C_y‖₂`.
    pub c: f64,
    /// Failure probability.
    pub eta: f64,
}

impl Default for BoundConstants {
    fn default() -> Self {
        BoundConstants { c: 1.0, eta: 0.05 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundReport {
    pub deviation_bound: f64,
    /// `2 · deviation_bound / δ`, not capped.
    pub alignment_bound: f64,
    pub sample_requirement: f64,
    pub constants: BoundConstants,
}

/// `c · ‖C_y‖ · sqrt(log(1/η) · r / m)`.
pub fn deviation_bound(cy_norm: f64, r: f64, m: usize, eta: f64, c: f64) -> Result<f64> {
    if m == 0 {
        return Err(Error::param("m", "must be at least 1"));
    }
    if !(eta > 0.0 && eta < 1.0) {
        return Err(Error::param("eta", format!("{eta} is not in (0, 1)")));
    }
    if !(r > 0.0) {
        return Err(Error::param("r", format!("{r} must be positive")));
    }
    if !(c > 0.0) {
        return Err(Error::param("c", format!("{c} must be positive")));
    }
    if !(cy_norm >= 0.0) {
        return Err(Error::param(
            "cy_norm",
            format!("{cy_norm} must be nonnegative"),
        ));
    }
    Ok(c * cy_norm * ((1.0 / eta).ln() * r / m as f64).sqrt())
}

fn raw_alignment(deviation: f64, delta: f64) -> Result<f64> {
    if !(delta > 0.0) {
        return Err(Error::ZeroEigengap);
    }
    if !(deviation >= 0.0) {
        return Err(Error::param(
            "deviation",
            format!("{deviation} must be nonnegative"),
        ));
    }
    Ok(2.0 * deviation / delta)
}

/// `2 · deviation / δ`, capped at 1 since it bounds a sine.
pub fn alignment_bound(deviation: f64, delta: f64) -> Result<f64> {
    Ok(raw_alignment(deviation, delta)?.min(1.0))
}

/// `max_i 1 / (δ² u_i²)`.
pub fn sample_requirement(u: &CentralityVector, delta: f64) -> Result<f64> {
    if !(delta > 0.0) {
        return Err(Error::ZeroEigengap);
    }
    let min_abs = u.values().iter().fold(f64::INFINITY, |m, x| m.min(x.abs()));
    if !(min_abs > 0.0) {
        return Err(Error::ZeroEntry);
    }
    Ok(1.0 / (delta * delta * min_abs * min_abs))
}

pub fn bound_report(
    cy_norm: f64,
    r: f64,
    m: usize,
    delta: f64,
    u: &CentralityVector,
    constants: BoundConstants,
) -> Result<BoundReport> {
    let deviation_bound = deviation_bound(cy_norm, r, m, constants.eta, constants.c)?;
    Ok(BoundReport {
        deviation_bound,
        alignment_bound: raw_alignment(deviation_bound, delta)?,
        sample_requirement: sample_requirement(u, delta)?,
        constants,
    })
}

/// Least-squares slope of `log y` against `log x`.
pub fn loglog_slope(xs: &[f64], ys: &[f64]) -> Result<f64> {
    if xs.len() != ys.len() {
        return Err(Error::DimensionMismatch {
            expected: xs.len(),
            got: ys.len(),
        });
    }
    if xs.len() < 2 {
        return Err(Error::param("xs", "need at least two points"));
    }
    if xs.iter().chain(ys).any(|&v| !(v > 0.0)) {
        return Err(Error::param("xs", "log-log fit needs positive values"));
    }
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let k = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / k;
    let my = ly.iter().sum::<f64>() / k;
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        return Err(Error::param("xs", "all x values are equal"));
    }
    Ok(sxy / sxx)
}

pub fn median(values: &[f64]) -> f64 {
    if values.is_empty() {
        return f64::NAN;
    }
    let mut v = values.to_vec();
    v.sort_by(|a, b| a.total_cmp(b));
    let mid = v.len() / 2;
    if v.len() % 2 == 1 {
        v[mid]
    } else {
        0.5 * (v[mid - 1] + v[mid])
    }
}

/// `sin θ` between eigenvector `index` of `cov` and the true centrality.
pub fn alignment_at(cov: &CovarianceMatrix, index: usize, u: &CentralityVector) -> Result<f64> {
    let dec = eig_sym(cov.entries.view())?;
    if index >= dec.dim() {
        return Err(Error::IndexOutOfRange {
            index,
            len: dec.dim(),
        });
    }
    Ok(sin_angle(dec.eigenvector(index), u.values()))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlignmentRow {
    pub m: usize,
    pub trial: usize,
    pub seed: u64,
    /// `sin θ` between the sample eigenvector at the centrality index and `u`.
    pub sin_theta: f64,
    /// `‖Ĉ − C_y‖₂`.
    pub deviation: f64,
    /// Largest observed squared signal norm, used as `r`.
    pub r: f64,
    /// Uncapped alignment bound evaluated with `c = 1`.
    pub unit_bound: f64,
}

#[derive(Debug, Clone)]
pub struct AlignmentCheck {
    pub rows: Vec<AlignmentRow>,
    pub centrality_index: usize,
    pub delta: f64,
    pub cy_norm: f64,
    pub eta: f64,
}

impl AlignmentCheck {
    fn grid(&self) -> Vec<usize> {
        let mut ms: Vec<usize> = self.rows.iter().map(|r| r.m).collect();
        ms.dedup();
        ms
    }

    fn medians_by_m(&self, f: impl Fn(&AlignmentRow) -> f64) -> (Vec<f64>, Vec<f64>) {
        let grid = self.grid();
        let meds = grid
            .iter()
            .map(|&m| {
                let vals: Vec<f64> = self.rows.iter().filter(|r| r.m == m).map(&f).collect();
                median(&vals)
            })
            .collect();
        (grid.iter().map(|&m| m as f64).collect(), meds)
    }

    pub fn median_deviation_by_m(&self) -> (Vec<f64>, Vec<f64>) {
        self.medians_by_m(|r| r.deviation)
    }

    pub fn median_sin_by_m(&self) -> (Vec<f64>, Vec<f64>) {
        self.medians_by_m(|r| r.sin_theta)
    }

    pub fn deviation_slope(&self) -> Result<f64> {
        let (x, y) = self.median_deviation_by_m();
        loglog_slope(&x, &y)
    }

    pub fn sin_slope(&self) -> Result<f64> {
        let (x, y) = self.median_sin_by_m();
        loglog_slope(&x, &y)
    }

    /// Smallest `c` for which the bound covers every trial at sample size `m`.
    pub fn fit_constant_at(&self, m: usize) -> Result<f64> {
        let fitted = self
            .rows
            .iter()
            .filter(|r| r.m == m)
            .map(|r| r.sin_theta / r.unit_bound)
            .fold(f64::NEG_INFINITY, f64::max);
        if fitted.is_finite() {
            Ok(fitted.max(f64::MIN_POSITIVE))
        } else {
            Err(Error::param("m", format!("no trials recorded at m = {m}")))
        }
    }

    /// Fraction of trials with `sin θ ≤ min(1, c · unit_bound)`.
    pub fn fraction_within(&self, c: f64) -> f64 {
        if self.rows.is_empty() {
            return f64::NAN;
        }
        let ok = self
            .rows
            .iter()
            .filter(|r| r.sin_theta <= (c * r.unit_bound).min(1.0))
            .count();
        ok as f64 / self.rows.len() as f64
    }
}

/// Sweep sample sizes and record how well the sample eigenvector at the
/// centrality index aligns with the true centrality.
pub fn empirical_alignment_check(
    graph: &Graph,
    filter: &FilterSpec,
    m_grid: &[usize],
    trials: usize,
    seed: u64,
    eta: f64,
) -> Result<AlignmentCheck> {
    if !is_connected(graph) {
        return Err(Error::NotConnected);
    }
    if trials == 0 || m_grid.is_empty() {
        return Err(Error::param(
            "trials",
            "need at least one trial and one sample size",
        ));
    }
    let a: AdjacencyMatrix = crate::graph::adjacency(graph);
    let h = apply_filter(filter, &a)?;
    let u = centrality_from_decomposition(&h.basis)?;
    let (index, delta) = centrality_position(filter, h.basis.eigenvalues.view())?;
    if !(delta > 0.0) {
        return Err(Error::ZeroEigengap);
    }
    let cy = population_covariance(&h);
    let cy_norm = h.spectrum.iter().fold(0.0f64, |acc, x| acc.max(x * x));

    let jobs: Vec<(usize, usize)> = m_grid
        .iter()
        .flat_map(|&m| (0..trials).map(move |t| (m, t)))
        .collect();
    let rows = jobs
        .par_iter()
        .map(|&(m, trial)| {
            let s = derive(seed, &[m as u64, trial as u64]);
            let ens = generate_signals(&h, m, s)?;
            let sample = sample_covariance(&ens);
            let dec = eig_sym(sample.entries.view())?;
            let sin_theta = sin_angle(dec.eigenvector(index), u.values());
            let deviation = covariance_deviation(&sample, &cy)?;
            let r = ens.max_squared_norm().max(f64::MIN_POSITIVE);
            let dev_bound = deviation_bound(cy_norm, r, m, eta, 1.0)?;
            Ok(AlignmentRow {
                m,
                trial,
                seed: s,
                sin_theta,
                deviation,
                r,
                unit_bound: raw_alignment(dev_bound, delta)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(AlignmentCheck {
        rows,
        centrality_index: index,
        delta,
        cy_norm,
        eta,
    })
}

/// `max_i u_i / median_i u_i`, the localization statistic used for profiles.
pub fn peak_to_median(u: ArrayView1<'_, f64>) -> f64 {
    let vals: Vec<f64> = u.iter().map(|x| x.abs()).collect();
    let peak = vals.iter().copied().fold(0.0, f64::max);
    peak / median(&vals)
}
