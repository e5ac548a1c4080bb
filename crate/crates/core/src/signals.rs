//! Synthetic graph signals `y = H(A) w` and their covariances.
//!
//! Signals are produced in fixed-size blocks. Block `b` draws its white noise
//! from substream `b` of the ensemble seed, so the output is the same whether
//! blocks run on one thread or many.

use std::fmt::Write as _;

use ndarray::{Array2, ArrayView2, Axis};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::filters::FilterMatrix;
use crate::seed::substream;
use crate::spectral::spectral_norm_sym;

/// Number of signals generated per substream.
pub const SIGNAL_BLOCK: usize = 256;

/// Zero-mean, unit-variance i.i.d. sampler.
pub trait WhiteNoise: Sync {
    fn fill(&self, rng: &mut ChaCha8Rng, out: &mut [f64]);
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Gaussian;

impl WhiteNoise for Gaussian {
    fn fill(&self, rng: &mut ChaCha8Rng, out: &mut [f64]) {
        for x in out {
            *x = rng.sample(StandardNormal);
        }
    }
}

/// Uniform ±1 entries.
#[derive(Debug, Clone, Copy, Default)]
pub struct Rademacher;

impl WhiteNoise for Rademacher {
    fn fill(&self, rng: &mut ChaCha8Rng, out: &mut [f64]) {
        for x in out {
            *x = if rng.random::<bool>() { 1.0 } else { -1.0 };
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Provenance {
    pub seed: u64,
    pub filter: Option<String>,
    pub graph_hash: Option<u64>,
}

/// `m` observed signals, one per row.
#[derive(Debug, Clone)]
pub struct SignalEnsemble {
    pub signals: Array2<f64>,
    pub provenance: Provenance,
}

impl SignalEnsemble {
    pub fn new(signals: Array2<f64>, provenance: Provenance) -> Result<Self> {
        if signals.nrows() == 0 {
            return Err(Error::param("m", "at least one signal is required"));
        }
        if signals.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(SignalEnsemble {
            signals,
            provenance,
        })
    }

    pub fn sample_count(&self) -> usize {
        self.signals.nrows()
    }

    pub fn dim(&self) -> usize {
        self.signals.ncols()
    }

    /// Largest squared norm among the signals.
    pub fn max_squared_norm(&self) -> f64 {
        self.signals
            .axis_iter(Axis(0))
            .map(|row| row.dot(&row))
            .fold(0.0, f64::max)
    }

    /// CSV export: `# n=<N> m=<M> seed=<S> filter=<spec>` then one row per signal.
    pub fn to_csv(&self) -> String {
        let mut out = format!(
            "# n={} m={} seed={} filter={}\n",
            self.dim(),
            self.sample_count(),
            self.provenance.seed,
            self.provenance.filter.as_deref().unwrap_or("unknown")
        );
        for row in self.signals.axis_iter(Axis(0)) {
            let mut first = true;
            for x in row {
                if !first {
                    out.push(',');
                }
                first = false;
                let _ = write!(out, "{x:e}");
            }
            out.push('\n');
        }
        out
    }
}

/// `m` Gaussian-driven signals through the filter.
pub fn generate_signals(h: &FilterMatrix, m: usize, seed: u64) -> Result<SignalEnsemble> {
    generate_signals_with(h.entries.view(), m, seed, &Gaussian)
}

/// Signals `y = H w` for any symmetric `H` and white-noise sampler.
pub fn generate_signals_with<N: WhiteNoise>(
    h: ArrayView2<'_, f64>,
    m: usize,
    seed: u64,
    noise: &N,
) -> Result<SignalEnsemble> {
    if m == 0 {
        return Err(Error::param("m", "at least one signal is required"));
    }
    let n = h.nrows();
    if h.ncols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: h.ncols(),
        });
    }
    let blocks = m.div_ceil(SIGNAL_BLOCK);
    let parts: Vec<Array2<f64>> = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let rows = SIGNAL_BLOCK.min(m - b * SIGNAL_BLOCK);
            let mut rng = substream(seed, b as u64);
            let mut w = Array2::<f64>::zeros((rows, n));
            noise.fill(&mut rng, w.as_slice_mut().expect("standard layout"));
            // rows are signals: Y = W Hᵀ
            w.dot(&h.t())
        })
        .collect();
    let views: Vec<_> = parts.iter().map(|p| p.view()).collect();
    let signals = ndarray::concatenate(Axis(0), &views).expect("blocks share column count");
    SignalEnsemble::new(
        signals,
        Provenance {
            seed,
            ..Provenance::default()
        },
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CovarianceSource {
    Population,
    Sample(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceMatrix {
    pub entries: Array2<f64>,
    pub source: CovarianceSource,
}

impl CovarianceMatrix {
    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    /// Wrap an arbitrary symmetric matrix (used for tests and external data).
    pub fn from_matrix(entries: Array2<f64>, source: CovarianceSource) -> Result<Self> {
        if entries.nrows() != entries.ncols() {
            return Err(Error::DimensionMismatch {
                expected: entries.nrows(),
                got: entries.ncols(),
            });
        }
        if entries.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(CovarianceMatrix { entries, source })
    }

    pub fn scaled(&self, c: f64) -> Self {
        CovarianceMatrix {
            entries: &self.entries * c,
            source: self.source,
        }
    }
}

/// `C_y = H(A)^2`, formed from the squared filter spectrum.
pub fn population_covariance(h: &FilterMatrix) -> CovarianceMatrix {
    let squared: Vec<f64> = h.spectrum.iter().map(|x| x * x).collect();
    CovarianceMatrix {
        entries: h.basis.reconstruct_with(&squared),
        source: CovarianceSource::Population,
    }
}

/// Mean-centred empirical covariance with `1/m` normalization.
pub fn sample_covariance(e: &SignalEnsemble) -> CovarianceMatrix {
    let m = e.sample_count();
    let mean = e.signals.mean_axis(Axis(0)).expect("m >= 1");
    let centered = &e.signals - &mean;
    let mut c = centered.t().dot(&centered) / m as f64;
    let n = c.nrows();
    for i in 0..n {
        for j in (i + 1)..n {
            let avg = 0.5 * (c[[i, j]] + c[[j, i]]);
            c[[i, j]] = avg;
            c[[j, i]] = avg;
        }
    }
    CovarianceMatrix {
        entries: c,
        source: CovarianceSource::Sample(m),
    }
}

/// Spectral-norm distance between two covariance matrices.
pub fn covariance_deviation(
    sample: &CovarianceMatrix,
    population: &CovarianceMatrix,
) -> Result<f64> {
    if sample.dim() != population.dim() {
        return Err(Error::DimensionMismatch {
            expected: population.dim(),
            got: sample.dim(),
        });
    }
    let diff = &sample.entries - &population.entries;
    spectral_norm_sym(diff.view())
}
