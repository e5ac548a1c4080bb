//! Blind estimation of eigenvector centrality from graph signals.
//!
//! Observed signals are modelled as white noise pushed through an unknown
//! graph filter `H(A)`. Because the signal covariance `H(A)^2` shares its
//! eigenvectors with the adjacency matrix, the centrality vector is one of
//! the covariance eigenvectors; [`selection::select_centrality`] picks the
//! one closest to the cone of same-signed vectors.
//!
//! Modules are layered bottom-up:
//!
//! * [`graph`]: graphs, random models, adjacency and ground-truth centrality.
//! * [`spectral`]: dense symmetric eigendecomposition and eigengaps.
//! * [`filters`]: polynomial and spectral graph filters.
//! * [`signals`]: signal synthesis and covariance estimation.
//! * [`selection`]: cone projection and the selection algorithm.
//! * [`theory`]: concentration/perturbation bounds and empirical checks.
//! * [`seed`]: counter-based seed derivation shared by everything random.

// `!(x > t)` guards are written that way on purpose: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod filters;
pub mod graph;
pub mod seed;
pub mod selection;
pub mod signals;
pub mod spectral;
pub mod theory;

pub use error::{Error, Result};
pub use filters::{FilterMatrix, FilterSpec, SpectralFunction};
pub use graph::{AdjacencyMatrix, CentralityVector, Graph};
pub use selection::{select_centrality, ConeBranch, ConeProjection, SelectionResult};
pub use signals::{CovarianceMatrix, CovarianceSource, SignalEnsemble};
pub use spectral::SpectralDecomposition;
