//! Cone geometry and eigenvector selection.
//!
//! The centrality cone is the union of the nonnegative and nonpositive
//! orthants. For a unit vector `v` the projection onto it is whichever of
//! `max(v, 0)` and `min(v, 0)` is larger in norm, and the cosine of the angle
//! between `v` and its projection is exactly that larger norm. Selection scores
//! every eigenvector of a covariance matrix this way and keeps the best.

use ndarray::{Array1, ArrayView1};

use crate::error::{Error, Result};
use crate::graph::CentralityVector;
use crate::signals::CovarianceMatrix;
use crate::spectral::{canonicalize_sign, eig_sym, eigengap_at, SpectralDecomposition};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConeBranch {
    Positive,
    Negative,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConeProjection {
    pub input: Array1<f64>,
    pub projected: Array1<f64>,
    /// Cosine of the angle between `input` and `projected`.
    pub score: f64,
    pub branch: ConeBranch,
}

fn orthant_norms(v: ArrayView1<'_, f64>) -> (f64, f64) {
    let (pos, neg) = v.iter().fold((0.0, 0.0), |(p, q), &x| {
        if x > 0.0 {
            (p + x * x, q)
        } else {
            (p, q + x * x)
        }
    });
    (pos.sqrt(), neg.sqrt())
}

pub fn project_to_cone(v: ArrayView1<'_, f64>) -> Result<ConeProjection> {
    let norm = v.dot(&v).sqrt();
    if !(norm >= 1e-12) {
        return Err(Error::ZeroVector);
    }
    let (pos, neg) = orthant_norms(v);
    let branch = if pos >= neg {
        ConeBranch::Positive
    } else {
        ConeBranch::Negative
    };
    let projected = match branch {
        ConeBranch::Positive => v.mapv(|x| x.max(0.0)),
        ConeBranch::Negative => v.mapv(|x| x.min(0.0)),
    };
    Ok(ConeProjection {
        input: v.to_owned(),
        projected,
        score: pos.max(neg) / norm,
        branch,
    })
}

/// `cos θ(v, Proj_C(v))`, i.e. `max(‖v₊‖, ‖v₋‖) / ‖v‖`.
pub fn cone_score(v: ArrayView1<'_, f64>) -> Result<f64> {
    let norm = v.dot(&v).sqrt();
    if !(norm >= 1e-12) {
        return Err(Error::ZeroVector);
    }
    let (pos, neg) = orthant_norms(v);
    Ok(pos.max(neg) / norm)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruthDiagnostics {
    /// Eigenvector with the largest `|⟨v̂_i, u⟩|`.
    pub optimal_index: usize,
    /// `|⟨û, u⟩|`.
    pub cos_true: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SelectionDiagnostics {
    /// Eigengap of the covariance at the chosen index.
    pub eigengap: f64,
    pub truth: Option<TruthDiagnostics>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SelectionResult {
    pub chosen_index: usize,
    pub scores: Array1<f64>,
    /// Chosen eigenvector, sign-canonicalized.
    pub estimate: Array1<f64>,
    pub diagnostics: SelectionDiagnostics,
}

impl SelectionResult {
    pub fn chosen_score(&self) -> f64 {
        self.scores[self.chosen_index]
    }

    /// Fill in the ground-truth diagnostics.
    pub fn attach_truth(
        &mut self,
        dec: &SpectralDecomposition,
        u: &CentralityVector,
    ) -> Result<()> {
        let optimal_index = optimal_index_in(dec, u)?;
        let cos_true = self.estimate.dot(&u.values()).abs().min(1.0);
        self.diagnostics.truth = Some(TruthDiagnostics {
            optimal_index,
            cos_true,
        });
        Ok(())
    }

    pub fn is_correct(&self) -> Option<bool> {
        self.diagnostics
            .truth
            .map(|t| selection_correct(self, t.optimal_index))
    }
}

/// Run the selection on a covariance matrix.
pub fn select_centrality(cov: &CovarianceMatrix) -> Result<SelectionResult> {
    let dec = eig_sym(cov.entries.view())?;
    select_from_decomposition(&dec)
}

/// Selection on an already decomposed covariance matrix.
pub fn select_from_decomposition(dec: &SpectralDecomposition) -> Result<SelectionResult> {
    let n = dec.dim();
    if n == 0 {
        return Err(Error::ZeroVector);
    }
    let scores = dec
        .eigenvectors
        .columns()
        .into_iter()
        .map(cone_score)
        .collect::<Result<Array1<f64>>>()?;
    // strict comparison keeps the lowest index on ties
    let mut chosen_index = 0;
    for (i, &s) in scores.iter().enumerate().skip(1) {
        if s > scores[chosen_index] {
            chosen_index = i;
        }
    }
    let mut estimate = dec.eigenvector(chosen_index).to_owned();
    canonicalize_sign(estimate.view_mut());
    let eigengap = if n >= 2 {
        eigengap_at(dec.eigenvalues.view(), chosen_index)?
    } else {
        0.0
    };
    Ok(SelectionResult {
        chosen_index,
        scores,
        estimate,
        diagnostics: SelectionDiagnostics {
            eigengap,
            truth: None,
        },
    })
}

/// Index of the covariance eigenvector best aligned with the true centrality.
pub fn oracle_optimal_index(cov: &CovarianceMatrix, u: &CentralityVector) -> Result<usize> {
    let dec = eig_sym(cov.entries.view())?;
    optimal_index_in(&dec, u)
}

pub fn optimal_index_in(dec: &SpectralDecomposition, u: &CentralityVector) -> Result<usize> {
    if u.len() != dec.dim() {
        return Err(Error::DimensionMismatch {
            expected: dec.dim(),
            got: u.len(),
        });
    }
    let uv = u.values();
    let mut best = 0;
    let mut best_val = f64::NEG_INFINITY;
    for (i, col) in dec.eigenvectors.columns().into_iter().enumerate() {
        let val = col.dot(&uv).abs();
        if val > best_val {
            best_val = val;
            best = i;
        }
    }
    Ok(best)
}

pub fn selection_correct(result: &SelectionResult, oracle_index: usize) -> bool {
    result.chosen_index == oracle_index
}
