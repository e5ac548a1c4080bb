//! Graph filters: polynomials in `A`, or functions applied to the min-max
//! rescaled spectrum of `A`.

use std::fmt;
use std::str::FromStr;

use ndarray::{Array1, Array2, ArrayView1, ArrayView2};

use crate::error::{Error, Result};
use crate::graph::AdjacencyMatrix;
use crate::spectral::{eig_sym, eigengap_at, rescale_unit_interval, SpectralDecomposition};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SpectralFunction {
    Sqrt,
    Squared,
    Identity,
}

impl SpectralFunction {
    /// Evaluate on `x ∈ [0, 1]`; inputs are clamped into that range first.
    pub fn eval(self, x: f64) -> f64 {
        let x = x.clamp(0.0, 1.0);
        match self {
            SpectralFunction::Sqrt => x.sqrt(),
            SpectralFunction::Squared => x * x,
            SpectralFunction::Identity => x,
        }
    }

    fn name(self) -> &'static str {
        match self {
            SpectralFunction::Sqrt => "sqrt",
            SpectralFunction::Squared => "squared",
            SpectralFunction::Identity => "identity",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum FilterSpec {
    /// `H(A) = Σ_k coefficients[k] · A^k`.
    Polynomial(Vec<f64>),
    /// `f` applied to the spectrum of `A` after rescaling it onto `[0, 1]`;
    /// `highpass` uses `1 − f` instead.
    Spectral {
        function: SpectralFunction,
        highpass: bool,
    },
}

impl FilterSpec {
    pub const fn sqrt() -> Self {
        FilterSpec::Spectral {
            function: SpectralFunction::Sqrt,
            highpass: false,
        }
    }

    pub const fn squared() -> Self {
        FilterSpec::Spectral {
            function: SpectralFunction::Squared,
            highpass: false,
        }
    }

    pub const fn sqrt_highpass() -> Self {
        FilterSpec::Spectral {
            function: SpectralFunction::Sqrt,
            highpass: true,
        }
    }

    pub const fn squared_highpass() -> Self {
        FilterSpec::Spectral {
            function: SpectralFunction::Squared,
            highpass: true,
        }
    }

    /// The four filters used in the experiments.
    pub fn experiment_filters() -> [FilterSpec; 4] {
        [
            Self::sqrt(),
            Self::squared(),
            Self::sqrt_highpass(),
            Self::squared_highpass(),
        ]
    }

    fn validate(&self) -> Result<()> {
        if let FilterSpec::Polynomial(c) = self {
            if c.is_empty() {
                return Err(Error::param(
                    "filter",
                    "polynomial needs at least one coefficient",
                ));
            }
            if c.iter().any(|x| !x.is_finite()) {
                return Err(Error::NonFinite);
            }
        }
        Ok(())
    }
}

impl fmt::Display for FilterSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FilterSpec::Polynomial(c) => {
                let parts: Vec<String> = c.iter().map(|x| x.to_string()).collect();
                write!(f, "poly:{}", parts.join(","))
            }
            FilterSpec::Spectral { function, highpass } => {
                write!(
                    f,
                    "{}{}",
                    function.name(),
                    if *highpass { "-hp" } else { "" }
                )
            }
        }
    }
}

/// Grammar: `sqrt | squared | identity | <name>-hp | poly:g0,g1,...,gT`.
impl FromStr for FilterSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(rest) = s.strip_prefix("poly:") {
            let coeffs = rest
                .split(',')
                .map(|t| {
                    t.trim()
                        .parse::<f64>()
                        .map_err(|e| Error::Parse(format!("bad coefficient `{t}`: {e}")))
                })
                .collect::<Result<Vec<_>>>()?;
            let spec = FilterSpec::Polynomial(coeffs);
            spec.validate()?;
            return Ok(spec);
        }
        let (name, highpass) = match s.strip_suffix("-hp") {
            Some(base) => (base, true),
            None => (s, false),
        };
        let function = match name {
            "sqrt" => SpectralFunction::Sqrt,
            "squared" => SpectralFunction::Squared,
            "identity" => SpectralFunction::Identity,
            _ => return Err(Error::Parse(format!("unknown filter `{s}`"))),
        };
        Ok(FilterSpec::Spectral { function, highpass })
    }
}

/// `H(A)` together with the eigenbasis of `A` it was built in.
#[derive(Debug, Clone)]
pub struct FilterMatrix {
    pub entries: Array2<f64>,
    /// `H(λ_k)` for each eigenvalue of `A`, in `A`'s ascending order.
    pub spectrum: Array1<f64>,
    pub basis: SpectralDecomposition,
}

impl FilterMatrix {
    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    /// A filter matrix given directly by its eigenpairs.
    pub fn from_parts(basis: SpectralDecomposition, spectrum: Array1<f64>) -> Result<Self> {
        if spectrum.len() != basis.dim() {
            return Err(Error::DimensionMismatch {
                expected: basis.dim(),
                got: spectrum.len(),
            });
        }
        let entries = basis.reconstruct_with(spectrum.as_slice().expect("contiguous"));
        Ok(FilterMatrix {
            entries,
            spectrum,
            basis,
        })
    }
}

/// Horner evaluation of a scalar polynomial.
fn horner(coefficients: &[f64], x: f64) -> f64 {
    coefficients.iter().rev().fold(0.0, |acc, &c| acc * x + c)
}

/// Apply the filter to each eigenvalue of `A` (given in any order).
pub fn filter_spectrum(spec: &FilterSpec, eigenvalues: ArrayView1<'_, f64>) -> Result<Array1<f64>> {
    spec.validate()?;
    match spec {
        FilterSpec::Polynomial(c) => Ok(eigenvalues.mapv(|x| horner(c, x))),
        FilterSpec::Spectral { function, highpass } => {
            let (scaled, _) = rescale_unit_interval(eigenvalues)?;
            Ok(scaled.mapv(|x| {
                let y = function.eval(x);
                if *highpass {
                    (1.0 - y).max(0.0)
                } else {
                    y
                }
            }))
        }
    }
}

/// `H(A)` for a graph, computed in the eigenbasis of `A`.
pub fn apply_filter(spec: &FilterSpec, a: &AdjacencyMatrix) -> Result<FilterMatrix> {
    let dec = eig_sym(a.matrix().view())?;
    apply_filter_with(spec, dec)
}

/// Like [`apply_filter`] but reusing a decomposition of `A`.
pub fn apply_filter_with(spec: &FilterSpec, dec: SpectralDecomposition) -> Result<FilterMatrix> {
    let spectrum = filter_spectrum(spec, dec.eigenvalues.view())?;
    FilterMatrix::from_parts(dec, spectrum)
}

/// Direct matrix evaluation `Σ γ_k A^k` by Horner's rule.
pub fn polynomial_matrix(coefficients: &[f64], a: ArrayView2<'_, f64>) -> Array2<f64> {
    let n = a.nrows();
    let eye = Array2::<f64>::eye(n);
    coefficients
        .iter()
        .rev()
        .fold(Array2::zeros((n, n)), |acc: Array2<f64>, &c| {
            acc.dot(&a) + &eye * c
        })
}

/// Position of the centrality eigenvector in the ascending spectrum of
/// `C_y = H(A)^2`, given the (ascending) spectrum of `A`.
pub fn centrality_index_in_cy(
    spec: &FilterSpec,
    eigenvalues: ArrayView1<'_, f64>,
) -> Result<usize> {
    Ok(centrality_position(spec, eigenvalues)?.0)
}

/// Index of the centrality eigenvector in `C_y`'s ascending spectrum and the
/// eigengap there.
pub fn centrality_position(
    spec: &FilterSpec,
    eigenvalues: ArrayView1<'_, f64>,
) -> Result<(usize, f64)> {
    let n = eigenvalues.len();
    if n == 0 {
        return Err(Error::ZeroVector);
    }
    if n >= 2 {
        let gap = eigenvalues[n - 1] - eigenvalues[n - 2];
        if gap < 1e-12 {
            return Err(Error::DegenerateLeadingEigenvalue { gap });
        }
    }
    let h = filter_spectrum(spec, eigenvalues)?;
    let power = h.mapv(|x| x * x);
    let target = power[n - 1];
    let mut rank = 0;
    for &v in power.iter().take(n - 1) {
        if (v - target).abs() <= 1e-12 {
            return Err(Error::AmbiguousIndex {
                gap: (v - target).abs(),
            });
        }
        if v < target {
            rank += 1;
        }
    }
    if n == 1 {
        return Ok((0, 0.0));
    }
    let mut sorted = power.to_vec();
    sorted.sort_by(|a, b| a.total_cmp(b));
    let delta = eigengap_at(ArrayView1::from(&sorted), rank)?;
    Ok((rank, delta))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{adjacency, Graph};
    use ndarray::array;

    fn max_abs_diff(a: &Array2<f64>, b: &Array2<f64>) -> f64 {
        (a - b).iter().fold(0.0f64, |m, x| m.max(x.abs()))
    }

    fn p3() -> AdjacencyMatrix {
        adjacency(&Graph::path(3).unwrap())
    }

    #[test]
    fn parse_grammar() {
        assert_eq!("sqrt".parse::<FilterSpec>().unwrap(), FilterSpec::sqrt());
        assert_eq!(
            "squared-hp".parse::<FilterSpec>().unwrap(),
            FilterSpec::squared_highpass()
        );
        assert_eq!(
            "poly:1,0.5,-2".parse::<FilterSpec>().unwrap(),
            FilterSpec::Polynomial(vec![1.0, 0.5, -2.0])
        );
        assert!("cubic".parse::<FilterSpec>().is_err());
        assert!("poly:".parse::<FilterSpec>().is_err());
        assert!("poly:1,inf".parse::<FilterSpec>().is_err());
        for f in FilterSpec::experiment_filters() {
            assert_eq!(f.to_string().parse::<FilterSpec>().unwrap(), f);
        }
    }

    #[test]
    fn constant_polynomial_is_identity() {
        let h = apply_filter(&FilterSpec::Polynomial(vec![1.0]), &p3()).unwrap();
        assert!(max_abs_diff(&h.entries, &Array2::eye(3)) < 1e-14);
    }

    #[test]
    fn linear_polynomial_is_adjacency() {
        let a = p3();
        let h = apply_filter(&FilterSpec::Polynomial(vec![0.0, 1.0]), &a).unwrap();
        assert!(max_abs_diff(&h.entries, a.matrix()) < 1e-14);
    }

    #[test]
    fn sqrt_on_path() {
        let h = apply_filter(&FilterSpec::sqrt(), &p3()).unwrap();
        let want = [0.0, 0.5f64.sqrt(), 1.0];
        for (got, want) in h.spectrum.iter().zip(want) {
            assert!((got - want).abs() < 1e-14);
        }
    }

    #[test]
    fn spectrum_examples() {
        let v = array![0.0, 0.25, 1.0];
        let out = filter_spectrum(&FilterSpec::sqrt(), v.view()).unwrap();
        assert_eq!(out.to_vec(), vec![0.0, 0.5, 1.0]);
        let out = filter_spectrum(&FilterSpec::squared_highpass(), v.view()).unwrap();
        assert_eq!(out[2], 0.0);
        let id = FilterSpec::Spectral {
            function: SpectralFunction::Identity,
            highpass: false,
        };
        let v = array![2.0, 3.0, 6.0];
        assert_eq!(
            filter_spectrum(&id, v.view()).unwrap().to_vec(),
            vec![0.0, 0.25, 1.0]
        );
    }

    #[test]
    fn index_examples() {
        let id = FilterSpec::Spectral {
            function: SpectralFunction::Identity,
            highpass: false,
        };
        let ev = array![-2.0, -0.5, 0.3, 1.0, 4.0];
        assert_eq!(centrality_index_in_cy(&id, ev.view()).unwrap(), 4);
        assert_eq!(
            centrality_index_in_cy(&FilterSpec::sqrt_highpass(), ev.view()).unwrap(),
            0
        );

        let s = 2f64.sqrt();
        let p3 = array![-s, 0.0, s];
        let (j, delta) = centrality_position(&FilterSpec::squared(), p3.view()).unwrap();
        assert_eq!(j, 2);
        assert!((delta - (1.0 - 0.0625)).abs() < 1e-14);
    }

    #[test]
    fn ambiguous_index() {
        // H(λ) = λ on a symmetric spectrum: (−√2)² ties (√2)²
        let s = 2f64.sqrt();
        let ev = array![-s, 0.0, s];
        assert!(matches!(
            centrality_index_in_cy(&FilterSpec::Polynomial(vec![0.0, 1.0]), ev.view()),
            Err(Error::AmbiguousIndex { .. })
        ));
    }

    #[test]
    fn degenerate_spectrum_for_spectral_kind() {
        let a = adjacency(&Graph::empty(3).unwrap());
        assert!(matches!(
            apply_filter(&FilterSpec::sqrt(), &a),
            Err(Error::DegenerateSpectrum { .. })
        ));
    }
}
