//! Dense symmetric eigendecomposition.
//!
//! The solver is the classic two-phase scheme: Householder reduction to
//! tridiagonal form followed by the implicit QL iteration with Wilkinson-style
//! shifts. Eigenvalues are returned in ascending order and every eigenvector
//! column is sign-canonicalized with [`canonicalize_sign`], so repeated calls on
//! identical input bits give identical output bits.

use ndarray::{Array1, Array2, ArrayView1, ArrayView2, ArrayViewMut1, Axis};

use crate::error::{Error, Result};

/// Eigenvalues (ascending) and orthonormal eigenvectors (as columns).
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralDecomposition {
    pub eigenvalues: Array1<f64>,
    pub eigenvectors: Array2<f64>,
}

impl SpectralDecomposition {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvector(&self, i: usize) -> ArrayView1<'_, f64> {
        self.eigenvectors.column(i)
    }

    /// `Q diag(values) Q^T` with this decomposition's eigenvectors.
    pub fn reconstruct_with(&self, values: &[f64]) -> Array2<f64> {
        let q = &self.eigenvectors;
        let mut scaled = q.clone();
        for (mut col, &v) in scaled.axis_iter_mut(Axis(1)).zip(values) {
            col *= v;
        }
        let mut out = scaled.dot(&q.t());
        symmetrize_in_place(&mut out);
        out
    }

    pub fn reconstruct(&self) -> Array2<f64> {
        self.reconstruct_with(self.eigenvalues.as_slice().expect("contiguous"))
    }
}

/// Flip `v` so that its entries sum to a nonnegative value.
///
/// When the sum vanishes (relative to the vector's scale) the first entry of
/// maximal magnitude is made positive instead.
pub fn canonicalize_sign(mut v: ArrayViewMut1<'_, f64>) {
    let sum: f64 = v.sum();
    let max_abs = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let scale = v
        .iter()
        .map(|x| x.abs())
        .sum::<f64>()
        .max(f64::MIN_POSITIVE);
    let flip = if sum.abs() > 1e-12 * scale {
        sum < 0.0
    } else {
        // first entry whose magnitude is max up to rounding
        let pivot = v
            .iter()
            .find(|x| x.abs() >= max_abs * (1.0 - 1e-12))
            .copied()
            .unwrap_or(0.0);
        pivot < 0.0
    };
    if flip {
        v.mapv_inplace(|x| -x);
    }
}

fn symmetrize_in_place(m: &mut Array2<f64>) {
    let n = m.nrows();
    for i in 0..n {
        for j in (i + 1)..n {
            let avg = 0.5 * (m[[i, j]] + m[[j, i]]);
            m[[i, j]] = avg;
            m[[j, i]] = avg;
        }
    }
}

fn check_square(m: &ArrayView2<'_, f64>) -> Result<usize> {
    let (r, c) = m.dim();
    if r != c {
        return Err(Error::DimensionMismatch {
            expected: r,
            got: c,
        });
    }
    if m.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite);
    }
    Ok(r)
}

/// Row-major copy of `(M + M^T) / 2`.
fn symmetrized_rows(m: &ArrayView2<'_, f64>, n: usize) -> Vec<f64> {
    let mut a = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            a[i * n + j] = 0.5 * (m[[i, j]] + m[[j, i]]);
        }
    }
    a
}

/// Full eigendecomposition of a real symmetric matrix.
///
/// The input is symmetrized as `(M + M^T)/2` first.
pub fn eig_sym(m: ArrayView2<'_, f64>) -> Result<SpectralDecomposition> {
    let n = check_square(&m)?;
    if n == 0 {
        return Ok(SpectralDecomposition {
            eigenvalues: Array1::zeros(0),
            eigenvectors: Array2::zeros((0, 0)),
        });
    }
    let mut v = symmetrized_rows(&m, n);
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    tridiagonalize(&mut v, &mut d, &mut e, n, true);
    // `v` is column-major, so each eigenvector column is a contiguous row of
    // the buffer and every QL rotation touches two contiguous slices.
    let mut basis_t = v;
    tridiagonal_ql(&mut d, &mut e, Some(&mut basis_t), n)?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| d[a].total_cmp(&d[b]).then(a.cmp(&b)));

    let eigenvalues = Array1::from_iter(order.iter().map(|&i| d[i]));
    let mut eigenvectors = Array2::zeros((n, n));
    for (col, &src) in order.iter().enumerate() {
        let row = &basis_t[src * n..(src + 1) * n];
        for k in 0..n {
            eigenvectors[[k, col]] = row[k];
        }
    }
    for col in eigenvectors.axis_iter_mut(Axis(1)) {
        canonicalize_sign(col);
    }
    Ok(SpectralDecomposition {
        eigenvalues,
        eigenvectors,
    })
}

/// Eigenvalues only (ascending). Skips all eigenvector accumulation.
pub fn eigvals_sym(m: ArrayView2<'_, f64>) -> Result<Array1<f64>> {
    let n = check_square(&m)?;
    if n == 0 {
        return Ok(Array1::zeros(0));
    }
    let mut v = symmetrized_rows(&m, n);
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    tridiagonalize(&mut v, &mut d, &mut e, n, false);
    tridiagonal_ql(&mut d, &mut e, None, n)?;
    d.sort_by(|a, b| a.total_cmp(b));
    Ok(Array1::from(d))
}

/// Householder reduction of the symmetric matrix in `v`.
///
/// `v` is addressed column-major (the input is symmetric, so either layout
/// reads the same matrix); the inner loops then run down columns, which are
/// contiguous. On return `d` holds the diagonal and `e[1..]` the subdiagonal
/// of the tridiagonal form. With `accumulate`, `v` holds the orthogonal
/// transform.
fn tridiagonalize(v: &mut [f64], d: &mut [f64], e: &mut [f64], n: usize, accumulate: bool) {
    let at = |i: usize, j: usize| j * n + i;
    for j in 0..n {
        d[j] = v[at(n - 1, j)];
    }

    for i in (1..n).rev() {
        let mut scale = 0.0;
        let mut h = 0.0;
        scale += d[..i].iter().map(|x| x.abs()).sum::<f64>();
        if scale == 0.0 {
            e[i] = d[i - 1];
            for j in 0..i {
                d[j] = v[at(i - 1, j)];
                v[at(i, j)] = 0.0;
                v[at(j, i)] = 0.0;
            }
        } else {
            for x in &mut d[..i] {
                *x /= scale;
                h += *x * *x;
            }
            let mut f = d[i - 1];
            let mut g = h.sqrt();
            if f > 0.0 {
                g = -g;
            }
            e[i] = scale * g;
            h -= f * g;
            d[i - 1] = f - g;
            for ej in e.iter_mut().take(i) {
                *ej = 0.0;
            }

            for j in 0..i {
                f = d[j];
                v[at(j, i)] = f;
                g = e[j] + v[at(j, j)] * f;
                for k in (j + 1)..i {
                    let vkj = v[at(k, j)];
                    g += vkj * d[k];
                    e[k] += vkj * f;
                }
                e[j] = g;
            }
            f = 0.0;
            for j in 0..i {
                e[j] /= h;
                f += e[j] * d[j];
            }
            let hh = f / (h + h);
            for j in 0..i {
                e[j] -= hh * d[j];
            }
            for j in 0..i {
                f = d[j];
                g = e[j];
                for k in j..i {
                    v[at(k, j)] -= f * e[k] + g * d[k];
                }
                d[j] = v[at(i - 1, j)];
                v[at(i, j)] = 0.0;
            }
        }
        d[i] = h;
    }

    if !accumulate {
        for j in 0..n {
            d[j] = v[at(j, j)];
        }
        e[0] = 0.0;
        return;
    }

    for i in 0..n - 1 {
        v[at(n - 1, i)] = v[at(i, i)];
        v[at(i, i)] = 1.0;
        let h = d[i + 1];
        if h != 0.0 {
            for k in 0..=i {
                d[k] = v[at(k, i + 1)] / h;
            }
            for j in 0..=i {
                let mut g = 0.0;
                for k in 0..=i {
                    g += v[at(k, i + 1)] * v[at(k, j)];
                }
                for k in 0..=i {
                    v[at(k, j)] -= g * d[k];
                }
            }
        }
        for k in 0..=i {
            v[at(k, i + 1)] = 0.0;
        }
    }
    for j in 0..n {
        d[j] = v[at(n - 1, j)];
        v[at(n - 1, j)] = 0.0;
    }
    v[at(n - 1, n - 1)] = 1.0;
    e[0] = 0.0;
}

/// Implicit QL on the tridiagonal matrix `(d, e)`.
///
/// `basis_t`, when given, holds the transposed basis (row `i` is eigenvector
/// `i`) and receives every rotation.
fn tridiagonal_ql(
    d: &mut [f64],
    e: &mut [f64],
    mut basis_t: Option<&mut Vec<f64>>,
    n: usize,
) -> Result<()> {
    const MAX_SWEEPS_PER_VALUE: usize = 64;
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;

    let mut f = 0.0;
    let mut tst1: f64 = 0.0;
    let eps = f64::EPSILON;
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n {
            if e[m].abs() <= eps * tst1 {
                break;
            }
            m += 1;
        }
        // e[n-1] == 0 guarantees m < n.
        if m > l {
            let mut sweeps = 0;
            loop {
                sweeps += 1;
                if sweeps > MAX_SWEEPS_PER_VALUE {
                    return Err(Error::NoConvergence);
                }
                let mut g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = p.hypot(1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for di in d.iter_mut().take(n).skip(l + 2) {
                    *di -= h;
                }
                f += h;

                p = d[m];
                let mut c = 1.0;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = 0.0;
                let mut s2 = 0.0;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    g = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);

                    if let Some(z) = basis_t.as_deref_mut() {
                        let (lo, hi) = z.split_at_mut((i + 1) * n);
                        let row_i = &mut lo[i * n..];
                        let row_next = &mut hi[..n];
                        for (a, b) in row_i.iter_mut().zip(row_next.iter_mut()) {
                            let hb = *b;
                            *b = s * *a + c * hb;
                            *a = c * *a - s * hb;
                        }
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }
    Ok(())
}

/// `min(λ_j − λ_{j−1}, λ_{j+1} − λ_j)` on an ascending spectrum; one-sided at
/// either end.
pub fn eigengap_at(eigenvalues: ArrayView1<'_, f64>, j: usize) -> Result<f64> {
    let n = eigenvalues.len();
    if n < 2 {
        return Err(Error::SingleEigenvalue);
    }
    if j >= n {
        return Err(Error::IndexOutOfRange { index: j, len: n });
    }
    let below = (j > 0).then(|| eigenvalues[j] - eigenvalues[j - 1]);
    let above = (j + 1 < n).then(|| eigenvalues[j + 1] - eigenvalues[j]);
    let gap = match (below, above) {
        (Some(a), Some(b)) => a.min(b),
        (Some(a), None) => a,
        (None, Some(b)) => b,
        (None, None) => unreachable!(),
    };
    Ok(gap.max(0.0))
}

/// Affine map `λ ↦ (λ − offset) · scale` sending `[min, max]` onto `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitIntervalMap {
    pub offset: f64,
    pub scale: f64,
}

impl UnitIntervalMap {
    pub fn apply(&self, x: f64) -> f64 {
        (x - self.offset) * self.scale
    }
}

/// Min-max rescale of a spectrum onto `[0, 1]`.
pub fn rescale_unit_interval(
    eigenvalues: ArrayView1<'_, f64>,
) -> Result<(Array1<f64>, UnitIntervalMap)> {
    if eigenvalues.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite);
    }
    let lo = eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = eigenvalues
        .iter()
        .copied()
        .fold(f64::NEG_INFINITY, f64::max);
    let width = hi - lo;
    if !(width >= 1e-12) {
        return Err(Error::DegenerateSpectrum {
            width: if width.is_finite() { width } else { 0.0 },
        });
    }
    let map = UnitIntervalMap {
        offset: lo,
        scale: 1.0 / width,
    };
    Ok((eigenvalues.mapv(|x| map.apply(x)), map))
}

/// Sine of the angle between two unit vectors, insensitive to sign.
///
/// Evaluated as `‖a − b‖·‖a + b‖ / 2`, which equals `sqrt(1 − ⟨a,b⟩²)` for
/// unit vectors but keeps full relative precision for nearly parallel inputs.
pub fn sin_angle(a: ArrayView1<'_, f64>, b: ArrayView1<'_, f64>) -> f64 {
    let (mut minus, mut plus) = (0.0, 0.0);
    for (x, y) in a.iter().zip(b.iter()) {
        minus += (x - y) * (x - y);
        plus += (x + y) * (x + y);
    }
    (0.5 * (minus * plus).sqrt()).clamp(0.0, 1.0)
}

/// Largest absolute eigenvalue of a symmetric matrix (its spectral norm).
pub fn spectral_norm_sym(m: ArrayView2<'_, f64>) -> Result<f64> {
    let vals = eigvals_sym(m)?;
    Ok(vals.iter().fold(0.0f64, |acc, x| acc.max(x.abs())))
}
