//! Symmetric eigensolvers: implicit-shift QL for tridiagonal blocks and a
//! dense fallback for the many-excitation sectors.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};

/// Eigensystem of a real symmetric block.
///
/// Eigenvalues are ascending. Eigenvectors are the columns of `eigenvectors`,
/// each normalized and signed so that its largest-magnitude component is
/// positive (first such index on ties).
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    eigenvalues: Vec<f64>,
    eigenvectors: DMatrix<f64>,
}

impl SpectralDecomposition {
    pub(crate) fn from_unsorted(values: Vec<f64>, mut vectors: DMatrix<f64>) -> Self {
        let n = values.len();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));

        let eigenvalues = order.iter().map(|&i| values[i]).collect();
        let mut sorted = DMatrix::zeros(n, n);
        for (dst, &src) in order.iter().enumerate() {
            sorted.set_column(dst, &vectors.column(src));
        }
        vectors = sorted;

        for mut col in vectors.column_iter_mut() {
            let mut best = 0;
            for (k, x) in col.iter().enumerate() {
                if x.abs() > col[best].abs() {
                    best = k;
                }
            }
            if !col.is_empty() && col[best] < 0.0 {
                col.neg_mut();
            }
        }

        Self {
            eigenvalues,
            eigenvectors: vectors,
        }
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn eigenvectors(&self) -> &DMatrix<f64> {
        &self.eigenvectors
    }

    /// `v_i` as a slice-backed column view.
    pub fn eigenvector(&self, i: usize) -> nalgebra::DVectorView<'_, f64> {
        self.eigenvectors.column(i)
    }

    /// Overlaps `chi_i = <v_i|1>` with the first basis state.
    pub fn overlaps(&self) -> Vec<f64> {
        self.eigenvectors.row(0).iter().copied().collect()
    }

    /// Weights `c_i = |<v_i|1>|^2`; they sum to one.
    pub fn weights(&self) -> Vec<f64> {
        self.eigenvectors.row(0).iter().map(|x| x * x).collect()
    }

    /// Spectral width `E_max - E_min`.
    pub fn width(&self) -> f64 {
        match (self.eigenvalues.first(), self.eigenvalues.last()) {
            (Some(lo), Some(hi)) => hi - lo,
            _ => 0.0,
        }
    }

    /// Indices whose eigenvalue is separated from both neighbours by more
    /// than `rel_gap * width`.
    pub fn nondegenerate_indices(&self, rel_gap: f64) -> Vec<usize> {
        let e = &self.eigenvalues;
        let tol = rel_gap * self.width();
        (0..e.len())
            .filter(|&i| {
                let left = i == 0 || e[i] - e[i - 1] > tol;
                let right = i + 1 == e.len() || e[i + 1] - e[i] > tol;
                left && right
            })
            .collect()
    }
}

/// Eigenvalues plus selected rows of the eigenvector matrix.
#[derive(Debug, Clone)]
pub(crate) struct PartialSpectrum {
    pub eigenvalues: Vec<f64>,
    /// `rows[r][i]` is component `r` of eigenvector `i`, for the tracked rows.
    pub rows: Vec<Vec<f64>>,
}

/// Implicit-shift QL on a symmetric tridiagonal matrix, accumulating only the
/// eigenvector components at the requested `rows`. Rows evolve independently
/// under the Givens rotations, so tracking two rows costs O(N) per sweep
/// instead of O(N^2).
pub(crate) fn tridiagonal_ql(diag: &[f64], offdiag: &[f64], rows: &[usize]) -> Result<PartialSpectrum> {
    let n = diag.len();
    debug_assert_eq!(offdiag.len(), n.saturating_sub(1));
    let mut d = diag.to_vec();
    let mut e = vec![0.0; n];
    e[..n.saturating_sub(1)].copy_from_slice(offdiag);
    let mut z: Vec<Vec<f64>> = rows
        .iter()
        .map(|&r| {
            let mut row = vec![0.0; n];
            row[r] = 1.0;
            row
        })
        .collect();

    let cap = 50 * n.max(1);
    let mut iterations = 0;
    for l in 0..n {
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iterations += 1;
            if iterations > cap {
                return Err(Error::NoConvergence {
                    dim: n,
                    iterations: cap,
                });
            }

            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + if g >= 0.0 { r } else { -r });
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut deflated = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                for row in z.iter_mut() {
                    let f = row[i + 1];
                    row[i + 1] = s * row[i] + c * f;
                    row[i] = c * row[i] - s * f;
                }
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(PartialSpectrum {
        eigenvalues: d,
        rows: z,
    })
}

/// Full eigensystem of a symmetric tridiagonal matrix.
pub fn eigendecompose_tridiagonal(diag: &[f64], offdiag: &[f64]) -> Result<SpectralDecomposition> {
    check_finite(diag.iter().chain(offdiag))?;
    let n = diag.len();
    let all: Vec<usize> = (0..n).collect();
    let partial = tridiagonal_ql(diag, offdiag, &all)?;
    let vectors = DMatrix::from_fn(n, n, |r, c| partial.rows[r][c]);
    Ok(SpectralDecomposition::from_unsorted(partial.eigenvalues, vectors))
}

/// Full eigensystem of a dense real symmetric matrix.
pub fn eigendecompose_dense(matrix: &DMatrix<f64>) -> Result<SpectralDecomposition> {
    check_finite(matrix.iter())?;
    let n = matrix.nrows();
    if n == 0 {
        return Ok(SpectralDecomposition::from_unsorted(vec![], DMatrix::zeros(0, 0)));
    }
    let cap = 50 * n;
    let eig = SymmetricEigen::try_new(matrix.clone(), f64::EPSILON, cap).ok_or(Error::NoConvergence {
        dim: n,
        iterations: cap,
    })?;
    Ok(SpectralDecomposition::from_unsorted(
        eig.eigenvalues.iter().copied().collect(),
        eig.eigenvectors,
    ))
}

fn check_finite<'a>(mut values: impl Iterator<Item = &'a f64>) -> Result<()> {
    if values.all(|x| x.is_finite()) {
        Ok(())
    } else {
        Err(Error::arg("matrix", "entries must be finite"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn residual(diag: &[f64], off: &[f64], sd: &SpectralDecomposition) -> f64 {
        let n = diag.len();
        let mut worst: f64 = 0.0;
        for i in 0..n {
            let v = sd.eigenvector(i);
            for r in 0..n {
                let mut hv = diag[r] * v[r];
                if r > 0 {
                    hv += off[r - 1] * v[r - 1];
                }
                if r + 1 < n {
                    hv += off[r] * v[r + 1];
                }
                worst = worst.max((hv - sd.eigenvalues()[i] * v[r]).abs());
            }
        }
        worst
    }

    #[test]
    fn two_by_two_closed_form() {
        let sd = eigendecompose_tridiagonal(&[1.0, 1.0], &[-2.0]).unwrap();
        assert!((sd.eigenvalues()[0] + 1.0).abs() < 1e-14);
        assert!((sd.eigenvalues()[1] - 3.0).abs() < 1e-14);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        // E = -1: (1, 1)/sqrt2. E = 3: (1, -1)/sqrt2, tie broken toward index 0.
        assert!((sd.eigenvector(0)[0] - h).abs() < 1e-14);
        assert!((sd.eigenvector(0)[1] - h).abs() < 1e-14);
        assert!((sd.eigenvector(1)[0] - h).abs() < 1e-14);
        assert!((sd.eigenvector(1)[1] + h).abs() < 1e-14);
    }

    #[test]
    fn diagonal_matrix_gives_standard_basis() {
        let diag = [3.0, -1.0, 2.0];
        let sd = eigendecompose_tridiagonal(&diag, &[0.0, 0.0]).unwrap();
        assert_eq!(sd.eigenvalues(), &[-1.0, 2.0, 3.0]);
        assert_eq!(sd.eigenvector(0)[1], 1.0);
        assert_eq!(sd.eigenvector(1)[2], 1.0);
        assert_eq!(sd.eigenvector(2)[0], 1.0);
    }

    #[test]
    fn single_entry() {
        let sd = eigendecompose_tridiagonal(&[0.5], &[]).unwrap();
        assert_eq!(sd.eigenvalues(), &[0.5]);
        assert_eq!(sd.eigenvector(0)[0], 1.0);
    }

    #[test]
    fn matches_dense_solver_and_is_orthonormal() {
        let diag: Vec<f64> = (0..17).map(|i| ((i * 7 % 5) as f64) - 1.3).collect();
        let off: Vec<f64> = (0..16).map(|i| 0.4 + ((i * 3 % 7) as f64) * 0.9).collect();
        let sd = eigendecompose_tridiagonal(&diag, &off).unwrap();
        let dense = DMatrix::from_fn(17, 17, |r, c| {
            if r == c {
                diag[r]
            } else if r + 1 == c {
                off[r]
            } else if c + 1 == r {
                off[c]
            } else {
                0.0
            }
        });
        let sd2 = eigendecompose_dense(&dense).unwrap();
        for (a, b) in sd.eigenvalues().iter().zip(sd2.eigenvalues()) {
            assert!((a - b).abs() < 1e-11, "{a} vs {b}");
        }
        let gram = sd.eigenvectors().transpose() * sd.eigenvectors();
        assert!((gram - DMatrix::identity(17, 17)).amax() < 1e-12);
        let max_e = sd.eigenvalues().iter().fold(0.0f64, |m, e| m.max(e.abs()));
        assert!(residual(&diag, &off, &sd) < 1e-9 * max_e);
        assert!((sd.weights().iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn endpoint_rows_match_full_vectors() {
        let diag = [0.3, -1.0, 2.0, 0.7, 1.1];
        let off = [1.0, 0.2, -0.8, 1.7];
        let full = eigendecompose_tridiagonal(&diag, &off).unwrap();
        let part = tridiagonal_ql(&diag, &off, &[0, 4]).unwrap();
        let mut order: Vec<usize> = (0..5).collect();
        order.sort_by(|&a, &b| part.eigenvalues[a].total_cmp(&part.eigenvalues[b]));
        for (k, &i) in order.iter().enumerate() {
            let v = full.eigenvector(k);
            let prod = part.rows[0][i] * part.rows[1][i];
            assert!((prod - v[0] * v[4]).abs() < 1e-13);
        }
    }

    #[test]
    fn rejects_non_finite() {
        assert!(eigendecompose_tridiagonal(&[f64::NAN, 0.0], &[1.0]).is_err());
    }
}
