//! Dense real symmetric matrices, a cyclic Jacobi eigensolver and the
//! similarity and spectrum-comparison helpers built on top of it.

use std::fmt::Write as _;
use std::io::BufRead;

use crate::error::{Error, Result};

/// Dense real symmetric matrix stored in full row-major form.
///
/// Construction always produces an exactly symmetric array: either the
/// upper triangle is mirrored, or the input is averaged with its transpose.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix {
    dim: usize,
    data: Vec<f64>,
}

impl SymMatrix {
    pub fn zeros(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::invalid("matrix dimension must be at least 1"));
        }
        Ok(Self {
            dim,
            data: vec![0.0; dim * dim],
        })
    }

    pub fn identity(dim: usize) -> Result<Self> {
        let mut m = Self::zeros(dim)?;
        for i in 0..dim {
            m.data[i * dim + i] = 1.0;
        }
        Ok(m)
    }

    /// Builds a matrix from `f(i, j)` evaluated on the upper triangle
    /// (`i <= j`) and mirrored below the diagonal.
    pub fn from_upper_fn(dim: usize, mut f: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        let mut m = Self::zeros(dim)?;
        for i in 0..dim {
            for j in i..dim {
                let v = f(i, j);
                m.data[i * dim + j] = v;
                m.data[j * dim + i] = v;
            }
        }
        Ok(m)
    }

    pub fn diagonal(values: &[f64]) -> Result<Self> {
        Self::from_upper_fn(values.len(), |i, j| if i == j { values[i] } else { 0.0 })
    }

    /// Builds from nested rows, symmetrizing as `(M + Mᵀ)/2`.
    ///
    /// Returns the matrix and the largest `|M_ij - M_ji|` seen in the input.
    pub fn from_rows_symmetrized(rows: &[Vec<f64>]) -> Result<(Self, f64)> {
        let dim = rows.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: bad.len(),
            });
        }
        let mut asym = 0.0_f64;
        let m = Self::from_upper_fn(dim, |i, j| {
            let (a, b) = (rows[i][j], rows[j][i]);
            asym = asym.max((a - b).abs());
            0.5 * (a + b)
        })?;
        Ok((m, asym))
    }

    /// Same as [`from_rows_symmetrized`](Self::from_rows_symmetrized) but
    /// rejects any asymmetry at all.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let (m, asym) = Self::from_rows_symmetrized(rows)?;
        if asym != 0.0 {
            return Err(Error::invalid(format!(
                "matrix is not symmetric (max asymmetry {asym:e})"
            )));
        }
        Ok(m)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.dim + j]
    }

    /// Row-major view of all entries.
    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |acc, v| acc.max(v.abs()))
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    /// `self + scale * other`, used to form irrep combinations such as `A + 3B`.
    pub fn add_scaled(&self, other: &SymMatrix, scale: f64) -> Result<SymMatrix> {
        if other.dim != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: other.dim,
            });
        }
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a + scale * b)
            .collect();
        Ok(SymMatrix {
            dim: self.dim,
            data,
        })
    }

    pub fn scaled(&self, scale: f64) -> SymMatrix {
        SymMatrix {
            dim: self.dim,
            data: self.data.iter().map(|v| v * scale).collect(),
        }
    }

    /// Linear combination `Σ coeffs[l] · blocks[l]`.
    pub fn linear_combination(coeffs: &[f64], blocks: &[SymMatrix]) -> Result<SymMatrix> {
        if coeffs.len() != blocks.len() || blocks.is_empty() {
            return Err(Error::invalid(
                "linear combination needs one coefficient per block",
            ));
        }
        let mut acc = SymMatrix::zeros(blocks[0].dim)?;
        for (c, b) in coeffs.iter().zip(blocks) {
            if *c != 0.0 {
                acc = acc.add_scaled(b, *c)?;
            }
        }
        Ok(acc)
    }

    pub fn to_square(&self) -> SquareMatrix {
        SquareMatrix {
            dim: self.dim,
            data: self.data.clone(),
        }
    }

    /// Writes the plain-text matrix format: `dim` on the first line, then
    /// one row per line of space-separated values. Values use the shortest
    /// representation that round-trips exactly.
    pub fn to_text(&self) -> String {
        let mut out = String::with_capacity(self.dim * self.dim * 24);
        writeln!(out, "{}", self.dim).unwrap();
        for i in 0..self.dim {
            let row: Vec<String> = self.row(i).iter().map(|v| format!("{v:e}")).collect();
            writeln!(out, "{}", row.join(" ")).unwrap();
        }
        out
    }

    /// Parses the plain-text matrix format, symmetrizing the result.
    /// Returns the matrix and the maximum asymmetry found in the file.
    pub fn read_text(reader: impl BufRead) -> Result<(SymMatrix, f64)> {
        let mut lines = reader
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l))
            .filter(|(_, l)| l.as_ref().map(|s| !s.trim().is_empty()).unwrap_or(true));
        let (lineno, first) = lines.next().ok_or(Error::Parse {
            line: 1,
            msg: "empty input".into(),
        })?;
        let dim: usize = first?.trim().parse().map_err(|e| Error::Parse {
            line: lineno,
            msg: format!("bad dimension: {e}"),
        })?;
        if dim == 0 {
            return Err(Error::Parse {
                line: lineno,
                msg: "dimension must be at least 1".into(),
            });
        }
        let mut rows = Vec::with_capacity(dim);
        for (lineno, line) in lines.by_ref().take(dim) {
            let line = line?;
            let row = line
                .split_whitespace()
                .map(|tok| {
                    tok.parse::<f64>().map_err(|e| Error::Parse {
                        line: lineno,
                        msg: format!("bad value {tok:?}: {e}"),
                    })
                })
                .collect::<Result<Vec<f64>>>()?;
            if row.len() != dim {
                return Err(Error::Parse {
                    line: lineno,
                    msg: format!("expected {dim} values, found {}", row.len()),
                });
            }
            if row.iter().any(|v| !v.is_finite()) {
                return Err(Error::Parse {
                    line: lineno,
                    msg: "non-finite value".into(),
                });
            }
            rows.push(row);
        }
        if rows.len() != dim {
            return Err(Error::Parse {
                line: rows.len() + 2,
                msg: format!("expected {dim} rows, found {}", rows.len()),
            });
        }
        if let Some((lineno, _)) = lines.next() {
            return Err(Error::Parse {
                line: lineno,
                msg: "trailing data after matrix".into(),
            });
        }
        SymMatrix::from_rows_symmetrized(&rows)
    }
}

/// General dense square matrix (row-major). Used for orthogonal transforms
/// and eigenvector bases.
#[derive(Debug, Clone, PartialEq)]
pub struct SquareMatrix {
    dim: usize,
    data: Vec<f64>,
}

impl SquareMatrix {
    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                data.push(f(i, j));
            }
        }
        Self { dim, data }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_fn(dim, |i, j| if i == j { 1.0 } else { 0.0 })
    }

    /// Permutation matrix with `P[perm[j]][j] = 1`, i.e. `P e_j = e_{perm[j]}`.
    pub fn permutation(perm: &[usize]) -> Self {
        Self::from_fn(perm.len(), |i, j| if perm[j] == i { 1.0 } else { 0.0 })
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.dim + j]
    }

    #[inline]
    fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.dim + j] = v;
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.dim).map(|i| self.get(i, j)).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self.get(j, i))
    }

    pub fn matmul(&self, other: &SquareMatrix) -> SquareMatrix {
        assert_eq!(self.dim, other.dim, "matmul dimension mismatch");
        let n = self.dim;
        let mut out = vec![0.0; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out[i * n + j] += a * other.get(k, j);
                }
            }
        }
        SquareMatrix { dim: n, data: out }
    }

    /// Applies a plane rotation to columns `p` and `q` in place.
    pub fn rotate_columns(&mut self, p: usize, q: usize, c: f64, s: f64) {
        for i in 0..self.dim {
            let (xp, xq) = (self.get(i, p), self.get(i, q));
            self.set(i, p, c * xp - s * xq);
            self.set(i, q, s * xp + c * xq);
        }
    }

    /// Largest entry of `|PᵀP - I|`.
    pub fn orthogonality_defect(&self) -> f64 {
        let ptp = self.transpose().matmul(self);
        let mut worst = 0.0_f64;
        for i in 0..self.dim {
            for j in 0..self.dim {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((ptp.get(i, j) - target).abs());
            }
        }
        worst
    }

    pub fn max_abs_diff(&self, other: &SquareMatrix) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .fold(0.0, |acc, (a, b)| acc.max((a - b).abs()))
    }
}

/// Eigenvalues in ascending order, with optional eigenvectors stored as the
/// columns of an orthogonal matrix in the same order.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Option<SquareMatrix>,
}

impl Spectrum {
    pub fn min(&self) -> f64 {
        self.eigenvalues[0]
    }
}

/// Stopping rule for the Jacobi iteration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenConfig {
    /// Converged once the off-diagonal Frobenius norm falls below
    /// `rel_tol * ‖H‖_F`.
    pub rel_tol: f64,
    pub max_sweeps: usize,
}

impl Default for EigenConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-12,
            max_sweeps: 100,
        }
    }
}

/// Tolerance on `|PᵀP - I|` accepted by [`similarity`].
pub const ORTHOGONALITY_TOL: f64 = 1e-10;

pub fn eigensolve(h: &SymMatrix, want_vectors: bool) -> Result<Spectrum> {
    eigensolve_with(h, want_vectors, &EigenConfig::default())
}

/// Full symmetric eigendecomposition by cyclic Jacobi rotations.
///
/// Each sweep visits every `(p, q)` pair with `p < q` once and annihilates
/// `a_pq` with a plane rotation; rotations are accumulated into `V` when
/// eigenvectors are requested.
pub fn eigensolve_with(h: &SymMatrix, want_vectors: bool, cfg: &EigenConfig) -> Result<Spectrum> {
    if !h.is_finite() {
        return Err(Error::invalid("matrix has non-finite entries"));
    }
    let n = h.dim();
    let mut a = h.data.clone();
    let mut v = want_vectors.then(|| SquareMatrix::identity(n));
    let threshold = cfg.rel_tol * h.frobenius_norm();

    let off_norm = |a: &[f64]| -> f64 {
        let mut s = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                s += 2.0 * a[p * n + q] * a[p * n + q];
            }
        }
        s.sqrt()
    };

    let mut sweeps = 0;
    loop {
        let off = off_norm(&a);
        if off <= threshold {
            break;
        }
        if sweeps == cfg.max_sweeps {
            return Err(Error::NoConvergence {
                sweeps,
                off_norm: off,
            });
        }
        sweeps += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = if theta.abs() > 1e150 {
                    0.5 / theta
                } else {
                    theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;

                // A <- Jᵀ A J with J the rotation in the (p, q) plane.
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;
                if let Some(v) = v.as_mut() {
                    v.rotate_columns(p, q, c, s);
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[i * n + i].total_cmp(&a[j * n + j]));
    let eigenvalues = order.iter().map(|&i| a[i * n + i]).collect();
    let eigenvectors = v.map(|v| SquareMatrix::from_fn(n, |i, j| v.get(i, order[j])));
    Ok(Spectrum {
        eigenvalues,
        eigenvectors,
    })
}

/// Ascending eigenvalues only.
pub fn eigenvalues(h: &SymMatrix) -> Result<Vec<f64>> {
    Ok(eigensolve(h, false)?.eigenvalues)
}

/// Returns `Pᵀ H P` for an orthogonal `P`.
pub fn similarity(h: &SymMatrix, p: &SquareMatrix) -> Result<SymMatrix> {
    if p.dim() != h.dim() {
        return Err(Error::DimensionMismatch {
            expected: h.dim(),
            got: p.dim(),
        });
    }
    let defect = p.orthogonality_defect();
    if defect > ORTHOGONALITY_TOL {
        return Err(Error::invalid(format!(
            "transform is not orthogonal (|PᵀP - I| = {defect:e})"
        )));
    }
    let hp = h.to_square().matmul(p);
    let pthp = p.transpose().matmul(&hp);
    let (out, _) = SymMatrix::from_rows_symmetrized(
        &(0..h.dim())
            .map(|i| (0..h.dim()).map(|j| pthp.get(i, j)).collect())
            .collect::<Vec<_>>(),
    )?;
    Ok(out)
}

/// True iff both ascending lists have the same length and agree entry by
/// entry within `tol`.
pub fn spectrum_multiset_equal(a: &[f64], b: &[f64], tol: f64) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
}

/// Largest entrywise gap between two ascending spectra, or `None` when the
/// lengths differ.
pub fn spectrum_deviation(a: &[f64], b: &[f64]) -> Option<f64> {
    (a.len() == b.len()).then(|| {
        a.iter()
            .zip(b)
            .fold(0.0_f64, |acc, (x, y)| acc.max((x - y).abs()))
    })
}
