//! Dense real matrices and the symmetric eigensolver.
//!
//! The eigensolver is Householder tridiagonalization followed by the implicit
//! QL iteration with Wilkinson-style shifts (the EISPACK `tred2`/`tql2` pair).
//! Convergence is declared when an off-diagonal entry drops below machine
//! epsilon relative to the largest `|d| + |e|` seen so far.

use std::ops::{Index, IndexMut};

use crate::error::{Error, Result};

/// Square, row-major, real matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct RealMatrix {
    dim: usize,
    data: Vec<f64>,
}

impl RealMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![0.0; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for r in 0..dim {
            for c in 0..dim {
                data.push(f(r, c));
            }
        }
        Self { dim, data }
    }

    /// Builds a matrix from row slices; every row must have `rows.len()` entries.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let dim = rows.len();
        let mut data = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(Error::DimensionMismatch(dim, row.len()));
            }
            data.extend_from_slice(row);
        }
        Ok(Self { dim, data })
    }

    /// `|v⟩⟨v|`
    pub fn outer(v: &[f64]) -> Self {
        let dim = v.len();
        Self::from_fn(dim, |r, c| v[r] * v[c])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn row(&self, r: usize) -> &[f64] {
        &self.data[r * self.dim..(r + 1) * self.dim]
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    /// Largest `|m[r][c] - m[c][r]|`.
    pub fn max_asymmetry(&self) -> f64 {
        let mut worst = 0.0f64;
        for r in 0..self.dim {
            for c in r + 1..self.dim {
                worst = worst.max((self[(r, c)] - self[(c, r)]).abs());
            }
        }
        worst
    }

    /// Largest entrywise absolute difference.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// `alpha * self + beta * other`
    pub fn combine(&self, alpha: f64, other: &Self, beta: f64) -> Result<Self> {
        self.check_dim(other)?;
        Ok(Self {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| alpha * a + beta * b)
                .collect(),
        })
    }

    pub fn scaled(&self, alpha: f64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|a| alpha * a).collect(),
        }
    }

    /// Adds `weight * |v⟩⟨v|` in place.
    pub fn add_outer(&mut self, v: &[f64], weight: f64) {
        debug_assert_eq!(v.len(), self.dim);
        for (r, &vr) in v.iter().enumerate() {
            let wr = weight * vr;
            let row = &mut self.data[r * self.dim..(r + 1) * self.dim];
            for (x, &vc) in row.iter_mut().zip(v) {
                *x += wr * vc;
            }
        }
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let n = self.dim;
        let mut out = Self::zeros(n);
        for r in 0..n {
            let out_row = &mut out.data[r * n..(r + 1) * n];
            for k in 0..n {
                let a = self.data[r * n + k];
                if a == 0.0 {
                    continue;
                }
                for (o, &b) in out_row.iter_mut().zip(&other.data[k * n..(k + 1) * n]) {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        (0..self.dim)
            .map(|r| self.row(r).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// `⟨v|M|v⟩`
    pub fn quadratic_form(&self, v: &[f64]) -> f64 {
        self.mul_vec(v).iter().zip(v).map(|(a, b)| a * b).sum()
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &Self) -> Self {
        let (n, m) = (self.dim, other.dim);
        Self::from_fn(n * m, |r, c| self[(r / m, c / m)] * other[(r % m, c % m)])
    }

    /// Returns `(M + Mᵀ) / 2`.
    pub fn symmetrized(&self) -> Self {
        Self::from_fn(self.dim, |r, c| 0.5 * (self[(r, c)] + self[(c, r)]))
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch(self.dim, other.dim));
        }
        Ok(())
    }
}

impl Index<(usize, usize)> for RealMatrix {
    type Output = f64;

    fn index(&self, (r, c): (usize, usize)) -> &f64 {
        &self.data[r * self.dim + c]
    }
}

impl IndexMut<(usize, usize)> for RealMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut f64 {
        &mut self.data[r * self.dim + c]
    }
}

/// Eigenvalues (ascending) and the matching orthonormal eigenvectors as columns.
#[derive(Debug, Clone)]
pub struct SymmetricEigen {
    pub values: Vec<f64>,
    pub vectors: RealMatrix,
}

impl SymmetricEigen {
    /// Column `j` of the eigenvector matrix.
    pub fn vector(&self, j: usize) -> Vec<f64> {
        (0..self.vectors.dim).map(|r| self.vectors[(r, j)]).collect()
    }

    /// Rebuilds `V diag(values) Vᵀ` with replacement eigenvalues.
    pub fn rebuild(&self, values: &[f64]) -> RealMatrix {
        let n = self.vectors.dim;
        let mut out = RealMatrix::zeros(n);
        for (j, &w) in values.iter().enumerate() {
            if w != 0.0 {
                out.add_outer(&self.vector(j), w);
            }
        }
        out
    }
}

/// Full eigendecomposition of a symmetric matrix.
///
/// Only the lower triangle is read; callers are expected to have validated symmetry.
pub fn symmetric_eigen(m: &RealMatrix) -> Result<SymmetricEigen> {
    let mut work = Tridiagonal::reduce(m, true);
    work.ql(true)?;
    let n = m.dim;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| work.d[a].total_cmp(&work.d[b]));
    let values = order.iter().map(|&i| work.d[i]).collect();
    // Row `i` of the working storage is eigenvector `i`.
    let vectors = RealMatrix::from_fn(n, |r, c| work.v[order[c] * n + r]);
    Ok(SymmetricEigen { values, vectors })
}

/// Eigenvalues (ascending) of a symmetric matrix, without eigenvectors.
pub fn symmetric_eigenvalues(m: &RealMatrix) -> Result<Vec<f64>> {
    let mut work = Tridiagonal::reduce(m, false);
    work.ql(false)?;
    let mut d = work.d;
    d.sort_by(f64::total_cmp);
    Ok(d)
}

struct Tridiagonal {
    n: usize,
    /// Column-major working copy; element `(r, c)` lives at `c * n + r`. For a
    /// symmetric input this is the same buffer as row-major storage.
    v: Vec<f64>,
    d: Vec<f64>,
    e: Vec<f64>,
}

impl Tridiagonal {
    fn reduce(m: &RealMatrix, accumulate: bool) -> Self {
        let n = m.dim;
        let mut t = Self {
            n,
            v: m.data.clone(),
            d: vec![0.0; n],
            e: vec![0.0; n],
        };
        if n == 0 {
            return t;
        }
        let at = |r: usize, c: usize| c * n + r;
        let (v, d, e) = (&mut t.v, &mut t.d, &mut t.e);

        for j in 0..n {
            d[j] = v[at(n - 1, j)];
        }
        for i in (1..n).rev() {
            let scale: f64 = d[..i].iter().map(|x| x.abs()).sum();
            let mut h = 0.0;
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
                e[..i].iter_mut().for_each(|x| *x = 0.0);
                for j in 0..i {
                    f = d[j];
                    v[at(j, i)] = f;
                    g = e[j] + v[at(j, j)] * f;
                    let col = &v[j * n..j * n + i];
                    for k in j + 1..i {
                        g += col[k] * d[k];
                        e[k] += col[k] * f;
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
                    let col = &mut v[j * n..j * n + i];
                    for k in j..i {
                        col[k] -= f * e[k] + g * d[k];
                    }
                    d[j] = v[at(i - 1, j)];
                    v[at(i, j)] = 0.0;
                }
            }
            d[i] = h;
        }

        if accumulate {
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
        } else {
            for j in 0..n {
                d[j] = v[at(j, j)];
            }
        }
        e[0] = 0.0;
        t
    }

    fn ql(&mut self, vectors: bool) -> Result<()> {
        let n = self.n;
        if n == 0 {
            return Ok(());
        }
        let (v, d, e) = (&mut self.v, &mut self.d, &mut self.e);
        for i in 1..n {
            e[i - 1] = e[i];
        }
        e[n - 1] = 0.0;

        let eps = f64::EPSILON;
        let mut f = 0.0;
        let mut tst1 = 0.0f64;
        for l in 0..n {
            tst1 = tst1.max(d[l].abs() + e[l].abs());
            let mut m = l;
            while m < n - 1 && e[m].abs() > eps * tst1 {
                m += 1;
            }
            if m > l {
                let mut iterations = 0;
                loop {
                    iterations += 1;
                    if iterations > 60 {
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
                    for x in &mut d[l + 2..n] {
                        *x -= h;
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
                        if vectors {
                            let (lo, hi) = v.split_at_mut((i + 1) * n);
                            let vi = &mut lo[i * n..];
                            let vi1 = &mut hi[..n];
                            for k in 0..n {
                                let t = vi1[k];
                                vi1[k] = s * vi[k] + c * t;
                                vi[k] = c * vi[k] - s * t;
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
}
