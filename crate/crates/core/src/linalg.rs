//! Dense symmetric matrices, a cyclic Jacobi eigensolver, rank-one projectors
//! and the Hessian of a radial function.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Mul, Neg, Sub};

use crate::error::{invalid, Error, Result};
use crate::math;

/// Jacobi sweeps stop once the off-diagonal Frobenius norm drops below this
/// fraction of the input norm.
pub const JACOBI_REL_TOL: f64 = 1e-12;
const JACOBI_MAX_SWEEPS: usize = 100;

/// A real symmetric `n × n` matrix, stored densely in row-major order.
///
/// Every constructor symmetrizes its input as `(M + Mᵀ)/2`, so
/// `get(i, j) == get(j, i)` holds bit-for-bit.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SymMatrix {
    n: usize,
    data: Vec<f64>,
}

impl SymMatrix {
    pub fn zeros(n: usize) -> Self {
        assert!(n >= 1, "dimension must be at least 1");
        Self { n, data: vec![0.0; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        Self::scalar(n, 1.0)
    }

    /// `c·I`.
    pub fn scalar(n: usize, c: f64) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = c;
        }
        m
    }

    pub fn from_diag(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m.data[i * diag.len() + i] = d;
        }
        m
    }

    /// Builds a matrix from `n*n` row-major entries, symmetrizing them.
    pub fn from_row_major(n: usize, entries: &[f64]) -> Result<Self> {
        if n == 0 {
            return Err(invalid!("dimension must be at least 1"));
        }
        if entries.len() != n * n {
            return Err(invalid!("expected {} entries, got {}", n * n, entries.len()));
        }
        if entries.iter().any(|x| !x.is_finite()) {
            return Err(invalid!("matrix entries must be finite"));
        }
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                data[i * n + j] = 0.5 * (entries[i * n + j] + entries[j * n + i]);
            }
        }
        Ok(Self { n, data })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(invalid!("matrix rows must all have length {}", n));
        }
        let flat: Vec<f64> = rows.iter().flatten().copied().collect();
        Self::from_row_major(n, &flat)
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        let mut entries = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                entries[i * n + j] = f(i, j);
            }
        }
        Self::from_row_major(n, &entries)
    }

    /// `v vᵀ`.
    pub fn outer(v: &[f64]) -> Self {
        let n = v.len();
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m.data[i * n + j] = v[i] * v[j];
            }
        }
        m
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn as_row_major(&self) -> &[f64] {
        &self.data
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|x| x.is_finite())
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        math::sqrt(self.data.iter().map(|x| x * x).sum())
    }

    pub fn scale(&self, c: f64) -> Self {
        Self { n: self.n, data: self.data.iter().map(|x| c * x).collect() }
    }

    /// `self + c·I`.
    pub fn shift(&self, c: f64) -> Self {
        let mut m = self.clone();
        for i in 0..self.n {
            m.data[i * self.n + i] += c;
        }
        m
    }

    /// Linear combination `a·self + b·other`.
    pub fn combine(&self, a: f64, other: &Self, b: f64) -> Self {
        assert_eq!(self.n, other.n, "dimension mismatch");
        Self { n: self.n, data: self.data.iter().zip(&other.data).map(|(x, y)| a * x + b * y).collect() }
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        (0..self.n).map(|i| (0..self.n).map(|j| self.get(i, j) * x[j]).sum()).collect()
    }

    /// `⟨Ax, x⟩`.
    pub fn quadratic_form(&self, x: &[f64]) -> f64 {
        self.mul_vec(x).iter().zip(x).map(|(a, b)| a * b).sum()
    }

    /// `Qᵀ A Q` for a square `Q`.
    pub fn conjugate(&self, q: &Matrix) -> Self {
        assert_eq!(q.rows(), self.n);
        let k = q.cols();
        let mut out = Self::zeros(k);
        for a in 0..k {
            for b in a..k {
                let mut s = 0.0;
                for i in 0..self.n {
                    let qi = q.get(i, a);
                    if qi == 0.0 {
                        continue;
                    }
                    for j in 0..self.n {
                        s += qi * self.get(i, j) * q.get(j, b);
                    }
                }
                out.data[a * k + b] = s;
                out.data[b * k + a] = s;
            }
        }
        out
    }

    /// Ascending eigenvalues.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        check_finite(self)?;
        let (mut values, _) = jacobi(self, false);
        values.sort_by(f64::total_cmp);
        Ok(values)
    }

    pub fn lambda_min(&self) -> Result<f64> {
        Ok(self.eigenvalues()?[0])
    }

    pub fn lambda_max(&self) -> Result<f64> {
        Ok(*self.eigenvalues()?.last().expect("n >= 1"))
    }

    /// Cholesky factor `L` with `A = L Lᵀ`, or `None` if `A` is not positive definite.
    pub fn cholesky(&self) -> Option<Matrix> {
        let n = self.n;
        let mut l = Matrix::zeros(n, n);
        for j in 0..n {
            let mut d = self.get(j, j);
            for k in 0..j {
                d -= l.get(j, k) * l.get(j, k);
            }
            if !(d > 0.0) {
                return None;
            }
            let d = math::sqrt(d);
            l.set(j, j, d);
            for i in (j + 1)..n {
                let mut s = self.get(i, j);
                for k in 0..j {
                    s -= l.get(i, k) * l.get(j, k);
                }
                l.set(i, j, s / d);
            }
        }
        Some(l)
    }
}

impl Add for &SymMatrix {
    type Output = SymMatrix;
    fn add(self, rhs: &SymMatrix) -> SymMatrix {
        self.combine(1.0, rhs, 1.0)
    }
}

impl Sub for &SymMatrix {
    type Output = SymMatrix;
    fn sub(self, rhs: &SymMatrix) -> SymMatrix {
        self.combine(1.0, rhs, -1.0)
    }
}

impl Neg for &SymMatrix {
    type Output = SymMatrix;
    fn neg(self) -> SymMatrix {
        self.scale(-1.0)
    }
}

impl Mul<&SymMatrix> for f64 {
    type Output = SymMatrix;
    fn mul(self, rhs: &SymMatrix) -> SymMatrix {
        rhs.scale(self)
    }
}

/// A general dense row-major matrix (orthogonal frames, coupling blocks).
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1.0);
        }
        m
    }

    pub fn from_row_major(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(invalid!("expected {} entries, got {}", rows * cols, data.len()));
        }
        if data.iter().any(|x| !x.is_finite()) {
            return Err(invalid!("matrix entries must be finite"));
        }
        Ok(Self { rows, cols, data })
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[Vec<f64>]) -> Self {
        let rows = cols.first().map_or(0, Vec::len);
        let mut m = Self::zeros(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            for (i, &x) in c.iter().enumerate() {
                m.set(i, j, x);
            }
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "inner dimensions differ");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                for j in 0..other.cols {
                    out.data[i * other.cols + j] += a * other.get(k, j);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        (0..self.rows).map(|i| (0..self.cols).map(|j| self.get(i, j) * x[j]).sum()).collect()
    }

    /// Solves `L Lᵀ x = b` given the lower Cholesky factor `self`.
    pub fn cholesky_solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.rows;
        let mut y = vec![0.0; n];
        for i in 0..n {
            let s: f64 = (0..i).map(|k| self.get(i, k) * y[k]).sum();
            y[i] = (b[i] - s) / self.get(i, i);
        }
        let mut x = vec![0.0; n];
        for i in (0..n).rev() {
            let s: f64 = ((i + 1)..n).map(|k| self.get(k, i) * x[k]).sum();
            x[i] = (y[i] - s) / self.get(i, i);
        }
        x
    }
}

/// Ascending eigenvalues with paired orthonormal eigenvectors.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EigenDecomposition {
    pub values: Vec<f64>,
    /// `vectors[k]` is the unit eigenvector for `values[k]`.
    pub vectors: Vec<Vec<f64>>,
}

impl EigenDecomposition {
    pub fn lambda_min(&self) -> f64 {
        self.values[0]
    }

    pub fn lambda_max(&self) -> f64 {
        self.values[self.values.len() - 1]
    }

    /// `Σ λₖ eₖ eₖᵀ`.
    pub fn reconstruct(&self) -> SymMatrix {
        let n = self.values.len();
        let mut m = SymMatrix::zeros(n);
        for (lambda, v) in self.values.iter().zip(&self.vectors) {
            m = m.combine(1.0, &SymMatrix::outer(v), *lambda);
        }
        m
    }
}

fn check_finite(a: &SymMatrix) -> Result<()> {
    if a.is_finite() {
        Ok(())
    } else {
        Err(invalid!("matrix has non-finite entries"))
    }
}

/// Full eigendecomposition, eigenvalues ascending.
pub fn eigen_sorted(a: &SymMatrix) -> Result<EigenDecomposition> {
    check_finite(a)?;
    let (values, vectors) = jacobi(a, true);
    let vectors = vectors.expect("requested");
    let n = a.dim();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| values[i].total_cmp(&values[j]));
    Ok(EigenDecomposition {
        values: order.iter().map(|&k| values[k]).collect(),
        vectors: order.iter().map(|&k| vectors.column(k)).collect(),
    })
}

/// Cyclic Jacobi rotations. Returns unsorted diagonal and (optionally) the
/// accumulated rotation, whose columns are eigenvectors.
fn jacobi(a: &SymMatrix, want_vectors: bool) -> (Vec<f64>, Option<Matrix>) {
    let n = a.dim();
    let mut m = a.data.clone();
    let mut v = want_vectors.then(|| Matrix::identity(n));
    let threshold = JACOBI_REL_TOL * a.frobenius_norm();

    for _ in 0..JACOBI_MAX_SWEEPS {
        let mut off = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off += 2.0 * m[p * n + q] * m[p * n + q];
            }
        }
        if math::sqrt(off) <= threshold {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let app = m[p * n + p];
                let aqq = m[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = if theta >= 0.0 {
                    1.0 / (theta + math::hypot(1.0, theta))
                } else {
                    -1.0 / (-theta + math::hypot(1.0, theta))
                };
                let c = 1.0 / math::hypot(1.0, t);
                let s = t * c;

                for k in 0..n {
                    let mkp = m[k * n + p];
                    let mkq = m[k * n + q];
                    m[k * n + p] = c * mkp - s * mkq;
                    m[k * n + q] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let mpk = m[p * n + k];
                    let mqk = m[q * n + k];
                    m[p * n + k] = c * mpk - s * mqk;
                    m[q * n + k] = s * mpk + c * mqk;
                }
                m[p * n + q] = 0.0;
                m[q * n + p] = 0.0;

                if let Some(v) = v.as_mut() {
                    for k in 0..n {
                        let vkp = v.get(k, p);
                        let vkq = v.get(k, q);
                        v.set(k, p, c * vkp - s * vkq);
                        v.set(k, q, s * vkp + c * vkq);
                    }
                }
            }
        }
    }
    ((0..n).map(|i| m[i * n + i]).collect(), v)
}

pub fn norm(v: &[f64]) -> f64 {
    math::sqrt(v.iter().map(|x| x * x).sum())
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Orthogonal projections `(P_e, P_{e⊥})` onto the line spanned by `e` and
/// its complement.
pub fn projector(e: &[f64]) -> Result<(SymMatrix, SymMatrix)> {
    if e.is_empty() {
        return Err(invalid!("vector must have at least one component"));
    }
    let len2: f64 = e.iter().map(|x| x * x).sum();
    if !(len2 > 0.0) || !len2.is_finite() {
        return Err(invalid!("projector direction must be a finite nonzero vector"));
    }
    let pe = SymMatrix::outer(e).scale(1.0 / len2);
    let perp = SymMatrix::identity(e.len()).combine(1.0, &pe, -1.0);
    Ok((pe, perp))
}

/// `λ P_{e⊥} + μ P_e`, the matrices probed by the radial profiles.
pub fn profile_matrix(e: &[f64], lambda: f64, mu: f64) -> Result<SymMatrix> {
    let (pe, perp) = projector(e)?;
    Ok(perp.combine(lambda, &pe, mu))
}

/// Hessian of `u(x) = ψ(|x|)` at `x ≠ 0`, given `psi1 = ψ′(|x|)` and
/// `psi2 = ψ″(|x|)`:
///
/// `D²u(x) = (ψ′/|x|) P_{x⊥} + ψ″ P_x`.
pub fn radial_hessian(x: &[f64], psi1: f64, psi2: f64) -> Result<SymMatrix> {
    let r = norm(x);
    if !(r > 0.0) {
        return Err(Error::InvalidInput("radial Hessian is undefined at the origin".into()));
    }
    let (px, perp) = projector(x)?;
    Ok(perp.combine(psi1 / r, &px, psi2))
}
