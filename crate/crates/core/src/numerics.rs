//! Dense complex matrices and the spectral primitives built on them.
//!
//! Everything here works on small, dense, row-major matrices of
//! [`Complex64`]. Real data is promoted to complex with zero imaginary
//! parts, so there is a single code path. Hermitian eigendecomposition is
//! delegated to `nalgebra`; singular values and null spaces come from a
//! one-sided Jacobi iteration, which keeps small singular values accurate
//! relative to their own size. This module fixes orderings, thresholds and
//! sign conventions so that callers get reproducible results.

use std::fmt;
use std::ops::{Index, IndexMut};

use nalgebra::DMatrix;
pub use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NumericsError {
    #[error("{op}: expected {expected}, found {found}")]
    Dimension {
        op: &'static str,
        expected: String,
        found: String,
    },
    #[error("entry ({row}, {col}) is not finite")]
    NonFinite { row: usize, col: usize },
    #[error("tolerance `{name}` must lie in (0, 1), got {value}")]
    InvalidTolerance { name: &'static str, value: f64 },
}

/// Relative thresholds used for rank and equality decisions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Singular values at or below `rank_rel * sigma_max` count as zero.
    pub rank_rel: f64,
    /// Relative threshold when comparing bounds for equality.
    pub eq_rel: f64,
}

impl Tolerances {
    pub const DEFAULT_RANK_REL: f64 = 1e-10;
    pub const DEFAULT_EQ_REL: f64 = 1e-8;

    pub fn new(rank_rel: f64, eq_rel: f64) -> Result<Self, NumericsError> {
        for (name, value) in [("rank_rel", rank_rel), ("eq_rel", eq_rel)] {
            if !(value > 0.0 && value < 1.0) {
                return Err(NumericsError::InvalidTolerance { name, value });
            }
        }
        Ok(Self { rank_rel, eq_rel })
    }
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            rank_rel: Self::DEFAULT_RANK_REL,
            eq_rel: Self::DEFAULT_EQ_REL,
        }
    }
}

/// Dense row-major complex matrix. Either dimension may be zero.
#[derive(Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    /// Builds a matrix from row-major entries, rejecting wrong lengths and
    /// non-finite values.
    pub fn from_row_major(
        rows: usize,
        cols: usize,
        data: Vec<Complex64>,
    ) -> Result<Self, NumericsError> {
        if data.len() != rows * cols {
            return Err(NumericsError::Dimension {
                op: "from_row_major",
                expected: format!("{} entries for {rows}x{cols}", rows * cols),
                found: format!("{} entries", data.len()),
            });
        }
        if let Some(k) = data
            .iter()
            .position(|z| !(z.re.is_finite() && z.im.is_finite()))
        {
            return Err(NumericsError::NonFinite {
                row: k / cols.max(1),
                col: k % cols.max(1),
            });
        }
        Ok(Self { rows, cols, data })
    }

    /// Promotes real rows to a complex matrix. All rows must share a length.
    pub fn from_real_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self, NumericsError> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(NumericsError::Dimension {
                    op: "from_real_rows",
                    expected: format!("{cols} entries in every row"),
                    found: format!("{} entries in row {i}", r.len()),
                });
            }
            data.extend(r.iter().map(|&x| Complex64::new(x, 0.0)));
        }
        Self::from_row_major(rows.len(), cols, data)
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Stacks the given column vectors side by side.
    pub fn from_columns(rows: usize, columns: &[Vec<Complex64>]) -> Result<Self, NumericsError> {
        if let Some((j, c)) = columns.iter().enumerate().find(|(_, c)| c.len() != rows) {
            return Err(NumericsError::Dimension {
                op: "from_columns",
                expected: format!("{rows} entries per column"),
                found: format!("{} entries in column {j}", c.len()),
            });
        }
        let m = Self::from_fn(rows, columns.len(), |i, j| columns[j][i]);
        Self::from_row_major(m.rows, m.cols, m.data)
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn is_finite(&self) -> bool {
        self.data
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    /// Plain transpose, no conjugation.
    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    /// Matrix product `self * rhs`.
    ///
    /// Panics if the inner dimensions disagree.
    pub fn matmul(&self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(
            self.cols, rhs.rows,
            "matmul: {}x{} times {}x{}",
            self.rows, self.cols, rhs.rows, rhs.cols
        );
        let mut out = CMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            let lhs_row = self.row(i);
            let out_row = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
            for (k, &a) in lhs_row.iter().enumerate() {
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for (o, &b) in out_row.iter_mut().zip(rhs.row(k)) {
                    *o += a * b;
                }
            }
        }
        out
    }

    /// `selfᴴ · self`, symmetrized exactly.
    pub fn gram(&self) -> CMatrix {
        hermitian_part(&self.adjoint().matmul(self))
    }

    /// `self · selfᴴ`, symmetrized exactly.
    pub fn outer_gram(&self) -> CMatrix {
        hermitian_part(&self.matmul(&self.adjoint()))
    }

    pub fn scaled(&self, t: f64) -> CMatrix {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * t).collect(),
        }
    }

    /// Leading `k` rows.
    pub fn top_rows(&self, k: usize) -> CMatrix {
        assert!(k <= self.rows, "top_rows: {k} > {}", self.rows);
        Self {
            rows: k,
            cols: self.cols,
            data: self.data[..k * self.cols].to_vec(),
        }
    }

    /// Rows of `self` followed by rows of `below`.
    pub fn vstack(&self, below: &CMatrix) -> CMatrix {
        assert_eq!(self.cols, below.cols, "vstack: column counts differ");
        let mut data = self.data.clone();
        data.extend_from_slice(&below.data);
        Self {
            rows: self.rows + below.rows,
            cols: self.cols,
            data,
        }
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &CMatrix) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    fn to_nalgebra(&self) -> DMatrix<Complex64> {
        DMatrix::from_row_slice(self.rows, self.cols, &self.data)
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = Complex64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for CMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for z in self.row(i) {
                write!(f, "{:>+.6}{:+.6}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

fn hermitian_part(h: &CMatrix) -> CMatrix {
    CMatrix::from_fn(h.rows, h.cols, |i, j| (h[(i, j)] + h[(j, i)].conj()) * 0.5)
}

/// Eigenpairs of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    /// Ascending.
    pub values: Vec<f64>,
    /// Unitary; column `k` pairs with `values[k]`.
    pub vectors: CMatrix,
}

/// Eigendecomposition of a Hermitian matrix, eigenvalues ascending.
///
/// The input is replaced by its Hermitian part `(H + Hᴴ)/2` first, so small
/// asymmetries from rounding are harmless. Ties keep the solver's order.
pub fn hermitian_eigs(h: &CMatrix) -> Result<HermitianEigen, NumericsError> {
    if !h.is_square() {
        return Err(NumericsError::Dimension {
            op: "hermitian_eigs",
            expected: "square matrix".into(),
            found: format!("{}x{}", h.rows, h.cols),
        });
    }
    let n = h.rows;
    if n == 0 {
        return Ok(HermitianEigen {
            values: Vec::new(),
            vectors: CMatrix::zeros(0, 0),
        });
    }
    let eig = nalgebra::SymmetricEigen::new(hermitian_part(h).to_nalgebra());
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = CMatrix::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
    Ok(HermitianEigen { values, vectors })
}

const MAX_JACOBI_SWEEPS: usize = 100;

/// One-sided (Hestenes) Jacobi on the columns of `m`.
///
/// Returns the column norms `σ_j` of `W = m · V` after the columns of `W`
/// have been made mutually orthogonal, together with the accumulated unitary
/// `V` (as columns). The `σ_j` are the singular values of `m`, padded with
/// zeros when `m` has more columns than rows, and column `j` of `V` is the
/// matching right singular vector.
fn one_sided_jacobi(m: &CMatrix) -> (Vec<f64>, Vec<Vec<Complex64>>) {
    let q = m.cols;
    let mut w: Vec<Vec<Complex64>> = (0..q).map(|j| m.column(j)).collect();
    let mut v: Vec<Vec<Complex64>> = (0..q)
        .map(|j| {
            let mut e = vec![Complex64::new(0.0, 0.0); q];
            e[j] = Complex64::new(1.0, 0.0);
            e
        })
        .collect();
    let rotate =
        |cols: &mut [Vec<Complex64>], i: usize, j: usize, c: f64, s: f64, phase: Complex64| {
            let (left, right) = cols.split_at_mut(j);
            for (x, y) in left[i].iter_mut().zip(right[0].iter_mut()) {
                let a = *x;
                let b = *y * phase.conj();
                *x = a * c - b * s;
                *y = a * s + b * c;
            }
        };
    // columns below this are rounding noise; rotating them against large
    // columns only re-injects noise and the sweep never settles
    let negligible = (f64::EPSILON * m.frobenius_norm()).powi(2);
    for _ in 0..MAX_JACOBI_SWEEPS {
        let mut rotated = false;
        for i in 0..q {
            for j in i + 1..q {
                let alpha: f64 = w[i].iter().map(|z| z.norm_sqr()).sum();
                let beta: f64 = w[j].iter().map(|z| z.norm_sqr()).sum();
                if alpha <= negligible || beta <= negligible {
                    continue;
                }
                let gamma = dot(&w[j], &w[i]);
                let g = gamma.norm();
                if g == 0.0 || g <= f64::EPSILON * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let phase = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                rotate(&mut w, i, j, c, s, phase);
                rotate(&mut v, i, j, c, s, phase);
            }
        }
        if !rotated {
            break;
        }
    }
    (w.iter().map(|col| vec_norm(col)).collect(), v)
}

/// Singular values in descending order; `min(rows, cols)` of them.
pub fn singular_values(m: &CMatrix) -> Vec<f64> {
    if m.rows == 0 || m.cols == 0 {
        return Vec::new();
    }
    // Jacobi on the side with fewer columns
    let (mut s, _) = if m.cols > m.rows {
        one_sided_jacobi(&m.adjoint())
    } else {
        one_sided_jacobi(m)
    };
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

pub(crate) fn rank_of(sigma: &[f64], tol: &Tolerances) -> usize {
    match sigma.first() {
        Some(&smax) if smax > 0.0 => sigma.iter().filter(|&&s| s > tol.rank_rel * smax).count(),
        _ => 0,
    }
}

/// Number of singular values above `rank_rel` times the largest.
pub fn numeric_rank(m: &CMatrix, tol: &Tolerances) -> usize {
    rank_of(&singular_values(m), tol)
}

/// Orthonormal basis of the null space of `m`, as the columns of a
/// `cols × (cols − rank)` matrix.
///
/// The basis vectors are the right singular vectors of the `cols − rank`
/// smallest singular values, ordered by ascending singular value and then
/// by index. They are then passed through Gram-Schmidt and rotated so that
/// the first non-negligible coordinate of every column is real and
/// positive.
pub fn nullspace_onb(m: &CMatrix, tol: &Tolerances) -> CMatrix {
    let n = m.cols;
    if m.rows == 0 {
        return CMatrix::identity(n);
    }
    let k = n - numeric_rank(m, tol);
    if k == 0 {
        return CMatrix::zeros(n, 0);
    }
    let (sigma, v) = one_sided_jacobi(m);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| sigma[a].total_cmp(&sigma[b]));
    let columns = orthonormalize(order[..k].iter().map(|&j| v[j].clone()).collect());
    CMatrix::from_columns(n, &columns).expect("consistent column lengths")
}

/// Squared operator norm: `λ_max(MᴴM) = λ_max(MMᴴ)`, computed from whichever
/// Gram matrix is smaller.
pub fn op_norm_sq(m: &CMatrix) -> f64 {
    if m.rows == 0 || m.cols == 0 {
        return 0.0;
    }
    let g = if m.rows <= m.cols {
        m.outer_gram()
    } else {
        m.gram()
    };
    let eig = hermitian_eigs(&g).expect("gram matrices are square");
    eig.values.last().copied().unwrap_or(0.0).max(0.0)
}

pub(crate) fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    // ⟨a, b⟩ with conjugation in the second slot
    a.iter().zip(b).map(|(x, y)| x * y.conj()).sum()
}

fn vec_norm(a: &[Complex64]) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Two-pass modified Gram-Schmidt followed by the canonical phase rule.
pub(crate) fn orthonormalize(mut columns: Vec<Vec<Complex64>>) -> Vec<Vec<Complex64>> {
    for j in 0..columns.len() {
        let (done, rest) = columns.split_at_mut(j);
        let v = &mut rest[0];
        for _ in 0..2 {
            for q in done.iter() {
                let c = dot(v, q);
                for (x, y) in v.iter_mut().zip(q) {
                    *x -= c * y;
                }
            }
        }
        let nrm = vec_norm(v);
        for x in v.iter_mut() {
            *x /= nrm;
        }
        canonical_phase(v);
    }
    columns
}

/// Rotates `v` so its first coordinate of non-negligible size is real positive.
fn canonical_phase(v: &mut [Complex64]) {
    let cutoff = 1e-8 * vec_norm(v);
    if let Some(lead) = v.iter().find(|z| z.norm() > cutoff).copied() {
        let phase = lead.conj() / lead.norm();
        for x in v.iter_mut() {
            *x *= phase;
        }
    }
}
