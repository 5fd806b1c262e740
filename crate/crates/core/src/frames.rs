//! Vector systems and their frame-theoretic analysis.
//!
//! A [`VectorSystem`] holds `n` vectors of `ℂ^d` as the columns of a `d × n`
//! matrix (the synthesis matrix). Frame bounds are the extremal eigenvalues
//! of the frame operator `F Fᴴ`, Riesz bounds those of the Gram matrix
//! `Fᴴ F`. Both are read off the singular values of `F`, which keeps small
//! lower bounds accurate to relative precision instead of `eps · B`.

use serde::Serialize;
use thiserror::Error;

use crate::numerics::{self, CMatrix, Complex64, NumericsError, Tolerances};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SystemError {
    #[error("a vector system needs at least one dimension and one vector, got {dim}x{count}")]
    Empty { dim: usize, count: usize },
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

/// A finite system `{f_j}` of vectors in `ℂ^dim`, stored column-wise.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorSystem {
    mat: CMatrix,
}

impl VectorSystem {
    /// Wraps a `dim × count` synthesis matrix.
    pub fn new(mat: CMatrix) -> Result<Self, SystemError> {
        if mat.rows() == 0 || mat.cols() == 0 {
            return Err(SystemError::Empty {
                dim: mat.rows(),
                count: mat.cols(),
            });
        }
        if !mat.is_finite() {
            let k = mat
                .as_slice()
                .iter()
                .position(|z| !(z.re.is_finite() && z.im.is_finite()))
                .unwrap_or(0);
            return Err(NumericsError::NonFinite {
                row: k / mat.cols(),
                col: k % mat.cols(),
            }
            .into());
        }
        Ok(Self { mat })
    }

    /// Builds a system from its vectors, each of length `dim`.
    pub fn from_vectors(dim: usize, vectors: &[Vec<Complex64>]) -> Result<Self, SystemError> {
        Self::new(CMatrix::from_columns(dim, vectors)?)
    }

    /// Real vectors, promoted to complex.
    pub fn from_real_vectors<V: AsRef<[f64]>>(vectors: &[V]) -> Result<Self, SystemError> {
        let dim = vectors.first().map_or(0, |v| v.as_ref().len());
        let cols: Vec<Vec<Complex64>> = vectors
            .iter()
            .map(|v| v.as_ref().iter().map(|&x| Complex64::new(x, 0.0)).collect())
            .collect();
        Self::from_vectors(dim, &cols)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.mat.rows()
    }

    #[inline]
    pub fn count(&self) -> usize {
        self.mat.cols()
    }

    pub fn mat(&self) -> &CMatrix {
        &self.mat
    }

    pub fn into_mat(self) -> CMatrix {
        self.mat
    }

    pub fn vector(&self, j: usize) -> Vec<Complex64> {
        self.mat.column(j)
    }

    pub fn scaled(&self, t: f64) -> VectorSystem {
        VectorSystem {
            mat: self.mat.scaled(t),
        }
    }

    /// `U f_j` for every vector; `u` must be `dim × dim`.
    pub fn transformed(&self, u: &CMatrix) -> Result<VectorSystem, SystemError> {
        if u.cols() != self.dim() {
            return Err(NumericsError::Dimension {
                op: "transformed",
                expected: format!("{} columns", self.dim()),
                found: format!("{}x{}", u.rows(), u.cols()),
            }
            .into());
        }
        VectorSystem::new(u.matmul(&self.mat))
    }

    /// The system with `v` appended as a new last vector.
    pub fn with_vector(&self, v: &[Complex64]) -> Result<VectorSystem, SystemError> {
        let mut cols: Vec<Vec<Complex64>> = (0..self.count()).map(|j| self.vector(j)).collect();
        cols.push(v.to_vec());
        Self::from_vectors(self.dim(), &cols)
    }

    pub fn has_zero_vector(&self) -> bool {
        (0..self.count())
            .any(|j| (0..self.dim()).all(|i| self.mat[(i, j)] == Complex64::new(0.0, 0.0)))
    }
}

/// Optimal bounds and classification of a vector system.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SystemAnalysis {
    pub dim: usize,
    pub count: usize,
    /// Optimal lower frame bound `A`.
    pub frame_lower: f64,
    /// Optimal upper frame bound `B`, which is also the Bessel constant.
    pub frame_upper: f64,
    pub riesz_lower: f64,
    pub riesz_upper: f64,
    pub rank: usize,
    pub is_complete: bool,
    pub is_frame: bool,
    pub is_tight: bool,
    pub is_riesz_basis: bool,
    pub is_omega_independent: bool,
    /// `(B − A) / B`, or 0 for the zero system.
    pub tight_gap: f64,
}

/// `S = Σ f_k f_kᴴ`.
pub fn frame_operator(sys: &VectorSystem) -> CMatrix {
    sys.mat.outer_gram()
}

/// `G = Fᴴ F`, so that `‖Σ c_k f_k‖² = cᴴ G c`.
pub fn gram(sys: &VectorSystem) -> CMatrix {
    sys.mat.gram()
}

struct Spectrum {
    sigma: Vec<f64>,
}

impl Spectrum {
    fn of(sys: &VectorSystem) -> Self {
        Self {
            sigma: numerics::singular_values(&sys.mat),
        }
    }

    fn upper(&self) -> f64 {
        self.sigma.first().map_or(0.0, |s| s * s)
    }

    /// Smallest eigenvalue of a `size × size` Gram-type matrix whose
    /// nonzero spectrum is `σ²`.
    fn lower(&self, size: usize) -> f64 {
        if size > self.sigma.len() {
            0.0
        } else {
            self.sigma.last().map_or(0.0, |s| s * s)
        }
    }
}

/// Optimal frame bounds `(A, B)`: extremal eigenvalues of the frame operator.
pub fn frame_bounds(sys: &VectorSystem) -> (f64, f64) {
    let s = Spectrum::of(sys);
    (s.lower(sys.dim()), s.upper())
}

/// Optimal Riesz bounds `(a, b)`: extremal eigenvalues of the Gram matrix.
pub fn riesz_bounds(sys: &VectorSystem) -> (f64, f64) {
    let s = Spectrum::of(sys);
    (s.lower(sys.count()), s.upper())
}

/// Optimal Bessel constant, the squared operator norm of the synthesis map.
pub fn bessel_bound(sys: &VectorSystem) -> f64 {
    numerics::op_norm_sq(&sys.mat)
}

pub fn is_complete(sys: &VectorSystem, tol: &Tolerances) -> bool {
    numerics::numeric_rank(&sys.mat, tol) == sys.dim()
}

/// Injectivity of the synthesis map `c ↦ Σ c_k f_k`.
pub fn is_omega_independent(sys: &VectorSystem, tol: &Tolerances) -> bool {
    numerics::numeric_rank(&sys.mat, tol) == sys.count()
}

/// The row system `{v_i}` with `v_i(j) = f_j(i)`: a plain transpose.
pub fn r_dual(sys: &VectorSystem) -> VectorSystem {
    VectorSystem {
        mat: sys.mat.transpose(),
    }
}

pub fn classify(sys: &VectorSystem, tol: &Tolerances) -> SystemAnalysis {
    let spec = Spectrum::of(sys);
    let (d, n) = (sys.dim(), sys.count());
    let rank = numerics::rank_of(&spec.sigma, tol);
    let frame_upper = spec.upper();
    // rounding can push σ_min² a hair above σ_max² for tight systems
    let frame_lower = spec.lower(d).min(frame_upper);
    let riesz_lower = spec.lower(n).min(frame_upper);
    let is_complete = rank == d;
    let is_omega_independent = rank == n;
    let tight_gap = if frame_upper > 0.0 {
        (frame_upper - frame_lower) / frame_upper
    } else {
        0.0
    };
    let is_frame = is_complete;
    SystemAnalysis {
        dim: d,
        count: n,
        frame_lower,
        frame_upper,
        riesz_lower,
        riesz_upper: frame_upper,
        rank,
        is_complete,
        is_frame,
        is_tight: is_frame && tight_gap <= tol.eq_rel,
        is_riesz_basis: is_complete && is_omega_independent,
        is_omega_independent,
        tight_gap,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn basis2() -> VectorSystem {
        VectorSystem::from_real_vectors(&[[1.0, 0.0], [0.0, 1.0]]).unwrap()
    }

    fn e1e1e2() -> VectorSystem {
        VectorSystem::from_real_vectors(&[[1.0, 0.0], [1.0, 0.0], [0.0, 1.0]]).unwrap()
    }

    fn mercedes() -> VectorSystem {
        let h = 3f64.sqrt() / 2.0;
        VectorSystem::from_real_vectors(&[[0.0, 1.0], [-h, -0.5], [h, -0.5]]).unwrap()
    }

    fn real_mat(rows: &[&[f64]]) -> CMatrix {
        CMatrix::from_real_rows(rows).unwrap()
    }

    #[test]
    fn frame_operator_examples() {
        assert_eq!(frame_operator(&basis2()), CMatrix::identity(2));
        assert_eq!(
            frame_operator(&e1e1e2()),
            real_mat(&[&[2.0, 0.0], &[0.0, 1.0]])
        );
        let s = frame_operator(&mercedes());
        assert!(s.max_abs_diff(&CMatrix::identity(2).scaled(1.5)) < 1e-15);
    }

    #[test]
    fn gram_examples() {
        assert_eq!(gram(&basis2()), CMatrix::identity(2));
        let ones = VectorSystem::from_real_vectors(&[[1.0, 0.0], [1.0, 0.0]]).unwrap();
        assert_eq!(gram(&ones), real_mat(&[&[1.0, 1.0], &[1.0, 1.0]]));
        let g = gram(&mercedes());
        let expected = real_mat(&[&[1.0, -0.5, -0.5], &[-0.5, 1.0, -0.5], &[-0.5, -0.5, 1.0]]);
        assert!(g.max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn bound_examples() {
        let (a, b) = frame_bounds(&basis2());
        assert_abs_diff_eq!(a, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(b, 1.0, epsilon = 1e-15);

        let (a, b) = frame_bounds(&e1e1e2());
        assert_abs_diff_eq!(a, 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(b, 2.0, epsilon = 1e-14);

        let (a, b) = frame_bounds(&mercedes());
        assert_abs_diff_eq!(a, 1.5, epsilon = 1e-14);
        assert_abs_diff_eq!(b, 1.5, epsilon = 1e-14);

        let ones = VectorSystem::from_real_vectors(&[[1.0, 0.0], [1.0, 0.0]]).unwrap();
        let (a, b) = riesz_bounds(&ones);
        assert_abs_diff_eq!(a, 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(b, 2.0, epsilon = 1e-14);

        let diag = VectorSystem::from_real_vectors(&[[2.0, 0.0], [0.0, 1.0]]).unwrap();
        let (a, b) = riesz_bounds(&diag);
        assert_abs_diff_eq!(a, 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(b, 4.0, epsilon = 1e-14);
    }

    #[test]
    fn bessel_examples() {
        assert_abs_diff_eq!(bessel_bound(&basis2()), 1.0, epsilon = 1e-15);
        let zero = VectorSystem::from_real_vectors(&[[0.0, 0.0]]).unwrap();
        assert_eq!(bessel_bound(&zero), 0.0);
        assert_abs_diff_eq!(bessel_bound(&e1e1e2()), 2.0, epsilon = 1e-14);
    }

    #[test]
    fn completeness_and_independence() {
        let tol = Tolerances::default();
        let e1 = VectorSystem::from_real_vectors(&[[1.0, 0.0]]).unwrap();
        assert!(is_complete(&basis2(), &tol));
        assert!(!is_complete(&e1, &tol));
        assert!(is_complete(&mercedes(), &tol));

        let ones = VectorSystem::from_real_vectors(&[[1.0, 0.0], [1.0, 0.0]]).unwrap();
        assert!(is_omega_independent(&basis2(), &tol));
        assert!(!is_omega_independent(&ones, &tol));
        assert!(!is_omega_independent(&mercedes(), &tol));
        // c = (1, 1, 1) is a zero-series for the Mercedes system
        let m = mercedes();
        let sum: Vec<Complex64> = (0..2)
            .map(|i| (0..3).map(|j| m.mat()[(i, j)]).sum())
            .collect();
        assert!(sum.iter().all(|z| z.norm() < 1e-15));
    }

    #[test]
    fn r_dual_examples() {
        let five = VectorSystem::from_real_vectors(&[[5.0]]).unwrap();
        assert_eq!(r_dual(&five), five);

        let rd = r_dual(&e1e1e2());
        assert_eq!((rd.dim(), rd.count()), (3, 2));
        assert_eq!(
            rd,
            VectorSystem::from_real_vectors(&[[1.0, 1.0, 0.0], [0.0, 0.0, 1.0]]).unwrap()
        );
    }

    #[test]
    fn classify_examples() {
        let tol = Tolerances::default();
        let a = classify(&basis2(), &tol);
        assert!(
            a.is_tight && a.is_frame && a.is_riesz_basis && a.is_complete && a.is_omega_independent
        );

        let a = classify(&mercedes(), &tol);
        assert!(a.is_tight && a.is_frame && a.is_complete);
        assert!(!a.is_riesz_basis && !a.is_omega_independent);

        let e1 = VectorSystem::from_real_vectors(&[[1.0, 0.0]]).unwrap();
        let a = classify(&e1, &tol);
        assert!(!a.is_complete && !a.is_frame && !a.is_tight && !a.is_riesz_basis);
        assert!(a.is_omega_independent);
        assert_abs_diff_eq!(a.frame_upper, 1.0, epsilon = 1e-15);
        assert_eq!(a.frame_lower, 0.0);
    }

    #[test]
    fn zero_system_is_bessel_only() {
        let zero = VectorSystem::from_real_vectors(&[[0.0, 0.0], [0.0, 0.0]]).unwrap();
        let a = classify(&zero, &Tolerances::default());
        assert_eq!(a.rank, 0);
        assert_eq!(a.frame_upper, 0.0);
        assert_eq!(a.tight_gap, 0.0);
        assert!(!a.is_frame && !a.is_omega_independent);
        assert!(zero.has_zero_vector());
    }

    #[test]
    fn empty_systems_are_rejected() {
        assert!(matches!(
            VectorSystem::new(CMatrix::zeros(0, 3)),
            Err(SystemError::Empty { .. })
        ));
        assert!(matches!(
            VectorSystem::new(CMatrix::zeros(2, 0)),
            Err(SystemError::Empty { .. })
        ));
    }
}
