//! Dilations: ambient systems whose leading coordinates reproduce a given
//! system.
//!
//! Every construction stacks the rows of the synthesis matrix `F` on top of
//! `s · Uᴴ`, where the columns of `U` are an orthonormal basis of `null(F)`.
//! The appended rows are then orthonormal and orthogonal to every row of
//! `F`, so for the ambient matrix `E`
//!
//! ```text
//! Eᴴ E = Fᴴ F + s² · P_null(F)
//! ```
//!
//! and the choice of `s` decides which constants survive: `√A` keeps both
//! frame bounds, `√B` keeps the Bessel constant, `1` only needs invertibility.
//! The projection back is plain row truncation.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::frames::{self, VectorSystem};
use crate::numerics::{self, Tolerances};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DilationMode {
    /// Tight frame to an orthogonal basis with `‖e_j‖² = A`.
    Tight,
    /// Frame to a Riesz basis with the same optimal bounds.
    Frame,
    /// Complete system to a complete, linearly independent one.
    CompleteBessel,
    /// Any system to one with the same upper Riesz constant.
    Bessel,
}

impl DilationMode {
    pub const ALL: [DilationMode; 4] = [
        DilationMode::Tight,
        DilationMode::Frame,
        DilationMode::CompleteBessel,
        DilationMode::Bessel,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            DilationMode::Tight => "tight",
            DilationMode::Frame => "frame",
            DilationMode::CompleteBessel => "complete-bessel",
            DilationMode::Bessel => "bessel",
        }
    }
}

impl fmt::Display for DilationMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for DilationMode {
    type Err = DilationError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        DilationMode::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| DilationError::UnknownMode(s.to_string()))
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DilationError {
    #[error("system is not tight: relative bound gap {gap:.3e} exceeds {threshold:.3e}")]
    NotTight { gap: f64, threshold: f64 },
    #[error("system is not a frame: rank {rank} < dimension {dim}")]
    NotFrame { rank: usize, dim: usize },
    #[error("system not complete: rank {rank} < dimension {dim}")]
    NotComplete { rank: usize, dim: usize },
    #[error("unknown dilation mode `{0}`")]
    UnknownMode(String),
    #[error("invalid dilation: {0}")]
    Invalid(String),
}

/// An ambient system `{e_j}` in `ℂ^m` together with how it was built.
///
/// The first `original_dim` rows of `system` are the original synthesis
/// matrix; the remaining `complement_rows` rows are the appended block.
#[derive(Debug, Clone, PartialEq)]
pub struct Dilation {
    mode: DilationMode,
    original_dim: usize,
    system: VectorSystem,
    scale: f64,
    constants: (f64, f64),
    degenerate: bool,
}

impl Dilation {
    /// Assembles a dilation from stored parts, e.g. when reading a file.
    pub fn new(
        mode: DilationMode,
        original_dim: usize,
        system: VectorSystem,
        scale: f64,
        constants: (f64, f64),
    ) -> Result<Self, DilationError> {
        if original_dim == 0 || original_dim > system.dim() {
            return Err(DilationError::Invalid(format!(
                "original_dim {original_dim} must lie in 1..={}",
                system.dim()
            )));
        }
        if !(scale.is_finite() && scale >= 0.0) {
            return Err(DilationError::Invalid(format!(
                "scale {scale} must be finite and >= 0"
            )));
        }
        if !(constants.0.is_finite() && constants.1.is_finite()) {
            return Err(DilationError::Invalid("constants must be finite".into()));
        }
        Ok(Self {
            mode,
            original_dim,
            system,
            scale,
            constants,
            degenerate: scale == 0.0,
        })
    }

    pub fn mode(&self) -> DilationMode {
        self.mode
    }

    pub fn original_dim(&self) -> usize {
        self.original_dim
    }

    pub fn ambient_dim(&self) -> usize {
        self.system.dim()
    }

    pub fn complement_rows(&self) -> usize {
        self.ambient_dim() - self.original_dim
    }

    /// The ambient system; column `j` is `e_j`.
    pub fn system(&self) -> &VectorSystem {
        &self.system
    }

    /// Factor applied to the appended orthonormal rows.
    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// `(A, B)` of the input system at construction time.
    pub fn constants(&self) -> (f64, f64) {
        self.constants
    }

    /// Set when the appended block was scaled by zero (zero input system).
    pub fn is_degenerate(&self) -> bool {
        self.degenerate
    }
}

fn stack_complement(
    sys: &VectorSystem,
    mode: DilationMode,
    scale: f64,
    constants: (f64, f64),
    tol: &Tolerances,
) -> Dilation {
    let null = numerics::nullspace_onb(sys.mat(), tol);
    let appended = null.adjoint().scaled(scale);
    let system = VectorSystem::new(sys.mat().vstack(&appended))
        .expect("stacked rows are finite and non-empty");
    Dilation {
        mode,
        original_dim: sys.dim(),
        system,
        scale,
        constants,
        degenerate: scale == 0.0,
    }
}

/// Tight frame with bound `A` to `√A` times a unitary matrix.
pub fn dilate_tight(sys: &VectorSystem, tol: &Tolerances) -> Result<Dilation, DilationError> {
    let an = frames::classify(sys, tol);
    if !an.is_complete {
        return Err(DilationError::NotFrame {
            rank: an.rank,
            dim: an.dim,
        });
    }
    if !an.is_tight {
        return Err(DilationError::NotTight {
            gap: an.tight_gap,
            threshold: tol.eq_rel,
        });
    }
    let a = an.frame_lower;
    Ok(stack_complement(
        sys,
        DilationMode::Tight,
        a.sqrt(),
        (a, an.frame_upper),
        tol,
    ))
}

/// Frame with bounds `A ≤ B` to a Riesz basis of `ℂⁿ` with Riesz bounds
/// `A ≤ B`.
pub fn dilate_frame(sys: &VectorSystem, tol: &Tolerances) -> Result<Dilation, DilationError> {
    let an = frames::classify(sys, tol);
    if !an.is_frame {
        return Err(DilationError::NotFrame {
            rank: an.rank,
            dim: an.dim,
        });
    }
    let a = an.frame_lower;
    Ok(stack_complement(
        sys,
        DilationMode::Frame,
        a.sqrt(),
        (a, an.frame_upper),
        tol,
    ))
}

/// Complete system to a square invertible one (complete and linearly
/// independent), appending an unscaled orthonormal complement.
pub fn dilate_complete_bessel(
    sys: &VectorSystem,
    tol: &Tolerances,
) -> Result<Dilation, DilationError> {
    let an = frames::classify(sys, tol);
    if !an.is_complete {
        return Err(DilationError::NotComplete {
            rank: an.rank,
            dim: an.dim,
        });
    }
    Ok(stack_complement(
        sys,
        DilationMode::CompleteBessel,
        1.0,
        (an.frame_lower, an.frame_upper),
        tol,
    ))
}

/// Any system to one in `ℂ^{d + n − rank}` whose upper Riesz constant is the
/// Bessel constant `B` of the input.
///
/// Never fails. For the zero system `B = 0`, the appended rows are zero and
/// the result is flagged degenerate.
pub fn dilate_bessel(sys: &VectorSystem, tol: &Tolerances) -> Dilation {
    let an = frames::classify(sys, tol);
    let b = frames::bessel_bound(sys);
    stack_complement(
        sys,
        DilationMode::Bessel,
        b.max(0.0).sqrt(),
        (an.frame_lower, b),
        tol,
    )
}

pub fn dilate(
    sys: &VectorSystem,
    mode: DilationMode,
    tol: &Tolerances,
) -> Result<Dilation, DilationError> {
    match mode {
        DilationMode::Tight => dilate_tight(sys, tol),
        DilationMode::Frame => dilate_frame(sys, tol),
        DilationMode::CompleteBessel => dilate_complete_bessel(sys, tol),
        DilationMode::Bessel => Ok(dilate_bessel(sys, tol)),
    }
}

/// `P(e_j)`: the leading `original_dim` coordinates of every ambient vector.
pub fn project(dil: &Dilation) -> VectorSystem {
    VectorSystem::new(dil.system.mat().top_rows(dil.original_dim)).expect("original_dim >= 1")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{hermitian_eigs, CMatrix, Complex64};
    use approx::assert_abs_diff_eq;

    fn sys(vectors: &[&[f64]]) -> VectorSystem {
        VectorSystem::from_real_vectors(vectors).unwrap()
    }

    fn mercedes() -> VectorSystem {
        let h = 3f64.sqrt() / 2.0;
        sys(&[&[0.0, 1.0], &[-h, -0.5], &[h, -0.5]])
    }

    fn e1e1e2() -> VectorSystem {
        sys(&[&[1.0, 0.0], &[1.0, 0.0], &[0.0, 1.0]])
    }

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn tight_examples() {
        let basis = sys(&[&[1.0, 0.0], &[0.0, 1.0]]);
        let d = dilate_tight(&basis, &tol()).unwrap();
        assert_eq!(d.ambient_dim(), 2);
        assert_eq!(d.complement_rows(), 0);
        assert_eq!(d.system(), &basis);

        let d = dilate_tight(&mercedes(), &tol()).unwrap();
        assert_eq!(d.ambient_dim(), 3);
        let g = d.system().mat().gram();
        assert!(g.max_abs_diff(&CMatrix::identity(3).scaled(1.5)) < 1e-14);
        assert_eq!(project(&d), mercedes());

        let parseval = VectorSystem::new(CMatrix::identity(3).top_rows(2)).unwrap();
        let d = dilate_tight(&parseval, &tol()).unwrap();
        assert!(d.system().mat().max_abs_diff(&CMatrix::identity(3)) < 1e-15);
    }

    #[test]
    fn tight_rejects_non_tight_and_incomplete() {
        assert!(matches!(
            dilate_tight(&e1e1e2(), &tol()),
            Err(DilationError::NotTight { .. })
        ));
        assert!(matches!(
            dilate_tight(&sys(&[&[1.0, 0.0]]), &tol()),
            Err(DilationError::NotFrame { .. })
        ));
    }

    #[test]
    fn frame_examples() {
        let d = dilate_frame(&e1e1e2(), &tol()).unwrap();
        assert_eq!(d.ambient_dim(), 3);
        assert_abs_diff_eq!(d.scale(), 1.0, epsilon = 1e-14);
        let ev = hermitian_eigs(&d.system().mat().gram()).unwrap().values;
        for (got, want) in ev.iter().zip([1.0, 1.0, 2.0]) {
            assert_abs_diff_eq!(*got, want, epsilon = 1e-13);
        }

        let tight = dilate_tight(&mercedes(), &tol()).unwrap();
        let frame = dilate_frame(&mercedes(), &tol()).unwrap();
        assert!(tight.system().mat().max_abs_diff(frame.system().mat()) < 1e-14);

        assert!(matches!(
            dilate_frame(&sys(&[&[1.0, 0.0], &[2.0, 0.0]]), &tol()),
            Err(DilationError::NotFrame { .. })
        ));
    }

    #[test]
    fn complete_bessel_examples() {
        let d = dilate_complete_bessel(&e1e1e2(), &tol()).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let want =
            CMatrix::from_real_rows(&[[1.0, 1.0, 0.0], [0.0, 0.0, 1.0], [h, -h, 0.0]]).unwrap();
        assert!(d.system().mat().max_abs_diff(&want) < 1e-14);
        assert_eq!(d.scale(), 1.0);

        let d = dilate_complete_bessel(&mercedes(), &tol()).unwrap();
        let s = numerics::singular_values(d.system().mat());
        assert!(s[2] > 0.5);

        let err = dilate_complete_bessel(&sys(&[&[1.0, 0.0]]), &tol()).unwrap_err();
        assert_eq!(err.to_string(), "system not complete: rank 1 < dimension 2");
    }

    #[test]
    fn bessel_examples() {
        let basis = sys(&[&[1.0, 0.0], &[0.0, 1.0]]);
        let d = dilate_bessel(&basis, &tol());
        assert_eq!(d.system(), &basis);

        let e1 = sys(&[&[1.0, 0.0]]);
        let d = dilate_bessel(&e1, &tol());
        assert_eq!(d.ambient_dim(), 2);
        assert_eq!(d.system(), &e1);

        let ones = sys(&[&[1.0, 0.0], &[1.0, 0.0]]);
        let d = dilate_bessel(&ones, &tol());
        assert_eq!(d.ambient_dim(), 3);
        let row = d.system().mat().row(2);
        assert_abs_diff_eq!(row[0].re, 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(row[1].re, -1.0, epsilon = 1e-14);
        let g = d.system().mat().gram();
        assert!(g.max_abs_diff(&CMatrix::identity(2).scaled(2.0)) < 1e-14);
    }

    #[test]
    fn bessel_of_zero_system_is_degenerate() {
        let zero = sys(&[&[0.0, 0.0], &[0.0, 0.0]]);
        let d = dilate_bessel(&zero, &tol());
        assert!(d.is_degenerate());
        assert_eq!(d.scale(), 0.0);
        assert_eq!(d.ambient_dim(), 4);
        assert_eq!(d.system().mat().max_abs(), 0.0);
    }

    #[test]
    fn project_truncates_rows() {
        let id = VectorSystem::new(CMatrix::identity(3)).unwrap();
        let d = Dilation::new(DilationMode::Tight, 2, id, 1.0, (1.0, 1.0)).unwrap();
        let p = project(&d);
        assert_eq!(p.dim(), 2);
        assert_eq!(p.vector(2), vec![Complex64::new(0.0, 0.0); 2]);
    }

    #[test]
    fn invalid_parts_are_rejected() {
        let id = VectorSystem::new(CMatrix::identity(2)).unwrap();
        assert!(Dilation::new(DilationMode::Frame, 3, id.clone(), 1.0, (1.0, 1.0)).is_err());
        assert!(Dilation::new(DilationMode::Frame, 0, id.clone(), 1.0, (1.0, 1.0)).is_err());
        assert!(Dilation::new(DilationMode::Frame, 1, id, -1.0, (1.0, 1.0)).is_err());
        assert!("sideways".parse::<DilationMode>().is_err());
        assert_eq!(
            "complete-bessel".parse::<DilationMode>().unwrap(),
            DilationMode::CompleteBessel
        );
    }
}
