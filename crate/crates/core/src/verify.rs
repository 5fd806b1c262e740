//! Independent checks that a dilation satisfies the claims of its mode.
//!
//! Nothing from the construction is reused: every spectrum is recomputed
//! from the two synthesis matrices through [`crate::numerics`].

use serde::Serialize;
use thiserror::Error;

use crate::dilation::{Dilation, DilationMode};
use crate::frames::VectorSystem;
use crate::numerics::{self, CMatrix, Tolerances};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum VerifyError {
    #[error("shape mismatch: {0}")]
    Shape(String),
}

/// How a check compares its measured value with the threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Comparison {
    /// Passes when `residual <= threshold`.
    AtMost,
    /// Passes when `residual > threshold`; the residual holds the measured
    /// quantity.
    Above,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub residual: f64,
    pub threshold: f64,
    pub comparison: Comparison,
}

impl Check {
    fn at_most(name: &'static str, residual: f64, threshold: f64) -> Self {
        Self {
            name,
            passed: residual <= threshold,
            residual,
            threshold,
            comparison: Comparison::AtMost,
        }
    }

    fn above(name: &'static str, value: f64, threshold: f64) -> Self {
        Self {
            name,
            passed: value > threshold,
            residual: value,
            threshold,
            comparison: Comparison::Above,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub mode: DilationMode,
    pub checks: Vec<Check>,
    pub overall: bool,
}

impl VerificationReport {
    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Entrywise tolerance for the projection check on dilations read from
/// files, where decimal round-off is possible.
pub const INTERCHANGE_PROJECTION_TOL: f64 = 1e-12;

/// Verifies a dilation built by this library; the projection must be
/// bit-exact.
pub fn verify_dilation(
    sys: &VectorSystem,
    dil: &Dilation,
    tol: &Tolerances,
) -> Result<VerificationReport, VerifyError> {
    verify_dilation_with(sys, dil, tol, 0.0)
}

/// As [`verify_dilation`] with an explicit entrywise projection tolerance.
pub fn verify_dilation_with(
    sys: &VectorSystem,
    dil: &Dilation,
    tol: &Tolerances,
    projection_tol: f64,
) -> Result<VerificationReport, VerifyError> {
    if sys.count() != dil.system().count() {
        return Err(VerifyError::Shape(format!(
            "system has {} vectors, dilation has {}",
            sys.count(),
            dil.system().count()
        )));
    }
    if sys.dim() != dil.original_dim() {
        return Err(VerifyError::Shape(format!(
            "system dimension {} differs from dilation original_dim {}",
            sys.dim(),
            dil.original_dim()
        )));
    }

    let f = sys.mat();
    let e = dil.system().mat();
    let (d, n, m) = (sys.dim(), sys.count(), dil.ambient_dim());
    let eq = tol.eq_rel;

    let sigma_f = numerics::singular_values(f);
    let sigma_e = numerics::singular_values(e);
    let rank_f = numerics::rank_of(&sigma_f, tol);
    let rank_e = numerics::rank_of(&sigma_e, tol);
    let sq = |s: Option<&f64>| s.map_or(0.0, |x| x * x);
    // optimal frame bounds of the input
    let b_f = sq(sigma_f.first());
    let a_f = if d > sigma_f.len() {
        0.0
    } else {
        sq(sigma_f.last())
    };
    // optimal Riesz bounds of the output
    let b_e = sq(sigma_e.first());
    let a_e = if n > sigma_e.len() {
        0.0
    } else {
        sq(sigma_e.last())
    };
    let rel = |x: f64, reference: f64| {
        (x - reference).abs() / if reference > 0.0 { reference } else { 1.0 }
    };

    let mut checks = vec![Check::at_most(
        "projection",
        e.top_rows(d).max_abs_diff(f),
        projection_tol,
    )];

    let recorded = dil.constants();
    match dil.mode() {
        DilationMode::Tight => {
            checks.push(Check::at_most("input_tight", rel(a_f, b_f), eq));
            checks.push(Check::at_most("square", m.abs_diff(n) as f64, 0.0));
            let target = CMatrix::identity(n).scaled(a_f);
            let gram_residual = e.gram().max_abs_diff(&target) / if a_f > 0.0 { a_f } else { 1.0 };
            checks.push(Check::at_most("gram_tight", gram_residual, eq));
            checks.push(Check::at_most(
                "constants",
                rel(recorded.0, a_f).max(rel(recorded.1, b_f)),
                eq,
            ));
        }
        DilationMode::Frame => {
            checks.push(Check::at_most("square", m.abs_diff(n) as f64, 0.0));
            checks.push(Check::at_most(
                "input_complete",
                d.abs_diff(rank_f) as f64,
                0.0,
            ));
            checks.push(Check::at_most("riesz_lower_match", rel(a_e, a_f), eq));
            checks.push(Check::at_most("riesz_upper_match", rel(b_e, b_f), eq));
            checks.push(Check::at_most(
                "riesz_basis",
                m.abs_diff(rank_e) as f64,
                0.0,
            ));
            checks.push(Check::at_most(
                "constants",
                rel(recorded.0, a_f).max(rel(recorded.1, b_f)),
                eq,
            ));
        }
        DilationMode::CompleteBessel => {
            checks.push(Check::at_most("square", m.abs_diff(n) as f64, 0.0));
            let ratio = match (sigma_e.first(), sigma_e.last()) {
                (Some(&hi), Some(&lo)) if hi > 0.0 && m == n => lo / hi,
                _ => 0.0,
            };
            checks.push(Check::above("sigma_ratio", ratio, tol.rank_rel));
            checks.push(Check::at_most("full_rank", m.abs_diff(rank_e) as f64, 0.0));
        }
        DilationMode::Bessel => {
            checks.push(Check::at_most(
                "ambient_dim",
                m.abs_diff(d + n - rank_f) as f64,
                0.0,
            ));
            checks.push(Check::at_most("upper_riesz_match", rel(b_e, b_f), eq));
            checks.push(Check::at_most("constants", rel(recorded.1, b_f), eq));
        }
    }

    let overall = checks.iter().all(|c| c.passed);
    Ok(VerificationReport {
        mode: dil.mode(),
        checks,
        overall,
    })
}

/// Bessel constant of the columns against the upper Riesz constant of the
/// rows.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Duality {
    /// `λ_max(F Fᴴ)`, from the `d × d` frame operator.
    pub bessel_of_columns: f64,
    /// Smallest `B` with `‖Σ c_i v_i‖² ≤ B‖c‖²` for the rows `v_i`, from the
    /// `n × n` operator `R Rᴴ` of the row system `R = Fᵀ`.
    pub upper_riesz_of_rows: f64,
    /// `|difference| / max(1, bessel_of_columns)`.
    pub residual: f64,
}

pub fn check_duality(sys: &VectorSystem) -> Duality {
    let f = sys.mat();
    let lam_max = |h: &CMatrix| {
        numerics::hermitian_eigs(h)
            .expect("gram matrices are square")
            .values
            .last()
            .copied()
            .unwrap_or(0.0)
            .max(0.0)
    };
    let cols = lam_max(&f.outer_gram());
    let rows = lam_max(&f.transpose().outer_gram());
    Duality {
        bessel_of_columns: cols,
        upper_riesz_of_rows: rows,
        residual: (cols - rows).abs() / cols.max(1.0),
    }
}
