//! Finite frame analysis and dilation.
//!
//! A system of `n` vectors in `ℂ^d` is analysed through its synthesis
//! matrix: frame and Riesz bounds, completeness and linear independence.
//! The [`dilation`] module embeds such a system into a larger space as the
//! coordinate projection of a better-behaved system (orthogonal basis, Riesz
//! basis, invertible system, or a system with the same upper Riesz
//! constant), and [`verify`] checks those claims from scratch.
//!
//! ```
//! use naimark_core::{dilation, frames, gen, Tolerances};
//!
//! let tol = Tolerances::default();
//! let mercedes = gen::generate(&gen::GenSpec::mercedes()).unwrap();
//! let analysis = frames::classify(&mercedes, &tol);
//! assert!(analysis.is_tight);
//!
//! let dil = dilation::dilate_tight(&mercedes, &tol).unwrap();
//! assert_eq!(dil.ambient_dim(), 3);
//! assert_eq!(dilation::project(&dil), mercedes);
//! ```

pub mod dilation;
pub mod frames;
pub mod gen;
pub mod numerics;
pub mod verify;

pub use dilation::{Dilation, DilationError, DilationMode};
pub use frames::{SystemAnalysis, SystemError, VectorSystem};
pub use gen::{GenError, GenKind, GenSpec};
pub use numerics::{CMatrix, Complex64, NumericsError, Tolerances};
pub use verify::{Check, Duality, VerificationReport, VerifyError};
