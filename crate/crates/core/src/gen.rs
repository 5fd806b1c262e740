//! Seeded generators for test systems.
//!
//! All randomness comes from `ChaCha8Rng::seed_from_u64(seed)`, which is
//! platform independent. Gaussians use `rand_distr::StandardNormal`; a
//! standard complex Gaussian is `(x + i·y) / √2` with independent `x`, `y`.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::frames::VectorSystem;
use crate::numerics::{self, CMatrix, Complex64};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GenKind {
    Random,
    RandomTight,
    Harmonic,
    Mercedes,
    RankDeficient,
    RieszBasis,
    WithZeros,
}

impl GenKind {
    pub const ALL: [GenKind; 7] = [
        GenKind::Random,
        GenKind::RandomTight,
        GenKind::Harmonic,
        GenKind::Mercedes,
        GenKind::RankDeficient,
        GenKind::RieszBasis,
        GenKind::WithZeros,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            GenKind::Random => "random",
            GenKind::RandomTight => "random-tight",
            GenKind::Harmonic => "harmonic",
            GenKind::Mercedes => "mercedes",
            GenKind::RankDeficient => "rank-deficient",
            GenKind::RieszBasis => "riesz-basis",
            GenKind::WithZeros => "with-zeros",
        }
    }
}

impl fmt::Display for GenKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for GenKind {
    type Err = GenError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        GenKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| GenError::Invalid(format!("unknown kind `{s}`")))
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GenError {
    #[error("invalid generator spec: {0}")]
    Invalid(String),
}

/// What to generate.
///
/// `scale_a` is the tight bound for `RandomTight` (default 1) and the lower
/// Riesz bound for `RieszBasis` (default 1); `scale_b` is the upper Riesz
/// bound for `RieszBasis` (default 4). `rank` is only read by
/// `RankDeficient`, where it defaults to `min(dim, count) − 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenSpec {
    pub kind: GenKind,
    pub dim: usize,
    pub count: usize,
    pub rank: Option<usize>,
    pub seed: u64,
    pub scale_a: Option<f64>,
    pub scale_b: Option<f64>,
}

impl GenSpec {
    pub fn new(kind: GenKind, dim: usize, count: usize, seed: u64) -> Self {
        Self {
            kind,
            dim,
            count,
            rank: None,
            seed,
            scale_a: None,
            scale_b: None,
        }
    }

    pub fn mercedes() -> Self {
        Self::new(GenKind::Mercedes, 2, 3, 0)
    }

    pub fn with_rank(mut self, rank: usize) -> Self {
        self.rank = Some(rank);
        self
    }

    pub fn with_scales(mut self, a: Option<f64>, b: Option<f64>) -> Self {
        self.scale_a = a;
        self.scale_b = b;
        self
    }

    /// Number of columns zeroed by `WithZeros`.
    pub fn zeroed_columns(&self) -> usize {
        self.count.div_ceil(4)
    }

    pub fn effective_rank(&self) -> usize {
        self.rank
            .unwrap_or_else(|| self.dim.min(self.count).saturating_sub(1))
    }

    fn scales(&self) -> (f64, f64) {
        let a = self.scale_a.unwrap_or(1.0);
        let b = self.scale_b.unwrap_or(if self.scale_a.is_some() {
            a.max(4.0)
        } else {
            4.0
        });
        (a, b)
    }

    pub fn validate(&self) -> Result<(), GenError> {
        let bad = |msg: String| Err(GenError::Invalid(msg));
        if self.dim == 0 || self.count == 0 {
            return bad(format!(
                "dim and count must be >= 1, got {}x{}",
                self.dim, self.count
            ));
        }
        if let Some(r) = self.rank {
            if r > self.dim.min(self.count) {
                return bad(format!(
                    "rank {r} exceeds min(dim, count) = {}",
                    self.dim.min(self.count)
                ));
            }
        }
        for (name, v) in [("a", self.scale_a), ("b", self.scale_b)] {
            if let Some(v) = v {
                if !(v.is_finite() && v > 0.0) {
                    return bad(format!("scale {name} must be finite and > 0, got {v}"));
                }
            }
        }
        match self.kind {
            GenKind::RandomTight | GenKind::Harmonic if self.count < self.dim => bad(format!(
                "{} needs count >= dim, got {}x{}",
                self.kind, self.dim, self.count
            )),
            GenKind::RieszBasis if self.count != self.dim => bad(format!(
                "riesz-basis needs count = dim, got {}x{}",
                self.dim, self.count
            )),
            GenKind::RieszBasis if self.scales().0 > self.scales().1 => bad(format!(
                "riesz-basis needs a <= b, got a = {}, b = {}",
                self.scales().0,
                self.scales().1
            )),
            GenKind::Mercedes if (self.dim, self.count) != (2, 3) => {
                bad(format!("mercedes is 2x3, got {}x{}", self.dim, self.count))
            }
            _ => Ok(()),
        }
    }
}

fn complex_gaussian(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> CMatrix {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    CMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex64::new(re * s, im * s)
    })
}

/// Rows of `m` replaced by an orthonormal set spanning the same space.
fn orthonormal_rows(m: &CMatrix) -> CMatrix {
    let rows: Vec<Vec<Complex64>> = (0..m.rows()).map(|i| m.row(i).to_vec()).collect();
    let q = numerics::orthonormalize(rows);
    CMatrix::from_fn(m.rows(), m.cols(), |i, j| q[i][j])
}

pub fn generate(spec: &GenSpec) -> Result<VectorSystem, GenError> {
    spec.validate()?;
    let (d, n) = (spec.dim, spec.count);
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mat = match spec.kind {
        GenKind::Random => complex_gaussian(&mut rng, d, n),
        GenKind::RandomTight => {
            let a = spec.scales().0;
            orthonormal_rows(&complex_gaussian(&mut rng, d, n)).scaled(a.sqrt())
        }
        GenKind::Harmonic => CMatrix::from_fn(d, n, |i, j| {
            let k = (i * j) % n;
            Complex64::from_polar(1.0, -2.0 * PI * k as f64 / n as f64)
        }),
        GenKind::Mercedes => {
            let h = 3f64.sqrt() / 2.0;
            CMatrix::from_real_rows(&[[0.0, -h, h], [1.0, -0.5, -0.5]]).expect("fixed shape")
        }
        GenKind::RankDeficient => {
            let r = spec.effective_rank();
            let left = complex_gaussian(&mut rng, d, r);
            let right = complex_gaussian(&mut rng, r, n);
            left.matmul(&right)
        }
        GenKind::RieszBasis => {
            let (a, b) = spec.scales();
            let q = orthonormal_rows(&complex_gaussian(&mut rng, d, d));
            let (lo, hi) = (a.sqrt(), b.sqrt());
            let diag = |j: usize| {
                if d == 1 {
                    lo
                } else {
                    lo + (hi - lo) * j as f64 / (d - 1) as f64
                }
            };
            // Q·D has Gram D², so the Riesz bounds are exactly (a, b)
            CMatrix::from_fn(d, d, |i, j| q[(i, j)] * diag(j))
        }
        GenKind::WithZeros => {
            let mut m = complex_gaussian(&mut rng, d, n);
            for j in rand::seq::index::sample(&mut rng, n, spec.zeroed_columns()) {
                for i in 0..d {
                    m[(i, j)] = Complex64::new(0.0, 0.0);
                }
            }
            m
        }
    };
    Ok(VectorSystem::new(mat).expect("generated systems are finite and non-empty"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frames::{classify, frame_operator};
    use crate::numerics::Tolerances;
    use approx::assert_abs_diff_eq;

    #[test]
    fn harmonic_2x2_is_the_fourier_matrix() {
        let s = generate(&GenSpec::new(GenKind::Harmonic, 2, 2, 0)).unwrap();
        let want = CMatrix::from_real_rows(&[[1.0, 1.0], [1.0, -1.0]]).unwrap();
        assert!(s.mat().max_abs_diff(&want) < 1e-15);
        let f = frame_operator(&s);
        assert!(f.max_abs_diff(&CMatrix::identity(2).scaled(2.0)) < 1e-15);
    }

    #[test]
    fn mercedes_is_tight_with_three_halves() {
        let a = classify(
            &generate(&GenSpec::mercedes()).unwrap(),
            &Tolerances::default(),
        );
        assert!(a.is_tight);
        assert_abs_diff_eq!(a.frame_lower, 1.5, epsilon = 1e-14);
        assert_abs_diff_eq!(a.frame_upper, 1.5, epsilon = 1e-14);
    }

    #[test]
    fn random_tight_seed_42() {
        let spec = GenSpec::new(GenKind::RandomTight, 3, 7, 42).with_scales(Some(1.0), None);
        let a = classify(&generate(&spec).unwrap(), &Tolerances::default());
        assert!(a.is_tight);
        assert!((a.frame_upper - a.frame_lower).abs() <= 1e-10);
    }

    #[test]
    fn deterministic_for_fixed_spec() {
        for kind in GenKind::ALL {
            let spec = match kind {
                GenKind::Mercedes => GenSpec::mercedes(),
                GenKind::RieszBasis => GenSpec::new(kind, 4, 4, 9),
                _ => GenSpec::new(kind, 3, 6, 9),
            };
            assert_eq!(generate(&spec).unwrap(), generate(&spec).unwrap());
        }
        let a = generate(&GenSpec::new(GenKind::Random, 3, 6, 1)).unwrap();
        let b = generate(&GenSpec::new(GenKind::Random, 3, 6, 2)).unwrap();
        assert_ne!(a, b);
    }

    #[test]
    fn invalid_specs_are_rejected() {
        for spec in [
            GenSpec::new(GenKind::RandomTight, 3, 2, 0),
            GenSpec::new(GenKind::Harmonic, 3, 2, 0),
            GenSpec::new(GenKind::RieszBasis, 3, 4, 0),
            GenSpec::new(GenKind::Mercedes, 3, 3, 0),
            GenSpec::new(GenKind::Random, 0, 3, 0),
            GenSpec::new(GenKind::RankDeficient, 3, 3, 0).with_rank(4),
            GenSpec::new(GenKind::RieszBasis, 2, 2, 0).with_scales(Some(5.0), Some(1.0)),
            GenSpec::new(GenKind::Random, 2, 2, 0).with_scales(Some(-1.0), None),
        ] {
            assert!(generate(&spec).is_err(), "{spec:?}");
        }
    }

    #[test]
    fn kind_names_round_trip() {
        for kind in GenKind::ALL {
            assert_eq!(kind.as_str().parse::<GenKind>().unwrap(), kind);
        }
        assert!("gabor".parse::<GenKind>().is_err());
    }
}
