//! Dense complex linear algebra: matrix/vector types, Hermitian
//! eigendecomposition, SVD, spectral norm and minimal-norm solves.

mod decomp;
mod matrix;

pub use decomp::{
    hermitian_eig, min_norm_solve, singular_values, spectral_norm, svd, HermitianEigen,
    MinNormSolution, Svd,
};
pub use matrix::{ComplexMatrix, ComplexVector, C64};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Numerical thresholds shared by the rank, PSD and boundary decisions.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Relative singular-value cutoff: `σ ≤ rank_tol · σ_max` counts as zero.
    pub rank_tol: f64,
    /// Relative eigenvalue floor for PSD verdicts.
    pub psd_tol: f64,
    /// Relative band around `‖A‖ = 1`.
    pub boundary_tol: f64,
}

impl Tolerances {
    pub const DEFAULT_PSD_TOL: f64 = 1e-10;
    pub const DEFAULT_BOUNDARY_TOL: f64 = 1e-9;

    /// Defaults for an `n`-dimensional problem: `rank_tol = 1e3 · n · ε`.
    pub fn for_dim(n: usize) -> Self {
        Self {
            rank_tol: 1e3 * n.max(1) as f64 * f64::EPSILON,
            psd_tol: Self::DEFAULT_PSD_TOL,
            boundary_tol: Self::DEFAULT_BOUNDARY_TOL,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, t) in [
            ("rank_tol", self.rank_tol),
            ("psd_tol", self.psd_tol),
            ("boundary_tol", self.boundary_tol),
        ] {
            if !(t > 0.0 && t < 1.0) {
                return Err(Error::Input(format!("{name} must lie in (0, 1), got {t}")));
            }
        }
        Ok(())
    }
}

impl Default for Tolerances {
    fn default() -> Self {
        Self::for_dim(1)
    }
}
