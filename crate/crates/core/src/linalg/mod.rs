//! Dense complex linear algebra kernels.
//!
//! Everything here works on small (d ≲ 64) dense matrices and is written for
//! clarity of the tolerance story rather than speed: ranks and null spaces come
//! from a one-sided Jacobi SVD, Hermitian spectra from cyclic Jacobi, and
//! general spectra from Hessenberg reduction followed by shifted complex QR.

mod eigen;
mod matrix;
mod solve;
mod svd;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use eigen::{
    cluster_eigenvalues, complex_eigen, eigenvalues_raw, hermitian_eigen, HermitianEigen,
};
pub use matrix::{dot, vec_norm, ComplexMatrix};
pub use solve::solve;
pub use svd::{null_space, orthonormal_range, rank_tol, singular_values, Svd};

pub(crate) use matrix::ZERO;

/// Two raw eigenvalues belong to the same cluster when they differ by at most
/// this factor times `max(1, ‖M‖_F)`.
pub const CLUSTER_REL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LinalgError {
    #[error("shape error: {0}")]
    Shape(String),
    #[error("matrix contains non-finite entries")]
    NonFinite,
    #[error("matrix is not Hermitian: ‖H − H†‖_F = {defect:.3e} exceeds {bound:.3e}")]
    NotHermitian { defect: f64, bound: f64 },
    #[error("matrix is singular to tolerance (smallest singular value {sigma_min:.3e})")]
    Singular { sigma_min: f64 },
    #[error("{0} did not converge within its iteration cap")]
    NoConvergence(&'static str),
    #[error("invalid tolerance: rel = {rel}, abs = {abs} (both must lie in (0, 1))")]
    InvalidTolerance { rel: f64, abs: f64 },
}

/// Relative and absolute thresholds for every rank/null-space decision.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    pub rel: f64,
    pub abs: f64,
}

impl Tolerance {
    pub fn new(rel: f64, abs: f64) -> Result<Self, LinalgError> {
        let ok = |x: f64| x > 0.0 && x < 1.0;
        if ok(rel) && ok(abs) {
            Ok(Self { rel, abs })
        } else {
            Err(LinalgError::InvalidTolerance { rel, abs })
        }
    }

    /// Singular values at or below this are treated as zero.
    pub fn threshold(&self, sigma_max: f64) -> f64 {
        self.abs.max(self.rel * sigma_max)
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            rel: 1e-9,
            abs: 1e-12,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tolerance_bounds() {
        assert!(Tolerance::new(1e-9, 1e-12).is_ok());
        assert!(Tolerance::new(0.0, 1e-12).is_err());
        assert!(Tolerance::new(1e-9, 1.0).is_err());
        let t = Tolerance::default();
        assert_eq!(t.threshold(0.0), 1e-12);
        assert_eq!(t.threshold(1e6), 1e-3);
    }
}
