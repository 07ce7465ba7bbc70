use num_complex::Complex64;
use thiserror::Error;

use crate::linalg::LinalgError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Linalg(#[from] LinalgError),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("Gram matrix is singular: inertia has {zero} zero eigenvalue(s)")]
    DegenerateGram { zero: usize },

    #[error("operator is not J-selfadjoint: ‖JA − A†J‖_F = {defect:.3e} exceeds {bound:.3e}")]
    NotSelfadjoint { defect: f64, bound: f64 },

    #[error("operators live on different spaces (Gram matrices differ)")]
    SpaceMismatch,

    #[error("{value} is not an eigenvalue (σ_min(A − λ) = {sigma_min:.3e})")]
    NotAnEigenvalue { value: Complex64, sigma_min: f64 },

    #[error("eigenvalue {eigenvalue} lies within {distance:.3e} of interval endpoint {endpoint}; the count is ill-posed")]
    EndpointInSpectrum {
        endpoint: f64,
        eigenvalue: Complex64,
        distance: f64,
    },

    #[error("invalid interval ({lower}, {upper})")]
    InvalidInterval { lower: f64, upper: f64 },

    #[error("numerical defect: {0}")]
    NumericalDefect(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("unexpected inertia of the gap form: got (+{plus}, −{minus}, 0×{zero}), expected (+{exp_plus}, −{exp_minus}, 0×0)")]
    UnexpectedInertia {
        plus: usize,
        minus: usize,
        zero: usize,
        exp_plus: usize,
        exp_minus: usize,
    },

    #[error("no admissible subinterval found; candidates tried: {tried:?}")]
    NoAdmissibleSubinterval { tried: Vec<(f64, f64)> },

    #[error("generator exhausted its resample budget: {0}")]
    ResampleBudget(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}
