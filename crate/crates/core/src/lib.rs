//! Eigenvalue counts in spectral gaps of selfadjoint matrices on
//! finite-dimensional Pontryagin spaces.
//!
//! A Pontryagin space here is `ℂ^d` with the indefinite product
//! `[x, y] = y† J x` for a Hermitian invertible Gram matrix `J` with `κ`
//! negative eigenvalues. For two `J`-selfadjoint matrices whose difference has
//! rank `n` and an open interval `Δ`, the crate computes the gap subspaces
//! `ℒ_Δ(A_j)`, their signatures and dimensions, and checks
//!
//! * `|sig ℒ_Δ(A₂) − sig ℒ_Δ(A₁)| ≤ n`
//! * `|eig(A₁, Δ) − eig(A₂, Δ)| ≤ n + 2κ`
//!
//! together with the intermediate objects of the counting argument behind
//! them (see [`theorem::proof_witness`]).

pub mod error;
pub mod gapform;
pub mod gen;
pub mod indefinite;
pub mod linalg;
pub mod perturbation;
pub mod spectral;
pub mod theorem;

pub use error::{Error, Result};
pub use gapform::{GapCase, GapDecomposition, GapForm, HilbertGap};
pub use indefinite::{IndefiniteSpace, Inertia, Subspace};
pub use linalg::{ComplexMatrix, Tolerance};
pub use perturbation::OperatorPair;
pub use spectral::{Interval, PiSelfadjointOperator, Spectrum};
pub use theorem::{GapReport, WitnessReport};

pub use num_complex::Complex64;
