//! The gap form `⟨x, y⟩ = [(A − a)x, (A − b)y]` and its inertia.
//!
//! For real `a < b` in the resolvent set of a `J`-selfadjoint `A`, the Gram
//! matrix `G = J (A − a)(A − b)` is Hermitian and invertible. Its inertia is
//! `(d − κ, κ, 0)` when no eigenvalue of `A` lies in `[a, b]`, and `(κ, d − κ, 0)`
//! when every eigenvalue is real and inside `(a, b)`. The negative and positive
//! eigenvector spans of `G` give the decompositions `ℳ₋ ∔ ℳ₊`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::indefinite::{Inertia, Subspace, INERTIA_REL};
use crate::linalg::{self, hermitian_eigen, ComplexMatrix, Tolerance};
use crate::spectral::{PiSelfadjointOperator, ENDPOINT_GUARD_REL};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GapCase {
    /// `[a, b] ⊂ ρ(A)`.
    ResolventGap,
    /// `σ(A) ⊂ (a, b)`.
    SpectrumInside,
}

/// The Hermitian form `x ↦ [(A − a)x, (A − b)x]` with its Gram matrix.
#[derive(Debug, Clone)]
pub struct GapForm<'a> {
    pub a: f64,
    pub b: f64,
    gram: ComplexMatrix,
    operator: &'a PiSelfadjointOperator,
}

impl<'a> GapForm<'a> {
    pub fn new(op: &'a PiSelfadjointOperator, a: f64, b: f64, tol: &Tolerance) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(Error::InvalidInterval { lower: a, upper: b });
        }
        op.require_resolvent_point(a, tol)?;
        op.require_resolvent_point(b, tol)?;
        let m = op.matrix();
        let (ma, mb) = (
            m.shifted(Complex64::new(a, 0.0)),
            m.shifted(Complex64::new(b, 0.0)),
        );
        let raw = &(op.space().gram() * &ma) * &mb;
        let bound = 1e2
            * tol
                .abs
                .max(tol.rel * op.space().gram().norm_fro() * ma.norm_fro() * mb.norm_fro());
        let defect = raw.hermitian_defect();
        if defect > bound {
            return Err(Error::NumericalDefect(format!(
                "gap form Gram matrix is not Hermitian (defect {defect:.3e} > {bound:.3e})"
            )));
        }
        Ok(Self {
            a,
            b,
            gram: raw.hermitian_part(),
            operator: op,
        })
    }

    /// `G = J (A − a)(A − b)`, symmetrised.
    pub fn gram(&self) -> &ComplexMatrix {
        &self.gram
    }

    pub fn operator(&self) -> &PiSelfadjointOperator {
        self.operator
    }

    fn zero_band(&self) -> f64 {
        INERTIA_REL * self.gram.norm_fro().max(1.0)
    }

    pub fn inertia(&self, tol: &Tolerance) -> Result<Inertia> {
        Inertia::of_hermitian(&self.gram, self.zero_band(), tol)
    }

    /// `x† G x`.
    pub fn value(&self, x: &[Complex64]) -> f64 {
        linalg::dot(x, &self.gram.mul_vec(x)).re
    }

    /// Inertia of the form restricted to `sub`.
    pub fn restricted_inertia(&self, sub: &Subspace, tol: &Tolerance) -> Result<Inertia> {
        if sub.dim() == 0 {
            return Ok(Inertia::new(0, 0, 0));
        }
        let b = sub.basis();
        let g = &(&b.adjoint() * &self.gram) * b;
        Inertia::of_hermitian(&g, self.zero_band(), tol)
    }

    fn split(&self, tol: &Tolerance) -> Result<(Subspace, Subspace, Inertia)> {
        let eig = hermitian_eigen(&self.gram, tol)?;
        let band = self.zero_band();
        let inertia = Inertia::from_values(&eig.values, band);
        let neg: Vec<usize> = (0..eig.values.len())
            .filter(|&k| eig.values[k] < -band)
            .collect();
        let pos: Vec<usize> = (0..eig.values.len())
            .filter(|&k| eig.values[k] > band)
            .collect();
        Ok((
            Subspace::from_orthonormal_unchecked(eig.vectors.select_columns(&neg)),
            Subspace::from_orthonormal_unchecked(eig.vectors.select_columns(&pos)),
            inertia,
        ))
    }
}

/// `ℂ^d = m_minus ∔ m_plus` with `dim m_minus = κ`.
///
/// In the resolvent-gap case the form is negative on `m_minus` and positive on
/// `m_plus`; in the spectrum-inside case the signs are reversed.
#[derive(Debug, Clone)]
pub struct GapDecomposition {
    pub m_minus: Subspace,
    pub m_plus: Subspace,
    pub case: GapCase,
    pub inertia: Inertia,
}

/// Decomposition for `[a, b] ⊂ ρ(A)`.
pub fn decompose_resolvent_gap(
    op: &PiSelfadjointOperator,
    a: f64,
    b: f64,
    tol: &Tolerance,
) -> Result<GapDecomposition> {
    let guard = ENDPOINT_GUARD_REL * op.scale();
    let spec = op.spectrum(tol)?;
    if let Some(p) = spec
        .real_points()
        .find(|p| p.value.re >= a - guard && p.value.re <= b + guard)
    {
        return Err(Error::Precondition(format!(
            "eigenvalue {} lies in [{a}, {b}]",
            p.value.re
        )));
    }
    let form = GapForm::new(op, a, b, tol)?;
    let (neg, pos, inertia) = form.split(tol)?;
    let d = op.dim();
    let kappa = op.space().kappa();
    if inertia != Inertia::new(d - kappa, kappa, 0) {
        return Err(unexpected(inertia, d - kappa, kappa));
    }
    Ok(GapDecomposition {
        m_minus: neg,
        m_plus: pos,
        case: GapCase::ResolventGap,
        inertia,
    })
}

/// Decomposition for `σ(A) ⊂ (a, b)`, read as: every eigenvalue is real and in `(a, b)`.
pub fn decompose_spectrum_inside(
    op: &PiSelfadjointOperator,
    a: f64,
    b: f64,
    tol: &Tolerance,
) -> Result<GapDecomposition> {
    let guard = ENDPOINT_GUARD_REL * op.scale();
    let spec = op.spectrum(tol)?;
    if let Some(p) = spec
        .entries
        .iter()
        .find(|p| !p.is_real() || p.value.re <= a + guard || p.value.re >= b - guard)
    {
        return Err(Error::Precondition(format!(
            "eigenvalue {} is not real and inside ({a}, {b})",
            p.value
        )));
    }
    let form = GapForm::new(op, a, b, tol)?;
    let (neg, pos, inertia) = form.split(tol)?;
    let d = op.dim();
    let kappa = op.space().kappa();
    if inertia != Inertia::new(kappa, d - kappa, 0) {
        return Err(unexpected(inertia, kappa, d - kappa));
    }
    Ok(GapDecomposition {
        m_minus: pos,
        m_plus: neg,
        case: GapCase::SpectrumInside,
        inertia,
    })
}

fn unexpected(got: Inertia, exp_plus: usize, exp_minus: usize) -> Error {
    Error::UnexpectedInertia {
        plus: got.plus,
        minus: got.minus,
        zero: got.zero,
        exp_plus,
        exp_minus,
    }
}

/// Classical Hilbert-space gap criteria for a Hermitian `T`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HilbertGap {
    /// `(T − a)(T − b) ⪰ 0`, i.e. `(a, b) ⊂ ρ(T)`.
    GapInResolvent,
    /// `(T − a)(T − b) ⪯ 0`, i.e. `σ(T) ⊂ [a, b]`.
    SpectrumInClosure,
    Neither,
}

/// Semidefiniteness test on `(T − a)(T − b)`; when both criteria hold
/// (`σ(T) ⊂ {a, b}`) the resolvent-gap answer is returned.
pub fn hilbert_gap_check(t: &ComplexMatrix, a: f64, b: f64, tol: &Tolerance) -> Result<HilbertGap> {
    if !(a.is_finite() && b.is_finite() && a < b) {
        return Err(Error::InvalidInterval { lower: a, upper: b });
    }
    let scale = t.norm_fro();
    let defect = t.hermitian_defect();
    let bound = tol.abs.max(tol.rel * scale);
    if defect > bound {
        return Err(linalg::LinalgError::NotHermitian { defect, bound }.into());
    }
    let p = &t.shifted(Complex64::new(a, 0.0)) * &t.shifted(Complex64::new(b, 0.0));
    let inertia = Inertia::of_hermitian(
        &p.hermitian_part(),
        INERTIA_REL * p.norm_fro().max(1.0),
        tol,
    )?;
    Ok(if inertia.minus == 0 {
        HilbertGap::GapInResolvent
    } else if inertia.plus == 0 {
        HilbertGap::SpectrumInClosure
    } else {
        HilbertGap::Neither
    })
}
