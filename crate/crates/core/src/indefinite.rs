//! Pontryagin space structure on `ℂ^d`: Gram matrices, subspaces and inertia.
//!
//! Subspace bases are always Euclidean-orthonormal. The indefinite geometry is
//! recomputed through the Gram matrix every time it is needed, which makes
//! inertia a function of the subspace alone (Sylvester's law of inertia).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    self, hermitian_eigen, null_space, orthonormal_range, ComplexMatrix, Tolerance,
};

/// Eigenvalues of a compressed Gram matrix within this factor of
/// `max(1, ‖J‖_F)` count as zero.
pub const INERTIA_REL: f64 = 1e-8;

/// Counts of positive, negative and zero eigenvalues of a Hermitian form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Inertia {
    pub plus: usize,
    pub minus: usize,
    pub zero: usize,
}

impl Inertia {
    pub fn new(plus: usize, minus: usize, zero: usize) -> Self {
        Self { plus, minus, zero }
    }

    /// Inertia of a Hermitian matrix; eigenvalues with `|λ| ≤ zero_band` count as zero.
    pub fn of_hermitian(h: &ComplexMatrix, zero_band: f64, tol: &Tolerance) -> Result<Self> {
        let eig = hermitian_eigen(&h.hermitian_part(), tol)?;
        Ok(Self::from_values(&eig.values, zero_band))
    }

    pub fn from_values(values: &[f64], zero_band: f64) -> Self {
        let mut out = Self::new(0, 0, 0);
        for &v in values {
            if v > zero_band {
                out.plus += 1;
            } else if v < -zero_band {
                out.minus += 1;
            } else {
                out.zero += 1;
            }
        }
        out
    }

    pub fn dim(&self) -> usize {
        self.plus + self.minus + self.zero
    }

    pub fn signature(&self) -> i64 {
        self.plus as i64 - self.minus as i64
    }
}

/// `ℂ^d` with the indefinite product `[x, y] = y† J x`.
#[derive(Debug, Clone, PartialEq)]
pub struct IndefiniteSpace {
    gram: ComplexMatrix,
    kappa_plus: usize,
    kappa_minus: usize,
}

impl IndefiniteSpace {
    /// Validates `J` (square, Hermitian to tolerance, invertible) and records its inertia.
    ///
    /// `κ` in the usual Pontryagin sense is [`Self::kappa_minus`]; no
    /// reorientation to the smaller index is attempted.
    pub fn new(gram: ComplexMatrix, tol: &Tolerance) -> Result<Self> {
        if !gram.is_square() {
            return Err(Error::DimensionMismatch {
                expected: gram.rows(),
                got: gram.cols(),
            });
        }
        if gram.rows() == 0 {
            return Err(Error::Precondition(
                "Gram matrix must have positive dimension".into(),
            ));
        }
        let scale = gram.norm_fro();
        let defect = gram.hermitian_defect();
        let bound = tol.abs.max(tol.rel * scale);
        if defect > bound {
            return Err(linalg::LinalgError::NotHermitian { defect, bound }.into());
        }
        let gram = gram.hermitian_part();
        let inertia = Inertia::of_hermitian(&gram, INERTIA_REL * scale.max(1.0), tol)?;
        if inertia.zero > 0 {
            return Err(Error::DegenerateGram { zero: inertia.zero });
        }
        Ok(Self {
            gram,
            kappa_plus: inertia.plus,
            kappa_minus: inertia.minus,
        })
    }

    pub fn dim(&self) -> usize {
        self.gram.rows()
    }

    pub fn gram(&self) -> &ComplexMatrix {
        &self.gram
    }

    pub fn kappa_plus(&self) -> usize {
        self.kappa_plus
    }

    pub fn kappa_minus(&self) -> usize {
        self.kappa_minus
    }

    /// The number of negative squares of the whole space.
    pub fn kappa(&self) -> usize {
        self.kappa_minus
    }

    pub fn inertia(&self) -> Inertia {
        Inertia::new(self.kappa_plus, self.kappa_minus, 0)
    }

    /// The same vector space with the product `−[·,·]`.
    pub fn flipped(&self) -> Self {
        Self {
            gram: self.gram.scale(num_complex::Complex64::new(-1.0, 0.0)),
            kappa_plus: self.kappa_minus,
            kappa_minus: self.kappa_plus,
        }
    }

    /// `[x, y] = y† J x`.
    pub fn product(
        &self,
        x: &[num_complex::Complex64],
        y: &[num_complex::Complex64],
    ) -> num_complex::Complex64 {
        linalg::dot(y, &self.gram.mul_vec(x))
    }

    pub(crate) fn zero_band(&self) -> f64 {
        INERTIA_REL * self.gram.norm_fro().max(1.0)
    }

    fn check(&self, sub: &Subspace) -> Result<()> {
        if sub.ambient_dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: sub.ambient_dim(),
            });
        }
        Ok(())
    }

    /// `B† J B` for the orthonormal basis `B` of `sub`.
    pub fn compressed_gram(&self, sub: &Subspace) -> Result<ComplexMatrix> {
        self.check(sub)?;
        let b = sub.basis();
        Ok((&(&b.adjoint() * &self.gram) * b).hermitian_part())
    }

    /// Positive, negative and zero squares of the product restricted to `sub`.
    pub fn subspace_inertia(&self, sub: &Subspace, tol: &Tolerance) -> Result<Inertia> {
        let g = self.compressed_gram(sub)?;
        if g.rows() == 0 {
            return Ok(Inertia::new(0, 0, 0));
        }
        Inertia::of_hermitian(&g, self.zero_band(), tol)
    }

    /// `κ₊(sub) − κ₋(sub)`.
    pub fn sig(&self, sub: &Subspace, tol: &Tolerance) -> Result<i64> {
        Ok(self.subspace_inertia(sub, tol)?.signature())
    }

    /// The vectors of `sub` that are `[·,·]`-orthogonal to all of `sub`.
    pub fn isotropic_part(&self, sub: &Subspace, tol: &Tolerance) -> Result<Subspace> {
        let g = self.compressed_gram(sub)?;
        if g.rows() == 0 {
            return Ok(Subspace::zero(self.dim()));
        }
        let eig = hermitian_eigen(&g, tol)?;
        let band = self.zero_band();
        let idx: Vec<usize> = (0..eig.values.len())
            .filter(|&k| eig.values[k].abs() <= band)
            .collect();
        let coords = eig.vectors.select_columns(&idx);
        Ok(Subspace::from_orthonormal_unchecked(sub.basis() * &coords))
    }

    /// Projection onto `sub` along its `[·,·]`-orthogonal companion `sub^[⊥]`.
    ///
    /// Requires `sub` to be non-degenerate.
    pub fn j_orthogonal_projection(
        &self,
        sub: &Subspace,
        tol: &Tolerance,
    ) -> Result<ComplexMatrix> {
        let g = self.compressed_gram(sub)?;
        let b = sub.basis();
        if g.rows() == 0 {
            return Ok(ComplexMatrix::zeros(self.dim(), self.dim()));
        }
        let iso = self.isotropic_part(sub, tol)?;
        if iso.dim() > 0 {
            return Err(Error::Precondition(format!(
                "subspace is degenerate (isotropic part of dimension {})",
                iso.dim()
            )));
        }
        let rhs = &b.adjoint() * &self.gram;
        let coeff = linalg::solve(&g, &rhs, tol)?;
        Ok(b * &coeff)
    }

    /// Projection onto `sub^[⊥]` along `sub`: `I − P_sub`.
    pub fn complement_projection(&self, sub: &Subspace, tol: &Tolerance) -> Result<ComplexMatrix> {
        let p = self.j_orthogonal_projection(sub, tol)?;
        Ok(&ComplexMatrix::identity(self.dim()) - &p)
    }
}

/// A linear subspace of `ℂ^d`, held as an orthonormal basis (possibly empty).
#[derive(Debug, Clone, PartialEq)]
pub struct Subspace {
    basis: ComplexMatrix,
}

impl Subspace {
    pub fn zero(ambient_dim: usize) -> Self {
        Self {
            basis: ComplexMatrix::zeros(ambient_dim, 0),
        }
    }

    pub fn full(ambient_dim: usize) -> Self {
        Self {
            basis: ComplexMatrix::identity(ambient_dim),
        }
    }

    /// Span of the columns of `vectors` (which need not be independent).
    pub fn span(vectors: &ComplexMatrix, tol: &Tolerance) -> Self {
        Self {
            basis: orthonormal_range(vectors, tol),
        }
    }

    /// Wraps a basis that must already be orthonormal to within `10·tol.rel`.
    pub fn from_orthonormal(basis: ComplexMatrix, tol: &Tolerance) -> Result<Self> {
        let k = basis.cols();
        let defect = (&(&basis.adjoint() * &basis) - &ComplexMatrix::identity(k)).norm_fro();
        if defect > 10.0 * tol.rel.max(1e-12) * (k.max(1) as f64) {
            return Err(Error::Precondition(format!(
                "basis is not orthonormal (‖B†B − I‖_F = {defect:.3e})"
            )));
        }
        Ok(Self { basis })
    }

    pub(crate) fn from_orthonormal_unchecked(basis: ComplexMatrix) -> Self {
        Self { basis }
    }

    /// Kernel of `m` as a subspace of `ℂ^{cols(m)}`.
    pub fn kernel(m: &ComplexMatrix, tol: &Tolerance) -> Self {
        Self {
            basis: null_space(m, tol),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn basis(&self) -> &ComplexMatrix {
        &self.basis
    }

    /// Euclidean orthogonal projector onto the subspace, `B B†`.
    pub fn projector(&self) -> ComplexMatrix {
        &self.basis * &self.basis.adjoint()
    }

    /// Euclidean orthogonal projector onto the orthogonal complement, `I − B B†`.
    pub fn complement_projector(&self) -> ComplexMatrix {
        &ComplexMatrix::identity(self.ambient_dim()) - &self.projector()
    }

    fn check_same_ambient(&self, other: &Self) -> Result<()> {
        if self.ambient_dim() != other.ambient_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim(),
                got: other.ambient_dim(),
            });
        }
        Ok(())
    }

    pub fn sum(&self, other: &Self, tol: &Tolerance) -> Result<Self> {
        self.check_same_ambient(other)?;
        Ok(Self::span(&self.basis.hstack(&other.basis), tol))
    }

    /// `self ∩ other`, as the kernel of the stacked complement projectors.
    pub fn intersect(&self, other: &Self, tol: &Tolerance) -> Result<Self> {
        self.check_same_ambient(other)?;
        let stacked = self
            .complement_projector()
            .vstack(&other.complement_projector());
        Ok(Self::kernel(&stacked, tol))
    }

    /// Whether `x` lies in the subspace, up to `tol`.
    pub fn contains(&self, x: &[num_complex::Complex64], tol: &Tolerance) -> bool {
        let r = self.complement_projector().mul_vec(x);
        linalg::vec_norm(&r)
            <= tol
                .threshold(linalg::vec_norm(x))
                .max(1e3 * f64::EPSILON * linalg::vec_norm(x))
    }

    /// Same subspace with its basis multiplied on the right by a unitary.
    pub fn rebased(&self, unitary: &ComplexMatrix) -> Self {
        Self {
            basis: &self.basis * unitary,
        }
    }
}

/// Oblique projection onto `onto` along `along`; the two must be complementary.
pub fn projection_along(
    onto: &Subspace,
    along: &Subspace,
    tol: &Tolerance,
) -> Result<ComplexMatrix> {
    onto.check_same_ambient(along)?;
    let d = onto.ambient_dim();
    if onto.dim() + along.dim() != d {
        return Err(Error::Precondition(format!(
            "subspaces of dimensions {} and {} are not complementary in dimension {}",
            onto.dim(),
            along.dim(),
            d
        )));
    }
    let s = onto.basis().hstack(along.basis());
    let s_inv = linalg::solve(&s, &ComplexMatrix::identity(d), tol)
        .map_err(|e| Error::NumericalDefect(format!("subspaces are not complementary: {e}")))?;
    let k = onto.dim();
    let mut coords = ComplexMatrix::zeros(k, d);
    for i in 0..k {
        for j in 0..d {
            coords[(i, j)] = s_inv[(i, j)];
        }
    }
    Ok(onto.basis() * &coords)
}
