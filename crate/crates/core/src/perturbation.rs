//! Pairs of `J`-selfadjoint operators on one space and their perturbation rank.

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::indefinite::{IndefiniteSpace, Subspace};
use crate::linalg::{self, rank_tol, ComplexMatrix, Tolerance};
use crate::spectral::{PiSelfadjointOperator, ENDPOINT_GUARD_REL};

/// Two operators on the same space with `n = rank(A₁ − A₂)` and the agreement
/// subspace `𝒟 = {x : A₁x = A₂x}`, so that `dim ℂ^d / 𝒟 = n`.
#[derive(Debug, Clone)]
pub struct OperatorPair {
    pub op1: PiSelfadjointOperator,
    pub op2: PiSelfadjointOperator,
    n: usize,
    agreement: Subspace,
}

impl OperatorPair {
    pub fn new(
        op1: PiSelfadjointOperator,
        op2: PiSelfadjointOperator,
        tol: &Tolerance,
    ) -> Result<Self> {
        if !Arc::ptr_eq(op1.space(), op2.space()) && op1.space().gram() != op2.space().gram() {
            return Err(Error::SpaceMismatch);
        }
        let diff = op1.matrix() - op2.matrix();
        let n = rank_tol(&diff, tol);
        let agreement = Subspace::kernel(&diff, tol);
        debug_assert_eq!(n + agreement.dim(), op1.dim());
        Ok(Self {
            op1,
            op2,
            n,
            agreement,
        })
    }

    pub fn space(&self) -> &Arc<IndefiniteSpace> {
        self.op1.space()
    }

    pub fn dim(&self) -> usize {
        self.op1.dim()
    }

    /// Perturbation rank `n`.
    pub fn n(&self) -> usize {
        self.n
    }

    /// `𝒟`, the subspace where both operators agree.
    pub fn agreement(&self) -> &Subspace {
        &self.agreement
    }

    pub fn difference(&self) -> ComplexMatrix {
        self.op1.matrix() - self.op2.matrix()
    }

    /// The same pair with the roles of the operators exchanged.
    pub fn swapped(&self) -> Self {
        Self {
            op1: self.op2.clone(),
            op2: self.op1.clone(),
            n: self.n,
            agreement: self.agreement.clone(),
        }
    }

    /// Both operators re-validated on `(ℂ^d, −J)`.
    pub fn flipped(&self, tol: &Tolerance) -> Result<Self> {
        let space = Arc::new(self.space().flipped());
        let op1 = self.op1.on_space(space.clone(), tol)?;
        let op2 = self.op2.on_space(space, tol)?;
        Ok(Self {
            op1,
            op2,
            n: self.n,
            agreement: self.agreement.clone(),
        })
    }

    fn resolvents(
        &self,
        lambda: Complex64,
        tol: &Tolerance,
    ) -> Result<(ComplexMatrix, ComplexMatrix)> {
        let mut out = Vec::with_capacity(2);
        for op in [&self.op1, &self.op2] {
            let spec = op.spectrum(tol)?;
            let dist = spec.distance(lambda);
            if dist <= ENDPOINT_GUARD_REL * op.scale() {
                let eigenvalue = spec.nearest(lambda).map_or(lambda, |p| p.value);
                return Err(Error::Precondition(format!(
                    "λ = {lambda} is within {dist:.3e} of the spectrum (eigenvalue {eigenvalue})"
                )));
            }
            let id = ComplexMatrix::identity(op.dim());
            out.push(linalg::solve(&op.matrix().shifted(lambda), &id, tol)?);
        }
        let r2 = out.pop().expect("two resolvents");
        let r1 = out.pop().expect("two resolvents");
        Ok((r1, r2))
    }

    /// `rank((A₁ − λ)⁻¹ − (A₂ − λ)⁻¹)` for `λ` in both resolvent sets.
    pub fn resolvent_difference_rank(&self, lambda: Complex64, tol: &Tolerance) -> Result<usize> {
        let (r1, r2) = self.resolvents(lambda, tol)?;
        Ok(rank_tol(&(&r1 - &r2), tol))
    }

    /// `rank((A₁ − λ)⁻¹ (A₂ − A₁) (A₂ − λ)⁻¹)`, the factorised form of the
    /// resolvent difference.
    pub fn factored_resolvent_rank(&self, lambda: Complex64, tol: &Tolerance) -> Result<usize> {
        let (r1, r2) = self.resolvents(lambda, tol)?;
        let middle = self.op2.matrix() - self.op1.matrix();
        Ok(rank_tol(&(&(&r1 * &middle) * &r2), tol))
    }

    /// `count` points on the circle of radius `2·max(‖A₁‖_F, ‖A₂‖_F) + 1`,
    /// which lies outside both spectra.
    pub fn admissible_points(&self, count: usize) -> Vec<Complex64> {
        let radius = 2.0
            * self
                .op1
                .matrix()
                .norm_fro()
                .max(self.op2.matrix().norm_fro())
            + 1.0;
        (0..count)
            .map(|k| {
                let theta = 0.1 + std::f64::consts::TAU * k as f64 / count as f64;
                Complex64::from_polar(radius, theta)
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn example_one(tol: &Tolerance) -> OperatorPair {
        let s = Arc::new(
            IndefiniteSpace::new(ComplexMatrix::from_real_diag(&[1.0, -1.0]), tol).unwrap(),
        );
        let a1 = ComplexMatrix::from_rows(&[
            vec![c(1.0, 0.0), c(0.0, 1.0)],
            vec![c(0.0, 1.0), c(-1.0, 0.0)],
        ])
        .unwrap();
        let a2 = ComplexMatrix::from_real_diag(&[0.5, 1.0]);
        OperatorPair::new(
            PiSelfadjointOperator::new(s.clone(), a1, tol).unwrap(),
            PiSelfadjointOperator::new(s, a2, tol).unwrap(),
            tol,
        )
        .unwrap()
    }

    #[test]
    fn example_one_agreement() {
        let tol = Tolerance::default();
        let p = example_one(&tol);
        assert_eq!(p.n(), 1);
        assert_eq!(p.agreement().dim(), 1);
        assert!(p.agreement().contains(&[c(2.0, 0.0), c(0.0, 1.0)], &tol));
        assert_eq!(p.swapped().n(), 1);
    }

    #[test]
    fn resolvent_ranks() {
        let tol = Tolerance::default();
        let p = example_one(&tol);
        assert_eq!(p.resolvent_difference_rank(c(0.0, 2.0), &tol).unwrap(), 1);
        for z in p.admissible_points(10) {
            assert_eq!(p.resolvent_difference_rank(z, &tol).unwrap(), 1);
            assert_eq!(p.factored_resolvent_rank(z, &tol).unwrap(), 1);
        }
        assert!(p.resolvent_difference_rank(c(0.5, 0.0), &tol).is_err());
    }

    #[test]
    fn identical_operators() {
        let tol = Tolerance::default();
        let p = example_one(&tol);
        let same = OperatorPair::new(p.op2.clone(), p.op2.clone(), &tol).unwrap();
        assert_eq!(same.n(), 0);
        assert_eq!(same.agreement().dim(), 2);
        assert_eq!(
            same.resolvent_difference_rank(c(3.0, 1.0), &tol).unwrap(),
            0
        );
    }

    #[test]
    fn space_mismatch() {
        let tol = Tolerance::default();
        let p = example_one(&tol);
        let other = Arc::new(
            IndefiniteSpace::new(ComplexMatrix::from_real_diag(&[1.0, 1.0]), &tol).unwrap(),
        );
        let op = PiSelfadjointOperator::new(other, ComplexMatrix::identity(2), &tol).unwrap();
        assert!(matches!(
            OperatorPair::new(p.op1.clone(), op, &tol),
            Err(Error::SpaceMismatch)
        ));
    }
}
