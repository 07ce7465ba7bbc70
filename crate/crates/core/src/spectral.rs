//! `J`-selfadjoint operators: spectra, root subspaces, gap subspaces and
//! spectral projections.

use std::fmt;
use std::sync::{Arc, Mutex};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::indefinite::{projection_along, IndefiniteSpace, Inertia, Subspace};
use crate::linalg::{self, complex_eigen, null_space, ComplexMatrix, Tolerance, CLUSTER_REL};

/// An eigenvalue is real when `|Im λ| ≤ REALNESS_REL · max(1, |λ|)`.
pub const REALNESS_REL: f64 = 1e-6;

/// Real eigenvalues closer than `ENDPOINT_GUARD_REL · max(1, ‖A‖_F)` to a
/// finite interval endpoint make eigenvalue counts ill-posed.
pub const ENDPOINT_GUARD_REL: f64 = 1e-6;

/// Open real interval `(lower, upper)`; either end may be infinite.
///
/// Serialized ends are numbers, or the strings `"-inf"` and `"+inf"`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    #[serde(with = "endpoint")]
    pub lower: f64,
    #[serde(with = "endpoint")]
    pub upper: f64,
}

/// Parses `"-inf"`, `"+inf"`, `"inf"` or a decimal number.
pub fn parse_endpoint(s: &str) -> Option<f64> {
    match s.trim() {
        "-inf" | "-infinity" => Some(f64::NEG_INFINITY),
        "+inf" | "inf" | "+infinity" | "infinity" => Some(f64::INFINITY),
        t => t.parse::<f64>().ok().filter(|x| x.is_finite()),
    }
}

/// Serde adapter for interval ends: numbers, or `"-inf"` / `"+inf"`.
pub mod endpoint {
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Number(f64),
        Literal(String),
    }

    pub fn serialize<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
        if *x == f64::INFINITY {
            s.serialize_str("+inf")
        } else if *x == f64::NEG_INFINITY {
            s.serialize_str("-inf")
        } else {
            s.serialize_f64(*x)
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Number(x) => Ok(x),
            Repr::Literal(t) => super::parse_endpoint(&t)
                .filter(|x| x.is_infinite())
                .ok_or_else(|| {
                    D::Error::custom(format!(
                        "invalid interval endpoint {t:?}, expected a number, \"-inf\" or \"+inf\""
                    ))
                }),
        }
    }
}

impl Interval {
    pub fn new(lower: f64, upper: f64) -> Result<Self> {
        let bad = lower.is_nan()
            || upper.is_nan()
            || lower >= upper
            || lower == f64::INFINITY
            || upper == f64::NEG_INFINITY;
        if bad {
            return Err(Error::InvalidInterval { lower, upper });
        }
        Ok(Self { lower, upper })
    }

    pub fn real_line() -> Self {
        Self {
            lower: f64::NEG_INFINITY,
            upper: f64::INFINITY,
        }
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lower < x && x < self.upper
    }

    pub fn finite_endpoints(&self) -> impl Iterator<Item = f64> {
        [self.lower, self.upper]
            .into_iter()
            .filter(|x| x.is_finite())
    }

    pub fn is_bounded(&self) -> bool {
        self.lower.is_finite() && self.upper.is_finite()
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.lower, self.upper)
    }
}

/// One distinct eigenvalue and its algebraic multiplicity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralPoint {
    pub value: Complex64,
    pub multiplicity: usize,
}

impl SpectralPoint {
    pub fn is_real(&self) -> bool {
        self.value.im == 0.0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    pub entries: Vec<SpectralPoint>,
}

impl Spectrum {
    pub fn total_multiplicity(&self) -> usize {
        self.entries.iter().map(|p| p.multiplicity).sum()
    }

    pub fn real_points(&self) -> impl Iterator<Item = &SpectralPoint> {
        self.entries.iter().filter(|p| p.is_real())
    }

    pub fn non_real_multiplicity(&self) -> usize {
        self.entries
            .iter()
            .filter(|p| !p.is_real())
            .map(|p| p.multiplicity)
            .sum()
    }

    /// Nearest distinct eigenvalue to `z`.
    pub fn nearest(&self, z: Complex64) -> Option<&SpectralPoint> {
        self.entries
            .iter()
            .min_by(|a, b| (a.value - z).norm().total_cmp(&(b.value - z).norm()))
    }

    /// Distance from `z` to the spectrum (infinite for an empty spectrum).
    pub fn distance(&self, z: Complex64) -> f64 {
        self.nearest(z)
            .map_or(f64::INFINITY, |p| (p.value - z).norm())
    }

    /// Whether the multiset is closed under conjugation, with clustering radius `radius`.
    pub fn is_conjugation_symmetric(&self, radius: f64) -> bool {
        self.entries.iter().all(|p| {
            p.is_real()
                || self.entries.iter().any(|q| {
                    q.multiplicity == p.multiplicity && (q.value - p.value.conj()).norm() <= radius
                })
        })
    }
}

/// Where a real eigenvalue sits relative to an open interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Placement {
    Inside,
    Outside,
    /// Numerically indistinguishable from a finite endpoint; not in the open interval.
    OnEndpoint,
}

/// A square matrix `A` with `J A = A† J` on a given [`IndefiniteSpace`].
pub struct PiSelfadjointOperator {
    space: Arc<IndefiniteSpace>,
    matrix: ComplexMatrix,
    spectra: Mutex<Vec<(Tolerance, Spectrum)>>,
}

impl Clone for PiSelfadjointOperator {
    fn clone(&self) -> Self {
        let cached = self.spectra.lock().map(|g| g.clone()).unwrap_or_default();
        Self {
            space: Arc::clone(&self.space),
            matrix: self.matrix.clone(),
            spectra: Mutex::new(cached),
        }
    }
}

impl fmt::Debug for PiSelfadjointOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PiSelfadjointOperator")
            .field("space", &self.space)
            .field("matrix", &self.matrix)
            .finish()
    }
}

impl PiSelfadjointOperator {
    /// Accepts `a` iff `‖J A − A† J‖_F ≤ max(abs, rel · ‖J‖_F · ‖A‖_F)`.
    pub fn new(space: Arc<IndefiniteSpace>, a: ComplexMatrix, tol: &Tolerance) -> Result<Self> {
        if !a.is_square() || a.rows() != space.dim() {
            return Err(Error::DimensionMismatch {
                expected: space.dim(),
                got: if a.rows() != space.dim() {
                    a.rows()
                } else {
                    a.cols()
                },
            });
        }
        if !a.is_finite() {
            return Err(linalg::LinalgError::NonFinite.into());
        }
        let ja = space.gram() * &a;
        let defect = ja.hermitian_defect();
        let bound = tol
            .abs
            .max(tol.rel * space.gram().norm_fro() * a.norm_fro());
        if defect > bound {
            return Err(Error::NotSelfadjoint { defect, bound });
        }
        Ok(Self {
            space,
            matrix: a,
            spectra: Mutex::new(Vec::new()),
        })
    }

    pub fn space(&self) -> &Arc<IndefiniteSpace> {
        &self.space
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    /// `max(1, ‖A‖_F)`, the scale for every eigenvalue-location threshold.
    pub fn scale(&self) -> f64 {
        self.matrix.norm_fro().max(1.0)
    }

    /// Same matrix re-validated on another space (e.g. the flipped one).
    pub fn on_space(&self, space: Arc<IndefiniteSpace>, tol: &Tolerance) -> Result<Self> {
        Self::new(space, self.matrix.clone(), tol)
    }

    /// Clustered eigenvalues with algebraic multiplicities; near-real values are
    /// snapped onto the real axis. Results are memoised per tolerance.
    pub fn spectrum(&self, tol: &Tolerance) -> Result<Spectrum> {
        if let Ok(cache) = self.spectra.lock() {
            if let Some((_, s)) = cache.iter().find(|(t, _)| t == tol) {
                return Ok(s.clone());
            }
        }
        let s = self.compute_spectrum(tol)?;
        if let Ok(mut cache) = self.spectra.lock() {
            if !cache.iter().any(|(t, _)| t == tol) {
                cache.push((*tol, s.clone()));
            }
        }
        Ok(s)
    }

    pub(crate) fn compute_spectrum(&self, tol: &Tolerance) -> Result<Spectrum> {
        let clusters = complex_eigen(&self.matrix, tol)?;
        let mut entries: Vec<SpectralPoint> = clusters
            .into_iter()
            .map(|(z, k)| {
                let value = if z.im.abs() <= REALNESS_REL * z.norm().max(1.0) {
                    Complex64::new(z.re, 0.0)
                } else {
                    z
                };
                SpectralPoint {
                    value,
                    multiplicity: k,
                }
            })
            .collect();
        entries.sort_by(|a, b| {
            a.value
                .re
                .total_cmp(&b.value.re)
                .then(a.value.im.total_cmp(&b.value.im))
        });
        let spectrum = Spectrum { entries };
        let radius = CLUSTER_REL * self.scale();
        if !spectrum.is_conjugation_symmetric(radius) {
            return Err(Error::NumericalDefect(
                "computed spectrum of a J-selfadjoint operator is not closed under conjugation"
                    .into(),
            ));
        }
        Ok(spectrum)
    }

    fn snap_band(&self, tol: &Tolerance) -> f64 {
        tol.abs.max(tol.rel * self.scale())
    }

    fn guard_band(&self) -> f64 {
        ENDPOINT_GUARD_REL * self.scale()
    }

    fn place(&self, x: f64, iv: &Interval, tol: &Tolerance) -> Result<Placement> {
        for e in iv.finite_endpoints() {
            let dist = (x - e).abs();
            if dist <= self.snap_band(tol) {
                return Ok(Placement::OnEndpoint);
            }
            if dist <= self.guard_band() {
                return Err(Error::EndpointInSpectrum {
                    endpoint: e,
                    eigenvalue: Complex64::new(x, 0.0),
                    distance: dist,
                });
            }
        }
        Ok(if iv.contains(x) {
            Placement::Inside
        } else {
            Placement::Outside
        })
    }

    /// Real eigenvalues strictly inside `iv`, with their multiplicities.
    pub fn eigenvalues_in(&self, iv: &Interval, tol: &Tolerance) -> Result<Vec<SpectralPoint>> {
        let spec = self.spectrum(tol)?;
        let mut out = Vec::new();
        for p in spec.real_points() {
            if self.place(p.value.re, iv, tol)? == Placement::Inside {
                out.push(*p);
            }
        }
        Ok(out)
    }

    /// Whether the real number `x` is at least the endpoint guard away from σ(A).
    pub fn in_resolvent_set(&self, x: f64, tol: &Tolerance) -> Result<bool> {
        Ok(self.spectrum(tol)?.distance(Complex64::new(x, 0.0)) > self.guard_band())
    }

    pub(crate) fn require_resolvent_point(&self, x: f64, tol: &Tolerance) -> Result<()> {
        let spec = self.spectrum(tol)?;
        if let Some(p) = spec.nearest(Complex64::new(x, 0.0)) {
            let distance = (p.value - x).norm();
            if distance <= self.guard_band() {
                return Err(Error::EndpointInSpectrum {
                    endpoint: x,
                    eigenvalue: p.value,
                    distance,
                });
            }
        }
        Ok(())
    }

    /// `⋃_k ker (A − λ)^k` for a reported eigenvalue `λ`.
    ///
    /// The kernel is grown one power at a time as `{x : (A − λ)x ∈ N_k}`, so no
    /// explicit matrix power is ever formed.
    pub fn root_subspace(&self, lambda: Complex64, tol: &Tolerance) -> Result<Subspace> {
        let spec = self.spectrum(tol)?;
        let radius = CLUSTER_REL * self.scale();
        let point = match spec.nearest(lambda) {
            Some(p) if (p.value - lambda).norm() <= radius => *p,
            _ => {
                let sv = linalg::singular_values(&self.matrix.shifted(lambda));
                return Err(Error::NotAnEigenvalue {
                    value: lambda,
                    sigma_min: sv.last().copied().unwrap_or(0.0),
                });
            }
        };
        let shifted = self.matrix.shifted(point.value);
        let d = self.dim();
        let mut kernel = null_space(&shifted, tol);
        for _ in 1..d {
            if kernel.cols() >= point.multiplicity {
                break;
            }
            let proj_out = &ComplexMatrix::identity(d) - &(&kernel * &kernel.adjoint());
            let next = null_space(&(&proj_out * &shifted), tol);
            if next.cols() <= kernel.cols() {
                break;
            }
            kernel = next;
        }
        if kernel.cols() != point.multiplicity {
            return Err(Error::NumericalDefect(format!(
                "root subspace at {} has dimension {} but algebraic multiplicity is {}",
                point.value,
                kernel.cols(),
                point.multiplicity
            )));
        }
        Ok(Subspace::from_orthonormal_unchecked(kernel))
    }

    /// `ℒ_Δ(A)`: span of the root subspaces of the real eigenvalues in `iv`.
    pub fn gap_subspace(&self, iv: &Interval, tol: &Tolerance) -> Result<Subspace> {
        let inside = self.eigenvalues_in(iv, tol)?;
        let expected: usize = inside.iter().map(|p| p.multiplicity).sum();
        let d = self.dim();
        let mut cols = ComplexMatrix::zeros(d, 0);
        for p in &inside {
            cols = cols.hstack(self.root_subspace(p.value, tol)?.basis());
        }
        let sub = Subspace::span(&cols, tol);
        if sub.dim() != expected {
            return Err(Error::NumericalDefect(format!(
                "gap subspace has dimension {} but eigenvalue count is {}",
                sub.dim(),
                expected
            )));
        }
        Ok(sub)
    }

    /// `eig(A, Δ)`: real eigenvalues in `iv`, counted with algebraic multiplicity.
    pub fn eig_count(&self, iv: &Interval, tol: &Tolerance) -> Result<usize> {
        Ok(self.gap_subspace(iv, tol)?.dim())
    }

    pub fn gap_inertia(&self, iv: &Interval, tol: &Tolerance) -> Result<Inertia> {
        let sub = self.gap_subspace(iv, tol)?;
        self.space.subspace_inertia(&sub, tol)
    }

    /// `sig ℒ_Δ(A)`.
    pub fn sig_gap(&self, iv: &Interval, tol: &Tolerance) -> Result<i64> {
        Ok(self.gap_inertia(iv, tol)?.signature())
    }

    /// The Riesz projection `E(Δ′)` onto `ℒ_Δ′(A)` along the sum of all other
    /// root subspaces (non-real ones included).
    ///
    /// Both finite endpoints must lie in the resolvent set.
    pub fn spectral_projection(&self, iv: &Interval, tol: &Tolerance) -> Result<ComplexMatrix> {
        let (inside, outside) = self.spectral_split(iv, tol)?;
        projection_along(&inside, &outside, tol)
    }

    /// `(E(Δ′)ℂ^d, (I − E(Δ′))ℂ^d)`.
    pub fn spectral_split(&self, iv: &Interval, tol: &Tolerance) -> Result<(Subspace, Subspace)> {
        for e in iv.finite_endpoints() {
            self.require_resolvent_point(e, tol)?;
        }
        let spec = self.spectrum(tol)?;
        let d = self.dim();
        let mut inside = ComplexMatrix::zeros(d, 0);
        let mut outside = ComplexMatrix::zeros(d, 0);
        for p in &spec.entries {
            let root = self.root_subspace(p.value, tol)?;
            if p.is_real() && iv.contains(p.value.re) {
                inside = inside.hstack(root.basis());
            } else {
                outside = outside.hstack(root.basis());
            }
        }
        let (k_in, k_out) = (inside.cols(), outside.cols());
        let inside = Subspace::span(&inside, tol);
        let outside = Subspace::span(&outside, tol);
        let all = inside.sum(&outside, tol)?;
        if inside.dim() != k_in || outside.dim() != k_out || all.dim() != d {
            return Err(Error::NumericalDefect(format!(
                "root subspaces span only {} of {} dimensions",
                all.dim(),
                d
            )));
        }
        Ok((inside, outside))
    }

    /// Compression of `A` to an `A`-invariant, non-degenerate subspace, as an
    /// operator on `(ℂ^k, B† J B)` where `B` is the subspace's basis.
    pub fn restrict_to_invariant(
        &self,
        sub: &Subspace,
        tol: &Tolerance,
    ) -> Result<PiSelfadjointOperator> {
        let b = sub.basis();
        let compressed = &(&b.adjoint() * &self.matrix) * b;
        let residual = (&(&self.matrix * b) - &(b * &compressed)).norm_fro();
        let bound = 1e3 * tol.rel.max(f64::EPSILON) * self.scale() * (sub.dim().max(1) as f64);
        if residual > bound {
            return Err(Error::Precondition(format!(
                "subspace is not invariant (‖AB − B·B†AB‖_F = {residual:.3e})"
            )));
        }
        let gram = self.space.compressed_gram(sub)?;
        let space = Arc::new(IndefiniteSpace::new(gram, tol)?);
        PiSelfadjointOperator::new(space, compressed, tol)
    }
}
