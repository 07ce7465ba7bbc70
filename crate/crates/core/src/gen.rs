//! Seeded random instances and the two built-in fixtures.
//!
//! Randomness comes from xoshiro256** seeded through SplitMix64
//! (`Xoshiro256StarStar::seed_from_u64`). Independent streams for the space,
//! the operator and the perturbation are obtained with the generator's
//! `jump()`. Uniform doubles use the top 53 bits of each output and normal
//! deviates use the cosine branch of Box–Muller, so the ensembles can be
//! reproduced from the seed alone in any language.

use std::sync::Arc;

use num_complex::Complex64;
use rand_xoshiro::rand_core::{RngCore, SeedableRng};
use rand_xoshiro::Xoshiro256StarStar;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::indefinite::IndefiniteSpace;
use crate::linalg::{self, rank_tol, ComplexMatrix, Tolerance};
use crate::perturbation::OperatorPair;
use crate::spectral::{Interval, PiSelfadjointOperator, Spectrum};

const RESAMPLE_BUDGET: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PerturbationSigns {
    /// Each `cᵢ` is `±1` from the seeded stream.
    Random,
    /// Every `cᵢ = +1`.
    Positive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenConfig {
    pub dim: usize,
    pub kappa_minus: usize,
    pub pert_rank: usize,
    pub seed: u64,
    /// Floor for eigenvalue separation and for `|Im λ|` of non-real eigenvalues.
    pub min_gap: f64,
    /// Standard deviation of the random matrix entries.
    pub scale: f64,
    /// Use `diag(+1, …, −1, …)` instead of a unitarily rotated signature matrix.
    pub diagonal_gram: bool,
    pub signs: PerturbationSigns,
}

impl GenConfig {
    pub fn new(dim: usize, kappa_minus: usize, pert_rank: usize, seed: u64) -> Self {
        Self {
            dim,
            kappa_minus,
            pert_rank,
            seed,
            min_gap: 1e-3,
            scale: 1.0,
            diagonal_gram: false,
            signs: PerturbationSigns::Random,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.dim == 0 {
            return Err(Error::InvalidConfig("dim must be positive".into()));
        }
        if self.kappa_minus > self.dim || self.pert_rank > self.dim {
            return Err(Error::InvalidConfig(format!(
                "kappa_minus = {} and pert_rank = {} must not exceed dim = {}",
                self.kappa_minus, self.pert_rank, self.dim
            )));
        }
        if !(self.min_gap > 0.0 && self.scale > 0.0) {
            return Err(Error::InvalidConfig(
                "min_gap and scale must be positive".into(),
            ));
        }
        Ok(())
    }

    fn stream(&self, index: usize) -> Stream {
        let mut rng = Xoshiro256StarStar::seed_from_u64(self.seed);
        for _ in 0..index {
            rng.jump();
        }
        Stream { rng }
    }
}

/// Seeded source of uniform, normal and complex normal deviates.
pub struct Stream {
    rng: Xoshiro256StarStar,
}

impl Stream {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: Xoshiro256StarStar::seed_from_u64(seed),
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    /// Uniform on `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn normal(&mut self) -> f64 {
        let u1 = 1.0 - self.uniform();
        let u2 = self.uniform();
        (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
    }

    /// `(x + iy)/√2` with independent standard normals, so `E|z|² = 1`.
    pub fn complex_normal(&mut self) -> Complex64 {
        Complex64::new(self.normal(), self.normal()) * std::f64::consts::FRAC_1_SQRT_2
    }

    pub fn complex_vector(&mut self, n: usize) -> Vec<Complex64> {
        (0..n).map(|_| self.complex_normal()).collect()
    }

    pub fn sign(&mut self) -> f64 {
        if self.next_u64() >> 63 == 0 {
            1.0
        } else {
            -1.0
        }
    }
}

fn random_unitary(stream: &mut Stream, n: usize) -> ComplexMatrix {
    // Modified Gram–Schmidt on complex Gaussian columns.
    let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    while cols.len() < n {
        let mut v = stream.complex_vector(n);
        for _ in 0..2 {
            for q in &cols {
                let p = linalg::dot(q, &v);
                for (vi, qi) in v.iter_mut().zip(q) {
                    *vi -= p * qi;
                }
            }
        }
        let norm = linalg::vec_norm(&v);
        if norm > 1e-8 {
            cols.push(v.into_iter().map(|z| z / norm).collect());
        }
    }
    ComplexMatrix::from_columns(n, &cols)
}

/// `J = U diag(+1 × κ₊, −1 × κ₋) U†` for a seeded unitary `U` (or `U = I`).
pub fn random_space(cfg: &GenConfig) -> Result<IndefiniteSpace> {
    cfg.validate()?;
    let d = cfg.dim;
    let signs: Vec<f64> = (0..d)
        .map(|i| if i < d - cfg.kappa_minus { 1.0 } else { -1.0 })
        .collect();
    let diag = ComplexMatrix::from_real_diag(&signs);
    let gram = if cfg.diagonal_gram {
        diag
    } else {
        let u = random_unitary(&mut cfg.stream(0), d);
        &(&u * &diag) * &u.adjoint()
    };
    IndefiniteSpace::new(gram.hermitian_part(), &Tolerance::default())
}

fn random_hermitian(stream: &mut Stream, n: usize, scale: f64) -> ComplexMatrix {
    let mut h = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        h[(i, i)] = Complex64::new(stream.normal() * scale, 0.0);
        for j in i + 1..n {
            let z = stream.complex_normal() * scale;
            h[(i, j)] = z;
            h[(j, i)] = z.conj();
        }
    }
    h
}

/// Simple eigenvalues pairwise at least `min_gap` apart, and non-real ones at
/// least `min_gap` off the real axis.
pub fn well_separated(spec: &Spectrum, dim: usize, min_gap: f64) -> bool {
    if spec.entries.len() != dim || spec.entries.iter().any(|p| p.multiplicity != 1) {
        return false;
    }
    let values: Vec<Complex64> = spec.entries.iter().map(|p| p.value).collect();
    let off_axis = values.iter().all(|z| z.im == 0.0 || z.im.abs() >= min_gap);
    let apart = values
        .iter()
        .enumerate()
        .all(|(i, a)| values[i + 1..].iter().all(|b| (a - b).norm() >= min_gap));
    off_axis && apart
}

fn operator_from_stream(
    space: &Arc<IndefiniteSpace>,
    cfg: &GenConfig,
    stream: &mut Stream,
) -> Result<PiSelfadjointOperator> {
    let tol = Tolerance::default();
    for _ in 0..RESAMPLE_BUDGET {
        let h = random_hermitian(stream, cfg.dim, cfg.scale);
        let a = linalg::solve(space.gram(), &h, &tol)?;
        let op = PiSelfadjointOperator::new(space.clone(), a, &tol)?;
        if well_separated(&op.spectrum(&tol)?, cfg.dim, cfg.min_gap * cfg.scale) {
            return Ok(op);
        }
    }
    Err(Error::ResampleBudget(format!(
        "no well-separated operator after {RESAMPLE_BUDGET} attempts"
    )))
}

/// `A = J⁻¹ H` for a seeded Hermitian `H`, so `J A = H` is Hermitian.
pub fn random_operator(
    space: &Arc<IndefiniteSpace>,
    cfg: &GenConfig,
) -> Result<PiSelfadjointOperator> {
    cfg.validate()?;
    operator_from_stream(space, cfg, &mut cfg.stream(1))
}

/// `A₂ = A₁ + J⁻¹ Σᵢ cᵢ vᵢ vᵢ†` with `n = cfg.pert_rank` random vectors.
pub fn random_pair(space: &Arc<IndefiniteSpace>, cfg: &GenConfig) -> Result<OperatorPair> {
    cfg.validate()?;
    let tol = Tolerance::default();
    let op1 = random_operator(space, cfg)?;
    let mut stream = cfg.stream(2);
    let d = cfg.dim;
    for _ in 0..RESAMPLE_BUDGET {
        let mut p = ComplexMatrix::zeros(d, d);
        for _ in 0..cfg.pert_rank {
            let c = match cfg.signs {
                PerturbationSigns::Random => stream.sign(),
                PerturbationSigns::Positive => 1.0,
            };
            let v = stream.complex_vector(d);
            for i in 0..d {
                for j in 0..d {
                    p[(i, j)] += v[i] * v[j].conj() * (c * cfg.scale);
                }
            }
        }
        let delta = linalg::solve(space.gram(), &p, &tol)?;
        if rank_tol(&delta, &tol) != cfg.pert_rank {
            continue;
        }
        let op2 = PiSelfadjointOperator::new(space.clone(), op1.matrix() + &delta, &tol)?;
        if !well_separated(&op2.spectrum(&tol)?, d, cfg.min_gap * cfg.scale) {
            continue;
        }
        let pair = OperatorPair::new(op1.clone(), op2, &tol)?;
        if pair.n() == cfg.pert_rank {
            return Ok(pair);
        }
    }
    Err(Error::ResampleBudget(format!(
        "no admissible rank-{} perturbation after {RESAMPLE_BUDGET} attempts",
        cfg.pert_rank
    )))
}

/// A `J`-selfadjoint operator whose spectrum is real and simple, with every
/// eigenvalue inside `(−scale, scale)`.
///
/// Built as `A = S⁻¹ D S` on `J = S† J₀ S`, where `J₀ = diag(±1)`, `D` is a
/// real diagonal and `S` is a seeded, reasonably conditioned matrix.
pub fn random_real_spectrum_operator(cfg: &GenConfig) -> Result<PiSelfadjointOperator> {
    cfg.validate()?;
    let tol = Tolerance::default();
    let d = cfg.dim;
    let mut stream = cfg.stream(3);
    let signs: Vec<f64> = (0..d)
        .map(|i| if i < d - cfg.kappa_minus { 1.0 } else { -1.0 })
        .collect();
    let j0 = ComplexMatrix::from_real_diag(&signs);
    for _ in 0..RESAMPLE_BUDGET {
        let values: Vec<f64> = (0..d)
            .map(|_| cfg.scale * (2.0 * stream.uniform() - 1.0) * 0.9)
            .collect();
        let apart = values.iter().enumerate().all(|(i, a)| {
            values[i + 1..]
                .iter()
                .all(|b| (a - b).abs() >= cfg.min_gap * cfg.scale)
        });
        let cols: Vec<Vec<Complex64>> = (0..d).map(|_| stream.complex_vector(d)).collect();
        let s = ComplexMatrix::from_columns(d, &cols);
        let sv = linalg::singular_values(&s);
        if !apart || sv[d - 1] < 1e-2 * sv[0] {
            continue;
        }
        let gram = (&(&s.adjoint() * &j0) * &s).hermitian_part();
        let space = Arc::new(IndefiniteSpace::new(gram, &tol)?);
        let ds = &ComplexMatrix::from_real_diag(&values) * &s;
        let a = linalg::solve(&s, &ds, &tol)?;
        let op = PiSelfadjointOperator::new(space, a, &tol)?;
        let spec = op.spectrum(&tol)?;
        if well_separated(&spec, d, cfg.min_gap * cfg.scale)
            && spec.entries.iter().all(|p| p.is_real())
        {
            return Ok(op);
        }
    }
    Err(Error::ResampleBudget(format!(
        "no well-conditioned real-spectrum operator after {RESAMPLE_BUDGET} attempts"
    )))
}

/// Space and pair in one call.
pub fn random_instance(cfg: &GenConfig) -> Result<OperatorPair> {
    let space = Arc::new(random_space(cfg)?);
    random_pair(&space, cfg)
}

/// The real line, a bounded interval and two half-lines, with every finite
/// endpoint at least `2% · max(1, ‖A₁‖_F, ‖A₂‖_F)` away from both spectra.
pub fn sample_intervals(pair: &OperatorPair, seed: u64) -> Result<Vec<Interval>> {
    let tol = Tolerance::default();
    let mut stream = Stream::new(seed ^ 0x5DEE_CE66_D1CE_4E5B);
    let s1 = pair.op1.spectrum(&tol)?;
    let s2 = pair.op2.spectrum(&tol)?;
    let all: Vec<Complex64> = s1
        .entries
        .iter()
        .chain(&s2.entries)
        .map(|p| p.value)
        .collect();
    let scale = pair.op1.scale().max(pair.op2.scale());
    let clearance = 0.02 * scale;
    let lo = all.iter().map(|z| z.re).fold(f64::INFINITY, f64::min) - 1.0;
    let hi = all.iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max) + 1.0;
    let dist = |x: f64| {
        all.iter()
            .map(|z| (z - x).norm())
            .fold(f64::INFINITY, f64::min)
    };

    let point = |stream: &mut Stream| -> Option<f64> {
        (0..400)
            .map(|_| lo + (hi - lo) * stream.uniform())
            .find(|&x| dist(x) >= clearance)
    };
    let mut out = vec![Interval::real_line()];
    if let (Some(x), Some(y)) = (point(&mut stream), point(&mut stream)) {
        if (x - y).abs() > 0.0 {
            out.push(Interval::new(x.min(y), x.max(y))?);
        }
    }
    if let Some(x) = point(&mut stream) {
        out.push(Interval::new(x, f64::INFINITY)?);
    }
    if let Some(x) = point(&mut stream) {
        out.push(Interval::new(f64::NEG_INFINITY, x)?);
    }
    Ok(out)
}

/// Counts a fixture is expected to reproduce.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpectedCounts {
    pub n: usize,
    pub kappa: usize,
    pub eig1: usize,
    pub eig2: usize,
    pub slack: i64,
}

#[derive(Debug, Clone)]
pub struct Fixture {
    pub name: &'static str,
    pub gram: ComplexMatrix,
    pub a1: ComplexMatrix,
    pub a2: ComplexMatrix,
    pub interval: Interval,
    pub expected: ExpectedCounts,
}

impl Fixture {
    pub fn pair(&self, tol: &Tolerance) -> Result<OperatorPair> {
        let space = Arc::new(IndefiniteSpace::new(self.gram.clone(), tol)?);
        let op1 = PiSelfadjointOperator::new(space.clone(), self.a1.clone(), tol)?;
        let op2 = PiSelfadjointOperator::new(space, self.a2.clone(), tol)?;
        OperatorPair::new(op1, op2, tol)
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// The two-dimensional `Π₁` counterexample to the Hilbert-space bound and the
/// three-dimensional instance where `n + 2κ` is attained.
pub fn builtin_fixtures() -> Vec<Fixture> {
    let example1 = Fixture {
        name: "example1",
        gram: ComplexMatrix::from_real_diag(&[1.0, -1.0]),
        a1: ComplexMatrix::from_rows(&[
            vec![c(1.0, 0.0), c(0.0, 1.0)],
            vec![c(0.0, 1.0), c(-1.0, 0.0)],
        ])
        .expect("fixture matrix"),
        a2: ComplexMatrix::from_real_diag(&[0.5, 1.0]),
        interval: Interval {
            lower: 0.25,
            upper: 2.0,
        },
        expected: ExpectedCounts {
            n: 1,
            kappa: 1,
            eig1: 0,
            eig2: 2,
            slack: 1,
        },
    };
    let example3 = Fixture {
        name: "example3",
        gram: ComplexMatrix::from_real_diag(&[-1.0, 1.0, 1.0]),
        a1: ComplexMatrix::from_rows(&[
            vec![c(0.0, 0.0), c(0.0, 100.0), c(0.0, 0.0)],
            vec![c(0.0, 100.0), c(0.0, 0.0), c(0.0, 0.0)],
            vec![c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)],
        ])
        .expect("fixture matrix"),
        a2: ComplexMatrix::from_rows(&[
            vec![c(0.0, 0.0), c(0.0, 100.0), c(0.0, 0.0)],
            vec![c(0.0, 100.0), c(400.0, 0.0), c(20.0, 0.0)],
            vec![c(0.0, 0.0), c(20.0, 0.0), c(1.0, 0.0)],
        ])
        .expect("fixture matrix"),
        interval: Interval {
            lower: 0.0,
            upper: f64::INFINITY,
        },
        expected: ExpectedCounts {
            n: 1,
            kappa: 1,
            eig1: 0,
            eig2: 3,
            slack: 0,
        },
    };
    vec![example1, example3]
}

pub fn fixture(name: &str) -> Option<Fixture> {
    builtin_fixtures().into_iter().find(|f| f.name == name)
}
