//! Gap eigenvalue bounds for a pair of `J`-selfadjoint operators and a
//! computational replay of the counting argument that proves them.
//!
//! For an interval `Δ` and `n = rank(A₁ − A₂)` on a space with `κ` negative
//! squares, [`verify_main_theorem`] evaluates
//!
//! * `|sig ℒ_Δ(A₂) − sig ℒ_Δ(A₁)| ≤ n`,
//! * `|eig(A₁, Δ) − eig(A₂, Δ)| ≤ n + 2κ`,
//! * the equal-negative-index refinement `|eig(A₁, Δ) − eig(A₂, Δ)| ≤ n`,
//! * the finite-dimensional bound `n + 2·min(κ₊, κ₋)`.
//!
//! [`proof_witness`] materialises the subspaces of the argument: the gap-form
//! decompositions of `E_j(Δ′)ℂ^d` and `(I − E_j(Δ′))ℂ^d`, the projection `Q₁`,
//! and `𝒦 = (ℳ²₋,out ∔ ℳ²₊,in) ∩ 𝒟`, then checks that `Q₁` is injective on
//! `𝒦` and that `dim 𝒦` sits between the two bounds of the argument.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gapform::{
    decompose_resolvent_gap, decompose_spectrum_inside, GapDecomposition, GapForm,
};
use crate::indefinite::{projection_along, Inertia, Subspace};
use crate::linalg::{rank_tol, Tolerance, CLUSTER_REL};
use crate::perturbation::OperatorPair;
use crate::spectral::{Interval, PiSelfadjointOperator};

/// All bound quantities for one pair and one interval.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapReport {
    pub interval: Interval,
    pub n: usize,
    pub kappa: usize,
    pub kappa_plus: usize,
    pub eig1: usize,
    pub eig2: usize,
    pub sig1: i64,
    pub sig2: i64,
    pub inertia1: Inertia,
    pub inertia2: Inertia,
    pub sig_bound_holds: bool,
    pub eig_bound_holds: bool,
    /// Both gap subspaces have the same number of negative squares.
    pub cor1_applicable: bool,
    /// Both gap subspaces are positive definite.
    pub cor1_positive_type: bool,
    /// `|eig1 − eig2| ≤ n` whenever `cor1_applicable`.
    pub cor1_holds: bool,
    pub cor2_bound: usize,
    pub cor2_holds: bool,
    /// `n + 2κ − |eig1 − eig2|`.
    pub slack: i64,
}

impl GapReport {
    pub fn eig_diff(&self) -> usize {
        self.eig1.abs_diff(self.eig2)
    }

    pub fn all_hold(&self) -> bool {
        self.sig_bound_holds && self.eig_bound_holds && self.cor1_holds && self.cor2_holds
    }
}

pub fn verify_main_theorem(
    pair: &OperatorPair,
    interval: &Interval,
    tol: &Tolerance,
) -> Result<GapReport> {
    let space = pair.space();
    let n = pair.n();
    let kappa = space.kappa_minus();
    let kappa_plus = space.kappa_plus();
    let inertia1 = pair.op1.gap_inertia(interval, tol)?;
    let inertia2 = pair.op2.gap_inertia(interval, tol)?;
    let (eig1, eig2) = (inertia1.dim(), inertia2.dim());
    let (sig1, sig2) = (inertia1.signature(), inertia2.signature());
    let diff = eig1.abs_diff(eig2);

    let cor1_applicable = inertia1.minus == inertia2.minus;
    let cor1_positive_type =
        inertia1.minus == 0 && inertia1.zero == 0 && inertia2.minus == 0 && inertia2.zero == 0;
    let cor2_bound = n + 2 * kappa.min(kappa_plus);

    Ok(GapReport {
        interval: *interval,
        n,
        kappa,
        kappa_plus,
        eig1,
        eig2,
        sig1,
        sig2,
        inertia1,
        inertia2,
        sig_bound_holds: (sig2 - sig1).unsigned_abs() as usize <= n,
        eig_bound_holds: diff <= n + 2 * kappa,
        cor1_applicable,
        cor1_positive_type,
        cor1_holds: !cor1_applicable || diff <= n,
        cor2_bound,
        cor2_holds: diff <= cor2_bound,
        slack: (n + 2 * kappa) as i64 - diff as i64,
    })
}

const GRID: usize = 257;

/// Chooses `Δ′ = (a, b)` with `[a, b] ⊂ Δ`, containing every eigenvalue of
/// `A₁` in `Δ`, and with both endpoints at least `10³` clustering radii away
/// from both spectra.
///
/// The eigenvalues of `A₂` in `Δ` are enclosed as well when possible, so that
/// `Δ′` and `Δ` see the same counts. Endpoints are picked from a fixed grid by
/// maximal distance to the spectra; infinite ends of `Δ` are replaced by a
/// finite point beyond every eigenvalue.
pub fn choose_delta_prime(
    pair: &OperatorPair,
    delta: &Interval,
    tol: &Tolerance,
) -> Result<Interval> {
    let scale = pair.op1.scale().max(pair.op2.scale());
    let margin = 1e3 * CLUSTER_REL * scale;
    let spec1 = pair.op1.spectrum(tol)?;
    let spec2 = pair.op2.spectrum(tol)?;
    let all: Vec<num_complex::Complex64> = spec1
        .entries
        .iter()
        .chain(spec2.entries.iter())
        .map(|p| p.value)
        .collect();
    let dist = |x: f64| {
        all.iter()
            .map(|z| (z - num_complex::Complex64::new(x, 0.0)).norm())
            .fold(f64::INFINITY, f64::min)
    };

    let in1: Vec<f64> = pair
        .op1
        .eigenvalues_in(delta, tol)?
        .iter()
        .map(|p| p.value.re)
        .collect();
    let in2: Vec<f64> = pair
        .op2
        .eigenvalues_in(delta, tol)?
        .iter()
        .map(|p| p.value.re)
        .collect();

    // Finite stand-ins for infinite ends, beyond every eigenvalue's real part.
    let reach = 2.0 * margin.max(1.0);
    let lo_all = all.iter().map(|z| z.re).fold(f64::INFINITY, f64::min);
    let hi_all = all.iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max);
    let lower = if delta.lower.is_finite() {
        delta.lower
    } else {
        lo_all.min(delta.upper).min(0.0) - reach
    };
    let upper = if delta.upper.is_finite() {
        delta.upper
    } else {
        hi_all.max(delta.lower).max(0.0) + reach
    };

    let best_in = |lo: f64, hi: f64| -> Option<f64> {
        if lo.partial_cmp(&hi) != Some(std::cmp::Ordering::Less) {
            return None;
        }
        (1..=GRID)
            .map(|k| lo + (hi - lo) * k as f64 / (GRID + 1) as f64)
            .filter(|&x| lo < x && x < hi)
            .max_by(|&x, &y| dist(x).total_cmp(&dist(y)).then(y.total_cmp(&x)))
    };

    let mut tried = Vec::new();
    let mut include_sets: Vec<Vec<f64>> = vec![in1.iter().chain(&in2).copied().collect()];
    if !in2.is_empty() {
        include_sets.push(in1.clone());
    }
    for include in include_sets {
        let (a, b) = if include.is_empty() {
            let a = best_in(lower, upper);
            let b = a.and_then(|a| best_in(a, upper));
            (a, b)
        } else {
            let lo_t = include.iter().copied().fold(f64::INFINITY, f64::min);
            let hi_t = include.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            (best_in(lower, lo_t), best_in(hi_t, upper))
        };
        let (Some(a), Some(b)) = (a, b) else {
            continue;
        };
        tried.push((a, b));
        let ok = a < b
            && delta.lower < a
            && b < delta.upper
            && in1.iter().all(|&x| a < x && x < b)
            && dist(a) >= margin
            && dist(b) >= margin;
        if ok {
            return Interval::new(a, b);
        }
    }
    Err(Error::NoAdmissibleSubinterval { tried })
}

/// Dimensions and checks from replaying the counting argument on one pair.
///
/// Array fields are indexed by operator: `[A₁, A₂]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessReport {
    pub delta: Interval,
    pub delta_prime: Interval,
    pub n: usize,
    pub kappa: usize,
    pub dim_m_minus_out: [usize; 2],
    pub dim_m_plus_out: [usize; 2],
    pub dim_m_minus_in: [usize; 2],
    pub dim_m_plus_in: [usize; 2],
    /// Inertia of `E_j(Δ′)ℂ^d`.
    pub inertia_inside: [Inertia; 2],
    /// Inertia of `(I − E_j(Δ′))ℂ^d`.
    pub inertia_outside: [Inertia; 2],
    pub dim_agreement: usize,
    pub dim_k: usize,
    pub rank_q1_on_k: usize,
    pub q1_injective_on_k: bool,
    /// `κ₋((I − E₂)ℂ^d) + κ₊(E₂ℂ^d) − n`.
    pub lower_bound: i64,
    /// `κ₋((I − E₁)ℂ^d) + κ₊(E₁ℂ^d)`.
    pub upper_bound: usize,
    pub lower_bound_ok: bool,
    pub upper_bound_ok: bool,
    /// `dim 𝒦 = dim(ℳ²₋,out ∔ ℳ²₊,in) + dim 𝒟 − dim(their sum)`.
    pub dim_formula_ok: bool,
    /// The gap forms are definite with the expected sign on every piece.
    pub sign_certificates_ok: bool,
    /// `κ±(E_jℂ^d) + κ±((I − E_j)ℂ^d) = κ±(ℂ^d)`.
    pub inertia_additivity_ok: bool,
    pub eig_prime: [usize; 2],
    pub eig_delta: [usize; 2],
    pub sig_prime: [i64; 2],
    /// `sig ℒ_Δ′(A₂) − sig ℒ_Δ′(A₁) ≤ n`.
    pub sig_chain_ok: bool,
    /// `eig(A₂, Δ′) ≤ n + 2κ + eig(A₁, Δ)`.
    pub eig_chain_ok: bool,
}

impl WitnessReport {
    pub fn all_ok(&self) -> bool {
        self.q1_injective_on_k
            && self.lower_bound_ok
            && self.upper_bound_ok
            && self.dim_formula_ok
            && self.sign_certificates_ok
            && self.inertia_additivity_ok
            && self.sig_chain_ok
            && self.eig_chain_ok
    }
}

/// Gap-form decomposition pieces of one operator, as subspaces of `ℂ^d`.
struct Pieces {
    m_minus_out: Subspace,
    m_plus_out: Subspace,
    m_minus_in: Subspace,
    m_plus_in: Subspace,
    inertia_inside: Inertia,
    inertia_outside: Inertia,
}

fn lift(block: &Subspace, dec: &GapDecomposition) -> (Subspace, Subspace) {
    let b = block.basis();
    (
        Subspace::from_orthonormal_unchecked(b * dec.m_minus.basis()),
        Subspace::from_orthonormal_unchecked(b * dec.m_plus.basis()),
    )
}

fn decompose_blocks(op: &PiSelfadjointOperator, dp: &Interval, tol: &Tolerance) -> Result<Pieces> {
    let d = op.dim();
    let space = op.space();
    let (inside, outside) = op.spectral_split(dp, tol)?;
    let inertia_inside = space.subspace_inertia(&inside, tol)?;
    let inertia_outside = space.subspace_inertia(&outside, tol)?;

    let (m_minus_in, m_plus_in) = if inside.dim() == 0 {
        (Subspace::zero(d), Subspace::zero(d))
    } else {
        let restricted = op.restrict_to_invariant(&inside, tol)?;
        let dec = decompose_spectrum_inside(&restricted, dp.lower, dp.upper, tol)?;
        lift(&inside, &dec)
    };
    let (m_minus_out, m_plus_out) = if outside.dim() == 0 {
        (Subspace::zero(d), Subspace::zero(d))
    } else {
        let restricted = op.restrict_to_invariant(&outside, tol)?;
        let dec = decompose_resolvent_gap(&restricted, dp.lower, dp.upper, tol)?;
        lift(&outside, &dec)
    };
    if m_minus_out.dim() != inertia_outside.minus || m_minus_in.dim() != inertia_inside.minus {
        return Err(Error::NumericalDefect(
            "gap-form decomposition dimensions disagree with spectral subspace inertia".into(),
        ));
    }
    Ok(Pieces {
        m_minus_out,
        m_plus_out,
        m_minus_in,
        m_plus_in,
        inertia_inside,
        inertia_outside,
    })
}

fn definite(form: &GapForm<'_>, sub: &Subspace, negative: bool, tol: &Tolerance) -> Result<bool> {
    let i = form.restricted_inertia(sub, tol)?;
    Ok(i.zero == 0 && if negative { i.plus == 0 } else { i.minus == 0 })
}

pub fn proof_witness(
    pair: &OperatorPair,
    delta: &Interval,
    tol: &Tolerance,
) -> Result<WitnessReport> {
    let dp = choose_delta_prime(pair, delta, tol)?;
    let space = pair.space();
    let n = pair.n();
    let kappa = space.kappa_minus();
    let p1 = decompose_blocks(&pair.op1, &dp, tol)?;
    let p2 = decompose_blocks(&pair.op2, &dp, tol)?;

    // Where the gap form is negative (resp. positive) for each operator.
    let neg1 = p1.m_minus_out.sum(&p1.m_plus_in, tol)?;
    let pos1 = p1.m_plus_out.sum(&p1.m_minus_in, tol)?;
    let neg2 = p2.m_minus_out.sum(&p2.m_plus_in, tol)?;
    let pos2 = p2.m_plus_out.sum(&p2.m_minus_in, tol)?;

    let form1 = GapForm::new(&pair.op1, dp.lower, dp.upper, tol)?;
    let form2 = GapForm::new(&pair.op2, dp.lower, dp.upper, tol)?;
    let sign_certificates_ok = definite(&form1, &neg1, true, tol)?
        && definite(&form1, &pos1, false, tol)?
        && definite(&form2, &neg2, true, tol)?
        && definite(&form2, &pos2, false, tol)?;

    let q1 = projection_along(&neg1, &pos1, tol)?;
    let k = neg2.intersect(pair.agreement(), tol)?;
    let rank_q1_on_k = if k.dim() == 0 {
        0
    } else {
        rank_tol(&(&q1 * k.basis()), tol)
    };
    let dim_k = k.dim();

    let upper_bound = p1.m_minus_out.dim() + p1.m_plus_in.dim();
    let lower_bound = (p2.m_minus_out.dim() + p2.m_plus_in.dim()) as i64 - n as i64;
    let joint = neg2.sum(pair.agreement(), tol)?;
    let dim_formula_ok = dim_k + joint.dim() == neg2.dim() + pair.agreement().dim();

    let additivity = |p: &Pieces| {
        p.inertia_inside.plus + p.inertia_outside.plus == space.kappa_plus()
            && p.inertia_inside.minus + p.inertia_outside.minus == space.kappa_minus()
            && p.inertia_inside.zero == 0
            && p.inertia_outside.zero == 0
    };

    let eig_prime = [p1.inertia_inside.dim(), p2.inertia_inside.dim()];
    let sig_prime = [p1.inertia_inside.signature(), p2.inertia_inside.signature()];
    let eig_delta = [
        pair.op1.eig_count(delta, tol)?,
        pair.op2.eig_count(delta, tol)?,
    ];

    Ok(WitnessReport {
        delta: *delta,
        delta_prime: dp,
        n,
        kappa,
        dim_m_minus_out: [p1.m_minus_out.dim(), p2.m_minus_out.dim()],
        dim_m_plus_out: [p1.m_plus_out.dim(), p2.m_plus_out.dim()],
        dim_m_minus_in: [p1.m_minus_in.dim(), p2.m_minus_in.dim()],
        dim_m_plus_in: [p1.m_plus_in.dim(), p2.m_plus_in.dim()],
        inertia_inside: [p1.inertia_inside, p2.inertia_inside],
        inertia_outside: [p1.inertia_outside, p2.inertia_outside],
        dim_agreement: pair.agreement().dim(),
        dim_k,
        rank_q1_on_k,
        q1_injective_on_k: rank_q1_on_k == dim_k,
        lower_bound,
        upper_bound,
        lower_bound_ok: dim_k as i64 >= lower_bound,
        upper_bound_ok: dim_k <= upper_bound,
        dim_formula_ok,
        sign_certificates_ok,
        inertia_additivity_ok: additivity(&p1) && additivity(&p2),
        eig_prime,
        eig_delta,
        sig_prime,
        sig_chain_ok: sig_prime[1] - sig_prime[0] <= n as i64,
        eig_chain_ok: eig_prime[1] <= n + 2 * kappa + eig_delta[0],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::{fixture, random_instance, sample_intervals, GenConfig};

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    #[test]
    fn example_one_report() {
        let f = fixture("example1").unwrap();
        let pair = f.pair(&tol()).unwrap();
        let r = verify_main_theorem(&pair, &f.interval, &tol()).unwrap();
        assert_eq!((r.n, r.kappa, r.eig1, r.eig2), (1, 1, 0, 2));
        assert_eq!((r.sig1, r.sig2), (0, 0));
        assert_eq!(r.inertia2, Inertia::new(1, 1, 0));
        assert_eq!(r.slack, 1);
        assert!(!r.cor1_applicable);
        assert_eq!(r.cor2_bound, 3);
        assert!(r.all_hold());
    }

    #[test]
    fn example_three_attains_the_bound() {
        let f = fixture("example3").unwrap();
        let pair = f.pair(&tol()).unwrap();
        let r = verify_main_theorem(&pair, &f.interval, &tol()).unwrap();
        assert_eq!(
            (r.n, r.kappa, r.kappa_plus, r.eig1, r.eig2),
            (1, 1, 2, 0, 3)
        );
        assert_eq!((r.sig1, r.sig2), (0, 1));
        assert_eq!(r.slack, 0);
        assert!(r.all_hold());
    }

    #[test]
    fn witnesses_on_fixtures() {
        for f in crate::gen::builtin_fixtures() {
            let pair = f.pair(&tol()).unwrap();
            let w = proof_witness(&pair, &f.interval, &tol()).unwrap();
            assert!(w.all_ok(), "{}: {w:?}", f.name);
            assert!(
                f.interval.lower < w.delta_prime.lower && w.delta_prime.upper < f.interval.upper
            );
            assert_eq!(w.eig_prime, [f.expected.eig1, f.expected.eig2]);
            assert_eq!(w.dim_agreement, pair.dim() - pair.n());
        }
    }

    #[test]
    fn example_three_delta_prime_separates_zero() {
        let f = fixture("example3").unwrap();
        let pair = f.pair(&tol()).unwrap();
        let dp = choose_delta_prime(&pair, &f.interval, &tol()).unwrap();
        assert!(dp.lower > 0.0 && dp.lower < 1.0);
        assert!(dp.upper > 374.0 && dp.upper.is_finite());
    }

    #[test]
    fn identical_operators_have_equal_counts() {
        let pair = random_instance(&GenConfig::new(5, 2, 0, 17)).unwrap();
        for iv in sample_intervals(&pair, 17).unwrap() {
            let r = verify_main_theorem(&pair, &iv, &tol()).unwrap();
            assert_eq!(r.eig1, r.eig2);
            assert_eq!(r.sig1, r.sig2);
        }
    }

    #[test]
    fn flipped_pair_swaps_signature_sign() {
        let f = fixture("example3").unwrap();
        let pair = f.pair(&tol()).unwrap();
        let flipped = pair.flipped(&tol()).unwrap();
        let a = verify_main_theorem(&pair, &f.interval, &tol()).unwrap();
        let b = verify_main_theorem(&flipped, &f.interval, &tol()).unwrap();
        assert_eq!((b.eig1, b.eig2), (a.eig1, a.eig2));
        assert_eq!((b.sig1, b.sig2), (-a.sig1, -a.sig2));
        assert_eq!((b.kappa, b.kappa_plus), (2, 1));
        assert_eq!(b.cor2_bound, a.cor2_bound);
    }

    #[test]
    fn random_witnesses() {
        for seed in 0..12 {
            let pair = random_instance(&GenConfig::new(
                4 + seed as usize % 3,
                1 + seed as usize % 2,
                1,
                seed,
            ))
            .unwrap();
            let iv = Interval::real_line();
            let w = proof_witness(&pair, &iv, &tol()).unwrap();
            assert!(w.all_ok(), "seed {seed}: {w:?}");
        }
    }

    #[test]
    fn reports_are_deterministic() {
        let pair = random_instance(&GenConfig::new(6, 2, 2, 5)).unwrap();
        let iv = Interval::new(-1.0, 1.5).unwrap();
        let a = verify_main_theorem(&pair, &iv, &tol()).unwrap();
        let b = verify_main_theorem(&pair, &iv, &tol()).unwrap();
        assert_eq!(a, b);
    }
}
