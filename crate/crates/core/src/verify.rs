//! Randomized checks of the divergence inequalities behind the amplification
//! bounds. Each check draws independent trials from a counter-based RNG and
//! reports the worst signed slack it saw.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{E, PI};

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Exp1, StandardNormal};

use crate::channels::{apply_depolarizing, apply_gad, apply_gd};
use crate::divergence::{
    hs_classical, hs_quantum, measure, measure_mixed, trace_distance, DiscreteDistribution,
};
use crate::encode::{povm_computational, povm_phi, EncodingSpec, Povm};
use crate::error::{Error, Result};
use crate::linalg::{c, hermitian_eig, ComplexMatrix, C64};
use crate::rng::trial_rng;
use crate::state::DensityMatrix;

/// Slack below which an inequality counts as violated.
pub const SLACK_TOL: f64 = 1e-9;
/// Entrywise tolerance for the depolarized-measurement identity.
pub const MIXTURE_TOL: f64 = 1e-10;
/// Input pairs closer than this in trace distance are skipped when forming ratios.
const MIN_DISTANCE: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LemmaId {
    B4MeasurementDominance,
    B5DepolarizingContraction,
    B6AdvancedJointConvexity,
    B7MixtureMeasurement,
    B8MixedBound,
    B9GadContraction,
    B11GdEquatorialContraction,
    T41Chain,
}

impl LemmaId {
    pub const ALL: [LemmaId; 8] = [
        LemmaId::B4MeasurementDominance,
        LemmaId::B5DepolarizingContraction,
        LemmaId::B6AdvancedJointConvexity,
        LemmaId::B7MixtureMeasurement,
        LemmaId::B8MixedBound,
        LemmaId::B9GadContraction,
        LemmaId::B11GdEquatorialContraction,
        LemmaId::T41Chain,
    ];

    pub fn name(self) -> &'static str {
        match self {
            LemmaId::B4MeasurementDominance => "B4_MeasurementDominance",
            LemmaId::B5DepolarizingContraction => "B5_DepolarizingContraction",
            LemmaId::B6AdvancedJointConvexity => "B6_AdvancedJointConvexity",
            LemmaId::B7MixtureMeasurement => "B7_MixtureMeasurement",
            LemmaId::B8MixedBound => "B8_MixedBound",
            LemmaId::B9GadContraction => "B9_GADContraction",
            LemmaId::B11GdEquatorialContraction => "B11_GDEquatorialContraction",
            LemmaId::T41Chain => "T41_Chain",
        }
    }

    /// Short selector used on the command line (`b4`, …, `t41`).
    pub fn selector(self) -> &'static str {
        match self {
            LemmaId::B4MeasurementDominance => "b4",
            LemmaId::B5DepolarizingContraction => "b5",
            LemmaId::B6AdvancedJointConvexity => "b6",
            LemmaId::B7MixtureMeasurement => "b7",
            LemmaId::B8MixedBound => "b8",
            LemmaId::B9GadContraction => "b9",
            LemmaId::B11GdEquatorialContraction => "b11",
            LemmaId::T41Chain => "t41",
        }
    }

    pub fn from_selector(s: &str) -> Option<Self> {
        Self::ALL
            .into_iter()
            .find(|l| l.selector().eq_ignore_ascii_case(s))
    }

    fn stream(self) -> u64 {
        0x6c65_6d00 + self as u64
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Holds,
    Violated,
    /// Measured and reported without a pass/fail judgement.
    Reported,
}

/// Empirical contraction for one `(η, p_exc)` cell of the GAD probe.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProbeCell {
    pub eta: f64,
    pub p_exc: f64,
    pub trials: usize,
    pub max_ratio: f64,
    pub bound: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrialReport {
    pub lemma: LemmaId,
    pub trials: usize,
    /// Largest `lhs − rhs` seen; positive means the inequality failed on some trial.
    pub max_violation: f64,
    /// Largest `lhs / rhs` over trials with a positive right-hand side (0 if none).
    pub max_ratio: f64,
    pub tolerance: f64,
    pub seed: u64,
    pub verdict: Verdict,
    /// Index of the trial attaining `max_violation`; replay it with the same seed.
    pub worst_trial: Option<u64>,
    pub cells: Vec<ProbeCell>,
}

struct Tally {
    trials: usize,
    max_violation: f64,
    max_ratio: f64,
    worst: Option<u64>,
}

impl Tally {
    fn new() -> Self {
        Self {
            trials: 0,
            max_violation: f64::NEG_INFINITY,
            max_ratio: 0.0,
            worst: None,
        }
    }

    fn record(&mut self, index: u64, lhs: f64, rhs: f64) {
        self.trials += 1;
        let v = lhs - rhs;
        if v > self.max_violation || self.worst.is_none() {
            self.max_violation = v;
            self.worst = Some(index);
        }
        if rhs > 0.0 {
            self.max_ratio = self.max_ratio.max(lhs / rhs);
        }
    }

    fn finish(self, lemma: LemmaId, tolerance: f64, seed: u64) -> TrialReport {
        let verdict = if self.max_violation <= tolerance {
            Verdict::Holds
        } else {
            Verdict::Violated
        };
        TrialReport {
            lemma,
            trials: self.trials,
            max_violation: self.max_violation,
            max_ratio: self.max_ratio,
            tolerance,
            seed,
            verdict,
            worst_trial: self.worst,
            cells: Vec::new(),
        }
    }
}

fn check_trials(trials: usize) -> Result<()> {
    if trials == 0 {
        return Err(Error::ParamOutOfRange {
            name: "trials",
            value: 0.0,
        });
    }
    Ok(())
}

fn check_nonempty<T>(name: &'static str, v: &[T]) -> Result<()> {
    if v.is_empty() {
        return Err(Error::ParamOutOfRange { name, value: 0.0 });
    }
    Ok(())
}

fn uniform(rng: &mut ChaCha8Rng, (lo, hi): (f64, f64)) -> f64 {
    if hi > lo {
        rng.random_range(lo..=hi)
    } else {
        lo
    }
}

fn gaussian_c64(rng: &mut ChaCha8Rng) -> C64 {
    c(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

fn gaussian_matrix(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
    let data = (0..rows * cols).map(|_| gaussian_c64(rng)).collect();
    ComplexMatrix::new(rows, cols, data).expect("finite Gaussian entries")
}

#[derive(Clone, Debug, PartialEq)]
pub enum StateSampler {
    /// Normalized complex Gaussian vector.
    HaarPure { dim: usize },
    /// `G G† / Tr(G G†)` with a square complex Gaussian `G`.
    GinibreMixed { dim: usize },
    /// Product of equatorial qubits with uniform phases.
    Equatorial { qubits: usize },
    /// Image of the encoder on inputs uniform in `[lo, hi]^n`.
    EncoderImage {
        spec: EncodingSpec,
        lo: f64,
        hi: f64,
    },
}

impl StateSampler {
    pub fn sample(&self, rng: &mut ChaCha8Rng) -> Result<DensityMatrix> {
        match self {
            StateSampler::HaarPure { dim } => {
                let psi: Vec<C64> = (0..*dim).map(|_| gaussian_c64(rng)).collect();
                DensityMatrix::pure(&psi)
            }
            StateSampler::GinibreMixed { dim } => {
                let g = gaussian_matrix(*dim, *dim, rng);
                let a = g.matmul(&g.adjoint())?;
                let tr = a.trace().re;
                Ok(DensityMatrix::from_trusted(a.scale(1.0 / tr)))
            }
            StateSampler::Equatorial { qubits } => {
                let spec = EncodingSpec::equatorial(*qubits)?;
                let phases: Vec<f64> = (0..*qubits)
                    .map(|_| rng.random_range(0.0..2.0 * PI))
                    .collect();
                crate::encode::encode_equatorial(&spec, &phases)
            }
            StateSampler::EncoderImage { spec, lo, hi } => {
                let y: Vec<f64> = (0..spec.qubits())
                    .map(|_| uniform(rng, (*lo, *hi)))
                    .collect();
                spec.encode(&y)
            }
        }
    }
}

/// Pure or full-rank mixed, chosen by coin flip.
fn any_state(dim: usize, rng: &mut ChaCha8Rng) -> Result<DensityMatrix> {
    if rng.random_bool(0.5) {
        StateSampler::HaarPure { dim }.sample(rng)
    } else {
        StateSampler::GinibreMixed { dim }.sample(rng)
    }
}

/// `E_k = S^{-1/2} A_k S^{-1/2}` with `A_k = G_k G_k†` of random rank and `S = Σ A_k`.
pub fn random_povm(dim: usize, k: usize, rng: &mut ChaCha8Rng) -> Result<Povm> {
    if k == 0 || dim == 0 {
        return Err(Error::InvalidK { k, dim });
    }
    let mut ranks: Vec<usize> = (0..k).map(|_| rng.random_range(1..=dim)).collect();
    if ranks.iter().sum::<usize>() < dim {
        ranks[k - 1] = dim;
    }
    let parts: Vec<ComplexMatrix> = ranks
        .iter()
        .map(|&r| {
            let g = gaussian_matrix(dim, r, rng);
            g.matmul(&g.adjoint())
        })
        .collect::<Result<_>>()?;
    let mut s = ComplexMatrix::zeros(dim, dim);
    for a in &parts {
        s = s.add(a)?;
    }
    let spec = hermitian_eig(&s)?;
    let v = &spec.eigenvectors;
    let inv_sqrt = ComplexMatrix::from_fn(dim, dim, |i, j| {
        (0..dim)
            .map(|m| v[(i, m)] * (1.0 / spec.eigenvalues[m].sqrt()) * v[(j, m)].conj())
            .sum()
    });
    let elements = parts
        .iter()
        .map(|a| inv_sqrt.matmul(a)?.matmul(&inv_sqrt)?.symmetrized())
        .collect::<Result<Vec<_>>>()?;
    Povm::new(elements, (0..k).map(|v| v as f64).collect())
}

/// Uniform draw from the probability simplex (normalized exponentials).
pub fn random_distribution(k: usize, rng: &mut ChaCha8Rng) -> Result<DiscreteDistribution> {
    let w: Vec<f64> = (0..k).map(|_| rng.sample::<f64, _>(Exp1)).collect();
    let total: f64 = w.iter().sum();
    DiscreteDistribution::new(w.into_iter().map(|x| x / total).collect())
}

fn pick<T: Copy>(items: &[T], rng: &mut ChaCha8Rng) -> T {
    items[rng.random_range(0..items.len())]
}

/// Measuring never increases the quantum hockey-stick divergence:
/// `D_α(measure ρ ‖ measure ρ′) ≤ D_α(ρ ‖ ρ′)`.
pub fn check_b4(
    trials: usize,
    dims: &[usize],
    alpha: (f64, f64),
    seed: u64,
) -> Result<TrialReport> {
    check_trials(trials)?;
    check_nonempty("dims", dims)?;
    let id = LemmaId::B4MeasurementDominance;
    let mut t = Tally::new();
    for i in 0..trials as u64 {
        let mut rng = trial_rng(seed, id.stream(), i);
        let d = pick(dims, &mut rng);
        let rho = any_state(d, &mut rng)?;
        let sigma = any_state(d, &mut rng)?;
        let k = rng.random_range(2..=d.max(2));
        let povm = random_povm(d, k, &mut rng)?;
        let a = uniform(&mut rng, alpha);
        let lhs = hs_classical(&measure(&rho, &povm)?, &measure(&sigma, &povm)?, a)?;
        let rhs = hs_quantum(&rho, &sigma, a)?;
        t.record(i, lhs, rhs);
    }
    Ok(t.finish(id, SLACK_TOL, seed))
}

/// `D_α(dep ρ ‖ dep ρ′) ≤ max{0, (1−α)η/d + (1−η) D_α(ρ ‖ ρ′)}`.
pub fn check_b5(
    trials: usize,
    dims: &[usize],
    alpha: (f64, f64),
    eta: (f64, f64),
    seed: u64,
) -> Result<TrialReport> {
    check_trials(trials)?;
    check_nonempty("dims", dims)?;
    let id = LemmaId::B5DepolarizingContraction;
    let mut t = Tally::new();
    for i in 0..trials as u64 {
        let mut rng = trial_rng(seed, id.stream(), i);
        let d = pick(dims, &mut rng);
        let rho = any_state(d, &mut rng)?;
        let sigma = any_state(d, &mut rng)?;
        let a = uniform(&mut rng, alpha);
        let e = uniform(&mut rng, eta);
        let lhs = hs_quantum(
            &apply_depolarizing(&rho, e)?,
            &apply_depolarizing(&sigma, e)?,
            a,
        )?;
        let rhs = ((1.0 - a) * e / d as f64 + (1.0 - e) * hs_quantum(&rho, &sigma, a)?).max(0.0);
        t.record(i, lhs, rhs);
    }
    Ok(t.finish(id, SLACK_TOL, seed))
}

fn mix(w: f64, a: &DiscreteDistribution, b: &DiscreteDistribution) -> Result<DiscreteDistribution> {
    DiscreteDistribution::new(
        a.probs()
            .iter()
            .zip(b.probs())
            .map(|(x, y)| (1.0 - w) * x + w * y)
            .collect(),
    )
}

/// Advanced joint convexity. With `μ = (1−s)μ₀ + sμ₁`, `μ′ = (1−s)μ₀ + sμ₁′`,
/// `α′ = 1 + s(α−1)` and `β = α′/α`:
/// `D_{α′}(μ ‖ μ′) ≤ (1−β) s D_α(μ₁ ‖ μ₀) + β s D_α(μ₁ ‖ μ₁′)`.
pub fn check_b6(
    trials: usize,
    supports: &[usize],
    alpha: (f64, f64),
    mixing: (f64, f64),
    seed: u64,
) -> Result<TrialReport> {
    check_trials(trials)?;
    check_nonempty("supports", supports)?;
    let id = LemmaId::B6AdvancedJointConvexity;
    let mut t = Tally::new();
    for i in 0..trials as u64 {
        let mut rng = trial_rng(seed, id.stream(), i);
        let k = pick(supports, &mut rng);
        let mu0 = random_distribution(k, &mut rng)?;
        let mu1 = random_distribution(k, &mut rng)?;
        let mu1p = random_distribution(k, &mut rng)?;
        let a = uniform(&mut rng, alpha);
        let s = uniform(&mut rng, mixing);
        let a_prime = 1.0 + s * (a - 1.0);
        let beta = a_prime / a;
        let lhs = hs_classical(&mix(s, &mu0, &mu1)?, &mix(s, &mu0, &mu1p)?, a_prime)?;
        let rhs = (1.0 - beta) * s * hs_classical(&mu1, &mu0, a)?
            + beta * s * hs_classical(&mu1, &mu1p, a)?;
        t.record(i, lhs, rhs);
    }
    Ok(t.finish(id, SLACK_TOL, seed))
}

/// `measure(dep ρ)_k = (η/d) Tr(E_k) + (1−η) measure(ρ)_k`, entrywise.
pub fn check_b7(trials: usize, dims: &[usize], eta: (f64, f64), seed: u64) -> Result<TrialReport> {
    check_trials(trials)?;
    check_nonempty("dims", dims)?;
    let id = LemmaId::B7MixtureMeasurement;
    let mut t = Tally::new();
    for i in 0..trials as u64 {
        let mut rng = trial_rng(seed, id.stream(), i);
        let d = pick(dims, &mut rng);
        let rho = any_state(d, &mut rng)?;
        let k = rng.random_range(2..=d.max(2));
        let povm = random_povm(d, k, &mut rng)?;
        let e = uniform(&mut rng, eta);
        let noisy = measure(&apply_depolarizing(&rho, e)?, &povm)?;
        let clean = measure(&rho, &povm)?;
        let traces = povm.traces();
        let dev = noisy
            .probs()
            .iter()
            .zip(clean.probs())
            .zip(&traces)
            .map(|((n, c), tr)| (n - (e / d as f64 * tr + (1.0 - e) * c)).abs())
            .fold(0.0, f64::max);
        t.record(i, dev, 0.0);
    }
    Ok(t.finish(id, MIXTURE_TOL, seed))
}

/// `D_α(z ‖ ζ_mix) ≤ 1 − α φ` with `φ = min_k Tr(E_k)/d`.
pub fn check_b8(
    trials: usize,
    dims: &[usize],
    alpha: (f64, f64),
    seed: u64,
) -> Result<TrialReport> {
    check_trials(trials)?;
    check_nonempty("dims", dims)?;
    let id = LemmaId::B8MixedBound;
    let mut t = Tally::new();
    for i in 0..trials as u64 {
        let mut rng = trial_rng(seed, id.stream(), i);
        let d = pick(dims, &mut rng);
        let k = rng.random_range(2..=d.max(2));
        let povm = random_povm(d, k, &mut rng)?;
        let z = random_distribution(k, &mut rng)?;
        let a = uniform(&mut rng, alpha);
        let lhs = hs_classical(&z, &measure_mixed(&povm), a)?;
        let rhs = 1.0 - a * povm_phi(&povm);
        t.record(i, lhs, rhs);
    }
    Ok(t.finish(id, SLACK_TOL, seed))
}

/// `2√η − η`.
pub fn gad_claimed_bound(eta: f64) -> f64 {
    2.0 * eta.sqrt() - eta
}

fn ratio(out: f64, inp: f64) -> Option<f64> {
    (inp > MIN_DISTANCE).then(|| out / inp)
}

/// Pair of states that GAD should find hard to contract: basis states, or random
/// diagonal states, differing on the damped qubit.
fn adversarial_diagonal_pair(
    qubits: usize,
    rng: &mut ChaCha8Rng,
) -> Result<(DensityMatrix, DensityMatrix)> {
    let dim = 1usize << qubits;
    let target_bit = 1usize;
    if rng.random_bool(0.5) {
        let i = rng.random_range(0..dim) & !target_bit;
        return Ok((
            DensityMatrix::basis(dim, i)?,
            DensityMatrix::basis(dim, i | target_bit)?,
        ));
    }
    let diag = |rng: &mut ChaCha8Rng| -> Result<DensityMatrix> {
        let w = random_distribution(dim, rng)?;
        DensityMatrix::new(ComplexMatrix::from_real_diag(w.probs()))
    };
    Ok((diag(rng)?, diag(rng)?))
}

/// Empirical trace-distance contraction of GAD on the last qubit, per `(η, p_exc)`
/// cell, set against `2√η − η`. Never judged; `max_violation` is the largest
/// excess of a cell's ratio over that value.
pub fn probe_b9_gad(
    trials_per_cell: usize,
    etas: &[f64],
    p_grid: &[f64],
    qubits: &[usize],
    seed: u64,
) -> Result<TrialReport> {
    check_trials(trials_per_cell)?;
    check_nonempty("eta grid", etas)?;
    check_nonempty("p grid", p_grid)?;
    check_nonempty("qubits", qubits)?;
    let id = LemmaId::B9GadContraction;
    let mut cells = Vec::with_capacity(etas.len() * p_grid.len());
    let mut max_violation = f64::NEG_INFINITY;
    let mut max_ratio = 0.0_f64;
    let mut total = 0;
    let mut counter = 0u64;
    let mut worst = None;
    for &eta in etas {
        for &p in p_grid {
            let bound = gad_claimed_bound(eta);
            let mut cell_max = 0.0_f64;
            for _ in 0..trials_per_cell {
                let index = counter;
                counter += 1;
                let mut rng = trial_rng(seed, id.stream(), index);
                let n = pick(qubits, &mut rng);
                let (rho, sigma) = if rng.random_bool(0.5) {
                    adversarial_diagonal_pair(n, &mut rng)?
                } else {
                    (any_state(1 << n, &mut rng)?, any_state(1 << n, &mut rng)?)
                };
                let target = n - 1;
                let inp = trace_distance(&rho, &sigma)?;
                let out = trace_distance(
                    &apply_gad(&rho, p, eta, target)?,
                    &apply_gad(&sigma, p, eta, target)?,
                )?;
                total += 1;
                if let Some(r) = ratio(out, inp) {
                    if r > cell_max {
                        cell_max = r;
                    }
                    if r - bound > max_violation {
                        max_violation = r - bound;
                        worst = Some(index);
                    }
                }
            }
            max_ratio = max_ratio.max(cell_max);
            cells.push(ProbeCell {
                eta,
                p_exc: p,
                trials: trials_per_cell,
                max_ratio: cell_max,
                bound,
            });
        }
    }
    Ok(TrialReport {
        lemma: id,
        trials: total,
        max_violation,
        max_ratio,
        tolerance: SLACK_TOL,
        seed,
        verdict: Verdict::Reported,
        worst_trial: worst,
        cells,
    })
}

/// On equatorial product inputs, `D₁(GD ρ, GD ρ′) ≤ |1−2η| D₁(ρ, ρ′)`.
pub fn check_b11_gd(
    trials: usize,
    qubits: &[usize],
    etas: &[f64],
    seed: u64,
) -> Result<TrialReport> {
    check_trials(trials)?;
    check_nonempty("qubits", qubits)?;
    check_nonempty("eta grid", etas)?;
    let id = LemmaId::B11GdEquatorialContraction;
    let mut t = Tally::new();
    for i in 0..trials as u64 {
        let mut rng = trial_rng(seed, id.stream(), i);
        let n = pick(qubits, &mut rng);
        let eta = pick(etas, &mut rng);
        let sampler = StateSampler::Equatorial { qubits: n };
        let rho = sampler.sample(&mut rng)?;
        let sigma = sampler.sample(&mut rng)?;
        let inp = trace_distance(&rho, &sigma)?;
        let out = trace_distance(&apply_gd(&rho, eta)?, &apply_gd(&sigma, eta)?)?;
        t.record(i, out, (1.0 - 2.0 * eta).abs() * inp);
    }
    Ok(t.finish(id, SLACK_TOL, seed))
}

/// The failure-probability bound on measured outputs: with `δ` the measured
/// divergence of two encoded inputs, the measured divergence after depolarizing
/// stays below `[η(1−e^ε)/d + (1−η)δ]₊`. Uses computational-basis POVMs with a
/// random class count.
pub fn check_t41_chain(
    pairs: usize,
    qubits: &[usize],
    etas: &[f64],
    epsilons: &[f64],
    seed: u64,
) -> Result<TrialReport> {
    check_trials(pairs)?;
    check_nonempty("qubits", qubits)?;
    check_nonempty("eta grid", etas)?;
    check_nonempty("epsilon grid", epsilons)?;
    let id = LemmaId::T41Chain;
    let mut t = Tally::new();
    for i in 0..pairs as u64 {
        let mut rng = trial_rng(seed, id.stream(), i);
        let n = pick(qubits, &mut rng);
        let d = 1usize << n;
        let spec = EncodingSpec::rx(n)?;
        let sampler = StateSampler::EncoderImage {
            spec,
            lo: -PI,
            hi: PI,
        };
        let rho = sampler.sample(&mut rng)?;
        let sigma = sampler.sample(&mut rng)?;
        let povm = povm_computational(n, rng.random_range(2..=d))?;
        let eta = pick(etas, &mut rng);
        let alpha = pick(epsilons, &mut rng).exp();
        let delta = hs_classical(&measure(&rho, &povm)?, &measure(&sigma, &povm)?, alpha)?;
        let lhs = hs_classical(
            &measure(&apply_depolarizing(&rho, eta)?, &povm)?,
            &measure(&apply_depolarizing(&sigma, eta)?, &povm)?,
            alpha,
        )?;
        let rhs = (eta * (1.0 - alpha) / d as f64 + (1.0 - eta) * delta).max(0.0);
        t.record(i, lhs, rhs);
    }
    Ok(t.finish(id, SLACK_TOL, seed))
}

/// Settings shared by [`run_lemma`]. `None` fields fall back to per-lemma defaults.
#[derive(Clone, Debug, PartialEq)]
pub struct HarnessOptions {
    pub trials: usize,
    pub seed: u64,
    /// Hilbert-space dimensions (for qubit-based lemmas, powers of two are converted
    /// to qubit counts).
    pub dims: Option<Vec<usize>>,
    pub etas: Option<Vec<f64>>,
}

impl HarnessOptions {
    pub fn new(trials: usize, seed: u64) -> Self {
        Self {
            trials,
            seed,
            dims: None,
            etas: None,
        }
    }
}

pub const DEFAULT_DIMS: [usize; 4] = [2, 4, 8, 16];
pub const DEFAULT_SUPPORTS: [usize; 7] = [2, 3, 4, 5, 6, 7, 8];
pub const ALPHA_RANGE: (f64, f64) = (1.0, E);

fn eta_range(etas: &Option<Vec<f64>>) -> (f64, f64) {
    match etas {
        Some(v) if !v.is_empty() => (
            v.iter().copied().fold(f64::INFINITY, f64::min),
            v.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        ),
        _ => (0.0, 1.0),
    }
}

fn qubits_from(dims: &Option<Vec<usize>>, default: &[usize]) -> Result<Vec<usize>> {
    match dims {
        None => Ok(default.to_vec()),
        Some(ds) => ds.iter().map(|&d| crate::state::qubit_count(d)).collect(),
    }
}

pub fn run_lemma(id: LemmaId, opts: &HarnessOptions) -> Result<TrialReport> {
    let dims = opts.dims.clone().unwrap_or_else(|| DEFAULT_DIMS.to_vec());
    let n = opts.trials;
    let seed = opts.seed;
    match id {
        LemmaId::B4MeasurementDominance => check_b4(n, &dims, ALPHA_RANGE, seed),
        LemmaId::B5DepolarizingContraction => {
            check_b5(n, &dims, ALPHA_RANGE, eta_range(&opts.etas), seed)
        }
        LemmaId::B6AdvancedJointConvexity => {
            let supports = opts
                .dims
                .clone()
                .unwrap_or_else(|| DEFAULT_SUPPORTS.to_vec());
            check_b6(n, &supports, ALPHA_RANGE, (0.0, 1.0), seed)
        }
        LemmaId::B7MixtureMeasurement => check_b7(n, &dims, eta_range(&opts.etas), seed),
        LemmaId::B8MixedBound => check_b8(n, &dims, ALPHA_RANGE, seed),
        LemmaId::B9GadContraction => {
            let etas = opts
                .etas
                .clone()
                .unwrap_or_else(|| vec![0.0, 0.25, 0.5, 0.75, 1.0]);
            let qubits = qubits_from(&opts.dims, &[1, 2, 3])?;
            let cells = etas.len() * 3;
            probe_b9_gad(
                n.div_ceil(cells).max(1),
                &etas,
                &[0.0, 0.25, 0.5],
                &qubits,
                seed,
            )
        }
        LemmaId::B11GdEquatorialContraction => {
            let etas = opts
                .etas
                .clone()
                .unwrap_or_else(|| (0..=10).map(|i| i as f64 / 10.0).collect());
            let qubits = qubits_from(&opts.dims, &[1, 2, 3, 4])?;
            check_b11_gd(n, &qubits, &etas, seed)
        }
        LemmaId::T41Chain => {
            let etas = opts
                .etas
                .clone()
                .unwrap_or_else(|| (0..=10).map(|i| i as f64 / 10.0).collect());
            let qubits = qubits_from(&opts.dims, &[1, 2, 3])?;
            let eps: Vec<f64> = (0..=10).map(|i| i as f64 / 10.0).collect();
            check_t41_chain(n, &qubits, &etas, &eps, seed)
        }
    }
}
