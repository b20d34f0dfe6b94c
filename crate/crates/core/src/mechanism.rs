//! Expectation-valued hybrid mechanism: Gaussian input noise, linear layer,
//! product encoding, depolarizing noise, then `Tr[E_exp ρ]`.

use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;
use rand_distr::StandardNormal;

use crate::channels::apply_depolarizing;
use crate::encode::{apply_linear, povm_computational, EncodingSpec, LinearLayer, Povm};
use crate::error::{check_eta, Error, Result};
use crate::linalg::{matrix_inf_norm, operator_norm, ComplexMatrix, RealMatrix};
use crate::rng::trial_rng;

const STREAM_TIGHTNESS: u64 = 0x7469_6768;
const STREAM_VALIDITY: u64 = 0x7661_6c69;

/// `Σ_k v_k E_k`.
pub fn expectation_observable(povm: &Povm) -> ComplexMatrix {
    let d = povm.dim();
    povm.elements()
        .iter()
        .zip(povm.outcome_values())
        .fold(ComplexMatrix::zeros(d, d), |acc, (e, &v)| {
            acc.add(&e.scale(v)).expect("POVM elements share one shape")
        })
}

#[derive(Clone, Debug, PartialEq)]
pub struct MechanismConfig {
    layer: LinearLayer,
    encoding: EncodingSpec,
    povm: Povm,
    eta: f64,
    sigma: f64,
    e_exp: ComplexMatrix,
    e_exp_norm: f64,
}

impl MechanismConfig {
    pub fn new(
        layer: LinearLayer,
        encoding: EncodingSpec,
        povm: Povm,
        eta: f64,
        sigma: f64,
    ) -> Result<Self> {
        if layer.output_dim() != encoding.qubits() {
            return Err(Error::DimensionMismatch {
                expected: encoding.qubits(),
                found: layer.output_dim(),
            });
        }
        if povm.dim() != encoding.dim() {
            return Err(Error::DimensionMismatch {
                expected: encoding.dim(),
                found: povm.dim(),
            });
        }
        check_eta(eta)?;
        check_sigma(sigma)?;
        let e_exp = expectation_observable(&povm);
        let e_exp_norm = operator_norm(&e_exp)?;
        Ok(Self {
            layer,
            encoding,
            povm,
            eta,
            sigma,
            e_exp,
            e_exp_norm,
        })
    }

    /// One qubit, `H = X/2`, `W = (1)`, `b = 0`, computational readout with values `(0, 1)`.
    pub fn reference(eta: f64, sigma: f64) -> Result<Self> {
        Self::new(
            LinearLayer::identity(1),
            EncodingSpec::rx(1)?,
            povm_computational(1, 2)?,
            eta,
            sigma,
        )
    }

    pub fn with_noise(&self, eta: f64, sigma: f64) -> Result<Self> {
        check_eta(eta)?;
        check_sigma(sigma)?;
        Ok(Self {
            eta,
            sigma,
            ..self.clone()
        })
    }

    pub fn layer(&self) -> &LinearLayer {
        &self.layer
    }

    pub fn encoding(&self) -> &EncodingSpec {
        &self.encoding
    }

    pub fn povm(&self) -> &Povm {
        &self.povm
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn input_dim(&self) -> usize {
        self.layer.input_dim()
    }

    pub fn observable(&self) -> &ComplexMatrix {
        &self.e_exp
    }

    pub fn observable_norm(&self) -> f64 {
        self.e_exp_norm
    }

    fn check_input(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.input_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.input_dim(),
                found: x.len(),
            });
        }
        Ok(())
    }
}

fn check_sigma(sigma: f64) -> Result<()> {
    if sigma >= 0.0 && sigma.is_finite() {
        Ok(())
    } else {
        Err(Error::ParamOutOfRange {
            name: "sigma",
            value: sigma,
        })
    }
}

/// `Tr[E_exp f_enc(Wx + b)]`.
pub fn m_clean(cfg: &MechanismConfig, x: &[f64]) -> Result<f64> {
    cfg.check_input(x)?;
    let rho = cfg.encoding.encode(&apply_linear(&cfg.layer, x)?)?;
    Ok(cfg.e_exp.trace_product(rho.matrix())?.re)
}

/// As [`m_clean`] with depolarizing noise applied to the encoded state.
pub fn m_half(cfg: &MechanismConfig, x: &[f64]) -> Result<f64> {
    cfg.check_input(x)?;
    let rho = cfg.encoding.encode(&apply_linear(&cfg.layer, x)?)?;
    let noisy = apply_depolarizing(&rho, cfg.eta)?;
    Ok(cfg.e_exp.trace_product(noisy.matrix())?.re)
}

/// [`m_half`] at `x + κ`, with the Gaussian draw `κ` supplied by the caller.
pub fn m_full(cfg: &MechanismConfig, x: &[f64], kappa: &[f64]) -> Result<f64> {
    cfg.check_input(x)?;
    cfg.check_input(kappa)?;
    let shifted: Vec<f64> = x.iter().zip(kappa).map(|(a, b)| a + b).collect();
    m_half(cfg, &shifted)
}

/// `L∞ = 2(1−η) ‖E_exp‖_op ‖W‖_∞ Σ_j ‖H_j‖_op`.
pub fn lipschitz_linf(cfg: &MechanismConfig) -> Result<f64> {
    let gen_sum = cfg
        .encoding
        .generators()
        .iter()
        .map(operator_norm)
        .sum::<Result<f64>>()?;
    Ok(2.0 * (1.0 - cfg.eta) * cfg.e_exp_norm * matrix_inf_norm(cfg.layer.weights()) * gen_sum)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UtilityBoundReport {
    pub l_inf: f64,
    pub bound: f64,
    pub p_fail: f64,
    pub sigma_term: f64,
    pub quantum_term: f64,
}

/// With probability at least `1 − p_fail`,
/// `|M_full − M_clean| ≤ L∞ σ √(2 ln(2 d_X / p_fail)) + 2η ‖E_exp‖_op`.
pub fn utility_bound(cfg: &MechanismConfig, p_fail: f64) -> Result<UtilityBoundReport> {
    if !(p_fail > 0.0 && p_fail < 1.0) {
        return Err(Error::ParamOutOfRange {
            name: "p_fail",
            value: p_fail,
        });
    }
    let l_inf = lipschitz_linf(cfg)?;
    let d_x = cfg.input_dim() as f64;
    let sigma_term = l_inf * cfg.sigma * (2.0 * (2.0 * d_x / p_fail).ln()).sqrt();
    let quantum_term = 2.0 * cfg.eta * cfg.e_exp_norm;
    Ok(UtilityBoundReport {
        l_inf,
        bound: sigma_term + quantum_term,
        p_fail,
        sigma_term,
        quantum_term,
    })
}

/// Inputs drawn uniformly from `[lo, hi]^{d_X}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InputSampler {
    pub lo: f64,
    pub hi: f64,
}

impl Default for InputSampler {
    fn default() -> Self {
        Self {
            lo: -core::f64::consts::PI,
            hi: core::f64::consts::PI,
        }
    }
}

impl InputSampler {
    pub fn sample<R: Rng>(&self, dim: usize, rng: &mut R) -> Vec<f64> {
        (0..dim)
            .map(|_| rng.random_range(self.lo..=self.hi))
            .collect()
    }
}

fn standard_normals<R: Rng>(dim: usize, rng: &mut R) -> Vec<f64> {
    (0..dim).map(|_| rng.sample(StandardNormal)).collect()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TightnessEstimate {
    pub ratio: f64,
    pub max_deviation: f64,
    pub bound: f64,
}

/// `max |M_full(x) − M_clean(x)| / bound` over `sample_count` draws of `(x, κ)`.
///
/// Sample `i` always uses the same `x` and standard-normal vector `z` for a given
/// seed, with `κ = σ z`, so ratios across a (σ, η) grid share their randomness.
/// A zero bound with zero deviation yields ratio 0.
pub fn tightness_ratio(
    cfg: &MechanismConfig,
    p_fail: f64,
    sample_count: usize,
    sampler: &InputSampler,
    seed: u64,
) -> Result<TightnessEstimate> {
    if sample_count == 0 {
        return Err(Error::ParamOutOfRange {
            name: "sample_count",
            value: 0.0,
        });
    }
    let bound = utility_bound(cfg, p_fail)?.bound;
    let dim = cfg.input_dim();
    let mut max_deviation = 0.0_f64;
    for i in 0..sample_count as u64 {
        let mut rng = trial_rng(seed, STREAM_TIGHTNESS, i);
        let x = sampler.sample(dim, &mut rng);
        let kappa: Vec<f64> = standard_normals(dim, &mut rng)
            .into_iter()
            .map(|z| cfg.sigma * z)
            .collect();
        let dev = (m_full(cfg, &x, &kappa)? - m_clean(cfg, &x)?).abs();
        max_deviation = max_deviation.max(dev);
    }
    let ratio = if max_deviation == 0.0 {
        0.0
    } else {
        max_deviation / bound
    };
    Ok(TightnessEstimate {
        ratio,
        max_deviation,
        bound,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TightnessCell {
    pub sigma: f64,
    pub eta: f64,
    pub estimate: TightnessEstimate,
}

pub fn default_sigma_grid() -> Vec<f64> {
    (0..=5).map(|i| i as f64 / 10.0).collect()
}

pub fn default_eta_grid() -> Vec<f64> {
    (0..=8).map(|i| i as f64 * 0.05).collect()
}

/// [`tightness_ratio`] over `sigmas × etas`, sigma-major.
pub fn tightness_grid(
    cfg: &MechanismConfig,
    sigmas: &[f64],
    etas: &[f64],
    p_fail: f64,
    sample_count: usize,
    sampler: &InputSampler,
    seed: u64,
) -> Result<Vec<TightnessCell>> {
    let mut cells = Vec::with_capacity(sigmas.len() * etas.len());
    for &sigma in sigmas {
        for &eta in etas {
            let c = cfg.with_noise(eta, sigma)?;
            cells.push(TightnessCell {
                sigma,
                eta,
                estimate: tightness_ratio(&c, p_fail, sample_count, sampler, seed)?,
            });
        }
    }
    Ok(cells)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundValidity {
    pub trials: usize,
    pub successes: usize,
    pub frequency: f64,
    /// `1 − p − 3√(p/R)`.
    pub required: f64,
}

impl BoundValidity {
    pub fn passes(&self) -> bool {
        self.frequency >= self.required
    }
}

/// Runs `trials` independent experiments, each drawing one input and one Gaussian
/// noise vector, and counts how often the deviation stays within the bound.
pub fn bound_validity(
    cfg: &MechanismConfig,
    p_fail: f64,
    trials: usize,
    sampler: &InputSampler,
    seed: u64,
) -> Result<BoundValidity> {
    if trials == 0 {
        return Err(Error::ParamOutOfRange {
            name: "trials",
            value: 0.0,
        });
    }
    let bound = utility_bound(cfg, p_fail)?.bound;
    let dim = cfg.input_dim();
    let mut successes = 0;
    for i in 0..trials as u64 {
        let mut rng = trial_rng(seed, STREAM_VALIDITY, i);
        let x = sampler.sample(dim, &mut rng);
        let kappa: Vec<f64> = standard_normals(dim, &mut rng)
            .into_iter()
            .map(|z| cfg.sigma * z)
            .collect();
        if (m_full(cfg, &x, &kappa)? - m_clean(cfg, &x)?).abs() <= bound {
            successes += 1;
        }
    }
    let r = trials as f64;
    Ok(BoundValidity {
        trials,
        successes,
        frequency: successes as f64 / r,
        required: 1.0 - p_fail - 3.0 * (p_fail / r).sqrt(),
    })
}

/// Convenience for building a config whose classical layer is a plain matrix.
pub fn layer_from_rows(rows: &[Vec<f64>], bias: Option<Vec<f64>>) -> Result<LinearLayer> {
    let w = RealMatrix::from_rows(rows)?;
    let b = bias.unwrap_or_else(|| vec![0.0; w.rows()]);
    LinearLayer::new(w, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encode::Scheme;
    use crate::linalg::{pauli_x, pauli_y, pauli_z};
    use core::f64::consts::PI;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn reference(eta: f64, sigma: f64) -> MechanismConfig {
        MechanismConfig::reference(eta, sigma).unwrap()
    }

    fn random_povm(dim: usize, k: usize, rng: &mut ChaCha8Rng) -> Povm {
        crate::verify::random_povm(dim, k, rng).unwrap()
    }

    fn two_qubit_config(eta: f64, sigma: f64, rng: &mut ChaCha8Rng) -> MechanismConfig {
        let layer = layer_from_rows(
            &[vec![0.7, -0.4, 1.1], vec![-0.3, 0.9, 0.2]],
            Some(vec![0.1, -0.2]),
        )
        .unwrap();
        let gens = vec![
            pauli_x().scale(0.5),
            pauli_y().scale(0.3).add(&pauli_z().scale(0.4)).unwrap(),
        ];
        let enc = EncodingSpec::new(gens, Scheme::RxProduct).unwrap();
        let povm = random_povm(4, 3, rng)
            .with_outcome_values(vec![0.0, 1.0, 2.0])
            .unwrap();
        MechanismConfig::new(layer, enc, povm, eta, sigma).unwrap()
    }

    #[test]
    fn observable_examples() {
        let e = expectation_observable(&povm_computational(1, 2).unwrap());
        assert_eq!(e, ComplexMatrix::from_real_diag(&[0.0, 1.0]));
        assert!((operator_norm(&e).unwrap() - 1.0).abs() < 1e-15);
        let zero = povm_computational(2, 2)
            .unwrap()
            .with_outcome_values(vec![0.0, 0.0])
            .unwrap();
        assert_eq!(expectation_observable(&zero), ComplexMatrix::zeros(4, 4));
    }

    #[test]
    fn observable_matches_weighted_probabilities() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let povm = random_povm(4, 3, &mut rng)
            .with_outcome_values(vec![0.0, 1.0, 2.0])
            .unwrap();
        let e = expectation_observable(&povm);
        let rho = crate::verify::StateSampler::GinibreMixed { dim: 4 }
            .sample(&mut rng)
            .unwrap();
        let direct = e.trace_product(rho.matrix()).unwrap().re;
        let dist = crate::divergence::measure(&rho, &povm).unwrap();
        let weighted: f64 = dist
            .probs()
            .iter()
            .enumerate()
            .map(|(k, p)| k as f64 * p)
            .sum();
        assert!((direct - weighted).abs() < 1e-12);
    }

    #[test]
    fn clean_examples() {
        let cfg = reference(0.0, 0.0);
        assert!(m_clean(&cfg, &[0.0]).unwrap().abs() < 1e-15);
        assert!((m_clean(&cfg, &[PI]).unwrap() - 1.0).abs() < 1e-15);
        assert!((m_clean(&cfg, &[PI / 2.0]).unwrap() - 0.5).abs() < 1e-15);
        assert!(matches!(
            m_clean(&cfg, &[0.0, 1.0]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn half_examples() {
        assert_eq!(
            m_half(&reference(0.0, 0.0), &[0.3]).unwrap(),
            m_clean(&reference(0.0, 0.0), &[0.3]).unwrap()
        );
        for x in [0.0, 1.0, 2.5] {
            assert!((m_half(&reference(1.0, 0.0), &[x]).unwrap() - 0.5).abs() < 1e-15);
        }
        assert!((m_half(&reference(0.4, 0.0), &[PI]).unwrap() - 0.8).abs() < 1e-15);
    }

    #[test]
    fn half_is_mixture_of_clean_and_trace() {
        let mut rng = ChaCha8Rng::seed_from_u64(32);
        for eta in [0.0, 0.15, 0.6, 1.0] {
            let cfg = two_qubit_config(eta, 0.0, &mut rng);
            let tr = cfg.observable().trace().re / 4.0;
            for _ in 0..50 {
                let x = InputSampler::default().sample(3, &mut rng);
                let want = (1.0 - eta) * m_clean(&cfg, &x).unwrap() + eta * tr;
                assert!((m_half(&cfg, &x).unwrap() - want).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn full_with_zero_noise_is_half() {
        let cfg = reference(0.3, 0.0);
        assert_eq!(
            m_full(&cfg, &[0.7], &[0.0]).unwrap(),
            m_half(&cfg, &[0.7]).unwrap()
        );
    }

    #[test]
    fn lipschitz_examples() {
        assert_eq!(lipschitz_linf(&reference(1.0, 0.0)).unwrap(), 0.0);
        assert!((lipschitz_linf(&reference(0.0, 0.0)).unwrap() - 1.0).abs() < 1e-15);
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        let cfg = two_qubit_config(0.2, 0.0, &mut rng);
        let rows: Vec<Vec<f64>> = (0..2)
            .map(|i| {
                cfg.layer()
                    .weights()
                    .row(i)
                    .iter()
                    .map(|v| 2.0 * v)
                    .collect()
            })
            .collect();
        let doubled = MechanismConfig::new(
            LinearLayer::new(
                RealMatrix::from_rows(&rows).unwrap(),
                cfg.layer().bias().to_vec(),
            )
            .unwrap(),
            cfg.encoding().clone(),
            cfg.povm().clone(),
            0.2,
            0.0,
        )
        .unwrap();
        let (a, b) = (
            lipschitz_linf(&cfg).unwrap(),
            lipschitz_linf(&doubled).unwrap(),
        );
        assert!((b - 2.0 * a).abs() < 1e-12 * b);
    }

    #[test]
    fn utility_examples() {
        assert_eq!(
            utility_bound(&reference(0.0, 0.0), 0.01).unwrap().bound,
            0.0
        );
        assert!((utility_bound(&reference(0.3, 0.0), 0.01).unwrap().bound - 0.6).abs() < 1e-15);
        let r = utility_bound(&reference(0.0, 0.5), 0.01).unwrap();
        // 0.5·√(2 ln 200)
        assert!((r.sigma_term - 1.627623630718729).abs() < 1e-12);
        assert_eq!(r.bound, r.sigma_term + r.quantum_term);
        assert!(utility_bound(&reference(0.0, 0.5), 1.0).is_err());
    }

    #[test]
    fn lipschitz_and_quantum_term_bounds_hold() {
        let mut rng = ChaCha8Rng::seed_from_u64(34);
        for eta in [0.0, 0.1, 0.35] {
            let cfg = two_qubit_config(eta, 0.0, &mut rng);
            let l = lipschitz_linf(&cfg).unwrap();
            let q = 2.0 * eta * cfg.observable_norm();
            for _ in 0..300 {
                let x = InputSampler::default().sample(3, &mut rng);
                let kappa: Vec<f64> = (0..3).map(|_| rng.random_range(-0.5..0.5)).collect();
                let kinf = kappa.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
                let shift = (m_full(&cfg, &x, &kappa).unwrap() - m_half(&cfg, &x).unwrap()).abs();
                assert!(shift <= l * kinf + 1e-9);
                assert!(
                    (m_half(&cfg, &x).unwrap() - m_clean(&cfg, &x).unwrap()).abs() <= q + 1e-12
                );
            }
        }
    }

    #[test]
    fn tightness_degenerate_and_deterministic() {
        let s = InputSampler::default();
        let t = tightness_ratio(&reference(0.0, 0.0), 0.01, 100, &s, 1).unwrap();
        assert_eq!(t.ratio, 0.0);
        let a = tightness_ratio(&reference(0.1, 0.3), 0.01, 200, &s, 9).unwrap();
        let b = tightness_ratio(&reference(0.1, 0.3), 0.01, 200, &s, 9).unwrap();
        assert_eq!(a, b);
        assert!(a.ratio > 0.0 && a.ratio < 1.0);
    }

    #[test]
    fn tightness_constant_along_eta_without_classical_noise() {
        let s = InputSampler::default();
        let cells = tightness_grid(
            &reference(0.0, 0.0),
            &[0.0],
            &[0.05, 0.2, 0.4],
            0.01,
            500,
            &s,
            3,
        )
        .unwrap();
        for w in cells.windows(2) {
            assert!((w[0].estimate.ratio - w[1].estimate.ratio).abs() < 1e-12);
        }
    }

    #[test]
    fn validity_frequency_reported() {
        let v =
            bound_validity(&reference(0.2, 0.1), 0.01, 200, &InputSampler::default(), 5).unwrap();
        assert_eq!(v.trials, 200);
        assert!(v.passes());
    }
}
