//! Gaussian-mechanism calibration, with the classical δ relaxed by depolarizing noise.

use alloc::vec::Vec;

use crate::accountant::{amplify_failure_depolarizing, PrivacyBudget};
use crate::error::{check_range, Error, Result};

/// Standard normal CDF, `½ erfc(−x/√2)`.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x * core::f64::consts::FRAC_1_SQRT_2)
}

/// δ achieved at scale `sigma` by the Gaussian mechanism with ℓ₂ sensitivity `l`:
/// `Φ(L/(2σ) − εσ/L) − e^ε Φ(−L/(2σ) − εσ/L)`.
pub fn analytic_delta(sigma: f64, epsilon: f64, l: f64) -> f64 {
    let a = l / (2.0 * sigma);
    let b = epsilon * sigma / l;
    normal_cdf(a - b) - epsilon.exp() * normal_cdf(-a - b)
}

fn check_gaussian_params(epsilon: f64, delta: f64, l: f64) -> Result<()> {
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(Error::ParamOutOfRange {
            name: "epsilon",
            value: epsilon,
        });
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::ParamOutOfRange {
            name: "delta",
            value: delta,
        });
    }
    if !(l > 0.0 && l.is_finite()) {
        return Err(Error::ParamOutOfRange {
            name: "L",
            value: l,
        });
    }
    Ok(())
}

/// `σ = √(2 ln(1.25/δ)) L/ε`.
pub fn sigma_basic(epsilon: f64, delta: f64, l: f64) -> Result<f64> {
    check_gaussian_params(epsilon, delta, l)?;
    Ok((2.0 * (1.25 / delta).ln()).sqrt() * l / epsilon)
}

pub const BISECTION_MAX_ITER: usize = 200;
pub const SIGMA_LO: f64 = 1e-6;
pub const SIGMA_HI: f64 = 1e4;

/// Smallest σ (to within `1e-12·L`) with `analytic_delta(σ) ≤ delta`, by bisection
/// over `[1e-6·L, 1e4·L]`. Returns the upper end of the final bracket so the
/// target is always met.
pub fn sigma_analytic(epsilon: f64, delta: f64, l: f64) -> Result<f64> {
    check_gaussian_params(epsilon, delta, l)?;
    let (mut lo, mut hi) = (SIGMA_LO * l, SIGMA_HI * l);
    if analytic_delta(hi, epsilon, l) > delta {
        return Err(Error::NoBracket { delta, lo, hi });
    }
    if analytic_delta(lo, epsilon, l) <= delta {
        return Ok(lo);
    }
    for _ in 0..BISECTION_MAX_ITER {
        if hi - lo < 1e-12 * l {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if analytic_delta(mid, epsilon, l) > delta {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(hi)
}

/// Classical δ that, after depolarizing noise `eta` on a `d`-dimensional system,
/// leaves exactly `delta_prime`: `(δ′ + η(e^ε − 1)/d)/(1 − η)`.
pub fn relax_delta(delta_prime: f64, epsilon: f64, eta: f64, d: u64) -> Result<f64> {
    check_range("eta", eta, 0.0, 1.0)?;
    if eta >= 1.0 {
        return Err(Error::ParamOutOfRange {
            name: "eta",
            value: eta,
        });
    }
    check_range("delta_prime", delta_prime, 0.0, 1.0)?;
    check_range("epsilon", epsilon, 0.0, f64::MAX)?;
    if d < 2 {
        return Err(Error::ParamOutOfRange {
            name: "d",
            value: d as f64,
        });
    }
    let delta = (delta_prime + eta * epsilon.exp_m1() / d as f64) / (1.0 - eta);
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::Infeasible { delta });
    }
    Ok(delta)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GaussianMechanism {
    Basic,
    Analytic,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CalibrationRequest {
    pub target_epsilon: f64,
    pub target_delta: f64,
    pub sensitivity: f64,
    pub eta: f64,
    pub d: u64,
    pub mechanism: GaussianMechanism,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CalibrationResult {
    pub relaxed_delta: f64,
    pub sigma: f64,
    pub mechanism: GaussianMechanism,
}

impl CalibrationResult {
    /// `|analytic_delta(σ) − δ|`; only meaningful for the analytic mechanism.
    pub fn gaussian_residual(&self, req: &CalibrationRequest) -> f64 {
        (analytic_delta(self.sigma, req.target_epsilon, req.sensitivity) - self.relaxed_delta).abs()
    }

    /// `|δ′(relaxed δ) − target δ′|` after pushing the relaxed δ back through the channel.
    pub fn amplification_residual(&self, req: &CalibrationRequest) -> Result<f64> {
        let b = PrivacyBudget::new(req.target_epsilon, self.relaxed_delta)?;
        let out = amplify_failure_depolarizing(&b, req.eta, req.d)?;
        Ok((out.delta_prime - req.target_delta).abs())
    }
}

pub fn hybrid_calibrate(req: &CalibrationRequest) -> Result<CalibrationResult> {
    check_gaussian_params(req.target_epsilon, req.target_delta, req.sensitivity)?;
    let relaxed_delta = relax_delta(req.target_delta, req.target_epsilon, req.eta, req.d)?;
    let sigma = match req.mechanism {
        GaussianMechanism::Basic => {
            sigma_basic(req.target_epsilon, relaxed_delta, req.sensitivity)?
        }
        GaussianMechanism::Analytic => {
            sigma_analytic(req.target_epsilon, relaxed_delta, req.sensitivity)?
        }
    };
    Ok(CalibrationResult {
        relaxed_delta,
        sigma,
        mechanism: req.mechanism,
    })
}

pub const SCAN_MAX_QUBITS: u32 = 30;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScanValues {
    pub sigma2_classical: f64,
    pub sigma2_hybrid: f64,
    pub reduction_percent: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScanRow {
    pub eta: f64,
    pub n: u32,
    pub values: Result<ScanValues>,
}

/// Percentage reduction in classical noise variance from depolarizing noise `eta`
/// on `n` qubits, for every pair in `etas × n_range`, sorted by `(η, n)`.
pub fn noise_reduction_scan(
    epsilon_prime: f64,
    delta_prime: f64,
    l: f64,
    etas: &[f64],
    n_range: core::ops::RangeInclusive<u32>,
) -> Result<Vec<ScanRow>> {
    if *n_range.start() < 1 || *n_range.end() > SCAN_MAX_QUBITS || n_range.is_empty() {
        return Err(Error::ParamOutOfRange {
            name: "n",
            value: *n_range.end() as f64,
        });
    }
    for &eta in etas {
        check_range("eta", eta, 0.0, 1.0)?;
    }
    let sigma_classical = sigma_analytic(epsilon_prime, delta_prime, l)?;
    let s2c = sigma_classical * sigma_classical;
    let mut sorted: Vec<f64> = etas.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut rows = Vec::with_capacity(sorted.len() * n_range.clone().count());
    for &eta in &sorted {
        for n in n_range.clone() {
            let req = CalibrationRequest {
                target_epsilon: epsilon_prime,
                target_delta: delta_prime,
                sensitivity: l,
                eta,
                d: 1u64 << n,
                mechanism: GaussianMechanism::Analytic,
            };
            let values = hybrid_calibrate(&req).map(|r| {
                let s2h = r.sigma * r.sigma;
                ScanValues {
                    sigma2_classical: s2c,
                    sigma2_hybrid: s2h,
                    reduction_percent: 100.0 * (1.0 - s2h / s2c),
                }
            });
            rows.push(ScanRow { eta, n, values });
        }
    }
    Ok(rows)
}

/// The `n → ∞` limit of the scan: `100(1 − σ²(ε′, δ′/(1−η)) / σ²(ε′, δ′))`.
pub fn plateau_limit(epsilon_prime: f64, delta_prime: f64, l: f64, eta: f64) -> Result<f64> {
    check_range("eta", eta, 0.0, 1.0)?;
    let relaxed = delta_prime / (1.0 - eta);
    if !(relaxed < 1.0) {
        return Err(Error::Infeasible { delta: relaxed });
    }
    let sc = sigma_analytic(epsilon_prime, delta_prime, l)?;
    let sh = sigma_analytic(epsilon_prime, relaxed, l)?;
    Ok(100.0 * (1.0 - (sh * sh) / (sc * sc)))
}

#[cfg(test)]
#[allow(clippy::excessive_precision)]
mod tests {
    use super::*;

    /// Φ at x = −8, −7.5, …, 8, evaluated at 40 significant digits.
    const PHI_TABLE: [(f64, f64); 33] = [
        (-8.0, 6.2209605742717841e-16),
        (-7.5, 3.1908916729108962e-14),
        (-7.0, 1.279812543885835e-12),
        (-6.5, 4.0160005838591178e-11),
        (-6.0, 9.8658764503769814e-10),
        (-5.5, 1.8989562465887719e-8),
        (-5.0, 2.8665157187919391e-7),
        (-4.5, 3.3976731247300604e-6),
        (-4.0, 3.1671241833119921e-5),
        (-3.5, 0.00023262907903552504),
        (-3.0, 0.0013498980316300945),
        (-2.5, 0.0062096653257761352),
        (-2.0, 0.022750131948179207),
        (-1.5, 0.066807201268858066),
        (-1.0, 0.15865525393145705),
        (-0.5, 0.3085375387259869),
        (0.0, 0.5),
        (0.5, 0.6914624612740131),
        (1.0, 0.84134474606854295),
        (1.5, 0.93319279873114193),
        (2.0, 0.97724986805182079),
        (2.5, 0.99379033467422386),
        (3.0, 0.99865010196836991),
        (3.5, 0.99976737092096447),
        (4.0, 0.99996832875816688),
        (4.5, 0.99999660232687527),
        (5.0, 0.99999971334842812),
        (5.5, 0.99999998101043753),
        (6.0, 0.99999999901341235),
        (6.5, 0.99999999995983999),
        (7.0, 0.99999999999872019),
        (7.5, 0.99999999999996809),
        (8.0, 0.99999999999999938),
    ];

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn normal_cdf_matches_high_precision_table() {
        for (x, want) in PHI_TABLE {
            assert!((normal_cdf(x) - want).abs() <= 1e-12, "x = {x}");
            if x < 0.0 {
                assert!(rel(normal_cdf(x), want) < 1e-13, "relative at x = {x}");
            }
        }
    }

    #[test]
    fn basic_examples() {
        let s = sigma_basic(1.0, 1e-5, 1.0).unwrap();
        assert!(rel(s, 4.844805262605389) < 1e-12);
        assert!(rel(sigma_basic(1.0, 1e-5, 2.0).unwrap(), 2.0 * s) < 1e-15);
        assert!(rel(sigma_basic(0.5, 1e-5, 1.0).unwrap(), 2.0 * s) < 1e-15);
        assert!(sigma_basic(0.0, 1e-5, 1.0).is_err());
    }

    #[test]
    fn analytic_matches_reference_root() {
        // Root of the same equation found independently with Brent's method.
        let s = sigma_analytic(1.0, 1e-5, 1.0).unwrap();
        assert!(rel(s, 3.730631634815941) < 1e-9);
        assert!((analytic_delta(s, 1.0, 1.0) - 1e-5).abs() < 1e-12);
    }

    #[test]
    fn analytic_delta_decreases_in_sigma() {
        let mut last = f64::INFINITY;
        for i in 1..200 {
            let v = analytic_delta(0.05 * i as f64, 0.7, 1.0);
            assert!(v <= last);
            last = v;
        }
    }

    #[test]
    fn analytic_sigma_shrinks_as_delta_grows() {
        let mut last = f64::INFINITY;
        for delta in [1e-9, 1e-6, 1e-3, 0.1, 0.5, 0.9, 0.999, 1.0 - 1e-9] {
            let s = sigma_analytic(0.5, delta, 1.0).unwrap();
            assert!(s < last);
            last = s;
        }
        assert!(last < 0.1);
    }

    #[test]
    fn no_bracket_when_target_unreachable() {
        assert!(matches!(
            sigma_analytic(1e-12, 1e-300, 1.0),
            Err(Error::NoBracket { .. })
        ));
    }

    #[test]
    fn relax_examples() {
        assert_eq!(relax_delta(1e-5, 1.0, 0.0, 32).unwrap(), 1e-5);
        let d = relax_delta(1e-5, 1.0, 0.1, 32).unwrap();
        assert!(rel(d, 5.977367459927240e-3) < 1e-12);
        let back =
            amplify_failure_depolarizing(&PrivacyBudget::new(1.0, d).unwrap(), 0.1, 32).unwrap();
        assert!((back.delta_prime - 1e-5).abs() < 1e-12);
        assert!(matches!(
            relax_delta(1e-5, 1.0, 0.999999, 2),
            Err(Error::Infeasible { .. })
        ));
        assert!(relax_delta(1e-5, 1.0, 1.0, 2).is_err());
    }

    #[test]
    fn hybrid_reduces_to_analytic_without_noise() {
        let req = CalibrationRequest {
            target_epsilon: 1.0,
            target_delta: 1e-5,
            sensitivity: 1.0,
            eta: 0.0,
            d: 32,
            mechanism: GaussianMechanism::Analytic,
        };
        let r = hybrid_calibrate(&req).unwrap();
        assert_eq!(r.sigma, sigma_analytic(1.0, 1e-5, 1.0).unwrap());
        assert!(r.gaussian_residual(&req) < 1e-9);
        assert!(r.amplification_residual(&req).unwrap() < 1e-12);
    }

    #[test]
    fn hybrid_sigma_non_increasing_in_eta() {
        let mut last = f64::INFINITY;
        for i in 0..=90 {
            let req = CalibrationRequest {
                target_epsilon: 1.0,
                target_delta: 1e-5,
                sensitivity: 1.0,
                eta: i as f64 / 100.0,
                d: 16,
                mechanism: GaussianMechanism::Analytic,
            };
            let s = hybrid_calibrate(&req).unwrap().sigma;
            assert!(s <= last + 1e-12);
            last = s;
        }
    }

    #[test]
    fn scan_shape() {
        let rows = noise_reduction_scan(1.0, 1e-5, 1.0, &[0.2, 0.0], 1..=5).unwrap();
        assert_eq!(rows.len(), 10);
        assert_eq!((rows[0].eta, rows[0].n), (0.0, 1));
        for r in &rows[..5] {
            assert_eq!(r.values.as_ref().unwrap().reduction_percent, 0.0);
        }
        let pct: Vec<f64> = rows[5..]
            .iter()
            .map(|r| r.values.as_ref().unwrap().reduction_percent)
            .collect();
        assert!(pct.windows(2).all(|w| w[0] >= w[1]));
        assert!(noise_reduction_scan(1.0, 1e-5, 1.0, &[0.1], 1..=31).is_err());
    }
}
