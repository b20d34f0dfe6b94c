//! Privacy amplification by quantum noise, and the robustness certificate.

use crate::error::{check_range, Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PrivacyBudget {
    pub epsilon: f64,
    pub delta: f64,
}

impl PrivacyBudget {
    pub fn new(epsilon: f64, delta: f64) -> Result<Self> {
        if !(epsilon >= 0.0 && epsilon.is_finite()) {
            return Err(Error::ParamOutOfRange {
                name: "epsilon",
                value: epsilon,
            });
        }
        if !(0.0..1.0).contains(&delta) {
            return Err(Error::ParamOutOfRange {
                name: "delta",
                value: delta,
            });
        }
        Ok(Self { epsilon, delta })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AmplificationRule {
    DepolarizingFailure,
    DepolarizingLoss,
    Gad,
    GdEquatorial,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AmplifiedBudget {
    pub epsilon_prime: f64,
    pub delta_prime: f64,
    pub rule: AmplificationRule,
}

fn amplified(epsilon_prime: f64, delta_prime: f64, rule: AmplificationRule) -> AmplifiedBudget {
    // Negative δ′ means the guarantee is vacuously perfect.
    let delta_prime = if delta_prime > 0.0 {
        delta_prime.min(1.0 - f64::EPSILON)
    } else {
        0.0
    };
    AmplifiedBudget {
        epsilon_prime,
        delta_prime,
        rule,
    }
}

fn check_budget(b: &PrivacyBudget) -> Result<()> {
    PrivacyBudget::new(b.epsilon, b.delta).map(|_| ())
}

/// Depolarizing noise shrinks δ: `δ′ = [η(1−e^ε)/d + (1−η)δ]₊`, `ε′ = ε`.
pub fn amplify_failure_depolarizing(
    b: &PrivacyBudget,
    eta: f64,
    d: u64,
) -> Result<AmplifiedBudget> {
    check_budget(b)?;
    check_range("eta", eta, 0.0, 1.0)?;
    if d < 2 {
        return Err(Error::ParamOutOfRange {
            name: "d",
            value: d as f64,
        });
    }
    let delta_prime = -eta * b.epsilon.exp_m1() / d as f64 + (1.0 - eta) * b.delta;
    Ok(amplified(
        b.epsilon,
        delta_prime,
        AmplificationRule::DepolarizingFailure,
    ))
}

/// Depolarizing noise shrinks ε:
/// `ε′ = ln(1 + (1−η)(e^ε − 1))`,
/// `δ′ = (1−η)(1 − e^{ε′−ε}(1−δ) − (e^ε − e^{ε′})φ)`.
pub fn amplify_loss_depolarizing(b: &PrivacyBudget, eta: f64, phi: f64) -> Result<AmplifiedBudget> {
    check_budget(b)?;
    check_range("eta", eta, 0.0, 1.0)?;
    check_range("phi", phi, 0.0, 1.0)?;
    let em1 = b.epsilon.exp_m1();
    let epsilon_prime = ((1.0 - eta) * em1).ln_1p();
    // e^{ε′−ε} = 1 + η(e^{−ε} − 1) and e^ε − e^{ε′} = η(e^ε − 1), both without cancellation.
    let ratio = 1.0 + eta * (-b.epsilon).exp_m1();
    let gap = eta * em1;
    let delta_prime = (1.0 - eta) * (1.0 - ratio * (1.0 - b.delta) - gap * phi);
    Ok(amplified(
        epsilon_prime,
        delta_prime,
        AmplificationRule::DepolarizingLoss,
    ))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EtaThreshold {
    pub threshold: f64,
    pub denominator: f64,
}

/// Smallest η at which [`amplify_loss_depolarizing`] with `φ = 1/K` stops increasing δ:
/// `1 − δ / ((1−δ)(1−e^{−ε}) − (e^ε−1)/K)`.
pub fn eta_threshold(b: &PrivacyBudget, k: u64) -> Result<EtaThreshold> {
    check_budget(b)?;
    if k == 0 {
        return Err(Error::ParamOutOfRange {
            name: "K",
            value: 0.0,
        });
    }
    let denominator = (1.0 - b.delta) * -(-b.epsilon).exp_m1() - b.epsilon.exp_m1() / k as f64;
    if !(denominator > 0.0) {
        return Err(Error::Undefined { denominator });
    }
    Ok(EtaThreshold {
        threshold: 1.0 - b.delta / denominator,
        denominator,
    })
}

/// `δ′ = (2√η − η)δ`, `ε′ = ε`.
pub fn amplify_gad(b: &PrivacyBudget, eta: f64) -> Result<AmplifiedBudget> {
    check_budget(b)?;
    check_range("eta", eta, 0.0, 1.0)?;
    let factor = 2.0 * eta.sqrt() - eta;
    Ok(amplified(
        b.epsilon,
        factor * b.delta,
        AmplificationRule::Gad,
    ))
}

/// `δ′ = |1 − 2η| δ`, `ε′ = ε`, for equatorial product encodings.
pub fn amplify_gd_equatorial(b: &PrivacyBudget, eta: f64) -> Result<AmplifiedBudget> {
    check_budget(b)?;
    check_range("eta", eta, 0.0, 1.0)?;
    let factor = (1.0 - 2.0 * eta).abs();
    Ok(amplified(
        b.epsilon,
        factor * b.delta,
        AmplificationRule::GdEquatorial,
    ))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Certificate {
    pub certified: bool,
    pub margin: f64,
}

/// Robustness holds when `s_k > e^{2ε} max_{i≠k} s_i + (1 + e^ε) δ′`.
pub fn certify_robustness(
    scores: &[f64],
    class: usize,
    epsilon: f64,
    delta_prime: f64,
) -> Result<Certificate> {
    if class >= scores.len() {
        return Err(Error::BadIndex {
            index: class,
            len: scores.len(),
        });
    }
    for &s in scores {
        check_range("score", s, 0.0, 1.0)?;
    }
    check_range("epsilon", epsilon, 0.0, f64::MAX)?;
    check_range("delta_prime", delta_prime, 0.0, 1.0)?;
    let runner_up = scores
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != class)
        .map(|(_, &s)| s)
        .fold(0.0, f64::max);
    let margin =
        scores[class] - (2.0 * epsilon).exp() * runner_up - (1.0 + epsilon.exp()) * delta_prime;
    Ok(Certificate {
        certified: margin > 0.0,
        margin,
    })
}
