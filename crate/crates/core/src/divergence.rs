//! Hockey-stick divergences and trace distance.

use alloc::vec::Vec;

use crate::encode::Povm;
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigenvalues, positive_part_trace};
use crate::state::DensityMatrix;

/// Entries down to this value are accepted and clamped to zero.
pub const NEG_CLAMP: f64 = -1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct DiscreteDistribution {
    probs: Vec<f64>,
}

impl DiscreteDistribution {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::NotNormalized { sum: 0.0 });
        }
        if probs.iter().any(|p| !p.is_finite()) {
            return Err(Error::NonFinite);
        }
        if let Some(&p) = probs.iter().find(|&&p| p < NEG_CLAMP) {
            return Err(Error::ParamOutOfRange {
                name: "probability",
                value: p,
            });
        }
        let probs: Vec<f64> = probs.into_iter().map(|p| p.max(0.0)).collect();
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > 1e-9 {
            return Err(Error::NotNormalized { sum });
        }
        Ok(Self { probs })
    }

    pub fn uniform(k: usize) -> Result<Self> {
        Self::new(alloc::vec![1.0 / k as f64; k])
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha >= 1.0 && alpha.is_finite() {
        Ok(())
    } else {
        Err(Error::AlphaOutOfRange(alpha))
    }
}

fn clamp(v: f64) -> f64 {
    v.max(0.0)
}

/// `Σ_k max(0, p_k − α q_k)`.
pub fn hs_classical(p: &DiscreteDistribution, q: &DiscreteDistribution, alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    if p.len() != q.len() {
        return Err(Error::LengthMismatch {
            left: p.len(),
            right: q.len(),
        });
    }
    Ok(clamp(
        p.probs
            .iter()
            .zip(&q.probs)
            .map(|(a, b)| (a - alpha * b).max(0.0))
            .sum(),
    ))
}

fn check_dims(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<()> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            found: sigma.dim(),
        });
    }
    Ok(())
}

/// `Tr[(ρ − α ρ′)₊]`.
pub fn hs_quantum(rho: &DensityMatrix, sigma: &DensityMatrix, alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    check_dims(rho, sigma)?;
    if rho == sigma && alpha == 1.0 {
        return Ok(0.0);
    }
    let diff = rho.matrix().sub_scaled(alpha, sigma.matrix())?;
    Ok(clamp(positive_part_trace(&diff)?))
}

/// `½ ‖ρ − ρ′‖₁`.
pub fn trace_distance(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    check_dims(rho, sigma)?;
    let diff = rho.matrix().sub(sigma.matrix())?;
    let sum: f64 = hermitian_eigenvalues(&diff)?.iter().map(|l| l.abs()).sum();
    Ok(clamp(0.5 * sum))
}

/// Outcome distribution `Re Tr[E_k ρ]`.
pub fn measure(rho: &DensityMatrix, povm: &Povm) -> Result<DiscreteDistribution> {
    if rho.dim() != povm.dim() {
        return Err(Error::DimensionMismatch {
            expected: povm.dim(),
            found: rho.dim(),
        });
    }
    let probs = povm
        .elements()
        .iter()
        .map(|e| e.trace_product(rho.matrix()).map(|z| z.re))
        .collect::<Result<Vec<f64>>>()?;
    DiscreteDistribution::new(probs)
}

/// Outcome distribution of the maximally mixed state, `Tr(E_k)/d`.
pub fn measure_mixed(povm: &Povm) -> DiscreteDistribution {
    let d = povm.dim() as f64;
    let probs = povm
        .traces()
        .into_iter()
        .map(|t| (t / d).max(0.0))
        .collect();
    DiscreteDistribution { probs }
}
