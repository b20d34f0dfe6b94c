//! Classical feature layer, product-state encoders and measurement design.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::{
    c, hermitian_eigenvalues, kron_vec, pauli_x, pauli_z, ComplexMatrix, RealMatrix, C64, MAX_DIM,
};
use crate::state::DensityMatrix;

/// `y = W x + b`.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearLayer {
    weights: RealMatrix,
    bias: Vec<f64>,
}

impl LinearLayer {
    pub fn new(weights: RealMatrix, bias: Vec<f64>) -> Result<Self> {
        if bias.len() != weights.rows() {
            return Err(Error::DimensionMismatch {
                expected: weights.rows(),
                found: bias.len(),
            });
        }
        if bias.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { weights, bias })
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            weights: RealMatrix::identity(dim),
            bias: vec![0.0; dim],
        }
    }

    pub fn weights(&self) -> &RealMatrix {
        &self.weights
    }

    pub fn bias(&self) -> &[f64] {
        &self.bias
    }

    pub fn input_dim(&self) -> usize {
        self.weights.cols()
    }

    pub fn output_dim(&self) -> usize {
        self.weights.rows()
    }
}

pub fn apply_linear(layer: &LinearLayer, x: &[f64]) -> Result<Vec<f64>> {
    let mut y = layer.weights.mul_vec(x)?;
    for (yi, bi) in y.iter_mut().zip(&layer.bias) {
        *yi += bi;
    }
    Ok(y)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scheme {
    /// `⊗_j e^{-i y_j H_j} |0⟩`.
    RxProduct,
    /// Hadamard then a Z-type rotation on every qubit; Bloch vectors stay in the X–Y plane.
    Equatorial,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EncodingSpec {
    generators: Vec<ComplexMatrix>,
    scheme: Scheme,
}

impl EncodingSpec {
    pub fn new(generators: Vec<ComplexMatrix>, scheme: Scheme) -> Result<Self> {
        if generators.is_empty() || 1usize << generators.len().min(63) > MAX_DIM {
            return Err(Error::ParamOutOfRange {
                name: "qubit count",
                value: generators.len() as f64,
            });
        }
        for h in &generators {
            if h.rows() != 2 || h.cols() != 2 {
                return Err(Error::ShapeMismatch {
                    left: (2, 2),
                    right: (h.rows(), h.cols()),
                });
            }
            let dev = h.hermitian_deviation();
            if dev > 1e-10 {
                return Err(Error::NotHermitian { deviation: dev });
            }
            if scheme == Scheme::Equatorial && (h[(0, 1)].norm() > 1e-10) {
                // A non-diagonal generator would tilt the state out of the equator.
                return Err(Error::WrongScheme);
            }
        }
        Ok(Self { generators, scheme })
    }

    /// `n` qubits with the default generator `X/2` each.
    pub fn rx(n: usize) -> Result<Self> {
        Self::new(vec![pauli_x().scale(0.5); n], Scheme::RxProduct)
    }

    /// `n` equatorial qubits with generator `Z/2`, so the encoded phase equals the input.
    pub fn equatorial(n: usize) -> Result<Self> {
        Self::new(vec![pauli_z().scale(0.5); n], Scheme::Equatorial)
    }

    pub fn qubits(&self) -> usize {
        self.generators.len()
    }

    pub fn dim(&self) -> usize {
        1 << self.qubits()
    }

    pub fn generators(&self) -> &[ComplexMatrix] {
        &self.generators
    }

    pub fn scheme(&self) -> Scheme {
        self.scheme
    }

    /// `f_enc(y)` for whichever scheme this spec carries.
    pub fn encode(&self, y: &[f64]) -> Result<DensityMatrix> {
        match self.scheme {
            Scheme::RxProduct => encode_rx(self, y),
            Scheme::Equatorial => {
                self.check_len(y.len())?;
                let phases: Vec<f64> = y
                    .iter()
                    .zip(&self.generators)
                    .map(|(&yj, h)| yj * (h[(0, 0)].re - h[(1, 1)].re))
                    .collect();
                encode_equatorial(self, &phases)
            }
        }
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len != self.qubits() {
            return Err(Error::DimensionMismatch {
                expected: self.qubits(),
                found: len,
            });
        }
        Ok(())
    }
}

/// First column of `e^{-i y H}` for a 2×2 Hermitian `H`, i.e. the image of `|0⟩`.
///
/// With `H = a₀ I + a·σ`, `e^{-iyH} = e^{-iya₀}(cos(y|a|) I − i sin(y|a|) â·σ)`.
pub fn rotate_ground(h: &ComplexMatrix, y: f64) -> [C64; 2] {
    let a0 = 0.5 * (h[(0, 0)].re + h[(1, 1)].re);
    let ax = h[(0, 1)].re;
    let ay = -h[(0, 1)].im;
    let az = 0.5 * (h[(0, 0)].re - h[(1, 1)].re);
    let r = (ax * ax + ay * ay + az * az).sqrt();
    let global = C64::from_polar(1.0, -y * a0);
    if r == 0.0 {
        return [global, c(0.0, 0.0)];
    }
    let (s, co) = (y * r).sin_cos();
    let s = s / r;
    // (a·σ)|0⟩ = (a_z, a_x + i a_y)
    [global * c(co, -s * az), global * (c(0.0, -s) * c(ax, ay))]
}

pub fn encode_rx(spec: &EncodingSpec, y: &[f64]) -> Result<DensityMatrix> {
    if spec.scheme != Scheme::RxProduct {
        return Err(Error::WrongScheme);
    }
    spec.check_len(y.len())?;
    let mut psi = vec![c(1.0, 0.0)];
    for (h, &yj) in spec.generators.iter().zip(y) {
        psi = kron_vec(&psi, &rotate_ground(h, yj));
    }
    DensityMatrix::pure(&psi)
}

/// Product of `½(I + cos φ_j X + sin φ_j Y)` factors.
pub fn encode_equatorial(spec: &EncodingSpec, phases: &[f64]) -> Result<DensityMatrix> {
    if spec.scheme != Scheme::Equatorial {
        return Err(Error::WrongScheme);
    }
    spec.check_len(phases.len())?;
    let amp = core::f64::consts::FRAC_1_SQRT_2;
    let mut psi = vec![c(1.0, 0.0)];
    for &phi in phases {
        // e^{-iφZ/2}|+⟩ up to a global phase.
        psi = kron_vec(&psi, &[c(amp, 0.0), C64::from_polar(amp, phi)]);
    }
    DensityMatrix::pure(&psi)
}

/// Tolerance for POVM element positivity.
pub const POVM_PSD_TOL: f64 = 1e-10;
/// Entrywise tolerance for `Σ E_k = I`.
pub const POVM_SUM_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct Povm {
    dim: usize,
    elements: Vec<ComplexMatrix>,
    outcome_values: Vec<f64>,
}

impl Povm {
    pub fn new(elements: Vec<ComplexMatrix>, outcome_values: Vec<f64>) -> Result<Self> {
        let Some(first) = elements.first() else {
            return Err(Error::InvalidK { k: 0, dim: 0 });
        };
        let dim = first.rows();
        if outcome_values.len() != elements.len() {
            return Err(Error::LengthMismatch {
                left: elements.len(),
                right: outcome_values.len(),
            });
        }
        if outcome_values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        let mut sum = ComplexMatrix::zeros(dim, dim);
        for e in &elements {
            if e.rows() != dim || e.cols() != dim {
                return Err(Error::ShapeMismatch {
                    left: (dim, dim),
                    right: (e.rows(), e.cols()),
                });
            }
            let dev = e.hermitian_deviation();
            if dev > POVM_PSD_TOL {
                return Err(Error::NotHermitian { deviation: dev });
            }
            let min = min_eigenvalue(e)?;
            if min < -POVM_PSD_TOL {
                return Err(Error::NotPsd {
                    min_eigenvalue: min,
                });
            }
            sum = sum.add(e)?;
        }
        let deviation = sum.max_abs_diff(&ComplexMatrix::identity(dim));
        if deviation > POVM_SUM_TOL {
            return Err(Error::NotComplete { deviation });
        }
        Ok(Self {
            dim,
            elements,
            outcome_values,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[ComplexMatrix] {
        &self.elements
    }

    pub fn outcome_values(&self) -> &[f64] {
        &self.outcome_values
    }

    pub fn with_outcome_values(mut self, values: Vec<f64>) -> Result<Self> {
        if values.len() != self.elements.len() {
            return Err(Error::LengthMismatch {
                left: self.elements.len(),
                right: values.len(),
            });
        }
        self.outcome_values = values;
        Ok(self)
    }

    pub fn traces(&self) -> Vec<f64> {
        self.elements.iter().map(|e| e.trace().re).collect()
    }
}

fn min_eigenvalue(e: &ComplexMatrix) -> Result<f64> {
    let n = e.rows();
    let diagonal = (0..n).all(|i| (0..n).all(|j| i == j || e[(i, j)] == c(0.0, 0.0)));
    if diagonal {
        return Ok((0..n).map(|i| e[(i, i)].re).fold(f64::INFINITY, f64::min));
    }
    Ok(hermitian_eigenvalues(e)?.last().copied().unwrap_or(0.0))
}

/// Computational-basis projectors grouped into `k` classes by basis index modulo `k`.
pub fn povm_computational(n: usize, k: usize) -> Result<Povm> {
    if n == 0 || n > MAX_DIM.trailing_zeros() as usize {
        return Err(Error::ParamOutOfRange {
            name: "qubit count",
            value: n as f64,
        });
    }
    let dim = 1usize << n;
    if k == 0 || k > dim {
        return Err(Error::InvalidK { k, dim });
    }
    let mut elements = vec![ComplexMatrix::zeros(dim, dim); k];
    for i in 0..dim {
        elements[i % k][(i, i)] = c(1.0, 0.0);
    }
    Ok(Povm {
        dim,
        elements,
        outcome_values: (0..k).map(|v| v as f64).collect(),
    })
}

/// `min_k Tr(E_k) / d`.
pub fn povm_phi(p: &Povm) -> f64 {
    p.traces().into_iter().fold(f64::INFINITY, f64::min) / p.dim as f64
}
