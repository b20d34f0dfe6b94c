use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigenvalues, ComplexMatrix, C64};

/// Tolerance used when validating density matrices.
pub const STATE_TOL: f64 = 1e-10;

/// A Hermitian, positive semidefinite, unit-trace operator.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::NotSquare {
                rows: matrix.rows(),
                cols: matrix.cols(),
            });
        }
        let dev = matrix.hermitian_deviation();
        if dev > STATE_TOL {
            return Err(Error::NotHermitian { deviation: dev });
        }
        let tr = matrix.trace().re;
        if (tr - 1.0).abs() > STATE_TOL {
            return Err(Error::NotUnitTrace { trace: tr });
        }
        let min = hermitian_eigenvalues(&matrix)?
            .last()
            .copied()
            .unwrap_or(0.0);
        if min < -STATE_TOL {
            return Err(Error::NotPsd {
                min_eigenvalue: min,
            });
        }
        Ok(Self { matrix })
    }

    /// Skips validation. Used for outputs of maps already known to be CPTP.
    pub(crate) fn from_trusted(matrix: ComplexMatrix) -> Self {
        Self { matrix }
    }

    /// `|ψ⟩⟨ψ|` for a vector normalized on the fly.
    pub fn pure(psi: &[C64]) -> Result<Self> {
        let norm = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if psi.is_empty() || !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::ParamOutOfRange {
                name: "state norm",
                value: norm,
            });
        }
        let v: Vec<C64> = psi.iter().map(|z| z / norm).collect();
        Ok(Self::from_trusted(ComplexMatrix::outer(&v)))
    }

    pub fn basis(dim: usize, index: usize) -> Result<Self> {
        if index >= dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: index,
            });
        }
        let mut m = ComplexMatrix::zeros(dim, dim);
        m[(index, index)] = C64::new(1.0, 0.0);
        Ok(Self::from_trusted(m))
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self::from_trusted(ComplexMatrix::identity(dim).scale(1.0 / dim as f64))
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    /// `Tr[ρ²]`.
    pub fn purity(&self) -> f64 {
        self.matrix.as_slice().iter().map(|z| z.norm_sqr()).sum()
    }

    /// Number of qubits, when the dimension is a power of two.
    pub fn qubits(&self) -> Result<usize> {
        qubit_count(self.dim())
    }
}

pub fn qubit_count(dim: usize) -> Result<usize> {
    if dim >= 2 && dim.is_power_of_two() {
        Ok(dim.trailing_zeros() as usize)
    } else {
        Err(Error::NotQubitSystem { dim })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c;

    #[test]
    fn validates_invariants() {
        assert!(DensityMatrix::new(ComplexMatrix::from_real_diag(&[0.5, 0.5])).is_ok());
        assert!(matches!(
            DensityMatrix::new(ComplexMatrix::from_real_diag(&[0.6, 0.5])),
            Err(Error::NotUnitTrace { .. })
        ));
        assert!(matches!(
            DensityMatrix::new(ComplexMatrix::from_real_diag(&[1.5, -0.5])),
            Err(Error::NotPsd { .. })
        ));
        let mut m = ComplexMatrix::from_real_diag(&[0.5, 0.5]);
        m[(0, 1)] = c(0.1, 0.0);
        assert!(matches!(
            DensityMatrix::new(m),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn pure_state_has_unit_purity() {
        let rho = DensityMatrix::pure(&[c(1.0, 0.0), c(0.0, 1.0)]).unwrap();
        assert!((rho.purity() - 1.0).abs() < 1e-15);
        assert!((rho.matrix().trace().re - 1.0).abs() < 1e-15);
        assert!((DensityMatrix::maximally_mixed(4).purity() - 0.25).abs() < 1e-15);
    }

    #[test]
    fn qubit_counts() {
        assert_eq!(qubit_count(8).unwrap(), 3);
        assert!(qubit_count(6).is_err());
        assert!(qubit_count(1).is_err());
    }
}
