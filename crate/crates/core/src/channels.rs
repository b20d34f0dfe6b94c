//! Depolarizing, generalized amplitude damping and generalized dephasing channels.

use alloc::vec::Vec;

use crate::error::{check_eta, check_range, Error, Result};
use crate::linalg::{c, ComplexMatrix, C64};
use crate::state::DensityMatrix;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ChannelSpec {
    Depolarizing {
        eta: f64,
    },
    /// Acts on `target` only; qubit 0 is the most significant tensor factor.
    Gad {
        p_exc: f64,
        eta: f64,
        target: usize,
    },
    /// Dephasing with strength `eta` on every qubit.
    Gd {
        eta: f64,
    },
}

impl ChannelSpec {
    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        match *self {
            ChannelSpec::Depolarizing { eta } => apply_depolarizing(rho, eta),
            ChannelSpec::Gad { p_exc, eta, target } => apply_gad(rho, p_exc, eta, target),
            ChannelSpec::Gd { eta } => apply_gd(rho, eta),
        }
    }
}

/// `(1−η)ρ + η I/d`.
pub fn apply_depolarizing(rho: &DensityMatrix, eta: f64) -> Result<DensityMatrix> {
    check_eta(eta)?;
    let d = rho.dim();
    let mut out = rho.matrix().scale(1.0 - eta);
    let shift = eta / d as f64;
    for i in 0..d {
        out[(i, i)] += shift;
    }
    Ok(DensityMatrix::from_trusted(out))
}

/// Single-qubit Kraus set of the GAD channel with damping `eta` and excitation `p_exc`.
pub fn gad_kraus(p_exc: f64, eta: f64) -> Result<[[C64; 4]; 4]> {
    check_range("p_exc", p_exc, 0.0, 1.0)?;
    check_range("eta", eta, 0.0, 1.0)?;
    let g = (1.0 - p_exc).sqrt();
    let e = p_exc.sqrt();
    let keep = (1.0 - eta).sqrt();
    let jump = eta.sqrt();
    // Row-major 2×2 blocks: [k00, k01, k10, k11].
    let ks = [
        [c(g, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(g * keep, 0.0)],
        [c(0.0, 0.0), c(g * jump, 0.0), c(0.0, 0.0), c(0.0, 0.0)],
        [c(e * keep, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(e, 0.0)],
        [c(0.0, 0.0), c(0.0, 0.0), c(e * jump, 0.0), c(0.0, 0.0)],
    ];
    let mut sum = [c(0.0, 0.0); 4];
    for k in &ks {
        for r in 0..2 {
            for s in 0..2 {
                sum[2 * r + s] += (0..2)
                    .map(|t| k[2 * t + r].conj() * k[2 * t + s])
                    .sum::<C64>();
            }
        }
    }
    let dev = [sum[0] - 1.0, sum[1], sum[2], sum[3] - 1.0]
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max);
    if dev > 1e-12 {
        return Err(Error::NotComplete { deviation: dev });
    }
    Ok(ks)
}

/// `Σ_K (I ⊗ K ⊗ I) ρ (I ⊗ K ⊗ I)†` with `K` on `target`.
fn conjugate_on_qubit(
    rho: &ComplexMatrix,
    kraus: &[[C64; 4]],
    qubits: usize,
    target: usize,
) -> ComplexMatrix {
    let d = rho.rows();
    let shift = qubits - 1 - target;
    let mask = 1usize << shift;
    let mut out = ComplexMatrix::zeros(d, d);
    for i in 0..d {
        let bi = (i >> shift) & 1;
        let i0 = i & !mask;
        for j in 0..d {
            let bj = (j >> shift) & 1;
            let j0 = j & !mask;
            let mut acc = c(0.0, 0.0);
            for k in kraus {
                for a in 0..2 {
                    let ka = k[2 * bi + a];
                    if ka == c(0.0, 0.0) {
                        continue;
                    }
                    for b in 0..2 {
                        let kb = k[2 * bj + b];
                        if kb == c(0.0, 0.0) {
                            continue;
                        }
                        acc += ka * rho[(i0 | a << shift, j0 | b << shift)] * kb.conj();
                    }
                }
            }
            out[(i, j)] = acc;
        }
    }
    out
}

pub fn apply_gad(
    rho: &DensityMatrix,
    p_exc: f64,
    eta: f64,
    target: usize,
) -> Result<DensityMatrix> {
    let kraus = gad_kraus(p_exc, eta)?;
    let n = rho.qubits()?;
    if target >= n {
        return Err(Error::BadTarget { target, qubits: n });
    }
    Ok(DensityMatrix::from_trusted(conjugate_on_qubit(
        rho.matrix(),
        &kraus,
        n,
        target,
    )))
}

/// Per-qubit `(1−η)ρ + η ZρZ` on all qubits. Each qubit scales the entries whose
/// row and column bits differ there by `1−2η`; the diagonal is left bit-exact.
pub fn apply_gd(rho: &DensityMatrix, eta: f64) -> Result<DensityMatrix> {
    check_eta(eta)?;
    let n = rho.qubits()?;
    let d = rho.dim();
    let factor = 1.0 - 2.0 * eta;
    let powers: Vec<f64> = (0..=n).map(|k| factor.powi(k as i32)).collect();
    let src = rho.matrix();
    let out = ComplexMatrix::from_fn(d, d, |i, j| {
        let flips = (i ^ j).count_ones() as usize;
        if flips == 0 {
            src[(i, j)]
        } else {
            src[(i, j)] * powers[flips]
        }
    });
    Ok(DensityMatrix::from_trusted(out))
}
