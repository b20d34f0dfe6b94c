//! Dense complex linear algebra over small Hilbert spaces.
//!
//! Everything here is row-major and double precision. The Hermitian
//! eigensolver reduces to a real symmetric tridiagonal matrix with complex
//! Householder reflections and then runs implicit QL with Wilkinson shifts.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut};

use num_complex::Complex64;

use crate::error::Error;

pub type C64 = Complex64;

/// Largest dimension the crate is designed for (ten qubits).
pub const MAX_DIM: usize = 1024;

/// Entrywise tolerance used when accepting a matrix as Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-8;

#[inline]
pub(crate) fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self, Error> {
        if rows == 0 || cols == 0 {
            return Err(Error::EmptyMatrix);
        }
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                found: data.len(),
            });
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![C64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim, dim);
        for i in 0..dim {
            m[(i, i)] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_real_diag(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &v) in diag.iter().enumerate() {
            m[(i, i)] = C64::new(v, 0.0);
        }
        m
    }

    /// Outer product `v v†`.
    pub fn outer(v: &[C64]) -> Self {
        Self::from_fn(v.len(), v.len(), |i, j| v[i] * v[j].conj())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, Error> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, Error> {
        self.zip_with(other, |a, b| a - b)
    }

    /// `self - alpha * other`, the operand of every hockey-stick divergence.
    pub fn sub_scaled(&self, alpha: f64, other: &Self) -> Result<Self, Error> {
        self.zip_with(other, |a, b| a - b * alpha)
    }

    fn zip_with(&self, other: &Self, f: impl Fn(C64, C64) -> C64) -> Result<Self, Error> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::ShapeMismatch {
                left: (self.rows, self.cols),
                right: (other.rows, other.cols),
            });
        }
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }

    pub fn matmul(&self, other: &Self) -> Result<Self, Error> {
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch {
                left: (self.rows, self.cols),
                right: (other.rows, other.cols),
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                let row = &other.data[k * other.cols..(k + 1) * other.cols];
                let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (d, &b) in dst.iter_mut().zip(row) {
                    *d += a * b;
                }
            }
        }
        Ok(out)
    }

    /// `Tr[self · other]` without forming the product.
    pub fn trace_product(&self, other: &Self) -> Result<C64, Error> {
        if self.cols != other.rows || self.rows != other.cols {
            return Err(Error::ShapeMismatch {
                left: (self.rows, self.cols),
                right: (other.rows, other.cols),
            });
        }
        let mut acc = C64::new(0.0, 0.0);
        for i in 0..self.rows {
            for j in 0..self.cols {
                acc += self[(i, j)] * other[(j, i)];
            }
        }
        Ok(acc)
    }

    /// Largest entrywise modulus of `A - A†`.
    pub fn hermitian_deviation(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let n = self.rows;
        let mut worst = 0.0_f64;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        if self.rows != other.rows || self.cols != other.cols {
            return f64::INFINITY;
        }
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// `(A + A†) / 2`, rejecting inputs further than [`HERMITIAN_TOL`] from Hermitian.
    pub fn symmetrized(&self) -> Result<Self, Error> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let dev = self.hermitian_deviation();
        if dev > HERMITIAN_TOL {
            return Err(Error::NotHermitian { deviation: dev });
        }
        let n = self.rows;
        Ok(Self::from_fn(n, n, |i, j| {
            if i == j {
                C64::new(self[(i, i)].re, 0.0)
            } else {
                (self[(i, j)] + self[(j, i)].conj()) * 0.5
            }
        }))
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Real dense matrix, used for the classical weight matrix `W`.
#[derive(Clone, Debug, PartialEq)]
pub struct RealMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl RealMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self, Error> {
        if rows == 0 || cols == 0 {
            return Err(Error::EmptyMatrix);
        }
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                found: data.len(),
            });
        }
        if data.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self, Error> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|row| row.len() != c) {
            return Err(Error::DimensionMismatch {
                expected: c,
                found: bad.len(),
            });
        }
        Self::new(r, c, rows.iter().flatten().copied().collect())
    }

    pub fn identity(dim: usize) -> Self {
        let mut data = vec![0.0; dim * dim];
        for i in 0..dim {
            data[i * dim + i] = 1.0;
        }
        Self {
            rows: dim,
            cols: dim,
            data,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| v * s).collect(),
        }
    }

    pub fn mul_vec(&self, x: &[f64]) -> Result<Vec<f64>, Error> {
        if x.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: x.len(),
            });
        }
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(x).map(|(w, v)| w * v).sum())
            .collect())
    }
}

/// Kronecker product `a ⊗ b`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let rows = a.rows * b.rows;
    let cols = a.cols * b.cols;
    let mut out = ComplexMatrix::zeros(rows, cols);
    for i in 0..a.rows {
        for j in 0..a.cols {
            let aij = a[(i, j)];
            for k in 0..b.rows {
                for l in 0..b.cols {
                    out[(i * b.rows + k, j * b.cols + l)] = aij * b[(k, l)];
                }
            }
        }
    }
    out
}

/// Kronecker product of state vectors.
pub fn kron_vec(a: &[C64], b: &[C64]) -> Vec<C64> {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for &x in a {
        for &y in b {
            out.push(x * y);
        }
    }
    out
}

pub fn pauli_x() -> ComplexMatrix {
    ComplexMatrix::from_fn(2, 2, |i, j| if i != j { c(1.0, 0.0) } else { c(0.0, 0.0) })
}

pub fn pauli_y() -> ComplexMatrix {
    ComplexMatrix::from_fn(2, 2, |i, j| match (i, j) {
        (0, 1) => c(0.0, -1.0),
        (1, 0) => c(0.0, 1.0),
        _ => c(0.0, 0.0),
    })
}

pub fn pauli_z() -> ComplexMatrix {
    ComplexMatrix::from_real_diag(&[1.0, -1.0])
}

/// Eigen-decomposition of a Hermitian matrix, eigenvalues in descending order.
#[derive(Clone, Debug)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    /// Eigenvectors stored as columns, in the same order as `eigenvalues`.
    pub eigenvectors: ComplexMatrix,
}

impl Spectrum {
    /// `V Λ V†`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let v = &self.eigenvectors;
        let n = v.rows();
        ComplexMatrix::from_fn(n, n, |i, j| {
            (0..n)
                .map(|k| v[(i, k)] * self.eigenvalues[k] * v[(j, k)].conj())
                .sum()
        })
    }
}

pub fn hermitian_eig(a: &ComplexMatrix) -> Result<Spectrum, Error> {
    let (values, vectors) = eig_impl(a, true)?;
    Ok(Spectrum {
        eigenvalues: values,
        eigenvectors: vectors.expect("vectors requested"),
    })
}

/// Eigenvalues only (descending); skips all vector accumulation.
pub fn hermitian_eigenvalues(a: &ComplexMatrix) -> Result<Vec<f64>, Error> {
    eig_impl(a, false).map(|(v, _)| v)
}

/// `Tr[A₊]`, the sum of the positive eigenvalues.
pub fn positive_part_trace(a: &ComplexMatrix) -> Result<f64, Error> {
    Ok(hermitian_eigenvalues(a)?
        .into_iter()
        .filter(|&l| l > 0.0)
        .sum())
}

/// Spectral norm of a Hermitian operator, `max |λ|`.
pub fn operator_norm(a: &ComplexMatrix) -> Result<f64, Error> {
    Ok(hermitian_eigenvalues(a)?
        .into_iter()
        .fold(0.0, |m, l| m.max(l.abs())))
}

/// Maximum absolute row sum.
pub fn matrix_inf_norm(w: &RealMatrix) -> f64 {
    (0..w.rows())
        .map(|i| w.row(i).iter().map(|v| v.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

fn eig_impl(
    a: &ComplexMatrix,
    want_vectors: bool,
) -> Result<(Vec<f64>, Option<ComplexMatrix>), Error> {
    let mut h = a.symmetrized()?;
    let n = h.rows();
    if n > MAX_DIM {
        return Err(Error::TooLarge {
            dim: n,
            max: MAX_DIM,
        });
    }

    let mut q = if want_vectors {
        Some(ComplexMatrix::identity(n))
    } else {
        None
    };
    tridiagonalize(&mut h, q.as_mut());

    // Unitary diagonal phase change that makes the off-diagonal real and non-negative.
    let mut diag: Vec<f64> = (0..n).map(|i| h[(i, i)].re).collect();
    let mut off = vec![0.0; n];
    let mut phases = vec![c(1.0, 0.0); n];
    for i in 0..n.saturating_sub(1) {
        let sub = h[(i + 1, i)];
        let r = sub.norm();
        off[i] = r;
        phases[i + 1] = if r > 0.0 {
            phases[i] * (sub / r)
        } else {
            phases[i]
        };
    }

    let mut z = if want_vectors {
        let mut id = vec![0.0; n * n];
        for i in 0..n {
            id[i * n + i] = 1.0;
        }
        Some(id)
    } else {
        None
    };
    tql2(&mut diag, &mut off, z.as_deref_mut(), n)?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| diag[j].total_cmp(&diag[i]));
    let values = order.iter().map(|&i| diag[i]).collect();

    let vectors = match (q, z) {
        (Some(q), Some(z)) => {
            // V = Q · diag(phases) · Z, columns permuted into descending order.
            let mut v = ComplexMatrix::zeros(n, n);
            for r in 0..n {
                for (col, &src) in order.iter().enumerate() {
                    let mut acc = c(0.0, 0.0);
                    for k in 0..n {
                        let zk = z[k * n + src];
                        if zk != 0.0 {
                            acc += q[(r, k)] * phases[k] * zk;
                        }
                    }
                    v[(r, col)] = acc;
                }
            }
            Some(v)
        }
        _ => None,
    };
    Ok((values, vectors))
}

/// Householder reduction of a Hermitian matrix to Hermitian tridiagonal form,
/// in place. When `q` is given it accumulates the unitary with `A = Q T Q†`.
fn tridiagonalize(a: &mut ComplexMatrix, mut q: Option<&mut ComplexMatrix>) {
    let n = a.rows();
    if n < 3 {
        return;
    }
    let mut v = vec![c(0.0, 0.0); n];
    let mut p = vec![c(0.0, 0.0); n];
    for k in 0..n - 2 {
        let m = n - k - 1;
        let x = |i: usize, a: &ComplexMatrix| a[(k + 1 + i, k)];
        let norm = (0..m).map(|i| x(i, a).norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue;
        }
        let x0 = x(0, a);
        let phase = if x0.norm() > 0.0 {
            x0 / x0.norm()
        } else {
            c(1.0, 0.0)
        };
        let alpha = -phase * norm;
        for (i, vi) in v[..m].iter_mut().enumerate() {
            *vi = x(i, a);
        }
        v[0] -= alpha;
        let vnorm2: f64 = v[..m].iter().map(|z| z.norm_sqr()).sum();
        if vnorm2 == 0.0 {
            continue;
        }
        let tau = 2.0 / vnorm2;

        // Trailing block B = A[k+1.., k+1..]: B ← H B H with H = I − τ v v†.
        for i in 0..m {
            let mut acc = c(0.0, 0.0);
            for j in 0..m {
                acc += a[(k + 1 + i, k + 1 + j)] * v[j];
            }
            p[i] = acc * tau;
        }
        let vp: C64 = (0..m).map(|i| v[i].conj() * p[i]).sum();
        let kk = vp.re * tau * 0.5;
        for i in 0..m {
            p[i] -= v[i] * kk;
        }
        for i in 0..m {
            for j in 0..m {
                let upd = v[i] * p[j].conj() + p[i] * v[j].conj();
                a[(k + 1 + i, k + 1 + j)] -= upd;
            }
        }

        a[(k + 1, k)] = alpha;
        a[(k, k + 1)] = alpha.conj();
        for i in 1..m {
            a[(k + 1 + i, k)] = c(0.0, 0.0);
            a[(k, k + 1 + i)] = c(0.0, 0.0);
        }

        if let Some(q) = q.as_deref_mut() {
            // Q ← Q H on columns k+1..n.
            for r in 0..n {
                let mut acc = c(0.0, 0.0);
                for j in 0..m {
                    acc += q[(r, k + 1 + j)] * v[j];
                }
                acc *= tau;
                for j in 0..m {
                    q[(r, k + 1 + j)] -= acc * v[j].conj();
                }
            }
        }
    }
}

/// Implicit QL with Wilkinson shifts on a real symmetric tridiagonal matrix
/// (diagonal `d`, subdiagonal `e[0..n-1]`). Optionally accumulates the
/// rotations into the row-major `n×n` matrix `z`.
fn tql2(d: &mut [f64], e: &mut [f64], mut z: Option<&mut [f64]>, n: usize) -> Result<(), Error> {
    if n == 1 {
        return Ok(());
    }
    let cap = 64 * n;
    let mut total_iter = 0usize;
    e[n - 1] = 0.0;

    let mut f = 0.0_f64;
    let mut tst1 = 0.0_f64;
    let eps = f64::EPSILON;
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n {
            if e[m].abs() <= eps * tst1 {
                break;
            }
            m += 1;
        }
        if m == n {
            m = n - 1;
        }

        if m > l {
            loop {
                total_iter += 1;
                if total_iter > cap {
                    return Err(Error::NoConvergence { iterations: cap });
                }
                let g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = p.hypot(1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for di in d.iter_mut().take(n).skip(l + 2) {
                    *di -= h;
                }
                f += h;

                p = d[m];
                let mut cc = 1.0;
                let mut c2 = cc;
                let mut c3 = cc;
                let el1 = e[l + 1];
                let mut s = 0.0;
                let mut s2 = 0.0;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = cc;
                    s2 = s;
                    let g = cc * e[i];
                    h = cc * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    cc = p / r;
                    p = cc * d[i] - s * g;
                    d[i + 1] = h + s * (cc * g + s * d[i]);

                    if let Some(z) = z.as_deref_mut() {
                        for k in 0..n {
                            let zk1 = z[k * n + i + 1];
                            let zk = z[k * n + i];
                            z[k * n + i + 1] = s * zk + cc * zk1;
                            z[k * n + i] = cc * zk - s * zk1;
                        }
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = cc * p;

                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_hermitian(n: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
        let mut m = ComplexMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = c(rng.random_range(-1.0..1.0), 0.0);
            for j in i + 1..n {
                let z = c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
                m[(i, j)] = z;
                m[(j, i)] = z.conj();
            }
        }
        m
    }

    #[test]
    fn kron_identity_and_diagonal() {
        let i4 = kron(&ComplexMatrix::identity(2), &ComplexMatrix::identity(2));
        assert_eq!(i4, ComplexMatrix::identity(4));
        let d = kron(
            &ComplexMatrix::from_real_diag(&[1.0, 2.0]),
            &ComplexMatrix::from_real_diag(&[3.0, 4.0]),
        );
        assert_eq!(d, ComplexMatrix::from_real_diag(&[3.0, 4.0, 6.0, 8.0]));
    }

    #[test]
    fn kron_matches_index_formula() {
        let (a, b) = (pauli_x(), pauli_z());
        let k = kron(&a, &b);
        for i in 0..2 {
            for j in 0..2 {
                for r in 0..2 {
                    for s in 0..2 {
                        assert_eq!(k[(2 * i + r, 2 * j + s)], a[(i, j)] * b[(r, s)]);
                    }
                }
            }
        }
    }

    #[test]
    fn eig_small_known_spectra() {
        let s = hermitian_eig(&ComplexMatrix::from_real_diag(&[2.0, -1.0])).unwrap();
        assert_eq!(s.eigenvalues, vec![2.0, -1.0]);
        let s = hermitian_eig(&pauli_x()).unwrap();
        assert!((s.eigenvalues[0] - 1.0).abs() < 1e-14);
        assert!((s.eigenvalues[1] + 1.0).abs() < 1e-14);
        let s = hermitian_eig(&pauli_y()).unwrap();
        assert!((s.eigenvalues[0] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn eig_reconstructs_random_hermitian() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for &n in &[1usize, 2, 3, 5, 8, 16, 33] {
            let a = random_hermitian(n, &mut rng);
            let s = hermitian_eig(&a).unwrap();
            assert!(s.reconstruct().max_abs_diff(&a) < 1e-9, "n = {n}");
            let gram = s.eigenvectors.adjoint().matmul(&s.eigenvectors).unwrap();
            assert!(gram.max_abs_diff(&ComplexMatrix::identity(n)) < 1e-9);
            let sum: f64 = s.eigenvalues.iter().sum();
            assert!((sum - a.trace().re).abs() < 1e-9);
            assert!(s.eigenvalues.windows(2).all(|w| w[0] >= w[1]));
            let vals = hermitian_eigenvalues(&a).unwrap();
            for (x, y) in vals.iter().zip(&s.eigenvalues) {
                assert!((x - y).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn eig_handles_degenerate_and_zero() {
        let z = ComplexMatrix::zeros(6, 6);
        assert_eq!(hermitian_eigenvalues(&z).unwrap(), vec![0.0; 6]);
        let id = ComplexMatrix::identity(8).scale(0.125);
        let s = hermitian_eig(&id).unwrap();
        assert!(s.eigenvalues.iter().all(|&l| (l - 0.125).abs() < 1e-15));
    }

    #[test]
    fn eig_rejects_non_hermitian() {
        let mut m = pauli_x();
        m[(0, 1)] = c(2.0, 0.0);
        assert!(matches!(hermitian_eig(&m), Err(Error::NotHermitian { .. })));
        let rect = ComplexMatrix::zeros(2, 3);
        assert!(matches!(hermitian_eig(&rect), Err(Error::NotSquare { .. })));
    }

    #[test]
    fn positive_part_examples() {
        assert_eq!(
            positive_part_trace(&ComplexMatrix::from_real_diag(&[1.0, -1.0])).unwrap(),
            1.0
        );
        let v = positive_part_trace(&ComplexMatrix::from_real_diag(&[0.6, -0.2, 0.1])).unwrap();
        assert!((v - 0.7).abs() < 1e-15);
    }

    #[test]
    fn positive_part_difference_is_trace() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in 1..10 {
            let a = random_hermitian(n, &mut rng);
            let pos = positive_part_trace(&a).unwrap();
            let neg = positive_part_trace(&a.scale(-1.0)).unwrap();
            assert!((pos - neg - a.trace().re).abs() < 1e-9);
        }
    }

    #[test]
    fn norms() {
        assert!((operator_norm(&pauli_z()).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(
            operator_norm(&ComplexMatrix::from_real_diag(&[0.0, 3.0, -5.0])).unwrap(),
            5.0
        );
        assert_eq!(matrix_inf_norm(&RealMatrix::identity(3)), 1.0);
        let w = RealMatrix::from_rows(&[vec![1.0, -2.0], vec![3.0, 4.0]]).unwrap();
        assert_eq!(matrix_inf_norm(&w), 7.0);
    }

    #[test]
    fn operator_norm_matches_power_iteration() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in [2usize, 4, 7] {
            let a = random_hermitian(n, &mut rng);
            let a2 = a.matmul(&a).unwrap();
            let mut v: Vec<C64> = (0..n).map(|i| c(1.0 + i as f64 * 0.1, 0.3)).collect();
            let mut lambda = 0.0;
            for _ in 0..5000 {
                let w: Vec<C64> = (0..n)
                    .map(|i| (0..n).map(|j| a2[(i, j)] * v[j]).sum())
                    .collect();
                let nrm = w.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
                lambda = nrm / v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
                v = w.into_iter().map(|z| z / nrm).collect();
            }
            assert!((lambda.sqrt() - operator_norm(&a).unwrap()).abs() < 1e-8);
        }
    }

    #[test]
    fn symmetrize_tolerance() {
        let mut m = pauli_z();
        m[(0, 1)] = c(5e-9, 0.0);
        assert!(m.symmetrized().is_ok());
        m[(0, 1)] = c(5e-8, 0.0);
        assert!(m.symmetrized().is_err());
    }
}
