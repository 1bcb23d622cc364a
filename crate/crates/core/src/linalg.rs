//! Dense complex linear algebra for dimensions up to 8.
//!
//! Matrices are stored row-major. The Hermitian eigensolver is a cyclic
//! complex Jacobi iteration, which at these sizes is both accurate to a few
//! ulps and bit-for-bit deterministic. None of the routines here clamp small
//! negative eigenvalues or purities; consumers decide what is noise.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

use crate::labels::{Keep, Qubit};
use crate::{Error, Result};

/// Largest supported dimension.
pub const MAX_DIM: usize = 8;

/// Inputs whose anti-Hermitian part exceeds this are rejected unless the
/// caller asks for symmetrization.
pub const HERMITIAN_TOL: f64 = 1e-8;

/// Jacobi sweep cap.
pub const MAX_SWEEPS: usize = 100;

/// Off-diagonal Frobenius norm, relative to the full Frobenius norm, at
/// which the Jacobi iteration stops.
pub const OFF_DIAGONAL_TOL: f64 = 1e-14;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Square complex matrix of dimension 1..=8.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    /// Builds a matrix from row-major entries.
    pub fn new(dim: usize, data: Vec<Complex64>) -> Result<Self> {
        if dim == 0 || dim > MAX_DIM {
            return Err(Error::BadDimension(dim));
        }
        if data.len() != dim * dim {
            return Err(Error::NonSquare { dim, len: data.len() });
        }
        Ok(Self { dim, data })
    }

    /// Builds a matrix from a row-major slice whose length must be a perfect
    /// square.
    pub fn from_row_major(data: &[Complex64]) -> Result<Self> {
        let dim = (1..=MAX_DIM).find(|d| d * d == data.len()).ok_or(Error::NonSquare {
            dim: libm::sqrt(data.len() as f64) as usize,
            len: data.len(),
        })?;
        Self::new(dim, data.to_vec())
    }

    pub fn zeros(dim: usize) -> Self {
        assert!(dim > 0 && dim <= MAX_DIM, "dimension {dim} out of range");
        Self { dim, data: vec![ZERO; dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_fn(dim, |i, j| if i == j { ONE } else { ZERO })
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                m.data[i * dim + j] = f(i, j);
            }
        }
        m
    }

    /// Real diagonal matrix.
    pub fn from_diagonal(diag: &[f64]) -> Self {
        Self::from_fn(diag.len(), |i, j| if i == j { Complex64::new(diag[i], 0.0) } else { ZERO })
    }

    /// `|v⟩⟨v|` for a column vector `v`.
    pub fn outer(v: &[Complex64]) -> Self {
        Self::from_fn(v.len(), |i, j| v[i] * v[j].conj())
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Row-major entries.
    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<Complex64> {
        self.data
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)].conj())
    }

    /// Elementwise transpose (no conjugation).
    pub fn transpose(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)])
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn scale(&self, s: f64) -> Self {
        Self { dim: self.dim, data: self.data.iter().map(|z| z * s).collect() }
    }

    /// Entrywise max-norm of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// `max |M - M†|`.
    pub fn hermiticity_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.dim {
            for j in i..self.dim {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// `(M + M†) / 2`, with an exactly real diagonal.
    pub fn hermitian_part(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            out[(i, i)] = Complex64::new(self[(i, i)].re, 0.0);
            for j in (i + 1)..n {
                let z = (self[(i, j)] + self[(j, i)].conj()) * 0.5;
                out[(i, j)] = z;
                out[(j, i)] = z.conj();
            }
        }
        out
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &Self) -> Self {
        let (n, m) = (self.dim, other.dim);
        assert!(n * m <= MAX_DIM, "kron result exceeds dimension {MAX_DIM}");
        Self::from_fn(n * m, |i, j| self[(i / m, j / m)] * other[(i % m, j % m)])
    }

    /// `self · v`.
    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.dim, "dimension mismatch");
        (0..self.dim)
            .map(|i| (0..self.dim).map(|k| self[(i, k)] * v[k]).sum())
            .collect()
    }

    /// `Tr(M²)` as a real number, assuming `M` Hermitian.
    pub fn trace_of_square(&self) -> f64 {
        // Tr(M M) = Σ_ij M_ij M_ji = Σ_ij |M_ij|² for Hermitian M
        self.data.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Eigendecomposition of a Hermitian matrix; see [`hermitian_eigen`].
    pub fn hermitian_eigen(&self, symmetrize: bool) -> Result<HermitianEigen> {
        hermitian_eigen(self, symmetrize)
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.dim + j]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        let n = self.dim;
        let mut out = ComplexMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * rhs.data[k * n + j];
                }
            }
        }
        out
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

/// Eigenvalues (descending) and matching orthonormal eigenvectors, stored as
/// the columns of `vectors`.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

impl HermitianEigen {
    /// The `k`-th eigenvector.
    pub fn vector(&self, k: usize) -> Vec<Complex64> {
        (0..self.vectors.dim()).map(|i| self.vectors[(i, k)]).collect()
    }

    /// `V Λ V†`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let n = self.vectors.dim();
        ComplexMatrix::from_fn(n, |i, j| {
            (0..n)
                .map(|k| self.vectors[(i, k)] * self.vectors[(j, k)].conj() * self.values[k])
                .sum()
        })
    }
}

/// Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi
/// rotations.
///
/// With `symmetrize` set the input is first replaced by `(M + M†)/2`;
/// otherwise inputs with `max |M - M†| > 1e-8` are rejected. Eigenvalues come
/// back sorted descending; equal eigenvalues keep their Jacobi output order.
pub fn hermitian_eigen(m: &ComplexMatrix, symmetrize: bool) -> Result<HermitianEigen> {
    if !m.data.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::NonFinite);
    }
    if !symmetrize {
        let defect = m.hermiticity_defect();
        if defect > HERMITIAN_TOL {
            return Err(Error::NotHermitian(defect));
        }
    }
    let n = m.dim;
    let mut a = m.hermitian_part();
    let mut v = ComplexMatrix::identity(n);

    let frob_sq: f64 = a.trace_of_square();
    let stop_sq = OFF_DIAGONAL_TOL * OFF_DIAGONAL_TOL * frob_sq;

    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        if off_diagonal_sq(&a) <= stop_sq {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }
    if !converged && off_diagonal_sq(&a) > stop_sq {
        return Err(Error::NoConvergence(MAX_SWEEPS));
    }

    let mut order: Vec<usize> = (0..n).collect();
    // stable: ties keep Jacobi order
    order.sort_by(|&i, &j| a[(j, j)].re.total_cmp(&a[(i, i)].re));
    let values = order.iter().map(|&k| a[(k, k)].re).collect();
    let vectors = ComplexMatrix::from_fn(n, |i, c| v[(i, order[c])]);
    Ok(HermitianEigen { values, vectors })
}

fn off_diagonal_sq(a: &ComplexMatrix) -> f64 {
    let n = a.dim;
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s
}

/// One Jacobi rotation `A ← J† A J`, `V ← V J`, annihilating `a_pq`.
///
/// `J` is the real rotation of the phase-rotated problem: with
/// `a_pq = g e^{iφ}`, `J_pp = c`, `J_pq = s`, `J_qp = -s e^{-iφ}`,
/// `J_qq = c e^{-iφ}`.
fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let n = a.dim;
    let apq = a[(p, q)];
    let g = apq.norm();
    if g == 0.0 {
        return;
    }
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let phase = apq / g; // e^{iφ}
    let tau = (aqq - app) / (2.0 * g);
    let t = if tau >= 0.0 {
        1.0 / (tau + libm::sqrt(1.0 + tau * tau))
    } else {
        -1.0 / (-tau + libm::sqrt(1.0 + tau * tau))
    };
    let c = 1.0 / libm::sqrt(1.0 + t * t);
    let s = t * c;

    let j_pp = Complex64::new(c, 0.0);
    let j_pq = Complex64::new(s, 0.0);
    let j_qp = -phase.conj() * s;
    let j_qq = phase.conj() * c;

    // A ← A J (columns p, q)
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * j_pp + akq * j_qp;
        a[(k, q)] = akp * j_pq + akq * j_qq;
    }
    // A ← J† A (rows p, q)
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = j_pp.conj() * apk + j_qp.conj() * aqk;
        a[(q, k)] = j_pq.conj() * apk + j_qq.conj() * aqk;
    }
    a[(p, q)] = ZERO;
    a[(q, p)] = ZERO;
    a[(p, p)] = Complex64::new(app - t * g, 0.0);
    a[(q, q)] = Complex64::new(aqq + t * g, 0.0);

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * j_pp + vkq * j_qp;
        v[(k, q)] = vkp * j_pq + vkq * j_qq;
    }
}

fn require_three_qubits(m: &ComplexMatrix) {
    assert_eq!(m.dim, 8, "expected an 8×8 three-qubit operator");
}

/// Partial transpose over one qubit of an 8×8 operator:
/// `⟨h_I j|ρ^{T_I}|k_I l⟩ = ⟨k_I j|ρ|h_I l⟩`.
///
/// This only permutes entries, so applying it twice returns the input
/// bit-for-bit.
pub fn partial_transpose(m: &ComplexMatrix, qubit: Qubit) -> ComplexMatrix {
    require_three_qubits(m);
    let mask = 1usize << qubit.bit();
    ComplexMatrix::from_fn(8, |i, j| {
        let ii = (i & !mask) | (j & mask);
        let jj = (j & !mask) | (i & mask);
        m[(ii, jj)]
    })
}

/// Reduced operator on one qubit (2×2) or a pair (4×4).
pub fn partial_trace(m: &ComplexMatrix, keep: impl Into<Keep>) -> ComplexMatrix {
    require_three_qubits(m);
    let kept: &[Qubit] = match keep.into() {
        Keep::One(Qubit::A) => &[Qubit::A],
        Keep::One(Qubit::B) => &[Qubit::B],
        Keep::One(Qubit::C) => &[Qubit::C],
        Keep::Two(p) => match p {
            crate::Pair::AB => &[Qubit::A, Qubit::B],
            crate::Pair::AC => &[Qubit::A, Qubit::C],
            crate::Pair::BC => &[Qubit::B, Qubit::C],
        },
    };
    let kept_mask: usize = kept.iter().map(|q| 1usize << q.bit()).sum();
    let reduce = |i: usize| -> usize {
        kept.iter().fold(0, |acc, q| (acc << 1) | ((i >> q.bit()) & 1))
    };
    let d = 1usize << kept.len();
    let mut out = ComplexMatrix::zeros(d);
    for i in 0..8 {
        for j in 0..8 {
            if (i & !kept_mask) == (j & !kept_mask) {
                out[(reduce(i), reduce(j))] += m[(i, j)];
            }
        }
    }
    out
}

/// Purity `Tr(M²)` of a Hermitian, unit-trace matrix, clamped to `[0, 1]`.
pub fn purity(m: &ComplexMatrix) -> Result<f64> {
    let dev = (m.trace() - ONE).norm();
    if dev > HERMITIAN_TOL {
        return Err(Error::NotDensityLike(dev));
    }
    Ok(m.trace_of_square().clamp(0.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Pair;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn ghz() -> ComplexMatrix {
        let mut v = [ZERO; 8];
        v[0] = c(core::f64::consts::FRAC_1_SQRT_2);
        v[7] = c(core::f64::consts::FRAC_1_SQRT_2);
        ComplexMatrix::outer(&v)
    }

    fn product000() -> ComplexMatrix {
        let mut v = [ZERO; 8];
        v[0] = ONE;
        ComplexMatrix::outer(&v)
    }

    fn assert_close(a: &[f64], b: &[f64], tol: f64) {
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(b) {
            assert!((x - y).abs() < tol, "{a:?} vs {b:?}");
        }
    }

    #[test]
    fn identity_eigenvalues() {
        let e = hermitian_eigen(&ComplexMatrix::identity(8), false).unwrap();
        assert_close(&e.values, &[1.0; 8], 1e-15);
    }

    #[test]
    fn diagonal_eigenvalues_sorted() {
        let m = ComplexMatrix::from_diagonal(&[1.0, -2.0, 3.0]);
        let e = hermitian_eigen(&m, false).unwrap();
        assert_eq!(e.values, [3.0, 1.0, -2.0]);
    }

    #[test]
    fn two_by_two_with_complex_coupling() {
        // [[1, i], [-i, 1]] has eigenvalues 2 and 0
        let m = ComplexMatrix::new(2, vec![ONE, Complex64::i(), -Complex64::i(), ONE]).unwrap();
        let e = hermitian_eigen(&m, false).unwrap();
        assert_close(&e.values, &[2.0, 0.0], 1e-15);
        assert!(e.reconstruct().max_abs_diff(&m) < 1e-15);
    }

    #[test]
    fn rejects_non_hermitian_unless_symmetrized() {
        let m = ComplexMatrix::new(2, vec![ONE, c(1.0), c(0.0), ONE]).unwrap();
        assert!(matches!(hermitian_eigen(&m, false), Err(Error::NotHermitian(_))));
        let e = hermitian_eigen(&m, true).unwrap();
        assert_close(&e.values, &[1.5, 0.5], 1e-15);
    }

    #[test]
    fn rejects_bad_shapes() {
        assert!(matches!(ComplexMatrix::new(2, vec![ONE; 3]), Err(Error::NonSquare { .. })));
        assert!(matches!(ComplexMatrix::new(9, vec![ONE; 81]), Err(Error::BadDimension(9))));
        assert!(matches!(ComplexMatrix::from_row_major(&[ONE; 5]), Err(Error::NonSquare { .. })));
    }

    #[test]
    fn ghz_partial_transpose_spectrum() {
        let pt = partial_transpose(&ghz(), Qubit::A);
        let e = hermitian_eigen(&pt, false).unwrap();
        assert_close(&e.values, &[0.5, 0.5, 0.5, 0.0, 0.0, 0.0, 0.0, -0.5], 1e-14);
        assert!((pt.trace() - ONE).norm() < 1e-15);
    }

    #[test]
    fn partial_transpose_of_product_is_unchanged() {
        let p = product000();
        for q in Qubit::ALL {
            assert_eq!(partial_transpose(&p, q), p);
        }
    }

    #[test]
    fn partial_traces_of_fixtures() {
        let r = partial_trace(&ghz(), Qubit::A);
        assert!(r.max_abs_diff(&ComplexMatrix::from_diagonal(&[0.5, 0.5])) < 1e-15);
        let r = partial_trace(&product000(), Pair::BC);
        assert!(r.max_abs_diff(&ComplexMatrix::from_diagonal(&[1.0, 0.0, 0.0, 0.0])) < 1e-15);
    }

    #[test]
    fn partial_trace_keeps_pair_ordering() {
        // |0⟩_A |1⟩_B |0⟩_C = index 0b010
        let mut v = [ZERO; 8];
        v[0b010] = ONE;
        let m = ComplexMatrix::outer(&v);
        let ab = partial_trace(&m, Pair::AB);
        assert_eq!(ab[(0b01, 0b01)], ONE);
        let bc = partial_trace(&m, Pair::BC);
        assert_eq!(bc[(0b10, 0b10)], ONE);
        let ac = partial_trace(&m, Pair::AC);
        assert_eq!(ac[(0b00, 0b00)], ONE);
    }

    #[test]
    fn purity_fixtures() {
        let p0 = ComplexMatrix::from_diagonal(&[1.0, 0.0]);
        assert_eq!(purity(&p0).unwrap(), 1.0);
        let mixed = ComplexMatrix::from_diagonal(&[0.5, 0.5]);
        assert_eq!(purity(&mixed).unwrap(), 0.5);
        let bad = ComplexMatrix::from_diagonal(&[0.5, 0.6]);
        assert!(matches!(purity(&bad), Err(Error::NotDensityLike(_))));
    }

    #[test]
    fn kron_matches_index_convention() {
        let z0 = ComplexMatrix::from_diagonal(&[1.0, 0.0]);
        let z1 = ComplexMatrix::from_diagonal(&[0.0, 1.0]);
        let k = z1.kron(&z0).kron(&z0); // |100⟩
        assert_eq!(k[(4, 4)], ONE);
        assert_eq!(k.trace(), ONE);
    }
}
