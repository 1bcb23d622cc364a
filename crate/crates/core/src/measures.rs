//! Entanglement, coherence, steering and Bell quantifiers.
//!
//! | quantity | definition |
//! |---|---|
//! | `N_{I|JK}` | `−2 Σ` negative eigenvalues of `ρ^{T_I}` |
//! | `N` | `(N_{A|BC} N_{B|AC} N_{C|AB})^{1/3}` |
//! | `G` (pure) | cube root of the product of the three cut concurrences |
//! | `D(ρ_i)` | `√(2 Tr ρ_i² − 1)`; `D` is the RMS over A, B, C |
//! | `S_JK` | `Tr(TᵀT) − 1` for the pair correlation matrix `T` |
//! | `M_JK` | sum of the two largest eigenvalues of `TᵀT` |
//! | `B_JK` | `max(0, M_JK − 1)` |

use num_complex::Complex64;

use crate::labels::{Bipartition, Keep, Pair, Qubit};
use crate::linalg::{hermitian_eigen, partial_trace, partial_transpose, ComplexMatrix};
use crate::states::{Density3, PureState3, StateProvenance};
use crate::{Error, Result};

/// Eigenvalues of a partial transpose in `(−NEGATIVITY_CUTOFF, 0)` count as
/// zero.
pub const NEGATIVITY_CUTOFF: f64 = 1e-10;

/// Purity slack under which a density matrix is treated as rank one.
pub const PURE_TOL: f64 = 1e-9;
/// `M − 1` at or below this counts as no Bell violation (rounding floor of `TᵀT`).
pub const BELL_CUTOFF: f64 = 1e-12;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// `σ0 = I`, `σ1 = X`, `σ2 = Y`, `σ3 = Z`.
const PAULI: [[[Complex64; 2]; 2]; 4] = [
    [[ONE, ZERO], [ZERO, ONE]],
    [[ZERO, ONE], [ONE, ZERO]],
    [[ZERO, Complex64::new(0.0, -1.0)], [I, ZERO]],
    [[ONE, ZERO], [ZERO, Complex64::new(-1.0, 0.0)]],
];

/// `Tr(M · σ_{p0} ⊗ σ_{p1} ⊗ …)` for a `2^k × 2^k` matrix, real part.
fn pauli_expectation(m: &ComplexMatrix, paulis: &[usize]) -> f64 {
    let k = paulis.len();
    let d = 1usize << k;
    debug_assert_eq!(m.dim(), d);
    let mut acc = ZERO;
    for row in 0..d {
        for col in 0..d {
            // entry (col, row) of the Pauli string
            let mut p = ONE;
            for (slot, &s) in paulis.iter().enumerate() {
                let shift = k - 1 - slot;
                p *= PAULI[s][(col >> shift) & 1][(row >> shift) & 1];
                if p == ZERO {
                    break;
                }
            }
            if p != ZERO {
                acc += m[(row, col)] * p;
            }
        }
    }
    acc.re
}

/// Reduced state of one qubit or a pair.
pub fn reduced(rho: &Density3, keep: impl Into<Keep>) -> ComplexMatrix {
    partial_trace(rho.matrix(), keep)
}

/// Bipartite negativity across `cut`.
pub fn negativity_bipartite(rho: &Density3, cut: Bipartition) -> Result<f64> {
    let pt = partial_transpose(rho.matrix(), cut.single());
    let eig = hermitian_eigen(&pt, false)?;
    let neg: f64 = eig.values.iter().filter(|&&l| l <= -NEGATIVITY_CUTOFF).sum();
    Ok(-2.0 * neg)
}

/// The three bipartite negativities, indexed by [`Bipartition::index`].
pub fn negativity_bipartitions(rho: &Density3) -> Result<[f64; 3]> {
    Ok([
        negativity_bipartite(rho, Bipartition::ABC)?,
        negativity_bipartite(rho, Bipartition::BAC)?,
        negativity_bipartite(rho, Bipartition::CAB)?,
    ])
}

fn geometric_mean3(v: [f64; 3]) -> f64 {
    if v.iter().any(|&x| x <= 0.0) {
        0.0
    } else {
        libm::cbrt(v[0] * v[1] * v[2])
    }
}

/// Tripartite negativity: geometric mean of the three cut negativities.
pub fn negativity_tripartite(rho: &Density3) -> Result<f64> {
    negativity_bipartitions(rho).map(geometric_mean3)
}

/// `det ρ_i` for a 2×2 Hermitian matrix, clamped at zero.
fn det2(m: &ComplexMatrix) -> f64 {
    (m[(0, 0)].re * m[(1, 1)].re - m[(0, 1)].norm_sqr()).max(0.0)
}

/// Closed-form negativity of a pure state, `2 (Π_i det ρ_i)^{1/6}`.
pub fn negativity_pure(psi: &PureState3) -> f64 {
    let p = psi.projector();
    let prod: f64 = Qubit::ALL.iter().map(|&q| det2(&partial_trace(&p, q))).product();
    2.0 * libm::pow(prod, 1.0 / 6.0)
}

fn concurrence_from_purity(purity: f64) -> f64 {
    libm::sqrt((2.0 * (1.0 - purity)).max(0.0))
}

/// Pure-state concurrence across `cut`, `√(2 [1 − Tr ρ_I²])`.
pub fn concurrence_bipartition(psi: &PureState3, cut: Bipartition) -> f64 {
    let r = partial_trace(&psi.projector(), cut.single());
    concurrence_from_purity(r.trace_of_square())
}

/// Geometric mean of bipartite concurrences of a pure state.
pub fn gbc_pure(psi: &PureState3) -> f64 {
    let p = psi.projector();
    gbc_of_projector(&p)
}

fn gbc_of_projector(p: &ComplexMatrix) -> f64 {
    let c = Qubit::ALL.map(|q| concurrence_from_purity(partial_trace(p, q).trace_of_square()));
    let n = bipartition_cardinality(3).expect("n = 3 is valid") as f64;
    libm::pow(c[0] * c[1] * c[2], 1.0 / n)
}

/// GBC of a density matrix when it is rank one (within [`PURE_TOL`]); `None`
/// otherwise, since the mixed-state convex roof is not evaluated.
pub fn gbc(rho: &Density3) -> Option<f64> {
    rho.is_pure(PURE_TOL).then(|| gbc_of_projector(rho.matrix()))
}

fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// Number of distinct bipartitions of `n` parties into two nonempty groups.
pub fn bipartition_cardinality(n: u32) -> Result<u64> {
    if !(2..=62).contains(&n) {
        return Err(Error::BadN(n));
    }
    let n = n as u64;
    Ok(if n % 2 == 1 {
        (1..=(n - 1) / 2).map(|m| binomial(n, m)).sum()
    } else {
        (1..=(n - 2) / 2).map(|m| binomial(n, m)).sum::<u64>() + binomial(n, n / 2) / 2
    })
}

/// First-order coherence of one qubit.
///
/// `2 Tr ρ_i² − 1` is evaluated as the squared Bloch length
/// `(ρ₀₀ − ρ₁₁)² + 4|ρ₀₁|²`, which avoids cancellation near `D = 0`.
pub fn coherence_subsystem(rho: &Density3, sub: Qubit) -> f64 {
    let r = reduced(rho, sub);
    let z = r[(0, 0)].re - r[(1, 1)].re;
    libm::sqrt((z * z + 4.0 * r[(0, 1)].norm_sqr()).clamp(0.0, 1.0))
}

fn coherences(rho: &Density3) -> [f64; 3] {
    Qubit::ALL.map(|q| coherence_subsystem(rho, q))
}

fn rms(v: &[f64]) -> f64 {
    libm::sqrt(v.iter().map(|x| x * x).sum::<f64>() / v.len() as f64)
}

/// First-order coherence of the whole state: RMS of the three qubits.
pub fn coherence_tripartite(rho: &Density3) -> f64 {
    rms(&coherences(rho))
}

/// Bipartite first-order coherence: RMS over the two qubits of `pair`.
pub fn coherence_pair(rho: &Density3, pair: Pair) -> f64 {
    let (i, j) = pair.qubits();
    rms(&[coherence_subsystem(rho, i), coherence_subsystem(rho, j)])
}

/// Hilbert–Schmidt form of a two-qubit state:
/// `ρ = ¼ [I⊗I + a·σ⊗I + I⊗b·σ + Σ t_ij σ_i⊗σ_j]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochPair {
    pub a: [f64; 3],
    pub b: [f64; 3],
    pub t: [[f64; 3]; 3],
}

impl BlochPair {
    /// Decomposes a 4×4 two-qubit operator.
    pub fn from_matrix(m: &ComplexMatrix) -> Self {
        assert_eq!(m.dim(), 4, "two-qubit operator expected");
        let mut out = BlochPair { a: [0.0; 3], b: [0.0; 3], t: [[0.0; 3]; 3] };
        for i in 0..3 {
            out.a[i] = pauli_expectation(m, &[i + 1, 0]);
            out.b[i] = pauli_expectation(m, &[0, i + 1]);
            for j in 0..3 {
                out.t[i][j] = pauli_expectation(m, &[i + 1, j + 1]);
            }
        }
        out
    }

    /// Rebuilds the 4×4 matrix.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let mut coeff = [[0.0; 4]; 4];
        coeff[0][0] = 1.0;
        for i in 0..3 {
            coeff[i + 1][0] = self.a[i];
            coeff[0][i + 1] = self.b[i];
            for j in 0..3 {
                coeff[i + 1][j + 1] = self.t[i][j];
            }
        }
        let mut m = ComplexMatrix::zeros(4);
        for (p, row) in coeff.iter().enumerate() {
            for (q, &c) in row.iter().enumerate() {
                if c != 0.0 {
                    m = &m + &pauli_string(&[p, q]).scale(c * 0.25);
                }
            }
        }
        m
    }

    /// `TᵀT`.
    pub fn gram(&self) -> [[f64; 3]; 3] {
        let t = &self.t;
        core::array::from_fn(|i| core::array::from_fn(|j| (0..3).map(|k| t[k][i] * t[k][j]).sum()))
    }

    /// `Tr(TᵀT) = Σ t_ij²`.
    pub fn correlation_strength(&self) -> f64 {
        self.t.iter().flatten().map(|x| x * x).sum()
    }
}

/// `σ_{p0} ⊗ σ_{p1} ⊗ …`.
fn pauli_string(paulis: &[usize]) -> ComplexMatrix {
    let first = ComplexMatrix::new(2, PAULI[paulis[0]].iter().flatten().copied().collect())
        .expect("2×2 Pauli");
    paulis[1..].iter().fold(first, |acc, &s| {
        let p = ComplexMatrix::new(2, PAULI[s].iter().flatten().copied().collect()).expect("2×2 Pauli");
        acc.kron(&p)
    })
}

/// Full Pauli-basis expansion of a three-qubit state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochTriple {
    pub a: [f64; 3],
    pub b: [f64; 3],
    pub c: [f64; 3],
    pub t_ab: [[f64; 3]; 3],
    pub t_ac: [[f64; 3]; 3],
    pub t_bc: [[f64; 3]; 3],
    pub t_abc: [[[f64; 3]; 3]; 3],
}

impl BlochTriple {
    /// Coefficient of `σ_p ⊗ σ_q ⊗ σ_r` (0 = identity), with `t_000 = 1`.
    pub fn coefficient(&self, p: usize, q: usize, r: usize) -> f64 {
        match (p, q, r) {
            (0, 0, 0) => 1.0,
            (i, 0, 0) => self.a[i - 1],
            (0, j, 0) => self.b[j - 1],
            (0, 0, k) => self.c[k - 1],
            (i, j, 0) => self.t_ab[i - 1][j - 1],
            (i, 0, k) => self.t_ac[i - 1][k - 1],
            (0, j, k) => self.t_bc[j - 1][k - 1],
            (i, j, k) => self.t_abc[i - 1][j - 1][k - 1],
        }
    }

    /// `ρ = ⅛ Σ_{pqr} t_pqr σ_p ⊗ σ_q ⊗ σ_r`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let mut m = ComplexMatrix::zeros(8);
        for p in 0..4 {
            for q in 0..4 {
                for r in 0..4 {
                    let c = self.coefficient(p, q, r);
                    if c != 0.0 {
                        m = &m + &pauli_string(&[p, q, r]).scale(c * 0.125);
                    }
                }
            }
        }
        m
    }

    pub fn bloch(&self, q: Qubit) -> [f64; 3] {
        match q {
            Qubit::A => self.a,
            Qubit::B => self.b,
            Qubit::C => self.c,
        }
    }

    pub fn correlations(&self, pair: Pair) -> [[f64; 3]; 3] {
        match pair {
            Pair::AB => self.t_ab,
            Pair::AC => self.t_ac,
            Pair::BC => self.t_bc,
        }
    }
}

/// Bloch vectors and correlation matrix of the reduced state on `pair`.
pub fn bloch_pair_decomposition(rho: &Density3, pair: Pair) -> BlochPair {
    BlochPair::from_matrix(&reduced(rho, pair))
}

/// Three-qubit Pauli expansion.
pub fn bloch_triple_decomposition(rho: &Density3) -> BlochTriple {
    let m = rho.matrix();
    let e = |p: usize, q: usize, r: usize| pauli_expectation(m, &[p, q, r]);
    BlochTriple {
        a: core::array::from_fn(|i| e(i + 1, 0, 0)),
        b: core::array::from_fn(|i| e(0, i + 1, 0)),
        c: core::array::from_fn(|i| e(0, 0, i + 1)),
        t_ab: core::array::from_fn(|i| core::array::from_fn(|j| e(i + 1, j + 1, 0))),
        t_ac: core::array::from_fn(|i| core::array::from_fn(|k| e(i + 1, 0, k + 1))),
        t_bc: core::array::from_fn(|j| core::array::from_fn(|k| e(0, j + 1, k + 1))),
        t_abc: core::array::from_fn(|i| {
            core::array::from_fn(|j| core::array::from_fn(|k| e(i + 1, j + 1, k + 1)))
        }),
    }
}

/// Linear-steering violation `Tr(TᵀT) − 1` of the pair. Not clamped.
pub fn steering_violation_pair(rho: &Density3, pair: Pair) -> f64 {
    bloch_pair_decomposition(rho, pair).correlation_strength() - 1.0
}

/// Largest pairwise steering violation and its pair (ties go to the
/// earlier of AB < AC < BC).
pub fn steering_violation_max(rho: &Density3) -> (f64, Pair) {
    argmax(Pair::ALL.map(|p| steering_violation_pair(rho, p)))
}

fn argmax(v: [f64; 3]) -> (f64, Pair) {
    let mut best = (v[0], Pair::AB);
    for p in [Pair::AC, Pair::BC] {
        if v[p.index()] > best.0 {
            best = (v[p.index()], p);
        }
    }
    best
}

fn horodecki_m(bp: &BlochPair) -> Result<f64> {
    let g = bp.gram();
    let m = ComplexMatrix::from_fn(3, |i, j| Complex64::new(g[i][j], 0.0));
    let eig = hermitian_eigen(&m, true)?;
    Ok(eig.values[0] + eig.values[1])
}

/// Horodecki `M`: sum of the two largest eigenvalues of `TᵀT`.
pub fn bell_m_pair(rho: &Density3, pair: Pair) -> Result<f64> {
    horodecki_m(&bloch_pair_decomposition(rho, pair))
}

/// `max(0, M − 1)`.
pub fn bell_violation_pair(rho: &Density3, pair: Pair) -> Result<f64> {
    bell_m_pair(rho, pair).map(bell_violation_from_m)
}

/// `max(0, M − 1)`.
pub fn bell_violation_from_m(m: f64) -> f64 {
    let b = m - 1.0;
    if b > BELL_CUTOFF {
        b
    } else {
        0.0
    }
}

/// Largest pairwise Bell violation; the pair is `None` when nothing is
/// violated.
pub fn bell_violation_max(rho: &Density3) -> Result<(f64, Option<Pair>)> {
    let m = [
        bell_m_pair(rho, Pair::AB)?,
        bell_m_pair(rho, Pair::AC)?,
        bell_m_pair(rho, Pair::BC)?,
    ];
    Ok(bell_max_from_m(m))
}

fn bell_max_from_m(m: [f64; 3]) -> (f64, Option<Pair>) {
    let (v, p) = argmax(m.map(bell_violation_from_m));
    (v, (v > 0.0).then_some(p))
}

fn norm_sq(v: &[f64; 3]) -> f64 {
    v.iter().map(|x| x * x).sum()
}

/// Largest absolute residual of the six purity identities
/// `Tr ρ_i² = (1 + |r_i|²)/2` and `Tr ρ_jk² = (2 + |r_j|² + |r_k|² + S_jk)/4`.
pub fn purity_identities_check(rho: &Density3) -> f64 {
    let bloch = bloch_triple_decomposition(rho);
    let mut worst = 0.0f64;
    for q in Qubit::ALL {
        let lhs = reduced(rho, q).trace_of_square();
        let rhs = (1.0 + norm_sq(&bloch.bloch(q))) / 2.0;
        worst = worst.max((lhs - rhs).abs());
    }
    for p in Pair::ALL {
        let (j, k) = p.qubits();
        let lhs = reduced(rho, p).trace_of_square();
        let rhs = (2.0 + norm_sq(&bloch.bloch(j)) + norm_sq(&bloch.bloch(k)) + steering_violation_pair(rho, p))
            / 4.0;
        worst = worst.max((lhs - rhs).abs());
    }
    worst
}

/// Every measure of one state, plus where it came from.
#[derive(Debug, Clone, PartialEq)]
pub struct ResourceRecord {
    pub negativity_tri: f64,
    /// Indexed by [`Bipartition::index`].
    pub negativity_bi: [f64; 3],
    /// Only defined for rank-one inputs.
    pub gbc: Option<f64>,
    pub coherence: f64,
    /// Indexed by [`Qubit::index`].
    pub coherence_sub: [f64; 3],
    /// Indexed by [`Pair::index`].
    pub steering_pair: [f64; 3],
    pub steering_max: f64,
    pub steering_argmax: Pair,
    /// Indexed by [`Pair::index`].
    pub bell_m_pair: [f64; 3],
    pub bell_violation_max: f64,
    pub bell_argmax: Option<Pair>,
    pub provenance: StateProvenance,
}

impl ResourceRecord {
    pub fn compute(rho: &Density3, provenance: StateProvenance) -> Result<Self> {
        let negativity_bi = negativity_bipartitions(rho)?;
        let coherence_sub = coherences(rho);
        let pairs = Pair::ALL.map(|p| bloch_pair_decomposition(rho, p));
        let steering_pair = pairs.map(|bp| bp.correlation_strength() - 1.0);
        let (steering_max, steering_argmax) = argmax(steering_pair);
        let bell_m_pair = [horodecki_m(&pairs[0])?, horodecki_m(&pairs[1])?, horodecki_m(&pairs[2])?];
        let (bell_violation_max, bell_argmax) = bell_max_from_m(bell_m_pair);
        Ok(Self {
            negativity_tri: geometric_mean3(negativity_bi),
            negativity_bi,
            gbc: gbc(rho),
            coherence: rms(&coherence_sub),
            coherence_sub,
            steering_pair,
            steering_max,
            steering_argmax,
            bell_m_pair,
            bell_violation_max,
            bell_argmax,
            provenance,
        })
    }

    pub fn negativity_cut(&self, cut: Bipartition) -> f64 {
        self.negativity_bi[cut.index()]
    }

    pub fn steering(&self, pair: Pair) -> f64 {
        self.steering_pair[pair.index()]
    }

    pub fn bell_m(&self, pair: Pair) -> f64 {
        self.bell_m_pair[pair.index()]
    }

    pub fn bell_violation(&self, pair: Pair) -> f64 {
        bell_violation_from_m(self.bell_m(pair))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{canonical, psi_alpha, psi_m, Canonical};
    use core::f64::consts::{FRAC_1_SQRT_2, PI};

    fn close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() < tol, "{a} vs {b}");
    }

    fn rho(c: Canonical) -> Density3 {
        canonical(c).density()
    }

    #[test]
    fn negativity_of_fixtures() {
        for cut in Bipartition::ALL {
            close(negativity_bipartite(&rho(Canonical::Ghz), cut).unwrap(), 1.0, 1e-14);
            assert_eq!(negativity_bipartite(&rho(Canonical::Product000), cut).unwrap(), 0.0);
        }
        let w = 2.0 * 2f64.sqrt() / 3.0;
        close(negativity_bipartite(&rho(Canonical::W), Bipartition::ABC).unwrap(), w, 1e-13);
        close(negativity_tripartite(&rho(Canonical::Ghz)).unwrap(), 1.0, 1e-14);
        close(negativity_tripartite(&psi_m(0.5).unwrap().density()).unwrap(), libm::cbrt(0.6), 1e-13);
    }

    #[test]
    fn closed_form_negativity() {
        close(negativity_pure(&canonical(Canonical::Ghz)), 1.0, 1e-14);
        close(negativity_pure(&canonical(Canonical::W)), 2.0 * 2f64.sqrt() / 3.0, 1e-14);
        close(negativity_pure(&psi_alpha(PI / 6.0).unwrap()), 3f64.sqrt() / 2.0, 1e-14);
    }

    #[test]
    fn biseparable_product_has_zero_tripartite_negativity() {
        // |0⟩_A ⊗ Bell_BC
        let mut a = [ZERO; 8];
        a[0b000] = Complex64::new(FRAC_1_SQRT_2, 0.0);
        a[0b011] = Complex64::new(FRAC_1_SQRT_2, 0.0);
        let r = PureState3::new(a).unwrap().density();
        assert_eq!(negativity_tripartite(&r).unwrap(), 0.0);
        close(negativity_bipartite(&r, Bipartition::BAC).unwrap(), 1.0, 1e-14);
    }

    #[test]
    fn concurrence_and_gbc() {
        let w = canonical(Canonical::W);
        for cut in Bipartition::ALL {
            close(concurrence_bipartition(&canonical(Canonical::Ghz), cut), 1.0, 1e-14);
            assert_eq!(concurrence_bipartition(&canonical(Canonical::Product000), cut), 0.0);
            close(concurrence_bipartition(&w, cut), 2.0 * 2f64.sqrt() / 3.0, 1e-14);
        }
        close(gbc_pure(&canonical(Canonical::Ghz)), 1.0, 1e-14);
        close(gbc_pure(&w), negativity_pure(&w), 1e-14);
        close(gbc_pure(&psi_m(0.5).unwrap()), libm::cbrt(0.6), 1e-13);
        assert!(gbc(&Density3::maximally_mixed()).is_none());
        close(gbc(&w.density()).unwrap(), 2.0 * 2f64.sqrt() / 3.0, 1e-14);
    }

    #[test]
    fn cardinality() {
        assert_eq!(bipartition_cardinality(2).unwrap(), 1);
        assert_eq!(bipartition_cardinality(3).unwrap(), 3);
        assert_eq!(bipartition_cardinality(4).unwrap(), 7);
        assert_eq!(bipartition_cardinality(5).unwrap(), 15);
        // 2^{n-1} − 1 in general
        for n in 2..=20u32 {
            assert_eq!(bipartition_cardinality(n).unwrap(), (1u64 << (n - 1)) - 1);
        }
        assert!(matches!(bipartition_cardinality(1), Err(Error::BadN(1))));
    }

    #[test]
    fn coherence_values() {
        for q in Qubit::ALL {
            assert_eq!(coherence_subsystem(&rho(Canonical::Product000), q), 1.0);
            close(coherence_subsystem(&rho(Canonical::Ghz), q), 0.0, 1e-15);
        }
        close(coherence_tripartite(&psi_alpha(PI / 8.0).unwrap().density()), FRAC_1_SQRT_2, 1e-14);
        close(coherence_tripartite(&psi_m(1.0).unwrap().density()), 1.0 / 3f64.sqrt(), 1e-14);
        assert_eq!(coherence_tripartite(&Density3::maximally_mixed()), 0.0);
        assert_eq!(coherence_pair(&rho(Canonical::Product000), Pair::AB), 1.0);
        assert_eq!(coherence_pair(&rho(Canonical::Ghz), Pair::AB), 0.0);
    }

    #[test]
    fn psi_m_at_one_marginal_coherences() {
        // A and C are maximally mixed halves of a Bell pair, B is |+⟩
        let r = psi_m(1.0).unwrap().density();
        close(coherence_subsystem(&r, Qubit::A), 0.0, 1e-15);
        close(coherence_subsystem(&r, Qubit::B), 1.0, 1e-14);
        close(coherence_subsystem(&r, Qubit::C), 0.0, 1e-15);
        close(coherence_pair(&r, Pair::AB), FRAC_1_SQRT_2, 1e-14);
    }

    #[test]
    fn bloch_pair_fixtures() {
        let bp = bloch_pair_decomposition(&rho(Canonical::Product000), Pair::AB);
        assert_eq!(bp.a, [0.0, 0.0, 1.0]);
        assert_eq!(bp.b, [0.0, 0.0, 1.0]);
        assert_eq!(bp.t, [[0.0; 3], [0.0; 3], [0.0, 0.0, 1.0]]);

        let bp = bloch_pair_decomposition(&rho(Canonical::Ghz), Pair::AB);
        for x in bp.a.iter().chain(&bp.b) {
            close(*x, 0.0, 1e-15);
        }
        close(bp.t[2][2], 1.0, 1e-15);

        let bp = bloch_pair_decomposition(&rho(Canonical::W), Pair::AB);
        let want = [[2.0 / 3.0, 0.0, 0.0], [0.0, 2.0 / 3.0, 0.0], [0.0, 0.0, -1.0 / 3.0]];
        for i in 0..3 {
            for j in 0..3 {
                close(bp.t[i][j], want[i][j], 1e-15);
            }
        }
        let r = reduced(&rho(Canonical::W), Pair::AB);
        assert!(bp.reconstruct().max_abs_diff(&r) < 1e-15);
    }

    #[test]
    fn steering_values() {
        close(steering_violation_pair(&rho(Canonical::Product000), Pair::AB), 0.0, 1e-15);
        close(steering_violation_pair(&rho(Canonical::Ghz), Pair::AB), 0.0, 1e-15);
        let m1 = psi_m(1.0).unwrap().density();
        close(steering_violation_pair(&m1, Pair::AC), 2.0, 1e-14);
        let (v, p) = steering_violation_max(&psi_m(0.5).unwrap().density());
        close(v, 1.28, 1e-14);
        assert_eq!(p, Pair::AC);
        let (v, p) = steering_violation_max(&rho(Canonical::Product000));
        close(v, 0.0, 1e-15);
        assert_eq!(p, Pair::AB);
    }

    #[test]
    fn bell_values() {
        close(bell_m_pair(&rho(Canonical::Product000), Pair::AB).unwrap(), 1.0, 1e-14);
        close(bell_m_pair(&rho(Canonical::Ghz), Pair::AB).unwrap(), 1.0, 1e-14);
        let m1 = psi_m(1.0).unwrap().density();
        close(bell_m_pair(&m1, Pair::AC).unwrap(), 2.0, 1e-14);
        close(bell_violation_pair(&m1, Pair::AC).unwrap(), 1.0, 1e-14);
        assert_eq!(bell_violation_pair(&rho(Canonical::Product000), Pair::AB).unwrap(), 0.0);
        let (v, p) = bell_violation_max(&psi_m(0.5).unwrap().density()).unwrap();
        close(v, 0.64, 1e-14);
        assert_eq!(p, Some(Pair::AC));
        let (v, p) = bell_violation_max(&rho(Canonical::Ghz)).unwrap();
        assert_eq!((v, p), (0.0, None));
    }

    #[test]
    fn purity_identities_on_fixtures() {
        assert!(purity_identities_check(&rho(Canonical::Product000)) < 1e-12);
        assert!(purity_identities_check(&rho(Canonical::Ghz)) < 1e-12);
        assert!(purity_identities_check(&Density3::maximally_mixed()) < 1e-12);
    }

    #[test]
    fn triple_reconstruction() {
        let r = rho(Canonical::W);
        assert!(bloch_triple_decomposition(&r).reconstruct().max_abs_diff(r.matrix()) < 1e-14);
    }

    #[test]
    fn record_is_consistent() {
        let r = psi_m(0.5).unwrap().density();
        let rec = ResourceRecord::compute(&r, StateProvenance::family_m(0.5)).unwrap();
        close(rec.negativity_tri, libm::cbrt(0.6), 1e-13);
        close(rec.gbc.unwrap(), rec.negativity_tri, 1e-12);
        assert_eq!(rec.steering_argmax, Pair::AC);
        assert_eq!(rec.steering_max, rec.steering(Pair::AC));
        assert_eq!(rec.bell_argmax, Some(Pair::AC));
        close(rec.bell_violation_max, 0.64, 1e-13);
    }
}
