//! Three-qubit pure and mixed states: validated containers, the two
//! single-parameter boundary families, canonical fixtures and samplers.
//!
//! Samplers take the random generator by reference so callers control
//! stream layout; nothing here owns global state.
//!
//! Mixed states are drawn from the induced (Ginibre) measure with an explicit
//! rank: `ρ = G G† / Tr(G G†)` for an `8 × rank` complex Gaussian `G`.

use alloc::string::ToString;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::linalg::{hermitian_eigen, ComplexMatrix};
use crate::{Error, Result};

/// Tolerance on `Σ|ψ_i|² = 1`.
pub const NORM_TOL: f64 = 1e-12;
/// Tolerance on Hermiticity, trace and positivity of a density matrix.
pub const DENSITY_TOL: f64 = 1e-10;
/// Eigenvalues at or below this are treated as outside the support when
/// decomposing a mixed state.
pub const SUPPORT_TOL: f64 = 1e-12;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Normalized three-qubit state vector over `|000⟩ … |111⟩`.
///
/// The global phase is left as given.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PureState3 {
    amplitudes: [Complex64; 8],
}

impl PureState3 {
    /// Validates finiteness and `|Σ|ψ_i|² − 1| ≤ 1e-12`.
    pub fn new(amplitudes: [Complex64; 8]) -> Result<Self> {
        if !amplitudes.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        let norm_sq: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum();
        if (norm_sq - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized(norm_sq));
        }
        Ok(Self { amplitudes })
    }

    pub fn from_slice(amplitudes: &[Complex64]) -> Result<Self> {
        let arr: [Complex64; 8] = amplitudes
            .try_into()
            .map_err(|_| Error::BadLength { expected: 8, got: amplitudes.len() })?;
        Self::new(arr)
    }

    /// Rescales an arbitrary nonzero vector to unit norm.
    pub fn normalized(mut amplitudes: [Complex64; 8]) -> Result<Self> {
        let norm = libm::sqrt(amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>());
        if !norm.is_finite() || norm == 0.0 {
            return Err(Error::NotNormalized(norm * norm));
        }
        for z in &mut amplitudes {
            *z /= norm;
        }
        Self::new(amplitudes)
    }

    pub fn amplitudes(&self) -> &[Complex64; 8] {
        &self.amplitudes
    }

    /// `|ψ⟩⟨ψ|`.
    pub fn projector(&self) -> ComplexMatrix {
        ComplexMatrix::outer(&self.amplitudes)
    }

    pub fn density(&self) -> Density3 {
        Density3 { matrix: self.projector(), rank_hint: Some(1) }
    }

    /// `e^{iφ}|ψ⟩`.
    pub fn with_global_phase(&self, phi: f64) -> Self {
        let w = Complex64::from_polar(1.0, phi);
        Self { amplitudes: self.amplitudes.map(|z| z * w) }
    }

    /// `U|ψ⟩` for an 8×8 unitary `U`, renormalized against rounding.
    pub fn transformed(&self, u: &ComplexMatrix) -> Result<Self> {
        let v = u.apply(&self.amplitudes);
        let arr: [Complex64; 8] = v.try_into().map_err(|v: Vec<_>| Error::BadLength { expected: 8, got: v.len() })?;
        Self::normalized(arr)
    }

    /// `|⟨self|other⟩|²`.
    pub fn fidelity(&self, other: &Self) -> f64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum::<Complex64>()
            .norm_sqr()
    }
}

/// Validated 8×8 density matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Density3 {
    matrix: ComplexMatrix,
    rank_hint: Option<u8>,
}

impl Density3 {
    /// Checks Hermiticity, unit trace and positivity, each to `1e-10`.
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if matrix.dim() != 8 {
            return Err(Error::BadDimension(matrix.dim()));
        }
        let defect = matrix.hermiticity_defect();
        if defect > DENSITY_TOL {
            return Err(Error::NotHermitian(defect));
        }
        let dev = (matrix.trace() - Complex64::new(1.0, 0.0)).norm();
        if dev > DENSITY_TOL {
            return Err(Error::NotDensityLike(dev));
        }
        let eig = hermitian_eigen(&matrix, false)?;
        let smallest = eig.values[7];
        if smallest < -DENSITY_TOL {
            return Err(Error::NotPositive(smallest));
        }
        Ok(Self { matrix, rank_hint: None })
    }

    pub fn with_rank_hint(mut self, rank: u8) -> Self {
        self.rank_hint = Some(rank);
        self
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn rank_hint(&self) -> Option<u8> {
        self.rank_hint
    }

    /// `Tr(ρ²)`.
    pub fn purity(&self) -> f64 {
        self.matrix.trace_of_square()
    }

    /// Rank one within `tol` on the purity.
    pub fn is_pure(&self, tol: f64) -> bool {
        self.purity() >= 1.0 - tol
    }

    /// `U ρ U†`.
    pub fn conjugated(&self, u: &ComplexMatrix) -> Result<Self> {
        let m = &(u * &self.matrix) * &u.adjoint();
        let rho = Self::new(m.hermitian_part())?;
        Ok(Self { rank_hint: self.rank_hint, ..rho })
    }

    /// `λ ρ₁ + (1 − λ) ρ₂`.
    pub fn mix(lambda: f64, a: &Density3, b: &Density3) -> Result<Self> {
        if !(0.0..=1.0).contains(&lambda) {
            return Err(Error::OutOfRange(lambda));
        }
        let m = &a.matrix.scale(lambda) + &b.matrix.scale(1.0 - lambda);
        Self::new(m)
    }

    /// The maximally mixed state `I/8`.
    pub fn maximally_mixed() -> Self {
        Self { matrix: ComplexMatrix::identity(8).scale(0.125), rank_hint: Some(8) }
    }
}

impl From<PureState3> for Density3 {
    fn from(psi: PureState3) -> Self {
        psi.density()
    }
}

/// Where a state came from, for CSV provenance and replay.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StateKind {
    HaarPure,
    GinibreMixed,
    FamilyAlpha,
    FamilyM,
    Canonical,
    File,
}

impl StateKind {
    pub const fn name(self) -> &'static str {
        match self {
            StateKind::HaarPure => "haar_pure",
            StateKind::GinibreMixed => "ginibre_mixed",
            StateKind::FamilyAlpha => "family_alpha",
            StateKind::FamilyM => "family_m",
            StateKind::Canonical => "canonical",
            StateKind::File => "file",
        }
    }
}

impl fmt::Display for StateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Provenance of a state. `parameter` is set exactly for the two families,
/// `rank` exactly for Ginibre draws; `seed` and `draw` locate sampled states.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateProvenance {
    pub kind: StateKind,
    pub parameter: Option<f64>,
    pub seed: Option<u64>,
    pub rank: Option<u8>,
    pub draw: Option<u64>,
}

impl StateProvenance {
    pub fn haar_pure(seed: u64, draw: u64) -> Self {
        Self { kind: StateKind::HaarPure, parameter: None, seed: Some(seed), rank: None, draw: Some(draw) }
    }

    pub fn ginibre_mixed(rank: u8, seed: u64, draw: u64) -> Self {
        Self { kind: StateKind::GinibreMixed, parameter: None, seed: Some(seed), rank: Some(rank), draw: Some(draw) }
    }

    pub fn family_alpha(alpha: f64) -> Self {
        Self { kind: StateKind::FamilyAlpha, parameter: Some(alpha), seed: None, rank: None, draw: None }
    }

    pub fn family_m(m: f64) -> Self {
        Self { kind: StateKind::FamilyM, parameter: Some(m), seed: None, rank: None, draw: None }
    }

    pub fn canonical() -> Self {
        Self { kind: StateKind::Canonical, parameter: None, seed: None, rank: None, draw: None }
    }

    pub fn file() -> Self {
        Self { kind: StateKind::File, parameter: None, seed: None, rank: None, draw: None }
    }
}

/// Generalized GHZ family `cos α|000⟩ + sin α|111⟩`.
pub fn psi_alpha(alpha: f64) -> Result<PureState3> {
    if !alpha.is_finite() {
        return Err(Error::NonFinite);
    }
    let mut a = [ZERO; 8];
    a[0] = Complex64::new(libm::cos(alpha), 0.0);
    a[7] = Complex64::new(libm::sin(alpha), 0.0);
    PureState3::new(a)
}

/// `(|000⟩ + m(|010⟩ + |101⟩) + |111⟩) / √(2 + 2m²)` for `m ∈ [0, 1]`.
pub fn psi_m(m: f64) -> Result<PureState3> {
    if !(0.0..=1.0).contains(&m) {
        return Err(Error::OutOfRange(m));
    }
    let n = 1.0 / libm::sqrt(2.0 + 2.0 * m * m);
    let mut a = [ZERO; 8];
    a[0b000] = Complex64::new(n, 0.0);
    a[0b010] = Complex64::new(m * n, 0.0);
    a[0b101] = Complex64::new(m * n, 0.0);
    a[0b111] = Complex64::new(n, 0.0);
    PureState3::new(a)
}

/// Named fixture states.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Canonical {
    Ghz,
    W,
    Product000,
}

impl FromStr for Canonical {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "ghz" => Ok(Canonical::Ghz),
            "w" => Ok(Canonical::W),
            "product000" => Ok(Canonical::Product000),
            _ => Err(Error::UnknownName(s.to_string())),
        }
    }
}

pub fn canonical(which: Canonical) -> PureState3 {
    let mut a = [ZERO; 8];
    match which {
        Canonical::Ghz => {
            let h = core::f64::consts::FRAC_1_SQRT_2;
            a[0b000] = Complex64::new(h, 0.0);
            a[0b111] = Complex64::new(h, 0.0);
        }
        Canonical::W => {
            let t = 1.0 / libm::sqrt(3.0);
            a[0b001] = Complex64::new(t, 0.0);
            a[0b010] = Complex64::new(t, 0.0);
            a[0b100] = Complex64::new(t, 0.0);
        }
        Canonical::Product000 => a[0] = Complex64::new(1.0, 0.0),
    }
    PureState3::new(a).expect("fixture states are normalized")
}

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Haar-random pure state: eight i.i.d. complex Gaussians, normalized.
pub fn sample_haar_pure<R: Rng + ?Sized>(rng: &mut R) -> PureState3 {
    let a: [Complex64; 8] = core::array::from_fn(|_| gaussian(rng));
    PureState3::normalized(a).expect("Gaussian vector is nonzero with probability one")
}

/// Ginibre mixed state of the requested rank.
pub fn sample_ginibre_mixed<R: Rng + ?Sized>(rank: usize, rng: &mut R) -> Result<Density3> {
    if !(1..=8).contains(&rank) {
        return Err(Error::BadRank(rank));
    }
    let g: Vec<Complex64> = (0..8 * rank).map(|_| gaussian(rng)).collect();
    let mut m = ComplexMatrix::zeros(8);
    for i in 0..8 {
        for j in i..8 {
            let z: Complex64 = (0..rank).map(|k| g[i * rank + k] * g[j * rank + k].conj()).sum();
            m[(i, j)] = z;
            m[(j, i)] = z.conj();
        }
        m[(i, i)] = Complex64::new(m[(i, i)].re, 0.0);
    }
    let tr = m.trace().re;
    Ok(Density3 { matrix: m.scale(1.0 / tr), rank_hint: Some(rank as u8) })
}

/// Haar-random isometry with `cols` orthonormal columns of length `rows`,
/// returned column-major (`out[c][r]`). Gram–Schmidt on a Gaussian matrix,
/// which is QR with a positive diagonal in `R`.
pub fn haar_isometry<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> Vec<Vec<Complex64>> {
    assert!(cols <= rows, "isometry needs cols <= rows");
    let mut out: Vec<Vec<Complex64>> = Vec::with_capacity(cols);
    while out.len() < cols {
        let mut v: Vec<Complex64> = (0..rows).map(|_| gaussian(rng)).collect();
        // two passes of modified Gram–Schmidt
        for _ in 0..2 {
            for u in &out {
                let proj: Complex64 = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                for (x, y) in v.iter_mut().zip(u) {
                    *x -= proj * y;
                }
            }
        }
        let norm = libm::sqrt(v.iter().map(|z| z.norm_sqr()).sum::<f64>());
        if norm > 1e-8 {
            v.iter_mut().for_each(|z| *z /= norm);
            out.push(v);
        }
    }
    out
}

/// Haar-random `dim × dim` unitary.
pub fn haar_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexMatrix {
    let cols = haar_isometry(dim, dim, rng);
    ComplexMatrix::from_fn(dim, |i, j| cols[j][i])
}

/// `U_A ⊗ U_B ⊗ U_C`.
pub fn local_unitary(ua: &ComplexMatrix, ub: &ComplexMatrix, uc: &ComplexMatrix) -> ComplexMatrix {
    ua.kron(ub).kron(uc)
}

/// A pure-state ensemble `{p_i, |ψ_i⟩}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Decomposition {
    pub weights: Vec<f64>,
    pub states: Vec<PureState3>,
}

impl Decomposition {
    /// `Σ p_i |ψ_i⟩⟨ψ_i|`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        self.weights
            .iter()
            .zip(&self.states)
            .fold(ComplexMatrix::zeros(8), |acc, (p, psi)| &acc + &psi.projector().scale(*p))
    }
}

/// Random pure-state decompositions of `rho` with `size` members each.
///
/// With `ρ = Σ_k λ_k |e_k⟩⟨e_k|` over its support of rank `r`, each
/// decomposition draws a Haar `size × r` isometry `U` and sets
/// `√p_i |ψ_i⟩ = Σ_k U_ik √λ_k |e_k⟩`. Members with zero weight are dropped.
pub fn random_decompositions<R: Rng + ?Sized>(
    rho: &Density3,
    count: usize,
    size: usize,
    rng: &mut R,
) -> Result<Vec<Decomposition>> {
    let eig = hermitian_eigen(rho.matrix(), false)?;
    let support: Vec<(f64, Vec<Complex64>)> = eig
        .values
        .iter()
        .enumerate()
        .filter(|(_, &l)| l > SUPPORT_TOL)
        .map(|(k, &l)| (libm::sqrt(l), eig.vector(k)))
        .collect();
    let rank = support.len();
    if size < rank {
        return Err(Error::SizeTooSmall { size, rank });
    }

    let mut out = Vec::with_capacity(count.max(1));
    for _ in 0..count.max(1) {
        let iso = haar_isometry(size, rank, rng);
        let mut weights = Vec::with_capacity(size);
        let mut states = Vec::with_capacity(size);
        for i in 0..size {
            let mut phi = [ZERO; 8];
            for (k, (sqrt_l, e)) in support.iter().enumerate() {
                let coeff = iso[k][i] * *sqrt_l;
                for (x, y) in phi.iter_mut().zip(e) {
                    *x += coeff * y;
                }
            }
            let p: f64 = phi.iter().map(|z| z.norm_sqr()).sum();
            if p > 1e-300 {
                weights.push(p);
                states.push(PureState3::normalized(phi)?);
            }
        }
        out.push(Decomposition { weights, states });
    }
    Ok(out)
}

/// Convenience: a flat `[re, im]` listing for serialization.
pub fn to_pairs(z: &[Complex64]) -> Vec<[f64; 2]> {
    z.iter().map(|c| [c.re, c.im]).collect()
}

/// Inverse of [`to_pairs`].
pub fn from_pairs(p: &[[f64; 2]]) -> Vec<Complex64> {
    p.iter().map(|&[re, im]| Complex64::new(re, im)).collect()
}
