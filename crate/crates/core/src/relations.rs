//! Complementary relations evaluated as signed residuals.
//!
//! Every entry stores `lhs`, `rhs` and a residual oriented so that a
//! non-negative value means the relation holds. An entry is satisfied when
//! `residual ≥ −INEQUALITY_TOL`. Relations whose hypothesis does not apply
//! (pure-only relations on mixed input) are still reported, with
//! `applicable = false` and NaN values.

use alloc::string::ToString;
use alloc::vec::Vec;
use core::f64::consts::FRAC_PI_2;
use core::fmt;
use core::str::FromStr;

use crate::labels::{Bipartition, Pair};
use crate::linalg::hermitian_eigen;
use crate::measures::{bell_m_pair, coherence_pair, reduced, ResourceRecord};
use crate::states::{psi_alpha, psi_m, Density3, StateProvenance};
use crate::{Error, Result};

/// Slack allowed on every inequality.
pub const INEQUALITY_TOL: f64 = 1e-9;
/// Slack allowed on end-to-end equalities.
pub const EQUALITY_TOL: f64 = 1e-8;

/// Every relation, in CSV column order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Relation {
    /// `N = G` on pure states.
    NegativityEqualsGbc,
    /// `N² + D² ≤ 1`.
    CoherenceUpper,
    /// `N⁶ + 3D² ≥ 1`, pure states only.
    CoherenceLower,
    /// `2N⁶ + S ≤ 2`.
    Steering,
    /// `2N²_{I|JK} + S_JK ≤ 2`.
    SteeringCut(Bipartition),
    /// `N⁶ + B ≤ 1`.
    Bell,
    /// `N²_{I|JK} + B_JK ≤ 1`.
    BellCut(Bipartition),
    /// `D²_JK/2 + (B'_JK/2√2)² ≤ Tr ρ²_JK − 2(ε₁ε₄ + ε₂ε₃)`.
    CoherenceChsh(Pair),
}

impl Relation {
    pub const ALL: [Relation; 14] = [
        Relation::NegativityEqualsGbc,
        Relation::CoherenceUpper,
        Relation::CoherenceLower,
        Relation::Steering,
        Relation::SteeringCut(Bipartition::ABC),
        Relation::SteeringCut(Bipartition::BAC),
        Relation::SteeringCut(Bipartition::CAB),
        Relation::Bell,
        Relation::BellCut(Bipartition::ABC),
        Relation::BellCut(Bipartition::BAC),
        Relation::BellCut(Bipartition::CAB),
        Relation::CoherenceChsh(Pair::AB),
        Relation::CoherenceChsh(Pair::AC),
        Relation::CoherenceChsh(Pair::BC),
    ];

    /// Stable column name.
    pub const fn name(self) -> &'static str {
        match self {
            Relation::NegativityEqualsGbc => "thm1_n_eq_g",
            Relation::CoherenceUpper => "thm2_upper",
            Relation::CoherenceLower => "thm2_lower",
            Relation::Steering => "thm3",
            Relation::SteeringCut(Bipartition::ABC) => "cor1_A_BC",
            Relation::SteeringCut(Bipartition::BAC) => "cor1_B_AC",
            Relation::SteeringCut(Bipartition::CAB) => "cor1_C_AB",
            Relation::Bell => "thm4",
            Relation::BellCut(Bipartition::ABC) => "cor2_A_BC",
            Relation::BellCut(Bipartition::BAC) => "cor2_B_AC",
            Relation::BellCut(Bipartition::CAB) => "cor2_C_AB",
            Relation::CoherenceChsh(Pair::AB) => "chsh_coh_AB",
            Relation::CoherenceChsh(Pair::AC) => "chsh_coh_AC",
            Relation::CoherenceChsh(Pair::BC) => "chsh_coh_BC",
        }
    }

    /// Position in [`Relation::ALL`].
    pub fn index(self) -> usize {
        Self::ALL.iter().position(|r| *r == self).expect("listed")
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One evaluated relation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RelationEntry {
    pub relation: Relation,
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
    pub satisfied: bool,
    pub applicable: bool,
}

impl RelationEntry {
    fn from_residual(relation: Relation, lhs: f64, rhs: f64, residual: f64) -> Self {
        Self { relation, lhs, rhs, residual, satisfied: residual >= -INEQUALITY_TOL, applicable: true }
    }

    /// `lhs ≤ rhs`.
    pub fn at_most(relation: Relation, lhs: f64, rhs: f64) -> Self {
        Self::from_residual(relation, lhs, rhs, rhs - lhs)
    }

    /// `lhs ≥ rhs`.
    pub fn at_least(relation: Relation, lhs: f64, rhs: f64) -> Self {
        Self::from_residual(relation, lhs, rhs, lhs - rhs)
    }

    /// `lhs = rhs`; the residual is `−|lhs − rhs|`.
    pub fn equal(relation: Relation, lhs: f64, rhs: f64) -> Self {
        Self::from_residual(relation, lhs, rhs, -(lhs - rhs).abs())
    }

    pub fn not_applicable(relation: Relation) -> Self {
        Self { relation, lhs: f64::NAN, rhs: f64::NAN, residual: f64::NAN, satisfied: true, applicable: false }
    }

    pub fn name(&self) -> &'static str {
        self.relation.name()
    }
}

/// All relations of one state, in [`Relation::ALL`] order.
#[derive(Debug, Clone, PartialEq)]
pub struct RelationReport {
    pub entries: Vec<RelationEntry>,
}

impl RelationReport {
    pub fn get(&self, relation: Relation) -> &RelationEntry {
        &self.entries[relation.index()]
    }

    pub fn all_satisfied(&self) -> bool {
        self.entries.iter().all(|e| e.satisfied)
    }

    pub fn violations(&self) -> impl Iterator<Item = &RelationEntry> {
        self.entries.iter().filter(|e| !e.satisfied)
    }

    /// Applicable entry with the smallest residual.
    pub fn worst(&self) -> Option<&RelationEntry> {
        self.entries
            .iter()
            .filter(|e| e.applicable)
            .min_by(|a, b| a.residual.total_cmp(&b.residual))
    }
}

/// `N = G` when the GBC is defined.
pub fn check_theorem1(record: &ResourceRecord) -> RelationEntry {
    match record.gbc {
        Some(g) => RelationEntry::equal(Relation::NegativityEqualsGbc, record.negativity_tri, g),
        None => RelationEntry::not_applicable(Relation::NegativityEqualsGbc),
    }
}

/// `N² + D² ≤ 1` always; `N⁶ + 3D² ≥ 1` only for pure states.
pub fn check_theorem2(record: &ResourceRecord, is_pure: bool) -> [RelationEntry; 2] {
    let n = record.negativity_tri;
    let d2 = record.coherence * record.coherence;
    let upper = RelationEntry::at_most(Relation::CoherenceUpper, n * n + d2, 1.0);
    let lower = if is_pure {
        RelationEntry::at_least(Relation::CoherenceLower, libm::pow(n, 6.0) + 3.0 * d2, 1.0)
    } else {
        RelationEntry::not_applicable(Relation::CoherenceLower)
    };
    [upper, lower]
}

/// `2N⁶ + S ≤ 2`.
pub fn check_theorem3(record: &ResourceRecord) -> RelationEntry {
    let n6 = libm::pow(record.negativity_tri, 6.0);
    RelationEntry::at_most(Relation::Steering, 2.0 * n6 + record.steering_max, 2.0)
}

/// `2N²_{I|JK} + S_JK ≤ 2` for each cut.
pub fn check_corollary1(negativity_bi: &[f64; 3], steering_pair: &[f64; 3]) -> [RelationEntry; 3] {
    Bipartition::ALL.map(|cut| {
        let n = negativity_bi[cut.index()];
        let s = steering_pair[cut.rest().index()];
        RelationEntry::at_most(Relation::SteeringCut(cut), 2.0 * n * n + s, 2.0)
    })
}

/// `N⁶ + B ≤ 1`.
pub fn check_theorem4(record: &ResourceRecord) -> RelationEntry {
    let n6 = libm::pow(record.negativity_tri, 6.0);
    RelationEntry::at_most(Relation::Bell, n6 + record.bell_violation_max, 1.0)
}

/// `N²_{I|JK} + B_JK ≤ 1` for each cut.
pub fn check_corollary2(negativity_bi: &[f64; 3], bell_pair: &[f64; 3]) -> [RelationEntry; 3] {
    Bipartition::ALL.map(|cut| {
        let n = negativity_bi[cut.index()];
        let b = bell_pair[cut.rest().index()];
        RelationEntry::at_most(Relation::BellCut(cut), n * n + b, 1.0)
    })
}

fn coherence_chsh_entry(rho: &Density3, pair: Pair, coherence_pair: f64, m: f64) -> Result<RelationEntry> {
    let r = reduced(rho, pair);
    let eps = hermitian_eigen(&r, false)?.values;
    // (B'/2√2)² with B' = 2√M
    let lhs = coherence_pair * coherence_pair / 2.0 + m / 2.0;
    let rhs = r.trace_of_square() - 2.0 * (eps[0] * eps[3] + eps[1] * eps[2]);
    Ok(RelationEntry::at_most(Relation::CoherenceChsh(pair), lhs, rhs))
}

/// Coherence–CHSH trade-off of one pair.
pub fn check_coherence_chsh_pair(rho: &Density3, pair: Pair) -> Result<RelationEntry> {
    coherence_chsh_entry(rho, pair, coherence_pair(rho, pair), bell_m_pair(rho, pair)?)
}

/// Evaluates every relation for `rho` with its precomputed record.
pub fn evaluate(rho: &Density3, record: &ResourceRecord) -> Result<RelationReport> {
    let is_pure = record.gbc.is_some();
    let bell_pair = Pair::ALL.map(|p| record.bell_violation(p));
    let mut entries = Vec::with_capacity(Relation::ALL.len());
    entries.push(check_theorem1(record));
    entries.extend(check_theorem2(record, is_pure));
    entries.push(check_theorem3(record));
    entries.extend(check_corollary1(&record.negativity_bi, &record.steering_pair));
    entries.push(check_theorem4(record));
    entries.extend(check_corollary2(&record.negativity_bi, &bell_pair));
    for pair in Pair::ALL {
        let (i, j) = pair.qubits();
        let (di, dj) = (record.coherence_sub[i.index()], record.coherence_sub[j.index()]);
        let d_pair = libm::sqrt((di * di + dj * dj) / 2.0);
        entries.push(coherence_chsh_entry(rho, pair, d_pair, record.bell_m(pair))?);
    }
    debug_assert!(entries.iter().zip(Relation::ALL).all(|(e, r)| e.relation == r));
    Ok(RelationReport { entries })
}

/// Computes the record and relation report in one go.
pub fn assess(rho: &Density3, provenance: StateProvenance) -> Result<(ResourceRecord, RelationReport)> {
    let record = ResourceRecord::compute(rho, provenance)?;
    let report = evaluate(rho, &record)?;
    Ok((record, report))
}

/// Analytic boundary curves traced by the two state families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CurveId {
    /// `(N², D²)` along `|ψ⟩_α`.
    AlphaNd,
    /// `(N², D²)` along `|ψ⟩_m`.
    MNd,
    /// `(N⁶, S)` along `|ψ⟩_m`.
    MNs,
    /// `(N⁶, B)` along `|ψ⟩_m`.
    MNb,
}

impl CurveId {
    pub const ALL: [CurveId; 4] = [CurveId::AlphaNd, CurveId::MNd, CurveId::MNs, CurveId::MNb];

    pub const fn name(self) -> &'static str {
        match self {
            CurveId::AlphaNd => "alpha_ND",
            CurveId::MNd => "m_ND",
            CurveId::MNs => "m_NS",
            CurveId::MNb => "m_NB",
        }
    }

    /// The family parameter at grid index `k` of `grid`: `α ∈ [0, π/2]` or
    /// `m ∈ [0, 1]`.
    pub fn parameter(self, k: usize, grid: usize) -> f64 {
        let t = k as f64 / (grid - 1) as f64;
        match self {
            CurveId::AlphaNd => FRAC_PI_2 * t,
            _ => t,
        }
    }
}

impl fmt::Display for CurveId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CurveId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CurveId::ALL
            .into_iter()
            .find(|c| c.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::BadCurveId(s.to_string()))
    }
}

/// A point of an analytic boundary curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryCurvePoint {
    pub curve: CurveId,
    pub parameter: f64,
    pub x: f64,
    pub y: f64,
}

impl BoundaryCurvePoint {
    /// Residual of the equality the curve saturates.
    pub fn defining_residual(&self) -> f64 {
        let (x, y) = (self.x, self.y);
        match self.curve {
            CurveId::AlphaNd => x + y - 1.0,
            CurveId::MNd => x * x * x + 3.0 * y - 1.0,
            CurveId::MNs => 2.0 * x + y - 2.0,
            CurveId::MNb => x + y - 1.0,
        }
    }
}

/// Closed-form `N`, `D`, `S`, `B` of `|ψ⟩_m`.
pub fn m_family_closed_form(m: f64) -> [f64; 4] {
    let m2 = m * m;
    let q = 1.0 + m2;
    [
        libm::cbrt((1.0 - m2) / q),
        2.0 * m / (libm::sqrt(3.0) * q),
        8.0 * m2 / (q * q),
        4.0 * m2 / (q * q),
    ]
}

/// Closed-form `N`, `D` of `|ψ⟩_α`.
pub fn alpha_family_closed_form(alpha: f64) -> [f64; 2] {
    [libm::fabs(libm::sin(2.0 * alpha)), libm::fabs(libm::cos(2.0 * alpha))]
}

/// Analytic points of one curve on a uniform parameter grid.
pub fn boundary_curve(curve: CurveId, grid: usize) -> Result<Vec<BoundaryCurvePoint>> {
    if grid < 2 {
        return Err(Error::BadGrid(grid));
    }
    Ok((0..grid)
        .map(|k| {
            let parameter = curve.parameter(k, grid);
            let (x, y) = match curve {
                CurveId::AlphaNd => {
                    let [n, d] = alpha_family_closed_form(parameter);
                    (n * n, d * d)
                }
                _ => {
                    let [n, d, s, b] = m_family_closed_form(parameter);
                    match curve {
                        CurveId::MNd => (n * n, d * d),
                        CurveId::MNs => (libm::pow(n, 6.0), s),
                        _ => (libm::pow(n, 6.0), b),
                    }
                }
            };
            BoundaryCurvePoint { curve, parameter, x, y }
        })
        .collect())
}

/// Numeric-versus-analytic comparison of the two families.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct BoundaryConsistency {
    /// `max |N − |sin 2α||`, `max |D² − cos² 2α|` on the α grid.
    pub alpha_measures: f64,
    /// `max |N² + D² − 1|` on the α grid.
    pub alpha_nd: f64,
    /// `max` deviation of numeric `N`, `D²`, `S`, `B` from the closed forms on
    /// the m grid.
    pub m_measures: f64,
    /// `max |N⁶ + 3D² − 1|` on the m grid.
    pub m_nd: f64,
    /// `max |2N⁶ + S − 2|` on the m grid.
    pub m_ns: f64,
    /// `max |N⁶ + B − 1|` on the m grid.
    pub m_nb: f64,
}

impl BoundaryConsistency {
    pub fn max_residual(&self) -> f64 {
        [self.alpha_measures, self.alpha_nd, self.m_measures, self.m_nd, self.m_ns, self.m_nb]
            .into_iter()
            .fold(0.0, f64::max)
    }

    /// Worst of the four saturated equalities alone.
    pub fn max_equality_residual(&self) -> f64 {
        [self.alpha_nd, self.m_nd, self.m_ns, self.m_nb].into_iter().fold(0.0, f64::max)
    }
}

/// Numeric measures of one family member, for boundary checks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FamilyPoint {
    pub parameter: f64,
    pub record_n: f64,
    pub record_d: f64,
    pub record_s: f64,
    pub record_b: f64,
}

/// Builds the state at every grid point and compares numeric measures with
/// the closed forms and the saturated equalities.
pub fn boundary_consistency(grid: usize) -> Result<BoundaryConsistency> {
    if grid < 2 {
        return Err(Error::BadGrid(grid));
    }
    let mut out = BoundaryConsistency::default();
    for k in 0..grid {
        let alpha = CurveId::AlphaNd.parameter(k, grid);
        let rho = psi_alpha(alpha)?.density();
        let rec = ResourceRecord::compute(&rho, StateProvenance::family_alpha(alpha))?;
        let [n, d] = alpha_family_closed_form(alpha);
        let (rn, rd2) = (rec.negativity_tri, rec.coherence * rec.coherence);
        out.alpha_measures = out.alpha_measures.max((rn - n).abs()).max((rd2 - d * d).abs());
        out.alpha_nd = out.alpha_nd.max((rn * rn + rd2 - 1.0).abs());

        let m = CurveId::MNd.parameter(k, grid);
        let rho = psi_m(m)?.density();
        let rec = ResourceRecord::compute(&rho, StateProvenance::family_m(m))?;
        let [n, d, s, b] = m_family_closed_form(m);
        let (rn, rd2) = (rec.negativity_tri, rec.coherence * rec.coherence);
        let n6 = libm::pow(rn, 6.0);
        out.m_measures = out
            .m_measures
            .max((rn - n).abs())
            .max((rd2 - d * d).abs())
            .max((rec.steering_max - s).abs())
            .max((rec.bell_violation_max - b).abs());
        out.m_nd = out.m_nd.max((n6 + 3.0 * rd2 - 1.0).abs());
        out.m_ns = out.m_ns.max((2.0 * n6 + rec.steering_max - 2.0).abs());
        out.m_nb = out.m_nb.max((n6 + rec.bell_violation_max - 1.0).abs());
    }
    Ok(out)
}
