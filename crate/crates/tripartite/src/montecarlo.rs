//! Seeded parallel sweeps over random and boundary states.
//!
//! Draw `i` of a sweep with seed `s` uses its own ChaCha8 stream
//! (`seed_from_u64(s)`, stream `i`), so every row depends only on `(s, i)`
//! and not on how draws are spread over workers. Draws are evaluated in
//! chunks on a rayon pool and handed to the sink in draw order.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use tripartite_core::relations::{
    alpha_family_closed_form, assess, m_family_closed_form, CurveId, Relation, RelationReport, INEQUALITY_TOL,
};
use tripartite_core::states::{psi_alpha, psi_m, sample_ginibre_mixed, sample_haar_pure};
use tripartite_core::{Density3, Pair, PureState3, ResourceRecord, StateProvenance};

use crate::error::{Error, Result};

/// Draws evaluated per parallel batch.
pub const CHUNK: u64 = 2048;

/// Pairwise Bell violations above this count toward the monogamy check.
pub const MONOGAMY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Pure,
    Mixed,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Pure => "pure",
            Mode::Mixed => "mixed",
        })
    }
}

/// Output-time row filters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, clap::ValueEnum)]
pub enum Filter {
    /// Keep rows with `S ≥ 0`.
    #[serde(rename = "steering-nonneg")]
    SteeringNonneg,
}

impl Filter {
    pub fn keep(self, record: &ResourceRecord) -> bool {
        match self {
            Filter::SteeringNonneg => record.steering_max >= 0.0,
        }
    }
}

impl FromStr for Filter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "steering-nonneg" => Ok(Filter::SteeringNonneg),
            _ => Err(Error::Config(format!("unknown filter `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepConfig {
    pub mode: Mode,
    pub count: u64,
    /// Ranks cycled over draws in mixed mode: draw `i` uses `ranks[i % len]`.
    pub ranks: Vec<u8>,
    pub seed: u64,
    pub workers: usize,
    pub filters: Vec<Filter>,
}

impl SweepConfig {
    pub fn pure(count: u64, seed: u64) -> Self {
        Self { mode: Mode::Pure, count, ranks: Vec::new(), seed, workers: 1, filters: Vec::new() }
    }

    pub fn mixed(count: u64, ranks: Vec<u8>, seed: u64) -> Self {
        Self { mode: Mode::Mixed, count, ranks, seed, workers: 1, filters: Vec::new() }
    }

    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = workers;
        self
    }

    pub fn with_filter(mut self, filter: Filter) -> Self {
        self.filters.push(filter);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.count == 0 {
            return Err(Error::Config("count must be at least 1".into()));
        }
        if self.workers == 0 {
            return Err(Error::Config("workers must be at least 1".into()));
        }
        if self.mode == Mode::Mixed {
            if self.ranks.is_empty() {
                return Err(Error::Config("mixed mode needs a non-empty rank list".into()));
            }
            if let Some(r) = self.ranks.iter().find(|r| !(1..=8).contains(*r)) {
                return Err(Error::Config(format!("rank {r} outside 1..=8")));
            }
        }
        Ok(())
    }

    /// Rank used by `draw`, in mixed mode.
    pub fn rank_of(&self, draw: u64) -> Option<u8> {
        match self.mode {
            Mode::Pure => None,
            Mode::Mixed => Some(self.ranks[(draw % self.ranks.len() as u64) as usize]),
        }
    }
}

/// The RNG of one draw.
pub fn draw_rng(seed: u64, draw: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(draw);
    rng
}

/// A regenerated sweep state.
#[derive(Debug, Clone, PartialEq)]
pub enum DrawnState {
    Pure(PureState3),
    Mixed(Density3),
}

impl DrawnState {
    pub fn density(&self) -> Density3 {
        match self {
            DrawnState::Pure(p) => p.density(),
            DrawnState::Mixed(d) => d.clone(),
        }
    }
}

/// Regenerates draw `draw` of a sweep; `rank` is required in mixed mode.
pub fn replay(mode: Mode, rank: Option<u8>, seed: u64, draw: u64) -> Result<(DrawnState, StateProvenance)> {
    let mut rng = draw_rng(seed, draw);
    match (mode, rank) {
        (Mode::Pure, _) => Ok((DrawnState::Pure(sample_haar_pure(&mut rng)), StateProvenance::haar_pure(seed, draw))),
        (Mode::Mixed, Some(r)) => {
            let rho = sample_ginibre_mixed(r as usize, &mut rng).map_err(|source| Error::Draw { draw, source })?;
            Ok((DrawnState::Mixed(rho), StateProvenance::ginibre_mixed(r, seed, draw)))
        }
        (Mode::Mixed, None) => Err(Error::Config("mixed replay needs a rank".into())),
    }
}

/// One evaluated draw.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub draw: u64,
    pub record: ResourceRecord,
    pub report: RelationReport,
}

/// Samples and evaluates one draw.
pub fn evaluate_draw(cfg: &SweepConfig, draw: u64) -> Result<SweepRow> {
    let (state, provenance) = replay(cfg.mode, cfg.rank_of(draw), cfg.seed, draw)?;
    let (record, report) = assess(&state.density(), provenance).map_err(|source| Error::Draw { draw, source })?;
    Ok(SweepRow { draw, record, report })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WorstCase {
    pub relation: &'static str,
    pub residual: f64,
    pub seed: u64,
    pub draw: u64,
    pub rank: Option<u8>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct RankStats {
    pub count: u64,
    pub bell_violating: u64,
}

impl RankStats {
    pub fn fraction(&self) -> f64 {
        if self.count == 0 {
            0.0
        } else {
            self.bell_violating as f64 / self.count as f64
        }
    }
}

/// Aggregate of a sweep. Everything except `wall_time` depends only on the
/// configuration, never on the worker count.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepSummary {
    pub mode: Mode,
    pub seed: u64,
    pub total: u64,
    /// Rows that passed the output filters.
    pub emitted: u64,
    pub violations: BTreeMap<&'static str, u64>,
    /// Smallest residual over all applicable relation entries.
    pub max_negative_residual: f64,
    pub worst: Option<WorstCase>,
    pub bell_violating: u64,
    /// States with more than one pair violating Bell-CHSH.
    pub monogamy_violations: u64,
    /// Keyed by rank, mixed mode only.
    pub per_rank: BTreeMap<u8, RankStats>,
    pub wall_time: f64,
}

impl SweepSummary {
    fn new(cfg: &SweepConfig) -> Self {
        Self {
            mode: cfg.mode,
            seed: cfg.seed,
            total: 0,
            emitted: 0,
            violations: Relation::ALL.iter().map(|r| (r.name(), 0)).collect(),
            max_negative_residual: f64::INFINITY,
            worst: None,
            bell_violating: 0,
            monogamy_violations: 0,
            per_rank: BTreeMap::new(),
            wall_time: 0.0,
        }
    }

    fn absorb(&mut self, row: &SweepRow) {
        self.total += 1;
        let prov = &row.record.provenance;
        for e in row.report.entries.iter().filter(|e| e.applicable) {
            if !e.satisfied {
                *self.violations.get_mut(e.name()).expect("all relations listed") += 1;
            }
            if e.residual < self.max_negative_residual {
                self.max_negative_residual = e.residual;
                self.worst = Some(WorstCase {
                    relation: e.name(),
                    residual: e.residual,
                    seed: prov.seed.unwrap_or_default(),
                    draw: row.draw,
                    rank: prov.rank,
                });
            }
        }
        let violating = row.record.bell_violation_max > 0.0;
        self.bell_violating += u64::from(violating);
        let pairs = Pair::ALL.iter().filter(|&&p| row.record.bell_violation(p) > MONOGAMY_TOL).count();
        self.monogamy_violations += u64::from(pairs > 1);
        if let Some(rank) = prov.rank {
            let s = self.per_rank.entry(rank).or_default();
            s.count += 1;
            s.bell_violating += u64::from(violating);
        }
    }

    pub fn total_violations(&self) -> u64 {
        self.violations.values().sum()
    }

    pub fn passed(&self) -> bool {
        self.total_violations() == 0
    }

    pub fn bell_fraction(&self) -> f64 {
        if self.total == 0 {
            0.0
        } else {
            self.bell_violating as f64 / self.total as f64
        }
    }

    pub fn per_rank_bell_fraction(&self) -> BTreeMap<u8, f64> {
        self.per_rank.iter().map(|(&r, s)| (r, s.fraction())).collect()
    }

    /// A copy with the timing zeroed, for comparisons.
    pub fn without_timing(&self) -> Self {
        Self { wall_time: 0.0, ..self.clone() }
    }

    /// The JSON summary written next to the CSV.
    pub fn to_json(&self) -> serde_json::Value {
        let per_rank: BTreeMap<String, f64> =
            self.per_rank_bell_fraction().into_iter().map(|(r, f)| (r.to_string(), f)).collect();
        serde_json::json!({
            "mode": self.mode,
            "seed": self.seed,
            "total": self.total,
            "emitted": self.emitted,
            "violations": self.violations,
            "max_negative_residual": self.max_negative_residual,
            "worst": self.worst,
            "tolerance": INEQUALITY_TOL,
            "bell_violation_fraction": self.bell_fraction(),
            "bell_monogamy_violations": self.monogamy_violations,
            "per_rank_bell_fraction": per_rank,
            "per_rank_counts": self.per_rank,
            "wall_time": self.wall_time,
        })
    }
}

/// Runs a sweep, handing rows that pass the filters to `sink` in draw order.
pub fn run_sweep<F>(cfg: &SweepConfig, mut sink: F) -> Result<SweepSummary>
where
    F: FnMut(&SweepRow) -> Result<()>,
{
    cfg.validate()?;
    let start = Instant::now();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| Error::Config(e.to_string()))?;
    let mut summary = SweepSummary::new(cfg);
    let mut next = 0;
    while next < cfg.count {
        let end = (next + CHUNK).min(cfg.count);
        let rows: Vec<Result<SweepRow>> =
            pool.install(|| (next..end).into_par_iter().map(|d| evaluate_draw(cfg, d)).collect());
        for row in rows {
            let row = row?;
            summary.absorb(&row);
            if cfg.filters.iter().all(|f| f.keep(&row.record)) {
                summary.emitted += 1;
                sink(&row)?;
            }
        }
        next = end;
    }
    if summary.max_negative_residual == f64::INFINITY {
        summary.max_negative_residual = 0.0;
    }
    summary.wall_time = start.elapsed().as_secs_f64();
    Ok(summary)
}

/// Runs a sweep and keeps every emitted row in memory.
pub fn collect_sweep(cfg: &SweepConfig) -> Result<(Vec<SweepRow>, SweepSummary)> {
    let mut rows = Vec::with_capacity(cfg.count as usize);
    let summary = run_sweep(cfg, |r| {
        rows.push(r.clone());
        Ok(())
    })?;
    Ok((rows, summary))
}

/// The two boundary families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, clap::ValueEnum)]
pub enum Family {
    /// `cos α|000⟩ + sin α|111⟩`, `α ∈ [0, π/2]`.
    Alpha,
    /// `|ψ⟩_m`, `m ∈ [0, 1]`.
    M,
}

impl Family {
    pub const ALL: [Family; 2] = [Family::Alpha, Family::M];

    pub fn name(self) -> &'static str {
        match self {
            Family::Alpha => "alpha",
            Family::M => "m",
        }
    }

    fn curve(self) -> CurveId {
        match self {
            Family::Alpha => CurveId::AlphaNd,
            Family::M => CurveId::MNd,
        }
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "alpha" => Ok(Family::Alpha),
            "m" => Ok(Family::M),
            _ => Err(Error::Config(format!("unknown family `{s}`"))),
        }
    }
}

/// Closed-form values on a boundary family. `S` and `B` only exist for the
/// m family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Analytic {
    pub n: f64,
    pub d: f64,
    pub s: Option<f64>,
    pub b: Option<f64>,
}

/// One family member, numerically evaluated.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryRow {
    pub family: Family,
    pub parameter: f64,
    pub record: ResourceRecord,
    pub report: RelationReport,
    pub analytic: Analytic,
}

impl BoundaryRow {
    /// `|N² + D² − 1|` on the α family.
    pub fn nd_upper(&self) -> Option<f64> {
        let (n, d) = (self.record.negativity_tri, self.record.coherence);
        (self.family == Family::Alpha).then(|| (n * n + d * d - 1.0).abs())
    }

    /// `|N⁶ + 3D² − 1|` on the m family.
    pub fn nd_lower(&self) -> Option<f64> {
        let (n, d) = (self.record.negativity_tri, self.record.coherence);
        (self.family == Family::M).then(|| (n.powi(6) + 3.0 * d * d - 1.0).abs())
    }

    /// `|2N⁶ + S − 2|` on the m family.
    pub fn ns(&self) -> Option<f64> {
        let n6 = self.record.negativity_tri.powi(6);
        (self.family == Family::M).then(|| (2.0 * n6 + self.record.steering_max - 2.0).abs())
    }

    /// `|N⁶ + B − 1|` on the m family.
    pub fn nb(&self) -> Option<f64> {
        let n6 = self.record.negativity_tri.powi(6);
        (self.family == Family::M).then(|| (n6 + self.record.bell_violation_max - 1.0).abs())
    }

    /// Largest deviation of the numeric measures from the closed forms, with
    /// `D` compared through `D²`, together with the saturated equalities.
    pub fn max_residual(&self) -> f64 {
        let r = &self.record;
        let a = &self.analytic;
        let mut worst = (r.negativity_tri - a.n).abs().max((r.coherence.powi(2) - a.d.powi(2)).abs());
        if let Some(s) = a.s {
            worst = worst.max((r.steering_max - s).abs());
        }
        if let Some(b) = a.b {
            worst = worst.max((r.bell_violation_max - b).abs());
        }
        [self.nd_upper(), self.nd_lower(), self.ns(), self.nb()].into_iter().flatten().fold(worst, f64::max)
    }
}

/// Evaluates one family on a uniform grid of `grid` points.
pub fn sweep_boundary(family: Family, grid: usize) -> Result<Vec<BoundaryRow>> {
    if grid < 2 {
        return Err(tripartite_core::Error::BadGrid(grid).into());
    }
    (0..grid)
        .map(|k| {
            let parameter = family.curve().parameter(k, grid);
            let (rho, provenance, analytic) = match family {
                Family::Alpha => {
                    let [n, d] = alpha_family_closed_form(parameter);
                    (psi_alpha(parameter)?.density(), StateProvenance::family_alpha(parameter), Analytic {
                        n,
                        d,
                        s: None,
                        b: None,
                    })
                }
                Family::M => {
                    let [n, d, s, b] = m_family_closed_form(parameter);
                    (psi_m(parameter)?.density(), StateProvenance::family_m(parameter), Analytic {
                        n,
                        d,
                        s: Some(s),
                        b: Some(b),
                    })
                }
            };
            let (record, report) = assess(&rho, provenance)?;
            Ok(BoundaryRow { family, parameter, record, report, analytic })
        })
        .collect()
}

/// Both families, α first.
pub fn sweep_boundary_families(grid: usize) -> Result<Vec<BoundaryRow>> {
    let mut rows = sweep_boundary(Family::Alpha, grid)?;
    rows.extend(sweep_boundary(Family::M, grid)?);
    Ok(rows)
}

/// Largest `y` per bin of `x` over `[lo, hi)`; bins with fewer than
/// `min_count` points are `None`.
pub fn binned_upper_envelope(
    points: impl IntoIterator<Item = (f64, f64)>,
    bins: usize,
    lo: f64,
    hi: f64,
    min_count: usize,
) -> Vec<Option<f64>> {
    let mut best = vec![f64::NEG_INFINITY; bins];
    let mut count = vec![0usize; bins];
    let width = (hi - lo) / bins as f64;
    for (x, y) in points {
        if !(lo..=hi).contains(&x) {
            continue;
        }
        let k = (((x - lo) / width) as usize).min(bins - 1);
        count[k] += 1;
        best[k] = best[k].max(y);
    }
    best.into_iter().zip(count).map(|(b, c)| (c >= min_count.max(1)).then_some(b)).collect()
}

/// Whether the populated bins of an envelope are monotone.
pub fn envelope_is_monotone(envelope: &[Option<f64>], increasing: bool) -> bool {
    let vals: Vec<f64> = envelope.iter().flatten().copied().collect();
    vals.windows(2).all(|w| if increasing { w[1] >= w[0] } else { w[1] <= w[0] })
}
