//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure.

use std::path::Path;
use std::time::Instant;

use tripartite::cli;
use tripartite::montecarlo::{collect_sweep, draw_rng, SweepConfig, SweepRow, SweepSummary};
use tripartite_core::measures::{
    gbc_pure, negativity_tripartite, purity_identities_check, steering_violation_max, steering_violation_pair,
};
use tripartite_core::relations::{boundary_consistency, Relation};
use tripartite_core::states::{random_decompositions, sample_ginibre_mixed, sample_haar_pure};
use tripartite_core::{Bipartition, Complex64, Pair, PureState3, Qubit};

const TOL: f64 = 1e-9;
const COUNT: u64 = 10_000;
const ALL_RANKS: [u8; 8] = [1, 2, 3, 4, 5, 6, 7, 8];

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn violations(summary: &SweepSummary, relations: &[Relation]) -> u64 {
    relations.iter().map(|r| summary.violations[r.name()]).sum()
}

// Reduced purity from amplitudes, without the crate's partial trace.
fn marginal_purity(psi: &PureState3, q: Qubit) -> f64 {
    let a = psi.amplitudes();
    let bit = 1 << q.bit();
    let mut r = [[Complex64::new(0.0, 0.0); 2]; 2];
    for i in 0..8 {
        for j in 0..8 {
            if i & !bit == j & !bit {
                r[usize::from(i & bit != 0)][usize::from(j & bit != 0)] += a[i] * a[j].conj();
            }
        }
    }
    (r[0][0] * r[0][0] + r[0][1] * r[1][0] * 2.0 + r[1][1] * r[1][1]).re
}

fn criterion1() -> Outcome {
    let start = Instant::now();
    let (rows, _) = collect_sweep(&SweepConfig::pure(COUNT, 1).with_workers(1)).unwrap();
    let secs = start.elapsed().as_secs_f64();
    let worst = rows
        .iter()
        .map(|r| (r.record.negativity_tri - r.record.gbc.expect("pure draw")).abs())
        .fold(0.0, f64::max);
    outcome(worst < TOL && secs < 30.0, format!("max |N - G| = {worst:.3e} over {COUNT} states, {secs:.2} s on one thread"))
}

fn criterion2() -> Outcome {
    let mut worst = f64::NEG_INFINITY;
    let mut cases = 0;
    for t in 0..100u64 {
        let rank = 2 + (t % 7) as usize;
        let mut rng = draw_rng(2, t);
        let rho = sample_ginibre_mixed(rank, &mut rng).unwrap();
        let n = negativity_tripartite(&rho).unwrap();
        let size = if t % 2 == 0 { rank } else { 8 };
        for d in random_decompositions(&rho, 20, size, &mut rng).unwrap() {
            let avg: f64 = d.weights.iter().zip(&d.states).map(|(p, s)| p * gbc_pure(s)).sum();
            worst = worst.max(n - avg);
            cases += 1;
        }
    }
    outcome(worst <= TOL, format!("{cases} decompositions, max N - sum p G = {worst:.3e}"))
}

fn criterion3(pure: &SweepSummary, mixed: &SweepSummary) -> Outcome {
    let p = violations(pure, &[Relation::CoherenceUpper, Relation::CoherenceLower]);
    let m = violations(mixed, &[Relation::CoherenceUpper]);
    outcome(p + m == 0, format!("pure violations {p}, mixed upper-bound violations {m}"))
}

fn criterion4() -> Outcome {
    let c = boundary_consistency(201).unwrap();
    let worst = c.max_equality_residual();
    outcome(
        worst < 1e-8,
        format!(
            "alpha N2+D2 {:.2e}, m N6+3D2 {:.2e}, 2N6+S {:.2e}, N6+B {:.2e}",
            c.alpha_nd, c.m_nd, c.m_ns, c.m_nb
        ),
    )
}

fn criterion5(mixed: &SweepSummary) -> Outcome {
    let cuts = Bipartition::ALL.map(Relation::SteeringCut);
    let thm = violations(mixed, &[Relation::Steering]);
    let cor = violations(mixed, &cuts);
    outcome(thm + cor == 0, format!("{} mixed states: steering violations {thm}, per-cut {cor}", mixed.total))
}

fn criterion6(mixed: &SweepSummary) -> Outcome {
    let cuts = Bipartition::ALL.map(Relation::BellCut);
    let thm = violations(mixed, &[Relation::Bell]);
    let cor = violations(mixed, &cuts);
    let mono = mixed.monogamy_violations;
    outcome(
        thm + cor + mono == 0,
        format!("{} mixed states: Bell violations {thm}, per-cut {cor}, multi-pair states {mono}", mixed.total),
    )
}

fn criterion7(mixed: &SweepSummary) -> Outcome {
    let mut steer = 0.0f64;
    for draw in 0..1000 {
        let psi = sample_haar_pure(&mut draw_rng(7, draw));
        let rho = psi.density();
        let mut best = f64::NEG_INFINITY;
        for pair in Pair::ALL {
            let (i, j) = pair.qubits();
            let want = 2.0
                * (2.0 * marginal_purity(&psi, pair.complement())
                    - marginal_purity(&psi, i)
                    - marginal_purity(&psi, j));
            steer = steer.max((steering_violation_pair(&rho, pair) - want).abs());
            best = best.max(want);
        }
        steer = steer.max((steering_violation_max(&rho).0 - best).abs());
    }
    let mut purity = 0.0f64;
    for draw in 0..1000u64 {
        let rank = 1 + (draw % 8) as usize;
        let rho = sample_ginibre_mixed(rank, &mut draw_rng(8, draw)).unwrap();
        purity = purity.max(purity_identities_check(&rho));
    }
    let chsh = violations(mixed, &Pair::ALL.map(Relation::CoherenceChsh));
    outcome(
        steer < TOL && purity < TOL && chsh == 0,
        format!("pure steering identity {steer:.2e}, purity identities {purity:.2e}, coherence-CHSH violations {chsh}"),
    )
}

fn run_cli(args: &[&str]) -> (i32, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let argv = std::iter::once("tripartite").chain(args.iter().copied());
    let code = cli::run(argv, &mut out, &mut err);
    (code, String::from_utf8_lossy(&err).into_owned())
}

fn verify(out: &Path, mode: &str, workers: &str) -> (i32, String) {
    let mut args = vec!["verify", "--mode", mode, "--count", "10000", "--seed", "8", "--workers", workers];
    if mode == "mixed" {
        args.extend(["--ranks", "1,2,3,4,5,6,7,8"]);
    }
    args.extend(["--out", out.to_str().unwrap()]);
    run_cli(&args)
}

struct Cloud {
    points: usize,
    outside: usize,
    nd_max: f64,
    ns_max: f64,
    nb_max: f64,
}

fn read_cloud(path: &Path, pure: bool) -> Cloud {
    let mut rdr = csv::Reader::from_path(path).unwrap();
    let h = rdr.headers().unwrap().clone();
    let col = |name: &str| h.iter().position(|c| c == name).unwrap();
    let (cn, cd, cs, cb) = (col("N_tri"), col("D"), col("S_max"), col("B_max"));
    let lo = f64::NEG_INFINITY;
    let mut c = Cloud { points: 0, outside: 0, nd_max: lo, ns_max: lo, nb_max: lo };
    for rec in rdr.records() {
        let rec = rec.unwrap();
        let v = |i: usize| rec[i].parse::<f64>().unwrap();
        let (n, d, s, b) = (v(cn), v(cd), v(cs), v(cb));
        let (n2, d2, n6) = (n * n, d * d, n.powi(6));
        let nd = n2 + d2 - 1.0;
        let ns = s - (2.0 - 2.0 * n6);
        let nb = b - (1.0 - n6);
        let lower = if pure { 1.0 - n6 - 3.0 * d2 } else { f64::NEG_INFINITY };
        c.points += 1;
        c.nd_max = c.nd_max.max(nd);
        c.ns_max = c.ns_max.max(ns);
        c.nb_max = c.nb_max.max(nb);
        if nd > TOL || ns > TOL || nb > TOL || lower > TOL {
            c.outside += 1;
        }
    }
    c
}

fn criterion8(dir: &Path) -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for mode in ["pure", "mixed"] {
        let out = dir.join(format!("fig-{mode}.csv"));
        let (code, err) = verify(&out, mode, "4");
        let c = read_cloud(&out, mode == "pure");
        pass &= code == 0 && c.points == COUNT as usize && c.outside == 0;
        parts.push(format!(
            "{mode}: exit {code}, {} points, {} outside, closest approach N2+D2-1 {:.1e}, S-(2-2N6) {:.1e}, B-(1-N6) {:.1e}{}",
            c.points,
            c.outside,
            c.nd_max,
            c.ns_max,
            c.nb_max,
            if err.is_empty() { String::new() } else { format!(" [{}]", err.trim()) }
        ));
    }
    outcome(pass, parts.join("; "))
}

fn criterion9() -> Outcome {
    let cfg = SweepConfig::mixed(COUNT * ALL_RANKS.len() as u64, ALL_RANKS.to_vec(), 9);
    let (_, summary) = collect_sweep(&cfg).unwrap();
    let fractions = summary.per_rank_bell_fraction();
    let counts_ok = summary.per_rank.values().all(|s| s.count == COUNT);
    let values: Vec<f64> = fractions.values().copied().collect();
    let monotone = values.windows(2).all(|w| w[1] <= w[0]);
    let high: (u64, u64) = summary
        .per_rank
        .range(4..)
        .fold((0, 0), |(v, n), (_, s)| (v + s.bell_violating, n + s.count));
    let listing: Vec<String> = fractions.iter().map(|(r, f)| format!("{r}:{f:.4}")).collect();
    outcome(
        counts_ok && monotone && fractions.len() == ALL_RANKS.len(),
        format!(
            "fractions {}; rank >= 4 fraction {:.4} ({} of {})",
            listing.join(" "),
            high.0 as f64 / high.1 as f64,
            high.0,
            high.1
        ),
    )
}

fn criterion10(dir: &Path) -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for mode in ["pure", "mixed"] {
        let mut files = Vec::new();
        for (run, workers) in [(0, "1"), (1, "1"), (2, "8"), (3, "8")] {
            let out = dir.join(format!("det-{mode}-{run}.csv"));
            let (code, _) = verify(&out, mode, workers);
            pass &= code == 0;
            files.push(std::fs::read(&out).unwrap());
        }
        let same = files.iter().all(|f| *f == files[0]);
        pass &= same;
        parts.push(format!("{mode}: {} bytes, identical across 4 runs {same}", files[0].len()));
    }
    outcome(pass, parts.join("; "))
}

fn main() {
    let dir = tempfile::tempdir().unwrap();
    let collect = |cfg: SweepConfig| -> (Vec<SweepRow>, SweepSummary) { collect_sweep(&cfg).unwrap() };
    let (_, pure) = collect(SweepConfig::pure(COUNT, 3));
    let (_, mixed) = collect(SweepConfig::mixed(COUNT, ALL_RANKS.to_vec(), 3));

    let results = [
        criterion1(),
        criterion2(),
        criterion3(&pure, &mixed),
        criterion4(),
        criterion5(&mixed),
        criterion6(&mixed),
        criterion7(&mixed),
        criterion8(dir.path()),
        criterion9(),
        criterion10(dir.path()),
    ];
    let mut failed = 0;
    for (i, r) in results.iter().enumerate() {
        println!("criterion {}: {} {}", i + 1, if r.pass { "PASS" } else { "FAIL" }, r.detail);
        failed += usize::from(!r.pass);
    }
    println!("acceptance: {} of {} criteria passed", results.len() - failed, results.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
