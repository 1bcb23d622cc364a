//! The `tripartite` command line.
//!
//! Exit codes: 0 pass, 1 relation violated, 2 usage or parse error,
//! 3 state validation error, 4 I/O error.

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use tripartite_core::relations::{assess, EQUALITY_TOL};
use tripartite_core::StateProvenance;

use crate::error::{Error, Result};
use crate::montecarlo::{replay, run_sweep, sweep_boundary, DrawnState, Family, Filter, Mode, SweepConfig};
use crate::output::{real, RowWriter, NA};
use crate::state_file::{read_state, write_state, StateFile};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "tripartite", version, about = "Three-qubit entanglement, coherence, steering and Bell measures")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Measure one state file and print a CSV row.
    Measure {
        /// JSON state file.
        file: PathBuf,
    },
    /// Sample random states, check every relation, write CSV and a JSON summary.
    Verify {
        #[arg(long, value_enum)]
        mode: Mode,
        /// Number of draws.
        #[arg(long)]
        count: u64,
        /// Comma-separated ranks for mixed mode, cycled over draws.
        #[arg(long, value_delimiter = ',')]
        ranks: Vec<u8>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Worker threads; defaults to the available parallelism.
        #[arg(long)]
        workers: Option<usize>,
        /// CSV output; the summary goes to `<out>.summary.json`.
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum)]
        filter: Vec<Filter>,
    },
    /// Evaluate a boundary family on a grid and compare with the closed forms.
    ScanBoundary {
        #[arg(long, value_enum)]
        family: Family,
        #[arg(long, default_value_t = 201)]
        grid: usize,
        /// CSV output; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Regenerate one sweep draw as a state file.
    Sample {
        #[arg(long, value_enum)]
        mode: Mode,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        draw: u64,
        /// Required in mixed mode.
        #[arg(long)]
        rank: Option<u8>,
        /// State file output; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let _ = if code == 0 { stdout.write_all(text.as_bytes()) } else { stderr.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(cli.command, stdout, stderr) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

fn execute(command: Command, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Measure { file } => measure(&file, stdout),
        Command::Verify { mode, count, ranks, seed, workers, out, filter } => {
            let workers = workers.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
            let cfg = SweepConfig { mode, count, ranks, seed, workers, filters: filter };
            verify(&cfg, &out, stdout, stderr)
        }
        Command::ScanBoundary { family, grid, out } => scan_boundary(family, grid, out.as_deref(), stdout),
        Command::Sample { mode, seed, draw, rank, out } => sample(mode, seed, draw, rank, out.as_deref(), stdout),
    }
}

fn io_err(path: &Path) -> impl Fn(std::io::Error) -> Error + '_ {
    move |e| Error::io(path, e)
}

fn measure(file: &Path, stdout: &mut dyn Write) -> Result<i32> {
    let rho = read_state(file)?.density();
    let (record, report) = assess(&rho, StateProvenance::file())?;
    let mut w = RowWriter::new(Vec::new())?;
    w.write(0, &record, &report)?;
    stdout.write_all(&w.finish()?).map_err(io_err(Path::new("<stdout>")))?;
    Ok(if report.all_satisfied() { EXIT_PASS } else { EXIT_VIOLATION })
}

/// Path of the JSON summary written next to a sweep CSV.
pub fn summary_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".summary.json");
    PathBuf::from(s)
}

fn verify(cfg: &SweepConfig, out: &Path, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32> {
    cfg.validate()?;
    let file = File::create(out).map_err(io_err(out))?;
    let mut w = RowWriter::new(BufWriter::new(file))?;
    let summary = run_sweep(cfg, |row| w.write(row.draw, &row.record, &row.report))?;
    w.finish()?.flush().map_err(io_err(out))?;

    let json_path = summary_path(out);
    let json = serde_json::to_string_pretty(&summary.to_json()).expect("summary serializes");
    std::fs::write(&json_path, json + "\n").map_err(io_err(&json_path))?;

    let _ = writeln!(
        stdout,
        "{} {} states (seed {}), {} rows written, {} violations, worst residual {}",
        summary.total,
        cfg.mode,
        cfg.seed,
        summary.emitted,
        summary.total_violations(),
        real(summary.max_negative_residual)
    );
    if !summary.per_rank.is_empty() {
        let fractions: Vec<String> =
            summary.per_rank_bell_fraction().iter().map(|(r, f)| format!("rank {r}: {}", real(*f))).collect();
        let _ = writeln!(stdout, "Bell-violation fraction by rank: {}", fractions.join(", "));
    }
    if summary.passed() {
        return Ok(EXIT_PASS);
    }
    if let Some(w) = summary.worst {
        let rank = w.rank.map_or(String::new(), |r| format!(" --rank {r}"));
        let _ = writeln!(
            stderr,
            "violation: {} residual {} at seed {} draw {} (replay: tripartite sample --mode {}{} --seed {} --draw {})",
            w.relation,
            real(w.residual),
            w.seed,
            w.draw,
            cfg.mode,
            rank,
            w.seed,
            w.draw
        );
    }
    Ok(EXIT_VIOLATION)
}

/// Columns of the boundary scan CSV.
pub const BOUNDARY_HEADER: [&str; 15] = [
    "family",
    "parameter",
    "N",
    "N_analytic",
    "D",
    "D_analytic",
    "S",
    "S_analytic",
    "B",
    "B_analytic",
    "res_N2_D2",
    "res_N6_3D2",
    "res_2N6_S",
    "res_N6_B",
    "max_residual",
];

fn scan_boundary(family: Family, grid: usize, out: Option<&Path>, stdout: &mut dyn Write) -> Result<i32> {
    if grid < 2 {
        return Err(Error::Config(format!("grid needs at least 2 points, got {grid}")));
    }
    let rows = sweep_boundary(family, grid)?;
    let opt = |v: Option<f64>| v.map_or_else(|| NA.to_string(), real);
    let mut w = csv::WriterBuilder::new().from_writer(Vec::new());
    w.write_record(BOUNDARY_HEADER)?;
    let mut worst = 0.0f64;
    for r in &rows {
        worst = worst.max(r.max_residual());
        w.write_record([
            family.name().to_string(),
            real(r.parameter),
            real(r.record.negativity_tri),
            real(r.analytic.n),
            real(r.record.coherence),
            real(r.analytic.d),
            real(r.record.steering_max),
            opt(r.analytic.s),
            real(r.record.bell_violation_max),
            opt(r.analytic.b),
            opt(r.nd_upper()),
            opt(r.nd_lower()),
            opt(r.ns()),
            opt(r.nb()),
            real(r.max_residual()),
        ])?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Sink(e.to_string()))?;
    match out {
        Some(path) => std::fs::write(path, &bytes).map_err(io_err(path))?,
        None => stdout.write_all(&bytes).map_err(io_err(Path::new("<stdout>")))?,
    }
    Ok(if worst < EQUALITY_TOL { EXIT_PASS } else { EXIT_VIOLATION })
}

fn sample(
    mode: Mode,
    seed: u64,
    draw: u64,
    rank: Option<u8>,
    out: Option<&Path>,
    stdout: &mut dyn Write,
) -> Result<i32> {
    if let Some(r) = rank.filter(|r| !(1..=8).contains(r)) {
        return Err(Error::Config(format!("rank {r} outside 1..=8")));
    }
    let file = match replay(mode, rank, seed, draw)?.0 {
        DrawnState::Pure(p) => StateFile::from_pure(&p),
        DrawnState::Mixed(d) => StateFile::from_density(&d),
    };
    match out {
        Some(path) => write_state(path, &file)?,
        None => writeln!(stdout, "{}", file.to_json()).map_err(io_err(Path::new("<stdout>")))?,
    }
    Ok(EXIT_PASS)
}
