//! The five subcommands, each a function of a validated [`RunConfig`].

use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use leastgrad_core::barrier::Barrier;
use leastgrad_core::solver::{build_grid, experiment_row, DiskGrid, ExperimentRow, GridField, SolverConfig};

use crate::config::{Command, Flags, RunConfig};
use crate::error::{CliError, Result};
use crate::geometry::GeometryDoc;
use crate::io::{sibling, write_bytes};
use crate::svg::{self, Style};
use crate::verify::{self, Report, VerifyOptions};
use crate::{field, table};

/// Environment variable holding the number of worker threads.
pub const THREADS_VAR: &str = "LEASTGRAD_THREADS";

/// Worker threads from [`THREADS_VAR`], or every available core.
pub fn thread_count() -> Result<usize> {
    match std::env::var(THREADS_VAR) {
        Ok(text) => match text.trim().parse::<usize>() {
            Ok(n) if n >= 1 => Ok(n),
            _ => Err(CliError::usage(format!(
                "{THREADS_VAR} must be a positive integer, got {text:?}"
            ))),
        },
        Err(std::env::VarError::NotPresent) => Ok(std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)),
        Err(e) => Err(CliError::usage(format!("{THREADS_VAR}: {e}"))),
    }
}

fn out_path(config: &RunConfig) -> Result<&Path> {
    config
        .out
        .as_deref()
        .ok_or_else(|| CliError::usage(format!("{} needs --out", config.command.name())))
}

pub fn run(command: Command, flags: &Flags) -> Result<()> {
    let config = RunConfig::resolve(command, flags)?;
    match command {
        Command::Construct => construct(&config).map(|_| ()),
        Command::Render => render(&config).map(|_| ()),
        Command::Verify => {
            let report = verify(&config)?;
            if report.holds() {
                Ok(())
            } else {
                Err(CliError::Verification {
                    failed: report.failed,
                    total: report.passed + report.failed,
                })
            }
        }
        Command::Solve | Command::Experiment => {
            let threads = thread_count()?;
            solve_rows(&config, threads).map(|_| ())
        }
    }
}

pub fn construct(config: &RunConfig) -> Result<GeometryDoc> {
    let out = out_path(config)?;
    let barrier = Barrier::new(config.depth)?;
    let doc = GeometryDoc::build(&barrier, &config.provenance())?;
    doc.save(out)?;
    eprintln!(
        "wrote {} components of depth {} to {}",
        doc.components.len(),
        doc.depth,
        out.display()
    );
    Ok(doc)
}

pub fn render(config: &RunConfig) -> Result<String> {
    let out = out_path(config)?;
    let barrier = Barrier::new(config.depth)?;
    let text = svg::render(&barrier, Style { labels: config.labels }, &config.provenance())?;
    write_bytes(out, text.as_bytes())?;
    eprintln!("wrote {}", out.display());
    Ok(text)
}

/// Runs the selected suites and writes the report; failed checks are listed
/// on stderr.
pub fn verify(config: &RunConfig) -> Result<Report> {
    let options = VerifyOptions {
        suite: config.suite,
        depth: config.depth,
        seed: config.seed,
    };
    let report = verify::run(&options, &config.provenance())?;
    let text = report.to_json();
    match &config.out {
        Some(path) => write_bytes(path, text.as_bytes())?,
        None => print!("{text}"),
    }
    for suite in &report.suites {
        eprintln!("{}: {} passed, {} failed", suite.suite, suite.passed, suite.failed);
        for note in &suite.notes {
            eprintln!("  note: {note}");
        }
    }
    for check in report.failures() {
        eprintln!(
            "FAILED {}: lhs {} {} rhs {} (margin {})",
            check.name, check.lhs.0, check.relation, check.rhs.0, check.margin.0
        );
    }
    Ok(report)
}

/// Where the field of row `n` is dumped.
pub fn field_path(config: &RunConfig, n: usize) -> Result<PathBuf> {
    let out = out_path(config)?;
    Ok(match config.command {
        Command::Solve => sibling(out, "_field", "bin"),
        _ => sibling(out, &format!("_n{n}"), "bin"),
    })
}

fn solver_config(config: &RunConfig) -> SolverConfig {
    SolverConfig {
        max_iterations: config.iters,
        coupling: config.coupling.into(),
        ..SolverConfig::default()
    }
}

type Solved = (ExperimentRow, GridField);

/// Solves every requested depth, at most `threads` at a time, in a fixed
/// output order.
fn solve_all(grid: &DiskGrid, depths: &[usize], solver: &SolverConfig, threads: usize) -> Result<Vec<Solved>> {
    let next = AtomicUsize::new(0);
    let slots: Vec<Mutex<Option<Result<Solved>>>> = depths.iter().map(|_| Mutex::new(None)).collect();
    std::thread::scope(|scope| {
        for _ in 0..threads.min(depths.len()) {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(&n) = depths.get(i) else { break };
                let result = experiment_row(grid, n, solver).map_err(CliError::from);
                *slots[i].lock().expect("slot lock") = Some(result);
            });
        }
    });
    slots
        .into_iter()
        .map(|slot| slot.into_inner().expect("slot lock").expect("every depth solved"))
        .collect()
}

/// `solve` runs depth `n` alone, `experiment` runs `0..=n`; writes the CSV
/// table and one field dump per row.
pub fn solve_rows(config: &RunConfig, threads: usize) -> Result<Vec<ExperimentRow>> {
    let out = out_path(config)?;
    let depths: Vec<usize> = match config.command {
        Command::Solve => vec![config.depth],
        Command::Experiment => (0..=config.depth).collect(),
        other => return Err(CliError::usage(format!("{} does not solve", other.name()))),
    };
    let grid = build_grid(config.resolution, config.band_width)?;
    let provenance = config.provenance();
    let solved = solve_all(&grid, &depths, &solver_config(config), threads.max(1))?;
    let rows: Vec<ExperimentRow> = solved.iter().map(|(row, _)| row.clone()).collect();
    table::save(out, &provenance, &rows)?;
    for (row, values) in &solved {
        field::save(&field_path(config, row.n)?, values, row.n, &provenance)?;
        if !row.converged {
            eprintln!(
                "warning: n = {} stopped at the iteration budget ({})",
                row.n, row.iterations
            );
        }
    }
    eprintln!("wrote {} rows to {}", rows.len(), out.display());
    Ok(rows)
}
