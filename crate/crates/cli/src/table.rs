//! The CSV table written by `solve` and `experiment`.

use std::fmt::Write as _;
use std::path::Path;

use leastgrad_core::solver::ExperimentRow;

use crate::error::{CliError, Result};
use crate::io::{read_text, write_bytes};
use crate::number::fmt17;

pub const COLUMNS: [&str; 9] = [
    "n",
    "resolution",
    "energy",
    "chord_sum_reference",
    "K_n",
    "K_inf",
    "l1_mass",
    "iterations",
    "converged",
];

/// A `#` provenance line, the column header and one line per row.
pub fn to_csv(provenance: &str, rows: &[ExperimentRow]) -> String {
    let mut out = format!("# {provenance}\n{}\n", COLUMNS.join(","));
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            r.n,
            r.resolution,
            fmt17(r.energy),
            fmt17(r.chord_sum_reference),
            fmt17(r.k_n),
            fmt17(r.k_inf),
            fmt17(r.l1_mass),
            r.iterations,
            r.converged
        );
    }
    out
}

/// Parses what [`to_csv`] wrote: the provenance text and the rows.
pub fn from_csv(text: &str) -> std::result::Result<(String, Vec<ExperimentRow>), String> {
    let mut lines = text.lines();
    let provenance = lines
        .next()
        .and_then(|l| l.strip_prefix("# "))
        .ok_or("missing provenance line")?
        .to_string();
    if lines.next() != Some(COLUMNS.join(",").as_str()) {
        return Err("unexpected column header".into());
    }
    let mut rows = Vec::new();
    for (i, line) in lines.enumerate() {
        let cells: Vec<&str> = line.split(',').collect();
        if cells.len() != COLUMNS.len() {
            return Err(format!("row {i}: expected {} cells", COLUMNS.len()));
        }
        let bad = |c: usize| format!("row {i}: bad {}", COLUMNS[c]);
        let int = |c: usize| cells[c].parse::<usize>().map_err(|_| bad(c));
        let float = |c: usize| cells[c].parse::<f64>().map_err(|_| bad(c));
        rows.push(ExperimentRow {
            n: int(0)?,
            resolution: int(1)?,
            energy: float(2)?,
            chord_sum_reference: float(3)?,
            k_n: float(4)?,
            k_inf: float(5)?,
            l1_mass: float(6)?,
            iterations: int(7)?,
            converged: cells[8].parse::<bool>().map_err(|_| bad(8))?,
        });
    }
    Ok((provenance, rows))
}

pub fn save(path: &Path, provenance: &str, rows: &[ExperimentRow]) -> Result<()> {
    write_bytes(path, to_csv(provenance, rows).as_bytes())
}

pub fn load(path: &Path) -> Result<(String, Vec<ExperimentRow>)> {
    from_csv(&read_text(path)?).map_err(|e| CliError::format(path, e))
}
