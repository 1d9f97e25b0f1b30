//! CSV and summary writers.
//!
//! Floats are written with Rust's shortest round-trip formatting, so parsing
//! a written value recovers the exact bits and a round-trip audit can use
//! strict equality. Infinite sentinels become `inf`. LLP appears as a
//! fraction in CSVs (column `llp_frac`) and as a percent with 4 decimals in
//! human-readable summaries.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use sunsizer_core::pareto::ObjectivePoint;
use sunsizer_core::Design64;

use crate::error::{CliError, Result};

/// One front entry ready for output.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrontRow {
    pub design: Design64,
    pub coe: f64,
    pub llp: f64,
}

impl FrontRow {
    pub fn new(design: Design64, point: &ObjectivePoint<f64>) -> Self {
        Self { design, coe: point.values[0], llp: point.values[1] }
    }
}

pub fn fmt_f64(x: f64) -> String {
    if x.is_nan() {
        "nan".to_string()
    } else if x == f64::INFINITY {
        "inf".to_string()
    } else if x == f64::NEG_INFINITY {
        "-inf".to_string()
    } else {
        format!("{x}")
    }
}

pub fn fmt_llp_percent(llp: f64) -> String {
    format!("{:.4}%", llp * 100.0)
}

/// Canonical front order: cheapest first, reliability breaking ties, then
/// design variables. Total and deterministic, so identical fronts always
/// serialize identically.
pub fn sort_front(rows: &mut Vec<FrontRow>) {
    rows.sort_by(|a, b| {
        a.coe
            .total_cmp(&b.coe)
            .then(a.llp.total_cmp(&b.llp))
            .then(a.design.n_pv.cmp(&b.design.n_pv))
            .then(a.design.n_bes.cmp(&b.design.n_bes))
            .then(a.design.dod.total_cmp(&b.design.dod))
    });
    rows.dedup_by(|a, b| {
        a.design.n_pv == b.design.n_pv
            && a.design.n_bes == b.design.n_bes
            && a.design.dod == b.design.dod
    });
}

pub fn front_csv(rows: &[FrontRow]) -> String {
    let mut s = String::from("n_pv,n_bes,dod,coe_usd_per_kwh,llp_frac\n");
    for row in rows {
        let _ = writeln!(
            s,
            "{},{},{},{},{}",
            row.design.n_pv,
            row.design.n_bes,
            fmt_f64(row.design.dod),
            fmt_f64(row.coe),
            fmt_f64(row.llp)
        );
    }
    s
}

pub fn sweep_csv(rows: &[sunsizer_core::SweepRow64]) -> String {
    let mut s = String::from("dod,best_n_pv,best_n_bes,coe_usd_per_kwh,llp_frac,feasible\n");
    for row in rows {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{}",
            fmt_f64(row.dod),
            row.best_n_pv,
            row.best_n_bes,
            fmt_f64(row.coe),
            fmt_f64(row.llp),
            row.feasible
        );
    }
    s
}

/// The (dod, coe, llp) triples behind a COE/LLP-versus-DOD surface plot,
/// sorted by dod then cost.
pub fn surface_csv(rows: &[FrontRow]) -> String {
    let mut triples: Vec<(f64, f64, f64)> =
        rows.iter().map(|r| (r.design.dod, r.coe, r.llp)).collect();
    triples.sort_by(|a, b| {
        a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)).then(a.2.total_cmp(&b.2))
    });
    let mut s = String::from("dod,coe_usd_per_kwh,llp_frac\n");
    for (dod, coe, llp) in triples {
        let _ = writeln!(s, "{},{},{}", fmt_f64(dod), fmt_f64(coe), fmt_f64(llp));
    }
    s
}

pub fn write_text(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents)
        .map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

/// Fails fast when the output directory cannot take files, before any
/// computation runs.
pub fn prepare_out_dir(path: &Path) -> Result<()> {
    std::fs::create_dir_all(path).map_err(|e| CliError::OutDir {
        path: path.to_path_buf(),
        detail: e.to_string(),
    })?;
    let probe = path.join(".write_probe");
    std::fs::write(&probe, b"probe")
        .and_then(|()| std::fs::remove_file(&probe))
        .map_err(|e| CliError::OutDir { path: path.to_path_buf(), detail: e.to_string() })
}

/// Reads back a front CSV written by `front_csv`.
pub fn read_front_csv(path: &Path) -> Result<Vec<FrontRow>> {
    let text = std::fs::read_to_string(path)
        .map_err(|source| CliError::Io { path: path.to_path_buf(), source })?;
    let mut lines = text.lines();
    let header = lines.next().unwrap_or("");
    if header != "n_pv,n_bes,dod,coe_usd_per_kwh,llp_frac" {
        return Err(CliError::CsvFormat {
            file: path.to_path_buf(),
            detail: format!("unexpected front header `{header}`"),
        });
    }
    let mut rows = Vec::new();
    for (i, line) in lines.enumerate() {
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 5 {
            return Err(CliError::CsvFormat {
                file: path.to_path_buf(),
                detail: format!("row {i}: expected 5 fields, found {}", fields.len()),
            });
        }
        let parse = |k: usize, column: &'static str| -> Result<f64> {
            fields[k].parse().map_err(|_| CliError::Cell {
                file: path.to_path_buf(),
                row: i,
                column,
                detail: format!("`{}` is not a number", fields[k]),
            })
        };
        let n_pv: u32 = fields[0].parse().map_err(|_| CliError::Cell {
            file: path.to_path_buf(),
            row: i,
            column: "n_pv",
            detail: format!("`{}` is not a count", fields[0]),
        })?;
        let n_bes: u32 = fields[1].parse().map_err(|_| CliError::Cell {
            file: path.to_path_buf(),
            row: i,
            column: "n_bes",
            detail: format!("`{}` is not a count", fields[1]),
        })?;
        rows.push(FrontRow {
            design: Design64::new(n_pv, n_bes, parse(2, "dod")?),
            coe: parse(3, "coe_usd_per_kwh")?,
            llp: parse(4, "llp_frac")?,
        });
    }
    Ok(rows)
}

pub fn front_path(out: &Path, algo: &str) -> PathBuf {
    out.join(format!("front_{algo}.csv"))
}

pub fn sweep_path(out: &Path, algo: &str) -> PathBuf {
    out.join(format!("sweep_{algo}.csv"))
}

pub fn surface_path(out: &Path, algo: &str) -> PathBuf {
    out.join(format!("surface_{algo}.csv"))
}
