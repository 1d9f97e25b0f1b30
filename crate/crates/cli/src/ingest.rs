//! Dataset CSV readers.
//!
//! Weather schema: `hour,ghi_w_m2,temp_c`. Load schema: `hour,load_kw`.
//! `hour` is a 0-based consecutive index; any deviation is an alignment bug
//! in the input and gets rejected with the offending row.

use std::path::Path;

use sunsizer_core::AnnualDataset64;

use crate::error::{CliError, Result};

const WEATHER_HEADER: [&str; 3] = ["hour", "ghi_w_m2", "temp_c"];
const LOAD_HEADER: [&str; 2] = ["hour", "load_kw"];

pub fn ingest_dataset(weather_path: &Path, load_path: &Path) -> Result<AnnualDataset64> {
    let (irradiance, ambient) = read_weather(weather_path)?;
    let load = read_load(load_path)?;
    if irradiance.len() != load.len() {
        return Err(CliError::LengthMismatch {
            weather: weather_path.to_path_buf(),
            weather_rows: irradiance.len(),
            load: load_path.to_path_buf(),
            load_rows: load.len(),
        });
    }
    Ok(AnnualDataset64::new(irradiance, ambient, load)?)
}

pub fn read_weather(path: &Path) -> Result<(Vec<f64>, Vec<f64>)> {
    let mut reader = open(path, &WEATHER_HEADER)?;
    let mut irradiance = Vec::new();
    let mut ambient = Vec::new();
    for (row, record) in reader.records().enumerate() {
        let record = record.map_err(|e| malformed(path, e))?;
        check_hour(path, row, &record)?;
        let ghi = cell(path, row, "ghi_w_m2", record.get(1))?;
        if ghi < 0.0 {
            return Err(CliError::Cell {
                file: path.to_path_buf(),
                row,
                column: "ghi_w_m2",
                detail: format!("negative irradiance {ghi}"),
            });
        }
        irradiance.push(ghi);
        ambient.push(cell(path, row, "temp_c", record.get(2))?);
    }
    Ok((irradiance, ambient))
}

pub fn read_load(path: &Path) -> Result<Vec<f64>> {
    let mut reader = open(path, &LOAD_HEADER)?;
    let mut load = Vec::new();
    for (row, record) in reader.records().enumerate() {
        let record = record.map_err(|e| malformed(path, e))?;
        check_hour(path, row, &record)?;
        let kw = cell(path, row, "load_kw", record.get(1))?;
        if kw < 0.0 {
            return Err(CliError::Cell {
                file: path.to_path_buf(),
                row,
                column: "load_kw",
                detail: format!("negative load {kw}"),
            });
        }
        load.push(kw);
    }
    Ok(load)
}

fn open(path: &Path, header: &[&str]) -> Result<csv::Reader<std::fs::File>> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| {
            if matches!(e.kind(), csv::ErrorKind::Io(_)) {
                CliError::Io {
                    path: path.to_path_buf(),
                    source: std::io::Error::other(e.to_string()),
                }
            } else {
                malformed(path, e)
            }
        })?;
    let found = reader.headers().map_err(|e| malformed(path, e))?;
    if found.iter().collect::<Vec<_>>() != header {
        return Err(CliError::CsvFormat {
            file: path.to_path_buf(),
            detail: format!("expected header `{}`, found `{}`", header.join(","), found.iter().collect::<Vec<_>>().join(",")),
        });
    }
    Ok(reader)
}

fn check_hour(path: &Path, row: usize, record: &csv::StringRecord) -> Result<()> {
    let hour: usize = record
        .get(0)
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| CliError::Cell {
            file: path.to_path_buf(),
            row,
            column: "hour",
            detail: format!("`{}` is not a nonnegative integer", record.get(0).unwrap_or("")),
        })?;
    if hour != row {
        return Err(CliError::Cell {
            file: path.to_path_buf(),
            row,
            column: "hour",
            detail: format!("expected consecutive 0-based hour {row}, found {hour}"),
        });
    }
    Ok(())
}

fn cell(path: &Path, row: usize, column: &'static str, raw: Option<&str>) -> Result<f64> {
    let raw = raw.ok_or_else(|| CliError::Cell {
        file: path.to_path_buf(),
        row,
        column,
        detail: "missing field".to_string(),
    })?;
    let value: f64 = raw.parse().map_err(|_| CliError::Cell {
        file: path.to_path_buf(),
        row,
        column,
        detail: format!("`{raw}` is not a number"),
    })?;
    if !value.is_finite() {
        return Err(CliError::Cell {
            file: path.to_path_buf(),
            row,
            column,
            detail: format!("`{raw}` is not finite"),
        });
    }
    Ok(value)
}

fn malformed(path: &Path, e: csv::Error) -> CliError {
    CliError::CsvFormat { file: path.to_path_buf(), detail: e.to_string() }
}
