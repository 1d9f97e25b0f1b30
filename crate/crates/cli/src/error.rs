use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{file}: {detail}")]
    CsvFormat { file: PathBuf, detail: String },
    #[error("{file}, row {row}, column {column}: {detail}")]
    Cell {
        file: PathBuf,
        row: usize,
        column: &'static str,
        detail: String,
    },
    #[error(
        "length mismatch: {weather} has {weather_rows} rows but {load} has {load_rows} rows"
    )]
    LengthMismatch {
        weather: PathBuf,
        weather_rows: usize,
        load: PathBuf,
        load_rows: usize,
    },
    #[error("config: {detail}")]
    Config { detail: String },
    #[error("output directory {path} is not writable: {detail}")]
    OutDir { path: PathBuf, detail: String },
    #[error(transparent)]
    Core(#[from] sunsizer_core::CoreError),
}

pub type Result<T> = std::result::Result<T, CliError>;
