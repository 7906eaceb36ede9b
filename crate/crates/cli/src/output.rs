//! CSV and JSON artifacts.
//!
//! Floats are written with 17 significant digits so they parse back to the
//! same `f64`.

use std::fs;
use std::path::Path;

use qaffine_core::linalg::ComplexVector;
use serde::Serialize;

use crate::spec::Pair;
use crate::CliError;

/// Shortest fixed-width form that round-trips an `f64`.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn writer(path: &Path) -> Result<csv::Writer<fs::File>, CliError> {
    Ok(csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_path(path)?)
}

/// `index,re,im` rows.
pub fn write_vector_csv(path: &Path, v: &ComplexVector) -> Result<(), CliError> {
    let mut w = writer(path)?;
    w.write_record(["index", "re", "im"])?;
    for (i, z) in v.iter().enumerate() {
        w.write_record([i.to_string(), fmt_f64(z.re), fmt_f64(z.im)])?;
    }
    w.flush()?;
    Ok(())
}

/// Header plus pre-formatted rows.
pub fn write_table_csv(path: &Path, header: &[&str], rows: &[Vec<String>]) -> Result<(), CliError> {
    let mut w = writer(path)?;
    w.write_record(header)?;
    for row in rows {
        w.write_record(row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value).expect("plain data serializes");
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

pub fn pairs(v: &ComplexVector) -> Vec<Pair> {
    v.iter().map(|z| [z.re, z.im]).collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct Metadata {
    pub k: usize,
    pub n: usize,
    pub mode: String,
    pub method: &'static str,
    pub seed: Option<u64>,
    pub tool_version: &'static str,
}

#[derive(Debug, Clone, Serialize)]
pub struct ResultBundle {
    pub extracted: Vec<Pair>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub raw_amplitudes: Option<Vec<Pair>>,
    /// Factor applied to the measured amplitudes.
    pub scale: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_deviation: Option<f64>,
    pub metadata: Metadata,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_round_trip() {
        for x in [0.1, 1.0 / 3.0, -2.0f64.sqrt(), 1e-300, 0.0] {
            assert_eq!(fmt_f64(x).parse::<f64>().unwrap(), x);
        }
    }
}
