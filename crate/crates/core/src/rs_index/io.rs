//! Path files.
//!
//! JSON: `{"n": n, "grid": [t_0, …], "samples": [[row-major 2n×2n], …]}`.
//! CSV: one row per grid point, `t` followed by the `4n²` row-major entries;
//! a non-numeric first row is taken as a header and skipped.

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::matrix::SymplecticMatrix;
use super::path::SymplecticPath;
use super::{IndexError, Tolerances};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PathFile {
    pub n: usize,
    pub grid: Vec<f64>,
    pub samples: Vec<Vec<f64>>,
}

impl PathFile {
    pub fn from_path(path: &SymplecticPath) -> Self {
        PathFile {
            n: path.half_dim(),
            grid: path.grid().to_vec(),
            samples: (0..path.grid().len())
                .map(|j| path.sample(j).row_major())
                .collect(),
        }
    }

    pub fn into_path(self) -> Result<SymplecticPath, IndexError> {
        self.into_path_with_tol(Tolerances::default().symplectic)
    }

    /// As [`PathFile::into_path`], accepting samples with symplectic defect up to `tol`.
    pub fn into_path_with_tol(self, tol: f64) -> Result<SymplecticPath, IndexError> {
        let samples = self
            .samples
            .iter()
            .map(|row| SymplecticMatrix::from_row_major(self.n, row))
            .collect::<Result<Vec<_>, _>>()?;
        SymplecticPath::from_samples_with_tol(self.grid, samples, tol)
    }
}

pub fn parse_json(text: &str) -> Result<SymplecticPath, IndexError> {
    parse_json_with_tol(text, Tolerances::default().symplectic)
}

pub fn parse_json_with_tol(text: &str, tol: f64) -> Result<SymplecticPath, IndexError> {
    let file: PathFile =
        serde_json::from_str(text).map_err(|e| IndexError::Parse(e.to_string()))?;
    file.into_path_with_tol(tol)
}

pub fn parse_csv(text: &str) -> Result<SymplecticPath, IndexError> {
    parse_csv_with_tol(text, Tolerances::default().symplectic)
}

pub fn parse_csv_with_tol(text: &str, tol: f64) -> Result<SymplecticPath, IndexError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (line, record) in reader.records().enumerate() {
        let record = record.map_err(|e| IndexError::Parse(e.to_string()))?;
        let parsed: Result<Vec<f64>, _> = record.iter().map(str::parse::<f64>).collect();
        match parsed {
            Ok(values) => rows.push(values),
            Err(_) if line == 0 => continue,
            Err(e) => return Err(IndexError::Parse(format!("row {}: {e}", line + 1))),
        }
    }
    let width = rows.first().map(Vec::len).ok_or(IndexError::EmptyInput)?;
    let entries = width.saturating_sub(1);
    let n = ((entries as f64).sqrt() / 2.0).round() as usize;
    if n == 0 || 4 * n * n != entries {
        return Err(IndexError::Parse(format!(
            "rows must hold t and 4n² entries, found {width} columns"
        )));
    }
    let mut file = PathFile {
        n,
        grid: Vec::with_capacity(rows.len()),
        samples: Vec::with_capacity(rows.len()),
    };
    for row in rows {
        file.grid.push(row[0]);
        file.samples.push(row[1..].to_vec());
    }
    file.into_path_with_tol(tol)
}

/// Reads a path file; JSON is recognised by a leading `{`, anything else is CSV.
pub fn read_path_file(path: &Path) -> Result<SymplecticPath, IndexError> {
    read_path_file_with_tol(path, Tolerances::default().symplectic)
}

pub fn read_path_file_with_tol(path: &Path, tol: f64) -> Result<SymplecticPath, IndexError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| IndexError::Parse(format!("{}: {e}", path.display())))?;
    if text.trim_start().starts_with('{') {
        parse_json_with_tol(&text, tol)
    } else {
        parse_csv_with_tol(&text, tol)
    }
}

pub fn to_json(path: &SymplecticPath) -> String {
    serde_json::to_string(&PathFile::from_path(path)).expect("path files serialize")
}

pub fn to_csv(path: &SymplecticPath) -> String {
    let mut writer = csv::Writer::from_writer(Vec::new());
    for j in 0..path.grid().len() {
        let mut row = vec![path.grid()[j].to_string()];
        row.extend(path.sample(j).row_major().iter().map(f64::to_string));
        writer.write_record(&row).expect("writing to memory");
    }
    String::from_utf8(writer.into_inner().expect("flush to memory")).expect("csv is utf-8")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rs_index::{rotation_path, rs_index};
    use std::f64::consts::PI;

    #[test]
    fn json_and_csv_roundtrip() {
        let p = rotation_path(1.0, 2.0 * PI, 128).unwrap();
        let from_json = parse_json(&to_json(&p)).unwrap();
        let from_csv = parse_csv(&to_csv(&p)).unwrap();
        for q in [&from_json, &from_csv] {
            assert_eq!(q.grid(), p.grid());
            assert_eq!(rs_index(q, 1e-10, 1e-8).unwrap().to_i64(), Some(2));
        }
    }

    #[test]
    fn csv_header_is_skipped_and_bad_width_rejected() {
        let p = rotation_path(1.0, 1.0, 8).unwrap();
        let with_header = format!("t,a,b,c,d\n{}", to_csv(&p));
        assert!(parse_csv(&with_header).is_ok());
        assert!(matches!(
            parse_csv("0,1,2\n1,2,3\n"),
            Err(IndexError::Parse(_))
        ));
        assert!(matches!(parse_json("{\"n\":1}"), Err(IndexError::Parse(_))));
    }
}
