//! Rendering of reports as JSON, CSV or an aligned table.

use clap::ValueEnum;
use serde::Serialize;
use serde_json::Value;

use crate::error::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Table,
}

/// A report ready to print. `rows`, when present, is what CSV and table
/// output show; otherwise the JSON is flattened into `key,value` pairs.
pub struct Report {
    json: String,
    value: Value,
    rows: Option<Rows>,
    table: Option<String>,
}

pub struct Rows {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Report {
    pub fn new<T: Serialize>(payload: &T) -> Result<Self, CliError> {
        let encode = |e: serde_json::Error| CliError::usage("Serialization", e.to_string());
        Ok(Report {
            json: serde_json::to_string_pretty(payload).map_err(encode)?,
            value: serde_json::to_value(payload).map_err(encode)?,
            rows: None,
            table: None,
        })
    }

    pub fn with_rows(mut self, rows: Rows) -> Self {
        self.rows = Some(rows);
        self
    }

    /// A hand-made table used for `--format table` instead of the rows.
    pub fn with_table(mut self, table: String) -> Self {
        self.table = Some(table);
        self
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => format!("{}\n", self.json),
            Format::Csv => to_csv(&self.rows_or_flat()),
            Format::Table => match &self.table {
                Some(t) => t.clone(),
                None => to_table(&self.rows_or_flat()),
            },
        }
    }

    fn rows_or_flat(&self) -> Rows {
        match &self.rows {
            Some(r) => Rows {
                header: r.header.clone(),
                rows: r.rows.clone(),
            },
            None => {
                let mut rows = Vec::new();
                flatten("", &self.value, &mut rows);
                Rows {
                    header: vec!["key".into(), "value".into()],
                    rows: rows.into_iter().map(|(k, v)| vec![k, v]).collect(),
                }
            }
        }
    }
}

/// Plain text of a scalar; arrays and objects as compact JSON.
pub fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    let key = |k: &str| {
        if prefix.is_empty() {
            k.to_string()
        } else {
            format!("{prefix}.{k}")
        }
    };
    match v {
        Value::Object(map) => {
            for (k, child) in map {
                flatten(&key(k), child, out);
            }
        }
        // Numeric arrays (grids, spectra) stay on one line.
        Value::Array(items) if items.iter().any(|i| i.is_object() || i.is_array()) => {
            for (i, child) in items.iter().enumerate() {
                flatten(&key(&i.to_string()), child, out);
            }
        }
        other => out.push((prefix.to_string(), cell(other))),
    }
}

fn to_csv(rows: &Rows) -> String {
    let mut writer = csv::Writer::from_writer(Vec::new());
    let mut write = |record: &[String]| writer.write_record(record).expect("writing to memory");
    write(&rows.header);
    for row in &rows.rows {
        write(row);
    }
    String::from_utf8(writer.into_inner().expect("writing to memory")).expect("csv is utf-8")
}

fn to_table(rows: &Rows) -> String {
    let mut widths: Vec<usize> = rows.header.iter().map(|h| h.chars().count()).collect();
    for row in &rows.rows {
        for (w, c) in widths.iter_mut().zip(row) {
            *w = (*w).max(c.chars().count());
        }
    }
    let line = |row: &[String]| {
        let cells: Vec<String> = row
            .iter()
            .zip(&widths)
            .map(|(c, &w)| format!("{c:<w$}"))
            .collect();
        format!("{}\n", cells.join("  ").trim_end())
    };
    let mut out = line(&rows.header);
    let rule: Vec<String> = widths.iter().map(|&w| "-".repeat(w)).collect();
    out.push_str(&line(&rule));
    for row in &rows.rows {
        out.push_str(&line(row));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn flattening_keeps_numeric_arrays_whole() {
        let report =
            Report::new(&json!({"a": {"b": 1}, "xs": [1, 2], "rows": [{"p": 1}]})).unwrap();
        let csv = report.render(Format::Csv);
        assert!(csv.contains("a.b,1\n"));
        assert!(csv.contains("xs,\"[1,2]\"\n"));
        assert!(csv.contains("rows.0.p,1\n"));
    }

    #[test]
    fn table_is_aligned() {
        let rows = Rows {
            header: vec!["n".into(), "status".into()],
            rows: vec![vec!["10".into(), "x".into()]],
        };
        let t = to_table(&rows);
        assert_eq!(t, "n   status\n--  ------\n10  x\n");
    }
}
