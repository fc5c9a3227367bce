//! Rendering of result tables as CSV or JSON, and where they go.

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::ValueEnum;
use lerch_afe::report::{meta_line, CsvRow};
use serde_json::{Map, Value};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// Columns whose values stay strings in JSON even when they look numeric.
const TEXT_COLUMNS: [&str; 6] = ["alpha", "lambda", "method", "kind", "split", "formula"];

pub struct Table {
    header: Vec<&'static str>,
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn from_rows<R: CsvRow>(rows: &[R]) -> Self {
        Table {
            header: R::header().to_vec(),
            rows: rows.iter().map(CsvRow::fields).collect(),
        }
    }

    pub fn render(&self, format: Format, meta: Option<&str>) -> String {
        match format {
            Format::Csv => {
                let mut out = String::new();
                if let Some(m) = meta {
                    out.push_str(m);
                    out.push('\n');
                }
                out.push_str(&self.header.join(","));
                out.push('\n');
                for row in &self.rows {
                    out.push_str(&row.join(","));
                    out.push('\n');
                }
                out
            }
            Format::Json => {
                let records: Vec<Value> = self
                    .rows
                    .iter()
                    .map(|row| {
                        let obj: Map<String, Value> = self
                            .header
                            .iter()
                            .zip(row)
                            .map(|(&k, v)| (k.to_string(), json_cell(k, v)))
                            .collect();
                        Value::Object(obj)
                    })
                    .collect();
                let mut doc = Map::new();
                if let Some(m) = meta {
                    doc.insert("meta".into(), Value::String(m.trim_start_matches("# ").into()));
                }
                doc.insert("records".into(), Value::Array(records));
                let mut out = serde_json::to_string_pretty(&Value::Object(doc)).expect("plain values");
                out.push('\n');
                out
            }
        }
    }
}

fn json_cell(column: &str, text: &str) -> Value {
    if TEXT_COLUMNS.contains(&column) {
        return Value::String(text.into());
    }
    match text {
        "true" => return Value::Bool(true),
        "false" => return Value::Bool(false),
        _ => {}
    }
    if let Ok(n) = text.parse::<u64>() {
        return Value::from(n);
    }
    match text.parse::<f64>().ok().and_then(serde_json::Number::from_f64) {
        Some(n) => Value::Number(n),
        None => Value::String(text.into()),
    }
}

/// Destination and framing shared by every subcommand.
pub struct Sink {
    pub format: Format,
    pub meta: bool,
    pub out: Option<PathBuf>,
}

impl Sink {
    pub fn meta_line(&self) -> Option<String> {
        self.meta.then(|| {
            let secs = SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0);
            meta_line("lerch-afe", &format!("unix:{secs}"))
        })
    }

    /// Writes `table` to `--out` or stdout. The summary goes to stdout when
    /// the data went to a file, to stderr otherwise.
    pub fn emit(&self, table: &Table, summary: Option<&str>) -> Result<(), CliError> {
        let text = table.render(self.format, self.meta_line().as_deref());
        self.write(&text)?;
        if let Some(s) = summary {
            self.summary(s);
        }
        Ok(())
    }

    pub fn write(&self, text: &str) -> Result<(), CliError> {
        match &self.out {
            Some(path) => fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display()))),
            None => {
                let mut stdout = std::io::stdout().lock();
                stdout
                    .write_all(text.as_bytes())
                    .and_then(|_| stdout.flush())
                    .map_err(|e| CliError::Io(e.to_string()))
            }
        }
    }

    pub fn summary(&self, line: &str) {
        if self.out.is_some() {
            println!("{line}");
        } else {
            eprintln!("{line}");
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_cells_keep_labels_as_text() {
        assert_eq!(json_cell("alpha", "1"), Value::String("1".into()));
        assert_eq!(json_cell("main_terms", "12"), Value::from(12u64));
        assert_eq!(json_cell("reliable", "false"), Value::Bool(false));
        assert_eq!(json_cell("ratio", "0.25"), Value::from(0.25));
        assert_eq!(json_cell("error_estimate", "inf"), Value::String("inf".into()));
    }
}
