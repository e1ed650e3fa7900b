//! Records are JSON objects with a fixed key order; tables and CSV are
//! rendered from the same objects so the three formats cannot drift apart.

use std::io::{self, Write};

use serde_json::{Map, Value};

use crate::args::Format;

pub type Record = Map<String, Value>;

/// Numbers print as the shortest string that reads back to the same f64.
/// Complex numbers are [re, im] in JSON and `re+imi` elsewhere.
fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        Value::Array(a) if a.len() == 2 && a.iter().all(Value::is_number) => {
            let (re, im) = (
                a[0].as_f64().unwrap_or(f64::NAN),
                a[1].as_f64().unwrap_or(f64::NAN),
            );
            if im == 0.0 {
                format!("{re}")
            } else if im < 0.0 {
                format!("{re}{im}i")
            } else {
                format!("{re}+{im}i")
            }
        }
        Value::Array(a) => a.iter().map(cell).collect::<Vec<_>>().join(" "),
        other => other.to_string(),
    }
}

fn columns(records: &[Record]) -> Vec<String> {
    let mut cols: Vec<String> = Vec::new();
    for r in records {
        for k in r.keys() {
            if !cols.contains(k) {
                cols.push(k.clone());
            }
        }
    }
    cols
}

pub fn write(out: &mut impl Write, format: Format, records: &[Record]) -> io::Result<()> {
    match format {
        Format::Json => {
            // one object per line
            for r in records {
                serde_json::to_writer(&mut *out, r)?;
                writeln!(out)?;
            }
        }
        Format::Csv => {
            let cols = columns(records);
            let mut w = csv::Writer::from_writer(&mut *out);
            w.write_record(&cols)?;
            for r in records {
                w.write_record(cols.iter().map(|c| r.get(c).map(cell).unwrap_or_default()))?;
            }
            w.flush()?;
        }
        Format::Table => {
            let cols = columns(records);
            let rows: Vec<Vec<String>> = records
                .iter()
                .map(|r| {
                    cols.iter()
                        .map(|c| r.get(c).map(cell).unwrap_or_default())
                        .collect()
                })
                .collect();
            let width = |i: usize| {
                rows.iter()
                    .map(|r| r[i].chars().count())
                    .chain([cols[i].chars().count()])
                    .max()
                    .unwrap_or(0)
            };
            let widths: Vec<usize> = (0..cols.len()).map(width).collect();
            let line = |cells: &[String]| {
                let padded: Vec<String> = cells
                    .iter()
                    .zip(&widths)
                    .map(|(c, &w)| format!("{c:<w$}"))
                    .collect();
                padded.join("  ").trim_end().to_string()
            };
            writeln!(out, "{}", line(&cols))?;
            writeln!(
                out,
                "{}",
                line(&widths.iter().map(|&w| "-".repeat(w)).collect::<Vec<_>>())
            )?;
            for r in &rows {
                writeln!(out, "{}", line(r))?;
            }
        }
    }
    Ok(())
}
