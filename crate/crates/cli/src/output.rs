use std::io::{self, Write};

use serde_json::{Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Table,
    Csv,
}

/// A command result: one object, or a stream of objects.
pub enum Output {
    Single(Value),
    Stream(Vec<Value>),
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

fn rows(out: &Output) -> Vec<Map<String, Value>> {
    let objects: Vec<&Value> = match out {
        Output::Single(v) => vec![v],
        Output::Stream(vs) => vs.iter().collect(),
    };
    objects
        .into_iter()
        .map(|v| match v {
            Value::Object(m) => m.clone(),
            other => Map::from_iter([("value".to_string(), other.clone())]),
        })
        .collect()
}

fn columns(rows: &[Map<String, Value>]) -> Vec<String> {
    let mut cols: Vec<String> = Vec::new();
    for r in rows {
        for k in r.keys() {
            if !cols.contains(k) {
                cols.push(k.clone());
            }
        }
    }
    cols
}

pub fn write(out: &Output, format: Format, w: &mut impl Write) -> io::Result<()> {
    match format {
        Format::Json => match out {
            Output::Single(v) => writeln!(w, "{v}"),
            Output::Stream(vs) => vs.iter().try_for_each(|v| writeln!(w, "{v}")),
        },
        Format::Csv => {
            let rows = rows(out);
            let cols = columns(&rows);
            let mut csv = csv::Writer::from_writer(w);
            csv.write_record(&cols)?;
            for r in &rows {
                csv.write_record(cols.iter().map(|c| r.get(c).map(cell).unwrap_or_default()))?;
            }
            csv.flush()
        }
        Format::Table => {
            let rows = rows(out);
            let cols = columns(&rows);
            let cells: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    cols.iter()
                        .map(|c| r.get(c).map(cell).unwrap_or_default())
                        .collect()
                })
                .collect();
            let widths: Vec<usize> = cols
                .iter()
                .enumerate()
                .map(|(i, c)| {
                    cells
                        .iter()
                        .map(|r| r[i].chars().count())
                        .chain([c.chars().count()])
                        .max()
                        .unwrap_or(0)
                })
                .collect();
            let line = |vals: &[String]| {
                vals.iter()
                    .zip(&widths)
                    .map(|(v, &wd)| format!("{v:<wd$}"))
                    .collect::<Vec<_>>()
                    .join("  ")
                    .trim_end()
                    .to_string()
            };
            writeln!(w, "{}", line(&cols))?;
            for r in &cells {
                writeln!(w, "{}", line(r))?;
            }
            Ok(())
        }
    }
}
