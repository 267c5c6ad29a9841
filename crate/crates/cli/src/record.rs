//! Flat output records and their JSON / CSV encodings.

use std::io::Write;

use clap::ValueEnum;
use serde::Serialize;
use serde_json::{Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// One output row: an ordered map of scalar fields. Nested results are
/// flattened with `_`-joined keys (`q1_value`, `moments_2`, ...).
#[derive(Debug, Clone, Default)]
pub struct Record(Map<String, Value>);

impl Record {
    pub fn new() -> Self {
        Record(Map::new())
    }

    pub fn set(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.0.insert(key.to_owned(), value.into());
        self
    }

    /// Flattens a serializable value into this record.
    pub fn merge<T: Serialize>(&mut self, value: &T) -> &mut Self {
        let v = serde_json::to_value(value).expect("library results serialize");
        flatten("", v, &mut self.0);
        self
    }

    /// Appends the fields of `other` that this record does not already hold.
    pub fn absorb(&mut self, other: Record) -> &mut Self {
        for (k, v) in other.0 {
            self.0.entry(k).or_insert(v);
        }
        self
    }

    pub fn get(&self, key: &str) -> Option<&Value> {
        self.0.get(key)
    }

    fn into_value(self) -> Value {
        Value::Object(self.0)
    }
}

fn flatten(prefix: &str, value: Value, out: &mut Map<String, Value>) {
    let join = |k: &str| {
        if prefix.is_empty() {
            k.to_owned()
        } else {
            format!("{prefix}_{k}")
        }
    };
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                flatten(&join(&k), v, out);
            }
        }
        Value::Array(items) => {
            for (i, v) in items.into_iter().enumerate() {
                flatten(&join(&i.to_string()), v, out);
            }
        }
        scalar => {
            out.insert(prefix.to_owned(), scalar);
        }
    }
}

/// Columns in first-seen order, with the status columns moved last.
fn columns(records: &[Record]) -> Vec<String> {
    const STATUS: [&str; 2] = ["converged", "error"];
    let mut cols: Vec<String> = Vec::new();
    for r in records {
        for k in r.0.keys() {
            if !STATUS.contains(&k.as_str()) && !cols.contains(k) {
                cols.push(k.clone());
            }
        }
    }
    for s in STATUS {
        if records.iter().any(|r| r.0.contains_key(s)) {
            cols.push(s.to_owned());
        }
    }
    cols
}

/// Floats carry 17 significant digits so every value round-trips.
fn csv_cell(value: Option<&Value>) -> String {
    match value {
        None | Some(Value::Null) => String::new(),
        Some(Value::Bool(b)) => b.to_string(),
        Some(Value::String(s)) => s.clone(),
        Some(Value::Number(n)) => {
            if let Some(i) = n.as_i64() {
                i.to_string()
            } else if let Some(u) = n.as_u64() {
                u.to_string()
            } else {
                format!("{:.16e}", n.as_f64().unwrap_or(f64::NAN))
            }
        }
        Some(other) => other.to_string(),
    }
}

/// Writes records as CSV (header + rows) or JSON. A single record is
/// written as a JSON object unless `as_array` is set.
pub fn write_records(out: &mut dyn Write, records: Vec<Record>, format: Format, as_array: bool) -> std::io::Result<()> {
    match format {
        Format::Json => {
            let value = if as_array || records.len() != 1 {
                Value::Array(records.into_iter().map(Record::into_value).collect())
            } else {
                records.into_iter().next().map(Record::into_value).unwrap_or(Value::Null)
            };
            serde_json::to_writer_pretty(&mut *out, &value)?;
            writeln!(out)
        }
        Format::Csv => {
            let cols = columns(&records);
            let mut w = csv::Writer::from_writer(out);
            w.write_record(&cols)?;
            for r in &records {
                w.write_record(cols.iter().map(|c| csv_cell(r.0.get(c))))?;
            }
            w.flush()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(Serialize)]
    struct Inner {
        value: f64,
        std_error: f64,
    }

    #[derive(Serialize)]
    struct Outer {
        q1: Inner,
        moments: Vec<f64>,
        flag: bool,
    }

    #[test]
    fn flattening_and_csv_layout() {
        let mut a = Record::new();
        a.set("x", 0.5).merge(&Outer {
            q1: Inner {
                value: 0.1,
                std_error: 0.01,
            },
            moments: vec![1.0, 2.0],
            flag: true,
        });
        a.set("converged", true);
        let mut b = Record::new();
        b.set("x", 1.0).set("converged", false).set("error", "boom");
        let mut buf = Vec::new();
        write_records(&mut buf, vec![b, a], Format::Csv, true).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(
            lines.next().unwrap(),
            "x,q1_value,q1_std_error,moments_0,moments_1,flag,converged,error"
        );
        assert_eq!(
            lines.next().unwrap(),
            "1.0000000000000000e0,,,,,,false,boom"
        );
        assert!(lines.next().unwrap().starts_with("5.0000000000000000e-1,1.0000000000000001e-1,"));
    }
}
