//! Report envelope, JSON rendering and the CSV flattening.

use serde::Serialize;
use serde_json::Value;

use crate::args::{Command, Format};

/// Bumped whenever a field of the envelope or of a command result changes.
pub const SCHEMA_VERSION: u32 = 1;

/// A failed bound or audit with the data that falsifies it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub check: String,
    pub witness: String,
}

impl Violation {
    pub fn new(check: impl Into<String>, witness: impl Into<String>) -> Self {
        Violation {
            check: check.into(),
            witness: witness.into(),
        }
    }
}

/// What a command produced: its result, optional tabular rows for CSV, and
/// any violations.
#[derive(Debug, Clone, Default)]
pub struct Outcome {
    pub result: Value,
    pub rows: Option<Vec<Value>>,
    pub violations: Vec<Violation>,
}

impl Outcome {
    pub fn new(result: impl Serialize) -> Self {
        Outcome {
            result: serde_json::to_value(result).expect("results serialize"),
            ..Outcome::default()
        }
    }

    pub fn with_rows<T: Serialize>(mut self, rows: &[T]) -> Self {
        self.rows = Some(rows.iter().map(|r| serde_json::to_value(r).expect("rows serialize")).collect());
        self
    }
}

/// The fully serializable experiment configuration echoed in every report.
#[derive(Debug, Clone, Serialize)]
pub struct ExperimentConfig<'a> {
    #[serde(flatten)]
    pub command: &'a Command,
    pub format: Format,
    pub output: Option<String>,
}

#[derive(Serialize)]
struct Report<'a> {
    schema_version: u32,
    tool: &'static str,
    tool_version: &'static str,
    config: &'a ExperimentConfig<'a>,
    status: &'static str,
    violations: &'a [Violation],
    result: &'a Value,
}

pub fn render(config: &ExperimentConfig<'_>, outcome: &Outcome) -> Result<String, csv::Error> {
    match config.format {
        Format::Json => {
            let report = Report {
                schema_version: SCHEMA_VERSION,
                tool: "goodpair",
                tool_version: env!("CARGO_PKG_VERSION"),
                config,
                status: if outcome.violations.is_empty() { "ok" } else { "violation" },
                violations: &outcome.violations,
                result: &outcome.result,
            };
            let mut s = serde_json::to_string_pretty(&report).expect("report serializes");
            s.push('\n');
            Ok(s)
        }
        Format::Csv => {
            let rows = match &outcome.rows {
                Some(rows) => rows.clone(),
                None => vec![outcome.result.clone()],
            };
            to_csv(&rows)
        }
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    let key = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
    match v {
        Value::Object(map) => {
            for (k, v) in map {
                flatten(&key(k), v, out);
            }
        }
        Value::Array(items) if items.iter().all(|i| !i.is_object() && !i.is_array()) => {
            let joined: Vec<String> = items.iter().map(scalar).collect();
            out.push((prefix.to_string(), joined.join(";")));
        }
        Value::Array(items) => {
            for (i, item) in items.iter().enumerate() {
                flatten(&key(&i.to_string()), item, out);
            }
        }
        _ => out.push((prefix.to_string(), scalar(v))),
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

/// Flattens each row to dotted column names; columns are the union over
/// rows in first-seen order.
fn to_csv(rows: &[Value]) -> Result<String, csv::Error> {
    let flat: Vec<Vec<(String, String)>> = rows
        .iter()
        .map(|r| {
            let mut out = Vec::new();
            flatten("", r, &mut out);
            out
        })
        .collect();
    let mut columns: Vec<String> = Vec::new();
    for row in &flat {
        for (k, _) in row {
            if !columns.contains(k) {
                columns.push(k.clone());
            }
        }
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(&columns)?;
    for row in &flat {
        let record: Vec<&str> = columns
            .iter()
            .map(|c| row.iter().find(|(k, _)| k == c).map_or("", |(_, v)| v.as_str()))
            .collect();
        w.write_record(&record)?;
    }
    let bytes = w.into_inner().map_err(|e| e.into_error())?;
    Ok(String::from_utf8(bytes).expect("csv of utf-8 fields"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn csv_flattens_nested_values() {
        let rows = vec![
            json!({"a": 1, "b": {"c": "x", "d": [1, 2]}}),
            json!({"a": 2, "e": null}),
        ];
        assert_eq!(to_csv(&rows).unwrap(), "a,b.c,b.d,e\n1,x,1;2,\n2,,,\n");
    }
}
