use std::fmt::Write as _;

use clap::ValueEnum;
use serde_json::{json, Map, Value};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Json,
}

/// One table cell. Exact values stay strings in every format.
#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Int(String),
    Rational(String),
    Float(f64),
    Text(String),
    List(Vec<String>),
}

impl Cell {
    pub fn plain(&self) -> String {
        match self {
            Cell::Int(s) | Cell::Rational(s) | Cell::Text(s) => s.clone(),
            Cell::Float(x) => float_text(*x),
            Cell::List(items) => items.join(" "),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Int(s) | Cell::Rational(s) | Cell::Text(s) => Value::String(s.clone()),
            Cell::Float(x) => serde_json::Number::from_f64(*x).map_or(Value::Null, Value::Number),
            Cell::List(items) => Value::Array(items.iter().cloned().map(Value::String).collect()),
        }
    }
}

fn float_text(x: f64) -> String {
    if x.is_finite() {
        format!("{x}")
    } else {
        "nan".into()
    }
}

pub struct Report {
    pub command: &'static str,
    pub params: Vec<(&'static str, Value)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Report {
    pub fn new(command: &'static str, columns: &[&str]) -> Self {
        Self {
            command,
            params: Vec::new(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn param(mut self, key: &'static str, value: impl Into<Value>) -> Self {
        self.params.push((key, value.into()));
        self
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Text => self.text(),
            Format::Csv => self.csv(),
            Format::Json => self.json(),
        }
    }

    fn text(&self) -> String {
        let cells: Vec<Vec<String>> = self.rows.iter().map(|r| r.iter().map(Cell::plain).collect()).collect();
        let mut widths: Vec<usize> = self.columns.iter().map(|c| c.chars().count()).collect();
        for row in &cells {
            for (w, c) in widths.iter_mut().zip(row) {
                *w = (*w).max(c.chars().count());
            }
        }
        let mut out = String::new();
        let line = |out: &mut String, row: &[String]| {
            let padded: Vec<String> = row
                .iter()
                .zip(&widths)
                .map(|(c, &w)| format!("{c:>w$}"))
                .collect();
            let _ = writeln!(out, "{}", padded.join("  ").trim_end());
        };
        line(&mut out, &self.columns);
        for row in &cells {
            line(&mut out, row);
        }
        out
    }

    fn csv(&self) -> String {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        w.write_record(&self.columns).expect("in-memory CSV");
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::plain)).expect("in-memory CSV");
        }
        String::from_utf8(w.into_inner().expect("in-memory CSV")).expect("UTF-8 CSV")
    }

    fn json(&self) -> String {
        let params: Map<String, Value> = self.params.iter().map(|(k, v)| (k.to_string(), v.clone())).collect();
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| {
                Value::Object(self.columns.iter().cloned().zip(r.iter().map(Cell::json)).collect())
            })
            .collect();
        let doc = json!({
            "schema_version": SCHEMA_VERSION,
            "command": self.command,
            "params": params,
            "rows": rows,
        });
        let mut s = serde_json::to_string_pretty(&doc).expect("serializable report");
        s.push('\n');
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Report {
        let mut r = Report::new("demo", &["n", "count", "note"]).param("k", 2);
        r.rows.push(vec![Cell::Int("3".into()), Cell::Int("123456789012345678901234567890".into()), Cell::Text("a,b".into())]);
        r.rows.push(vec![Cell::Int("4".into()), Cell::Rational("-7/3".into()), Cell::Float(0.5)]);
        r
    }

    #[test]
    fn csv_quotes_and_keeps_big_integers() {
        let csv = sample().render(Format::Csv);
        assert_eq!(csv, "n,count,note\n3,123456789012345678901234567890,\"a,b\"\n4,-7/3,0.5\n");
    }

    #[test]
    fn json_has_versioned_envelope() {
        let v: Value = serde_json::from_str(&sample().render(Format::Json)).unwrap();
        assert_eq!(v["schema_version"], 1);
        assert_eq!(v["params"]["k"], 2);
        assert_eq!(v["rows"][0]["count"], "123456789012345678901234567890");
        assert_eq!(v["rows"][1]["note"], 0.5);
    }

    #[test]
    fn text_is_aligned() {
        let t = sample().render(Format::Text);
        let lines: Vec<&str> = t.lines().collect();
        assert_eq!(lines.len(), 3);
        assert!(lines[0].starts_with(' ') || lines[0].starts_with('n'));
    }
}
