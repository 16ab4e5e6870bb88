//! Report model shared by the text and machine renderings.
//!
//! Every number is stored as a string when the report is assembled, so both
//! renderings print the same digits.

use std::fmt::Write as _;

use padic_cauchy::LogNorm;
use serde::Serialize;

#[derive(Clone, Debug, Serialize)]
pub struct Field {
    pub name: String,
    pub value: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub status: String,
    pub input: Vec<Field>,
    pub results: Vec<Field>,
    pub tables: Vec<Table>,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report {
            command: command.to_string(),
            status: "pass".into(),
            input: Vec::new(),
            results: Vec::new(),
            tables: Vec::new(),
            checks: Vec::new(),
        }
    }

    /// Echoes the top-level keys of a serialized input, in key order.
    pub fn echo(&mut self, value: &serde_json::Value) {
        if let serde_json::Value::Object(map) = value {
            for (k, v) in map {
                let value = match v {
                    serde_json::Value::String(s) => s.clone(),
                    other => other.to_string(),
                };
                self.input.push(Field {
                    name: k.clone(),
                    value,
                });
            }
        }
    }

    pub fn result(&mut self, name: &str, value: impl ToString) {
        self.results.push(Field {
            name: name.into(),
            value: value.to_string(),
        });
    }

    pub fn table(&mut self, name: &str, columns: &[&str], rows: Vec<Vec<String>>) {
        self.tables.push(Table {
            name: name.into(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows,
        });
    }

    pub fn check(&mut self, name: &str, pass: bool, detail: impl Into<String>) {
        if !pass {
            self.status = "fail".into();
        }
        self.checks.push(Check {
            name: name.into(),
            pass,
            detail: detail.into(),
        });
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn to_machine(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "padic-cauchy {}: {}", self.command, self.status);
        fields(&mut out, "input", &self.input);
        fields(&mut out, "results", &self.results);
        for t in &self.tables {
            let _ = writeln!(out, "\n[{}]", t.name);
            let mut widths: Vec<usize> = t.columns.iter().map(|c| c.chars().count()).collect();
            for row in &t.rows {
                for (w, cell) in widths.iter_mut().zip(row) {
                    *w = (*w).max(cell.chars().count());
                }
            }
            line(&mut out, &t.columns, &widths);
            for row in &t.rows {
                line(&mut out, row, &widths);
            }
        }
        if !self.checks.is_empty() {
            let _ = writeln!(out, "\n[checks]");
            for c in &self.checks {
                let verdict = if c.pass { "pass" } else { "FAIL" };
                let _ = writeln!(out, "{}: {verdict} - {}", c.name, c.detail);
            }
        }
        out
    }
}

fn fields(out: &mut String, title: &str, fs: &[Field]) {
    if fs.is_empty() {
        return;
    }
    let _ = writeln!(out, "\n[{title}]");
    for f in fs {
        let _ = writeln!(out, "{} = {}", f.name, f.value);
    }
}

fn line(out: &mut String, cells: &[String], widths: &[usize]) {
    let padded: Vec<String> = cells
        .iter()
        .zip(widths)
        .map(|(c, w)| format!("{c:<w$}"))
        .collect();
    let _ = writeln!(out, "{}", padded.join("  ").trim_end());
}

/// Exponent of a magnitude: a reduced fraction, `−∞` for zero, `+∞` if unbounded.
pub fn exponent(n: &LogNorm) -> String {
    match n {
        LogNorm::Zero => "−∞".into(),
        LogNorm::Unbounded => "+∞".into(),
        LogNorm::Finite(e) => e.to_string(),
    }
}

/// A radius as `unbounded` or `p^(e)`.
pub fn radius(n: &LogNorm) -> String {
    match n {
        LogNorm::Unbounded => "unbounded".into(),
        other => other.to_string(),
    }
}
