//! Tabular output shared by every subcommand.

use std::fmt::Write as _;

use clap::ValueEnum;
use hypstab_core::Certification;
use serde::Serialize;
use serde_json::{json, Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

/// One table cell. Numbers always carry a provenance flag.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Text(String),
    Num(Value, Certification),
}

impl Cell {
    pub fn text(s: impl Into<String>) -> Self {
        Cell::Text(s.into())
    }

    pub fn num(v: impl Into<Value>, flag: Certification) -> Self {
        Cell::Num(v.into(), flag)
    }

    pub fn exact(v: impl Into<Value>) -> Self {
        Cell::Num(v.into(), Certification::Exact)
    }

    fn plain(&self) -> String {
        match self {
            Cell::Text(s) => s.clone(),
            Cell::Num(v, _) => match v {
                Value::String(s) => s.clone(),
                other => other.to_string(),
            },
        }
    }

    fn to_json(&self) -> Value {
        match self {
            Cell::Text(s) => Value::String(s.clone()),
            Cell::Num(v, f) => json!({ "value": v, "flag": f.as_str() }),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub title: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(title: impl Into<String>, columns: &[&str]) -> Self {
        Self {
            title: title.into(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    /// Two-column `quantity | value` table.
    pub fn pairs(title: impl Into<String>) -> Self {
        Self::new(title, &["quantity", "value"])
    }

    pub fn push(&mut self, row: Vec<Cell>) -> &mut Self {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
        self
    }

    pub fn pair(&mut self, name: &str, value: Cell) -> &mut Self {
        self.push(vec![Cell::text(name), value])
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Report {
    pub command: String,
    pub tables: Vec<Table>,
    pub checks: Vec<Check>,
    pub notes: Vec<String>,
    /// Row-level errors that did not abort the command.
    pub errors: Vec<String>,
}

impl Report {
    pub fn new(command: impl Into<String>) -> Self {
        Self {
            command: command.into(),
            ..Self::default()
        }
    }

    pub fn check(&mut self, name: impl Into<String>, passed: bool) {
        self.checks.push(Check {
            name: name.into(),
            passed,
        });
    }

    pub fn ok(&self) -> bool {
        self.errors.is_empty() && self.checks.iter().all(|c| c.passed)
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Text => self.text(),
            Format::Json => self.json(),
            Format::Csv => self.csv(),
        }
    }

    fn text(&self) -> String {
        let mut out = String::new();
        for t in &self.tables {
            let cells: Vec<Vec<String>> = t
                .rows
                .iter()
                .map(|r| {
                    r.iter()
                        .map(|c| match c {
                            Cell::Text(s) => s.clone(),
                            Cell::Num(_, f) => format!("{} [{}]", c.plain(), f.as_str()),
                        })
                        .collect()
                })
                .collect();
            let widths: Vec<usize> = (0..t.columns.len())
                .map(|i| {
                    cells
                        .iter()
                        .map(|r| r[i].chars().count())
                        .chain([t.columns[i].chars().count()])
                        .max()
                        .unwrap_or(0)
                })
                .collect();
            let line = |r: &[String]| {
                r.iter()
                    .zip(&widths)
                    .map(|(s, &w)| format!("{s:<w$}"))
                    .collect::<Vec<_>>()
                    .join("  ")
                    .trim_end()
                    .to_string()
            };
            let _ = writeln!(out, "{}", t.title);
            let _ = writeln!(out, "{}", line(&t.columns));
            let _ = writeln!(out, "{}", line(&widths.iter().map(|&w| "-".repeat(w)).collect::<Vec<_>>()));
            for r in &cells {
                let _ = writeln!(out, "{}", line(r));
            }
            out.push('\n');
        }
        for n in &self.notes {
            let _ = writeln!(out, "note: {n}");
        }
        for e in &self.errors {
            let _ = writeln!(out, "error: {e}");
        }
        for c in &self.checks {
            let _ = writeln!(out, "{} {}", if c.passed { "PASS" } else { "FAIL" }, c.name);
        }
        out
    }

    fn json(&self) -> String {
        let tables: Vec<Value> = self
            .tables
            .iter()
            .map(|t| {
                let rows: Vec<Value> = t
                    .rows
                    .iter()
                    .map(|r| {
                        let m: Map<String, Value> =
                            t.columns.iter().cloned().zip(r.iter().map(Cell::to_json)).collect();
                        Value::Object(m)
                    })
                    .collect();
                json!({ "title": t.title, "columns": t.columns, "rows": rows })
            })
            .collect();
        let v = json!({
            "command": self.command,
            "tables": tables,
            "checks": self.checks,
            "notes": self.notes,
            "errors": self.errors,
            "ok": self.ok(),
        });
        let mut s = serde_json::to_string_pretty(&v).expect("report serializes");
        s.push('\n');
        s
    }

    /// One CSV block per table: every column followed by its `_flag` column.
    fn csv(&self) -> String {
        let mut out = String::new();
        for (i, t) in self.tables.iter().enumerate() {
            if i > 0 {
                out.push('\n');
            }
            let mut w = csv::Writer::from_writer(Vec::new());
            let mut header = vec!["table".to_string()];
            for c in &t.columns {
                header.push(c.clone());
                header.push(format!("{c}_flag"));
            }
            w.write_record(&header).expect("in-memory write");
            for r in &t.rows {
                let mut rec = vec![t.title.clone()];
                for c in r {
                    rec.push(c.plain());
                    rec.push(match c {
                        Cell::Text(_) => String::new(),
                        Cell::Num(_, f) => f.as_str().to_string(),
                    });
                }
                w.write_record(&rec).expect("in-memory write");
            }
            out.push_str(&String::from_utf8(w.into_inner().expect("flush")).expect("utf-8"));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Report {
        let mut r = Report::new("demo");
        let mut t = Table::pairs("values");
        t.pair("x", Cell::num(1.5, Certification::Formula));
        t.pair("label", Cell::text("a,b"));
        r.tables.push(t);
        r.check("x positive", true);
        r
    }

    #[test]
    fn csv_and_json_carry_the_same_numbers() {
        let r = sample();
        let csv = r.render(Format::Csv);
        assert!(csv.contains("values,x,,1.5,formula"));
        assert!(csv.contains("\"a,b\""));
        let json: Value = serde_json::from_str(&r.render(Format::Json)).unwrap();
        assert_eq!(json["tables"][0]["rows"][0]["value"]["value"], json!(1.5));
        assert_eq!(json["ok"], json!(true));
    }

    #[test]
    fn text_aligns_columns() {
        let text = sample().render(Format::Text);
        assert!(text.contains("x         1.5 [formula]"));
        assert!(text.contains("PASS x positive"));
    }
}
