//! Report assembly and the three renderings.
//!
//! CSV and JSON carry every real at full binary64 precision so either can
//! be re-parsed into the exact values that were computed. Markdown is for
//! reading and rounds.

use std::fmt::Write as _;

use psirh_core::constants::Constants;
use serde_json::{json, Map, Value as Json};
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Int(u64),
    Real(f64),
    Text(String),
    Bool(bool),
    Null,
}

impl From<u64> for Value {
    fn from(v: u64) -> Self {
        Value::Int(v)
    }
}

impl From<f64> for Value {
    fn from(v: f64) -> Self {
        Value::Real(v)
    }
}

impl From<bool> for Value {
    fn from(v: bool) -> Self {
        Value::Bool(v)
    }
}

impl From<String> for Value {
    fn from(v: String) -> Self {
        Value::Text(v)
    }
}

impl From<&str> for Value {
    fn from(v: &str) -> Self {
        Value::Text(v.to_owned())
    }
}

impl<T: Into<Value>> From<Option<T>> for Value {
    fn from(v: Option<T>) -> Self {
        v.map_or(Value::Null, Into::into)
    }
}

impl Value {
    /// 17 significant digits, enough to round-trip any binary64.
    fn full(&self) -> String {
        match self {
            Value::Int(v) => v.to_string(),
            Value::Real(v) if v.is_finite() => format!("{v:.16e}"),
            Value::Real(v) => v.to_string(),
            Value::Text(s) => s.clone(),
            Value::Bool(b) => b.to_string(),
            Value::Null => String::new(),
        }
    }

    fn display(&self, digits: usize) -> String {
        match self {
            Value::Real(v) => format!("{v:.digits$}"),
            Value::Null => "–".to_owned(),
            other => other.full(),
        }
    }

    fn json(&self) -> Json {
        match self {
            Value::Int(v) => json!(v),
            Value::Real(v) => serde_json::Number::from_f64(*v).map_or(Json::Null, Json::Number),
            Value::Text(s) => json!(s),
            Value::Bool(b) => json!(b),
            Value::Null => Json::Null,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Md,
    Json,
}

#[derive(Debug, Clone)]
pub struct Report {
    pub command: &'static str,
    pub parameters: Vec<(&'static str, String)>,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Value>>,
    pub summary: Vec<(&'static str, Value)>,
    /// Replaces the generic Markdown table, e.g. to lay a table out with
    /// one column per index.
    pub markdown_grid: Option<Vec<Vec<String>>>,
    pub cases_checked: u64,
    /// False when the run found exceptions or failures.
    pub clean: bool,
}

impl Report {
    pub fn new(command: &'static str, columns: Vec<&'static str>) -> Self {
        Report {
            command,
            parameters: Vec::new(),
            columns,
            rows: Vec::new(),
            summary: Vec::new(),
            markdown_grid: None,
            cases_checked: 0,
            clean: true,
        }
    }

    pub fn param(&mut self, name: &'static str, value: impl ToString) {
        self.parameters.push((name, value.to_string()));
    }

    pub fn row(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn summarize(&mut self, name: &'static str, value: impl Into<Value>) {
        self.summary.push((name, value.into()));
    }

    pub fn render(&self, format: Format, digits: usize, runtime_secs: f64) -> String {
        match format {
            Format::Csv => self.csv(runtime_secs),
            Format::Json => self.json(runtime_secs),
            Format::Md => self.markdown(digits, runtime_secs),
        }
    }

    fn csv(&self, runtime_secs: f64) -> String {
        let mut out = String::new();
        for (k, v) in self.header() {
            writeln!(out, "# {k}={v}").unwrap();
        }
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        w.write_record(&self.columns).expect("in-memory write");
        for row in &self.rows {
            w.write_record(row.iter().map(Value::full))
                .expect("in-memory write");
        }
        out.push_str(std::str::from_utf8(&w.into_inner().expect("flush")).expect("utf-8"));
        for (k, v) in &self.summary {
            writeln!(out, "# summary.{k}={}", v.full()).unwrap();
        }
        writeln!(out, "# cases_checked={}", self.cases_checked).unwrap();
        writeln!(out, "# clean={}", self.clean).unwrap();
        writeln!(out, "# runtime_seconds={runtime_secs:.3}").unwrap();
        out
    }

    fn json(&self, runtime_secs: f64) -> String {
        let header: Map<String, Json> = self
            .header()
            .into_iter()
            .map(|(k, v)| (k.to_owned(), json!(v)))
            .collect();
        let rows: Vec<Json> = self
            .rows
            .iter()
            .map(|r| {
                let m: Map<String, Json> = self
                    .columns
                    .iter()
                    .zip(r)
                    .map(|(c, v)| ((*c).to_owned(), v.json()))
                    .collect();
                Json::Object(m)
            })
            .collect();
        let summary: Map<String, Json> = self
            .summary
            .iter()
            .map(|(k, v)| ((*k).to_owned(), v.json()))
            .collect();
        let doc = json!({
            "header": header,
            "columns": self.columns,
            "rows": rows,
            "summary": summary,
            "footer": {
                "cases_checked": self.cases_checked,
                "clean": self.clean,
                "runtime_seconds": runtime_secs,
            },
        });
        let mut s = serde_json::to_string_pretty(&doc).expect("serializable");
        s.push('\n');
        s
    }

    fn markdown(&self, digits: usize, runtime_secs: f64) -> String {
        let mut out = format!("## psirh {}\n\n", self.command);
        for (k, v) in self.header().into_iter().skip(1) {
            writeln!(out, "- {k}: `{v}`").unwrap();
        }
        out.push('\n');
        let grid = self.markdown_grid.clone().unwrap_or_else(|| {
            let mut g = vec![self
                .columns
                .iter()
                .map(|c| c.to_string())
                .collect::<Vec<_>>()];
            g.extend(
                self.rows
                    .iter()
                    .map(|r| r.iter().map(|v| v.display(digits)).collect()),
            );
            g
        });
        if let Some((head, body)) = grid.split_first() {
            writeln!(out, "| {} |", head.join(" | ")).unwrap();
            writeln!(out, "|{}", "---:|".repeat(head.len())).unwrap();
            for r in body {
                writeln!(out, "| {} |", r.join(" | ")).unwrap();
            }
            out.push('\n');
        }
        for (k, v) in &self.summary {
            writeln!(out, "- {k}: {}", v.display(digits)).unwrap();
        }
        writeln!(out, "- cases checked: {}", self.cases_checked).unwrap();
        writeln!(out, "- clean: {}", self.clean).unwrap();
        writeln!(out, "- runtime: {runtime_secs:.3} s").unwrap();
        out
    }

    fn header(&self) -> Vec<(&'static str, String)> {
        let params = self
            .parameters
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect::<Vec<_>>()
            .join(";");
        vec![
            ("command", self.command.to_owned()),
            ("parameters", params),
            ("constants_sha256", constants_digest()),
            ("version", env!("CARGO_PKG_VERSION").to_owned()),
        ]
    }
}

/// SHA-256 over the decimal constant literals, so reports produced with
/// different constants can be told apart.
pub fn constants_digest() -> String {
    let mut h = Sha256::new();
    for (name, lit) in Constants::literals() {
        h.update(name.as_bytes());
        h.update(b"=");
        h.update(lit.as_bytes());
        h.update(b"\n");
    }
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}
