//! Report rows and their CSV / JSON rendering.
//!
//! Every report starts with its failure records, then a summary, then the
//! passing rows, so a truncated file still shows what failed. Output is a
//! pure function of the rows, hence byte-identical for identical runs.

mod suites;

pub use suites::*;

use std::collections::BTreeMap;

use serde::Serialize;

pub const SCHEMA: &str = "caliblab-report/1";

/// One verified quantity.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Row {
    pub case: String,
    /// What the row verifies, as a short descriptive tag.
    pub anchor: String,
    pub expected: String,
    pub observed: String,
    /// Distance to the bound on the safe side; negative on failure.
    pub margin: Option<f64>,
    pub pass: bool,
}

impl Row {
    /// `observed ≤ bound + tol`.
    pub fn at_most(
        case: impl Into<String>,
        anchor: &str,
        observed: f64,
        bound: f64,
        tol: f64,
    ) -> Self {
        let margin = bound + tol - observed;
        Self {
            case: case.into(),
            anchor: anchor.into(),
            expected: format!("<= {bound} (+{tol:e})"),
            observed: observed.to_string(),
            margin: Some(margin),
            pass: margin >= 0.0,
        }
    }

    /// `observed ≥ bound − tol`.
    pub fn at_least(
        case: impl Into<String>,
        anchor: &str,
        observed: f64,
        bound: f64,
        tol: f64,
    ) -> Self {
        let margin = observed - (bound - tol);
        Self {
            case: case.into(),
            anchor: anchor.into(),
            expected: format!(">= {bound} (-{tol:e})"),
            observed: observed.to_string(),
            margin: Some(margin),
            pass: margin >= 0.0,
        }
    }

    /// `|observed − target| ≤ tol`.
    pub fn near(
        case: impl Into<String>,
        anchor: &str,
        observed: f64,
        target: f64,
        tol: f64,
    ) -> Self {
        let margin = tol - (observed - target).abs();
        Self {
            case: case.into(),
            anchor: anchor.into(),
            expected: format!("= {target} (±{tol:e})"),
            observed: observed.to_string(),
            margin: Some(margin),
            pass: margin >= 0.0,
        }
    }

    pub fn check(
        case: impl Into<String>,
        anchor: &str,
        ok: bool,
        observed: impl Into<String>,
    ) -> Self {
        Self {
            case: case.into(),
            anchor: anchor.into(),
            expected: "true".into(),
            observed: observed.into(),
            margin: None,
            pass: ok,
        }
    }

    /// A measured value with no assertion attached.
    pub fn record(case: impl Into<String>, anchor: &str, observed: f64) -> Self {
        Self {
            case: case.into(),
            anchor: anchor.into(),
            expected: "recorded".into(),
            observed: observed.to_string(),
            margin: None,
            pass: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub rows: usize,
    pub failures: usize,
    pub pass: bool,
}

/// Rows of one command plus optional named side files (CSV tables).
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Report {
    pub command: String,
    pub config: BTreeMap<String, String>,
    pub rows: Vec<Row>,
    pub attachments: Vec<(String, String)>,
}

#[derive(Serialize)]
struct JsonReport<'a> {
    schema: &'static str,
    command: &'a str,
    config: &'a BTreeMap<String, String>,
    failures: Vec<&'a Row>,
    summary: Summary,
    rows: Vec<&'a Row>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

impl Report {
    pub fn new(command: &str) -> Self {
        Self {
            command: command.into(),
            ..Self::default()
        }
    }

    pub fn with(mut self, key: &str, value: impl ToString) -> Self {
        self.config.insert(key.into(), value.to_string());
        self
    }

    pub fn push(&mut self, row: Row) {
        self.rows.push(row);
    }

    pub fn extend(&mut self, other: Report) {
        self.rows.extend(other.rows);
        self.attachments.extend(other.attachments);
    }

    pub fn failures(&self) -> impl Iterator<Item = &Row> {
        self.rows.iter().filter(|r| !r.pass)
    }

    pub fn summary(&self) -> Summary {
        let failures = self.failures().count();
        Summary {
            rows: self.rows.len(),
            failures,
            pass: failures == 0,
        }
    }

    pub fn all_pass(&self) -> bool {
        self.summary().pass
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }

    pub fn to_json(&self) -> String {
        let doc = JsonReport {
            schema: SCHEMA,
            command: &self.command,
            config: &self.config,
            failures: self.failures().collect(),
            summary: self.summary(),
            rows: self.rows.iter().filter(|r| r.pass).collect(),
        };
        let mut s = serde_json::to_string_pretty(&doc).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_csv(&self) -> String {
        let mut out = format!("# {SCHEMA} command={}", self.command);
        for (k, v) in &self.config {
            out.push_str(&format!(" {k}={v}"));
        }
        out.push('\n');
        let mut w = csv::Writer::from_writer(Vec::new());
        let write_row = |w: &mut csv::Writer<Vec<u8>>, r: &Row| {
            let margin = r.margin.map(|m| format!("{m:e}")).unwrap_or_default();
            w.write_record([
                if r.pass { "PASS" } else { "FAIL" },
                &r.case,
                &r.anchor,
                &r.expected,
                &r.observed,
                &margin,
            ])
            .expect("in-memory write");
        };
        w.write_record(["status", "case", "anchor", "expected", "observed", "margin"])
            .expect("in-memory write");
        for r in self.failures() {
            write_row(&mut w, r);
        }
        let s = self.summary();
        w.write_record([
            "SUMMARY",
            &format!("rows={}", s.rows),
            &format!("failures={}", s.failures),
            if s.pass { "pass" } else { "fail" },
            "",
            "",
        ])
        .expect("in-memory write");
        for r in self.rows.iter().filter(|r| r.pass) {
            write_row(&mut w, r);
        }
        out.push_str(&String::from_utf8(w.into_inner().expect("flush")).expect("utf-8"));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn failures_come_first() {
        let mut r = Report::new("demo").with("seed", 3);
        r.push(Row::near("a", "x", 1.0, 1.0, 1e-9));
        r.push(Row::at_most("b", "y", 3.5, 3.0, 1e-9));
        r.push(Row::check("c", "z", true, "ok"));
        let csv = r.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "# caliblab-report/1 command=demo seed=3");
        assert!(lines[2].starts_with("FAIL,b,"));
        assert!(lines[3].starts_with("SUMMARY,rows=3,failures=1,fail"));
        let json = r.to_json();
        assert!(json.find("\"failures\"").unwrap() < json.find("\"summary\"").unwrap());
        assert!(!r.all_pass());
        assert_eq!(csv, r.clone().to_csv());
    }

    #[test]
    fn margins() {
        assert!(Row::at_least("m", "x", 8.6, 9.0, 0.45).pass);
        assert!(!Row::at_least("m", "x", 8.5, 9.0, 0.45).pass);
        assert!(Row::record("k", "x", 1e6).pass);
    }
}
