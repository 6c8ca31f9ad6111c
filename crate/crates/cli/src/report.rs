//! Tabular and JSON report rendering with a reproducibility header.

use crate::config::{CommandName, Format};
use serde::Serialize;
use std::io::{self, Write};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
    pub json: serde_json::Value,
    pub notes: Vec<String>,
    /// Set when a verification found a violation.
    pub failure: Option<String>,
}

impl Report {
    pub fn table(columns: &[&str], json: impl Serialize) -> Self {
        Report {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            json: serde_json::to_value(json).expect("report serializes"),
            notes: Vec::new(),
            failure: None,
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    /// Two-column `key,value` report.
    pub fn key_value(pairs: Vec<(&str, String)>, json: impl Serialize) -> Self {
        let mut r = Report::table(&["key", "value"], json);
        for (k, v) in pairs {
            r.push(vec![k.to_string(), v]);
        }
        r
    }
}

/// Shortest round-trip formatting, exponent form for large and small magnitudes.
pub fn num(x: f64) -> String {
    format!("{x:?}")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Header {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: CommandName,
    pub config_sha256: String,
}

impl Header {
    pub fn new(command: CommandName, config_sha256: String) -> Self {
        Header { tool: "gs-dynamics", version: VERSION, command, config_sha256 }
    }
}

pub fn write_report(out: &mut dyn Write, header: &Header, report: &Report, format: Format) -> io::Result<()> {
    match format {
        Format::Csv => {
            writeln!(out, "# {} {}", header.tool, header.version)?;
            writeln!(out, "# command {}", header.command)?;
            writeln!(out, "# config-sha256 {}", header.config_sha256)?;
            for n in &report.notes {
                writeln!(out, "# note: {n}")?;
            }
            if let Some(f) = &report.failure {
                writeln!(out, "# failure: {f}")?;
            }
            let mut w = csv::Writer::from_writer(out);
            w.write_record(&report.columns)?;
            for row in &report.rows {
                w.write_record(row)?;
            }
            w.flush()
        }
        Format::Json => {
            let doc = serde_json::json!({
                "header": header,
                "notes": report.notes,
                "failure": report.failure,
                "report": report.json,
            });
            serde_json::to_writer_pretty(&mut *out, &doc)?;
            writeln!(out)
        }
    }
}
