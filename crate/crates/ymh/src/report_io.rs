//! Line-oriented text form of a [`ResidualReport`]:
//!
//! ```text
//! id=DbarPhi max_abs=9.1e-5 rms=4.2e-5 n_samples=50 fd_step=1e-3
//! ```
//!
//! One record per equation id, fields in this order, separated by single
//! spaces. Lines that do not start with `id=` are ignored when parsing, so
//! command output can be fed back in directly.

use std::fmt::Write as _;

use ymh_core::verifier::{EquationId, ResidualEntry, ResidualReport};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ReportParseError {
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("duplicate equation id or inconsistent max_abs/rms")]
    Inconsistent,
}

pub fn format_entry(e: &ResidualEntry) -> String {
    format!(
        "id={} max_abs={:e} rms={:e} n_samples={} fd_step={:e}",
        e.id, e.max_abs, e.rms, e.n_samples, e.fd_step
    )
}

pub fn format_report(report: &ResidualReport) -> String {
    let mut out = String::new();
    for e in report.entries() {
        let _ = writeln!(out, "{}", format_entry(e));
    }
    out
}

pub fn parse_report(text: &str) -> Result<ResidualReport, ReportParseError> {
    let mut entries = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let body = raw.trim();
        if !body.starts_with("id=") {
            continue;
        }
        let err = |message: String| ReportParseError::Malformed {
            line: k + 1,
            message,
        };
        let fields: Vec<(&str, &str)> = body
            .split_whitespace()
            .map(|f| {
                f.split_once('=')
                    .ok_or_else(|| err(format!("`{f}` is not key=value")))
            })
            .collect::<Result<_, _>>()?;
        let keys: Vec<&str> = fields.iter().map(|f| f.0).collect();
        if keys != ["id", "max_abs", "rms", "n_samples", "fd_step"] {
            return Err(err(format!(
                "expected keys id, max_abs, rms, n_samples, fd_step; found {}",
                keys.join(", ")
            )));
        }
        let real = |v: &str| {
            v.parse::<f64>()
                .map_err(|_| err(format!("bad number `{v}`")))
        };
        entries.push(ResidualEntry {
            id: fields[0]
                .1
                .parse::<EquationId>()
                .map_err(|_| err(format!("unknown equation id `{}`", fields[0].1)))?,
            max_abs: real(fields[1].1)?,
            rms: real(fields[2].1)?,
            n_samples: fields[3]
                .1
                .parse()
                .map_err(|_| err(format!("bad count `{}`", fields[3].1)))?,
            fd_step: real(fields[4].1)?,
        });
    }
    ResidualReport::from_entries(entries).ok_or(ReportParseError::Inconsistent)
}
