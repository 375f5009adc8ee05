//! Text serialization of [`TranscendentTable`].
//!
//! ```text
//! # psi0=<f64>
//! # r_max=<f64>
//! # tolerance=<f64>
//! r,psi,dpsi
//! <r>,<psi>,<dpsi>
//! ...
//! ```
//!
//! Floats are written with Rust's shortest round-trip formatting, so a table
//! read back is bit-identical to the one written.

use std::fmt::Write as _;
use std::io::{self, Read, Write};

use ymh_core::painleve::{TableError, TranscendentTable};

pub const HEADER: &str = "r,psi,dpsi";

#[derive(Debug, thiserror::Error)]
pub enum TableIoError {
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
    #[error("line {line}: {message}")]
    Format { line: usize, message: String },
    #[error("table fails validation: {0}")]
    Invalid(#[from] TableError),
}

pub fn to_string(table: &TranscendentTable) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# psi0={}", table.psi0());
    let _ = writeln!(out, "# r_max={}", table.r_max());
    let _ = writeln!(out, "# tolerance={:e}", table.solver_tolerance());
    let _ = writeln!(out, "{HEADER}");
    for ((r, psi), dpsi) in table
        .r_nodes()
        .iter()
        .zip(table.psi_values())
        .zip(table.dpsi_values())
    {
        let _ = writeln!(out, "{r},{psi},{dpsi}");
    }
    out
}

pub fn write_table(mut w: impl Write, table: &TranscendentTable) -> io::Result<()> {
    w.write_all(to_string(table).as_bytes())
}

pub fn read_table(mut r: impl Read) -> Result<TranscendentTable, TableIoError> {
    let mut text = String::new();
    r.read_to_string(&mut text)?;
    parse(&text)
}

pub fn parse(text: &str) -> Result<TranscendentTable, TableIoError> {
    let (mut psi0, mut r_max, mut tolerance) = (None, None, None);
    let (mut r, mut psi, mut dpsi) = (Vec::new(), Vec::new(), Vec::new());
    let mut header_seen = false;
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let err = |message: String| TableIoError::Format { line, message };
        let number = |s: &str| {
            s.trim()
                .parse::<f64>()
                .map_err(|e| err(format!("bad number `{}`: {e}", s.trim())))
        };
        let body = raw.trim();
        if body.is_empty() {
            continue;
        }
        if let Some(meta) = body.strip_prefix('#') {
            let Some((key, value)) = meta.split_once('=') else {
                continue;
            };
            let slot = match key.trim() {
                "psi0" => &mut psi0,
                "r_max" => &mut r_max,
                "tolerance" => &mut tolerance,
                _ => continue,
            };
            *slot = Some(number(value)?);
            continue;
        }
        if !header_seen {
            if body != HEADER {
                return Err(err(format!("expected header `{HEADER}`")));
            }
            header_seen = true;
            continue;
        }
        let cols: Vec<&str> = body.split(',').collect();
        let [a, b, c] = cols[..] else {
            return Err(err(format!("expected 3 columns, found {}", cols.len())));
        };
        r.push(number(a)?);
        psi.push(number(b)?);
        dpsi.push(number(c)?);
    }
    let missing = |key: &str| TableIoError::Format {
        line: 0,
        message: format!("missing `# {key}=` metadata"),
    };
    let psi0 = psi0.ok_or_else(|| missing("psi0"))?;
    let r_max = r_max.ok_or_else(|| missing("r_max"))?;
    let tolerance = tolerance.ok_or_else(|| missing("tolerance"))?;
    Ok(TranscendentTable::from_parts(
        r, psi, dpsi, psi0, r_max, tolerance,
    )?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use ymh_core::painleve::solve_radial;

    #[test]
    fn round_trip_is_bit_exact() {
        let table = solve_radial(8.0, 1e-8).unwrap();
        let text = to_string(&table);
        assert!(text.starts_with(&format!("# psi0={}\n", table.psi0())));
        let back = parse(&text).unwrap();
        assert_eq!(back.psi0().to_bits(), table.psi0().to_bits());
        assert_eq!(back.r_nodes(), table.r_nodes());
        assert_eq!(back.psi_values(), table.psi_values());
        assert_eq!(back.dpsi_values(), table.dpsi_values());
        assert_eq!(to_string(&back), text);
    }

    #[test]
    fn malformed_files_are_rejected() {
        let table = solve_radial(8.0, 1e-8).unwrap();
        let text = to_string(&table);
        let no_psi0: String = text.lines().skip(1).map(|l| format!("{l}\n")).collect();
        assert!(matches!(parse(&no_psi0), Err(TableIoError::Format { .. })));
        let bad_row = text.replacen("0,0.17", "0;0.17", 1);
        assert!(matches!(parse(&bad_row), Err(TableIoError::Format { .. })));
        // perturbing one interior value breaks the ODE invariant, not the format
        let mut lines: Vec<String> = text.lines().map(String::from).collect();
        let row: Vec<f64> = lines[1000].split(',').map(|v| v.parse().unwrap()).collect();
        lines[1000] = format!("{},{},{}", row[0], row[1] + 1e-3, row[2]);
        assert!(matches!(
            parse(&lines.join("\n")),
            Err(TableIoError::Invalid(_))
        ));
    }
}
