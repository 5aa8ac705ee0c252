use std::collections::BTreeMap;
use std::str::FromStr;

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::search::{AlphaRecord, AuditRow};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Table,
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = crate::Error;

    fn from_str(s: &str) -> crate::Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "table" => Ok(Format::Table),
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            _ => Err(crate::Error::Parse(format!("unknown format {s:?}"))),
        }
    }
}

/// A homogeneous list the encoders understand.
#[derive(Debug, Clone, Copy)]
pub enum Report<'a> {
    Records(&'a [AlphaRecord]),
    Audit(&'a [AuditRow]),
}

pub const RECORD_COLUMNS: [&str; 9] = [
    "n",
    "factorization",
    "sigma",
    "alpha1",
    "alpha2",
    "omega",
    "tau",
    "verdict",
    "variant",
];

pub const AUDIT_COLUMNS: [&str; 4] = ["table_id", "row", "status", "discrepancy"];

fn record_cells(r: &AlphaRecord) -> Vec<String> {
    vec![
        r.n.to_string(),
        r.factorization.to_string(),
        r.sigma.to_string(),
        r.ratio().num().to_string(),
        r.ratio().den().to_string(),
        r.classification.omega.to_string(),
        r.classification.tau.to_string(),
        r.verdict().to_string(),
        r.variant().to_string(),
    ]
}

fn audit_cells(r: &AuditRow) -> Vec<String> {
    vec![
        r.table_id.clone(),
        r.row.clone(),
        r.status.to_string(),
        r.discrepancy.clone(),
    ]
}

impl Report<'_> {
    fn header(&self) -> &'static [&'static str] {
        match self {
            Report::Records(_) => &RECORD_COLUMNS,
            Report::Audit(_) => &AUDIT_COLUMNS,
        }
    }

    fn rows(&self) -> Vec<Vec<String>> {
        match self {
            Report::Records(rs) => rs.iter().map(record_cells).collect(),
            Report::Audit(rs) => rs.iter().map(audit_cells).collect(),
        }
    }

    pub fn to_value(&self) -> Value {
        match self {
            Report::Records(rs) => canonical(rs),
            Report::Audit(rs) => canonical(rs),
        }
    }
}

/// Serializes through `serde_json::Value`, whose maps keep keys sorted.
pub fn canonical<T: Serialize + ?Sized>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize infallibly")
}

pub fn canonical_bytes(v: &Value) -> Vec<u8> {
    serde_json::to_vec(v).expect("values serialize infallibly")
}

/// Hex SHA-256 of the canonical encoding.
pub fn digest(v: &Value) -> String {
    hex::encode(Sha256::digest(canonical_bytes(v)))
}

pub fn csv_bytes(header: &[&str], rows: &[Vec<String>]) -> Vec<u8> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for row in rows {
        w.write_record(row).expect("in-memory write");
    }
    w.into_inner().expect("in-memory flush")
}

/// Left-aligned columns separated by two spaces.
pub fn table_bytes(header: &[&str], rows: &[Vec<String>]) -> Vec<u8> {
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let mut out = String::new();
    let mut line = |cells: &mut dyn Iterator<Item = &str>| {
        let mut s = String::new();
        for (i, cell) in cells.enumerate() {
            if i > 0 {
                s.push_str("  ");
            }
            s.push_str(cell);
            let pad = widths[i].saturating_sub(cell.chars().count());
            s.extend(std::iter::repeat_n(' ', pad));
        }
        out.push_str(s.trim_end());
        out.push('\n');
    };
    line(&mut header.iter().copied());
    for row in rows {
        line(&mut row.iter().map(String::as_str));
    }
    out.into_bytes()
}

/// Encodes a report; identical input gives identical bytes.
pub fn emit_report(report: Report<'_>, format: Format) -> Vec<u8> {
    match format {
        Format::Json => {
            let mut b = canonical_bytes(&report.to_value());
            b.push(b'\n');
            b
        }
        Format::Csv => csv_bytes(report.header(), &report.rows()),
        Format::Table => table_bytes(report.header(), &report.rows()),
    }
}

/// Key/value pairs as a two-column report.
pub fn pairs_bytes(pairs: &BTreeMap<String, String>, format: Format) -> Vec<u8> {
    let rows: Vec<Vec<String>> = pairs.iter().map(|(k, v)| vec![k.clone(), v.clone()]).collect();
    match format {
        Format::Csv => csv_bytes(&["key", "value"], &rows),
        _ => table_bytes(&["key", "value"], &rows),
    }
}
