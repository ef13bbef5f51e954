//! Rendering of tensors, matrices, tables and reports.

use crate::config::Format;
use crate::CliError;
use qboost::coupling::cg::CgRow;
use qboost::VerificationReport;
use serde::Serialize;
use std::path::Path;

/// What a command produced: text for stdout, files for `--out`, and the verification report.
pub struct Artifacts {
    pub stdout: String,
    pub files: Vec<(String, String)>,
    pub report: VerificationReport,
}

/// One numeric matrix entry, for CSV and pretty output.
#[derive(Serialize)]
pub struct EntryRow {
    pub tensor: String,
    pub row: usize,
    pub col: usize,
    pub re: String,
    pub im: String,
}

pub fn csv_string<T: Serialize>(rows: &[T]) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| CliError::Io(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Io(e.to_string()))
}

#[derive(Serialize)]
struct ReportRow<'a> {
    verdict: &'a str,
    id: &'a str,
    eq_tag: &'a str,
    context: String,
    residual: String,
    tolerance: f64,
    deviation: &'a str,
    note: &'a str,
}

pub fn report_csv(rep: &VerificationReport) -> Result<String, CliError> {
    let rows: Vec<ReportRow> = rep
        .entries
        .iter()
        .map(|e| ReportRow {
            verdict: e.verdict.as_str(),
            id: &e.id,
            eq_tag: &e.eq_tag,
            context: e.context_string(),
            residual: e.residual.map(|r| format!("{:e}", r)).unwrap_or_default(),
            tolerance: e.tolerance,
            deviation: e.deviation.as_deref().unwrap_or(""),
            note: &e.note,
        })
        .collect();
    csv_string(&rows)
}

pub fn report_in(rep: &VerificationReport, format: Format) -> Result<String, CliError> {
    Ok(match format {
        Format::Json => pretty_json(&rep.to_json()),
        Format::Csv => report_csv(rep)?,
        Format::Pretty => rep.to_pretty(),
    })
}

pub fn pretty_json(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json value serializes");
    s.push('\n');
    s
}

pub fn cg_csv(rows: &[CgRow]) -> Result<String, CliError> {
    csv_string(rows)
}

/// Right-aligned grid of `(re, im)` pairs.
pub fn grid(name: &str, rows: &[Vec<(f64, f64)>]) -> String {
    let cell = |(re, im): (f64, f64)| {
        let clean = |x: f64| if x == 0.0 { 0.0 } else { x };
        if im == 0.0 {
            format!("{:.6}", clean(re))
        } else {
            format!("{:.6}{:+.6}i", clean(re), im)
        }
    };
    let cells: Vec<Vec<String>> = rows.iter().map(|r| r.iter().map(|x| cell(*x)).collect()).collect();
    let width = cells.iter().flatten().map(String::len).max().unwrap_or(1);
    let mut out = format!("{}:\n", name);
    for r in cells {
        let line: Vec<String> = r.iter().map(|c| format!("{:>w$}", c, w = width)).collect();
        out.push_str("  ");
        out.push_str(&line.join("  "));
        out.push('\n');
    }
    out
}

pub fn write_files(dir: &Path, files: &[(String, String)]) -> Result<(), CliError> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {}", dir.display(), e)))?;
    for (name, body) in files {
        let path = dir.join(name);
        std::fs::write(&path, body).map_err(|e| CliError::Io(format!("{}: {}", path.display(), e)))?;
    }
    Ok(())
}
