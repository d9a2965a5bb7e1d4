//! Tables emitted by the commands, in text, JSON or CSV.

use std::fmt::Write as _;

use anyhow::Result;
use clap::ValueEnum;
use qhom_core::verify::{VerificationReport, Verdict};
use qhom_core::{GroupSummary, Int};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Json,
    Csv,
}

/// One computed group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Row {
    pub rack: String,
    pub theory: String,
    pub n: usize,
    pub free_rank: usize,
    pub torsion: Vec<Int>,
    pub time_ms: u64,
}

impl Row {
    pub fn new(rack: &str, theory: &str, n: usize, group: &GroupSummary, time_ms: u64) -> Self {
        Row {
            rack: rack.to_string(),
            theory: theory.to_string(),
            n,
            free_rank: group.free_rank,
            torsion: group.torsion.clone(),
            time_ms,
        }
    }

    pub fn group(&self) -> GroupSummary {
        GroupSummary { free_rank: self.free_rank, torsion: self.torsion.clone() }
    }
}

#[derive(Serialize)]
struct CsvRow<'a> {
    rack: &'a str,
    theory: &'a str,
    n: usize,
    free_rank: usize,
    torsion: String,
    time_ms: u64,
}

/// JSON is always an array of rows.
pub fn rows_json(rows: &[Row]) -> Result<String> {
    Ok(serde_json::to_string_pretty(rows)? + "\n")
}

pub fn rows_from_json(text: &str) -> Result<Vec<Row>> {
    Ok(serde_json::from_str(text)?)
}

/// Torsion is a space-separated list in one column.
pub fn rows_csv(rows: &[Row]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        let torsion: Vec<String> = r.torsion.iter().map(Int::to_string).collect();
        w.serialize(CsvRow {
            rack: &r.rack,
            theory: &r.theory,
            n: r.n,
            free_rank: r.free_rank,
            torsion: torsion.join(" "),
            time_ms: r.time_ms,
        })?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

/// A single row prints as the bare group, several as `H_n = ...` lines.
pub fn rows_text(rows: &[Row], symbol: &str) -> String {
    if let [row] = rows {
        return format!("{}\n", row.group());
    }
    let mut s = String::new();
    for r in rows {
        let _ = writeln!(s, "{symbol}_{} = {}", r.n, r.group());
    }
    s
}

pub fn render_rows(rows: &[Row], format: Format, symbol: &str) -> Result<String> {
    match format {
        Format::Text => Ok(rows_text(rows, symbol)),
        Format::Json => rows_json(rows),
        Format::Csv => rows_csv(rows),
    }
}

#[derive(Serialize)]
struct CsvReport<'a> {
    id: &'a str,
    rack: &'a str,
    theory: &'a str,
    degrees: String,
    expected: &'a str,
    computed: &'a str,
    verdict: Verdict,
    time_ms: u64,
}

#[derive(Default)]
pub struct Tally {
    pub matches: usize,
    pub findings: usize,
    pub mismatches: usize,
}

impl Tally {
    pub fn of(reports: &[VerificationReport]) -> Self {
        let mut t = Tally::default();
        for r in reports {
            match r.verdict {
                Verdict::Match => t.matches += 1,
                Verdict::Finding => t.findings += 1,
                Verdict::Mismatch => t.mismatches += 1,
            }
        }
        t
    }
}

pub fn render_reports(reports: &[VerificationReport], format: Format) -> Result<String> {
    match format {
        Format::Json => Ok(serde_json::to_string_pretty(reports)? + "\n"),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for r in reports {
                let degrees: Vec<String> = r.inputs.degrees.iter().map(usize::to_string).collect();
                w.serialize(CsvReport {
                    id: &r.id,
                    rack: &r.inputs.rack,
                    theory: &r.inputs.theory,
                    degrees: degrees.join(" "),
                    expected: &r.expected,
                    computed: &r.computed,
                    verdict: r.verdict,
                    time_ms: r.time_ms,
                })?;
            }
            Ok(String::from_utf8(w.into_inner()?)?)
        }
        Format::Text => {
            let width = reports.iter().map(|r| r.id.len()).max().unwrap_or(0);
            let mut s = String::new();
            for r in reports {
                let _ = writeln!(s, "{:<8} {:>8}ms  {:<width$}  expected: {}", r.verdict, r.time_ms, r.id, r.expected);
                let _ = writeln!(s, "{:<8} {:>10}  {:<width$}  computed: {}", "", "", "", r.computed);
            }
            let t = Tally::of(reports);
            let total: u64 = reports.iter().map(|r| r.time_ms).sum();
            let _ = writeln!(
                s,
                "{} checks: {} match, {} finding, {} mismatch ({total}ms)",
                reports.len(),
                t.matches,
                t.findings,
                t.mismatches
            );
            Ok(s)
        }
    }
}
