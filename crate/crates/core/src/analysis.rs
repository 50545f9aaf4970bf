//! Convergence reports: per-action change counts and their CSV form.
//!
//! The CSV layout is fixed: `#`-prefixed provenance lines, the header
//! `action,delta_n,cumulative_n`, then one row per executed action. UTF-8,
//! LF line endings, final line terminated, nothing after it.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use crate::automaton::{RunTrace, Termination};

pub const CSV_HEADER: &str = "action,delta_n,cumulative_n";

/// Where a run came from. Written as comment lines.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Provenance {
    pub seed: u64,
    pub lattice: String,
    pub rule: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReportRow {
    pub action: usize,
    pub delta_n: usize,
    pub cumulative_n: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConvergenceReport {
    pub rows: Vec<ReportRow>,
    pub termination: Termination,
    pub provenance: Provenance,
}

pub fn build_report(trace: &RunTrace, provenance: Provenance) -> ConvergenceReport {
    let rows = trace
        .deltas()
        .iter()
        .zip(trace.cumulative())
        .enumerate()
        .map(|(i, (&delta_n, &cumulative_n))| ReportRow {
            action: i + 1,
            delta_n,
            cumulative_n,
        })
        .collect();
    ConvergenceReport {
        rows,
        termination: trace.termination(),
        provenance,
    }
}

impl ConvergenceReport {
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        let p = &self.provenance;
        writeln!(out, "# seed={}", p.seed)?;
        writeln!(out, "# lattice={}", p.lattice)?;
        writeln!(out, "# rule={}", p.rule)?;
        writeln!(out, "# termination={}", self.termination)?;
        writeln!(out, "{CSV_HEADER}")?;
        for r in &self.rows {
            writeln!(out, "{},{},{}", r.action, r.delta_n, r.cumulative_n)?;
        }
        out.flush()
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)
            .expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("CSV output is ASCII")
    }
}

/// Writes `report` to `path`, replacing any existing file.
pub fn write_csv(report: &ConvergenceReport, path: &Path) -> io::Result<()> {
    report.write_csv(BufWriter::new(File::create(path)?))
}
