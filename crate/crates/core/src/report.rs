//! Report assembly and serialization.
//!
//! Numeric fields are written as decimal strings so that consumers never
//! truncate values above 64 bits. Records are ordered by
//! `(kind, target, p, args)`, so equal configurations give equal bytes.

use std::fmt;
use std::io::Write;
use std::path::Path;
use std::time::Duration;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
    /// An internal consistency check fired (failed exact division,
    /// nonzero ω-component, ...). Counted as a failure.
    Error,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Skipped => "skipped",
            Status::Error => "error",
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RecordKind {
    Congruence,
    Lemma,
    Identity,
}

/// One row of a report, common to congruence, lemma and identity checks.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReportRecord {
    pub kind: RecordKind,
    pub target: String,
    pub p: Option<String>,
    pub b: Option<String>,
    pub c: Option<String>,
    pub x: Option<String>,
    pub args: String,
    pub modulus: Option<String>,
    pub lhs: String,
    pub rhs: String,
    pub residual_valuation: Option<String>,
    pub required_valuation: Option<String>,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    #[serde(skip)]
    pub sort_key: (RecordKind, usize, u64, Vec<i64>),
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Counts {
    pub checked: u64,
    pub passed: u64,
    pub skipped: u64,
    pub failed: u64,
    /// Smallest residual valuation among evaluated records, if any.
    pub min_verified_exponent: Option<i64>,
}

impl Counts {
    fn add(&mut self, r: &ReportRecord) {
        match r.status {
            Status::Skipped => {
                self.skipped += 1;
                return;
            }
            Status::Pass => self.passed += 1,
            Status::Fail | Status::Error => self.failed += 1,
        }
        self.checked += 1;
        if let Some(v) = r.residual_valuation.as_ref().and_then(|v| v.parse::<i64>().ok()) {
            self.min_verified_exponent = Some(self.min_verified_exponent.map_or(v, |m| m.min(v)));
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TargetSummary {
    pub target: String,
    #[serde(flatten)]
    pub counts: Counts,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    #[serde(flatten)]
    pub totals: Counts,
    pub targets: Vec<TargetSummary>,
}

impl Summary {
    pub fn from_records(records: &[ReportRecord]) -> Summary {
        let mut summary = Summary::default();
        for r in records {
            summary.totals.add(r);
            match summary.targets.iter_mut().find(|t| t.target == r.target) {
                Some(t) => t.counts.add(r),
                None => {
                    let mut counts = Counts::default();
                    counts.add(r);
                    summary.targets.push(TargetSummary { target: r.target.clone(), counts });
                }
            }
        }
        summary
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report<C: Serialize> {
    pub version: String,
    pub config: C,
    pub summary: Summary,
    pub notes: Vec<String>,
    pub records: Vec<ReportRecord>,
    /// Not serialized: it would break byte-for-byte reproducibility.
    #[serde(skip)]
    pub wall_time: Duration,
}

impl<C: Serialize> Report<C> {
    pub fn new(config: C, mut records: Vec<ReportRecord>, notes: Vec<String>, wall_time: Duration) -> Self {
        records.sort_by(|a, b| a.sort_key.cmp(&b.sort_key));
        let summary = Summary::from_records(&records);
        Report { version: env!("CARGO_PKG_VERSION").to_string(), config, summary, notes, records, wall_time }
    }

    pub fn all_passed(&self) -> bool {
        self.summary.totals.failed == 0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Csv,
}

pub const CSV_HEADER: &str = "target,p,b,c,lhs,rhs,residual_valuation,status,args";

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn render_csv<C: Serialize>(report: &Report<C>) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in &report.records {
        let opt = |v: &Option<String>| v.clone().unwrap_or_default();
        let fields = [
            r.target.clone(),
            opt(&r.p),
            opt(&r.b),
            opt(&r.c),
            r.lhs.clone(),
            r.rhs.clone(),
            opt(&r.residual_valuation),
            r.status.to_string(),
            r.args.clone(),
        ];
        let line: Vec<String> = fields.iter().map(|f| csv_field(f)).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    out
}

pub fn render_json<C: Serialize>(report: &Report<C>) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("report serializes");
    s.push('\n');
    s
}

pub fn render<C: Serialize>(report: &Report<C>, format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => render_json(report),
        OutputFormat::Csv => render_csv(report),
    }
}

/// Write the report to `path`, or to stdout when `path` is `None`.
pub fn emit_report<C: Serialize>(report: &Report<C>, format: OutputFormat, path: Option<&Path>) -> std::io::Result<()> {
    let text = render(report, format);
    match path {
        Some(path) => std::fs::write(path, text),
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            lock.write_all(text.as_bytes())?;
            lock.flush()
        }
    }
}
