//! Flat verification records with a single schema across all sweeps, and
//! deterministic CSV/JSON serialization.

use std::io::Write;

use serde::Serialize;

use crate::error::{Error, Result};

/// What a record's `allowed` value means.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    /// A certified bound; failures are hard failures.
    PaperBound,
    /// An artifact-level pin on measured behavior, tighter than any
    /// certified bound; failures only matter in strict mode.
    RegressionGuard,
    /// Slack attributable to the measuring oracle, not the claim itself.
    OracleInstrument,
}

impl Provenance {
    pub fn label(&self) -> &'static str {
        match self {
            Provenance::PaperBound => "paper_bound",
            Provenance::RegressionGuard => "regression_guard",
            Provenance::OracleInstrument => "oracle_instrument",
        }
    }
}

/// One verification outcome. Optional fields stay empty in CSV when not
/// applicable to the check.
#[derive(Debug, Clone, Serialize)]
pub struct VerificationRecord {
    pub check_id: String,
    pub m: Option<u64>,
    pub x: Option<f64>,
    pub tau: Option<f64>,
    pub a: Option<u64>,
    pub z: Option<f64>,
    pub measured: f64,
    pub allowed: f64,
    pub passed: bool,
    pub provenance: Provenance,
}

impl VerificationRecord {
    pub fn new(check_id: impl Into<String>, measured: f64, allowed: f64) -> Self {
        Self {
            check_id: check_id.into(),
            m: None,
            x: None,
            tau: None,
            a: None,
            z: None,
            measured,
            allowed,
            passed: measured <= allowed,
            provenance: Provenance::PaperBound,
        }
    }

    pub fn with_m(mut self, m: u64) -> Self {
        self.m = Some(m);
        self
    }

    pub fn with_x(mut self, x: f64) -> Self {
        self.x = Some(x);
        self
    }

    pub fn with_tau(mut self, tau: f64) -> Self {
        self.tau = Some(tau);
        self
    }

    pub fn with_a(mut self, a: u64) -> Self {
        self.a = Some(a);
        self
    }

    pub fn with_z(mut self, z: f64) -> Self {
        self.z = Some(z);
        self
    }

    pub fn with_provenance(mut self, provenance: Provenance) -> Self {
        self.provenance = provenance;
        self
    }

    /// Override the pass flag (for checks that are not plain <= tests,
    /// e.g. equality within tolerance or skip markers).
    pub fn with_passed(mut self, passed: bool) -> Self {
        self.passed = passed;
        self
    }

    fn sort_key(&self) -> (String, u64, u64, u64, u64, u64) {
        (
            self.check_id.clone(),
            self.m.unwrap_or(0),
            self.x.unwrap_or(0.0).to_bits(),
            self.tau.unwrap_or(0.0).to_bits(),
            self.a.unwrap_or(0),
            self.z.unwrap_or(0.0).to_bits(),
        )
    }
}

/// An ordered batch of records plus the summary predicates the CLI's exit
/// code contract needs.
#[derive(Debug, Clone, Default)]
pub struct VerificationReport {
    records: Vec<VerificationRecord>,
}

impl VerificationReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, record: VerificationRecord) {
        self.records.push(record);
    }

    pub fn extend(&mut self, records: impl IntoIterator<Item = VerificationRecord>) {
        self.records.extend(records);
    }

    /// Records sorted by (check_id, m, x, tau, a, z) for determinism.
    pub fn records(&self) -> Vec<VerificationRecord> {
        let mut out = self.records.clone();
        out.sort_by_key(|l| l.sort_key());
        out
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn all_paper_passed(&self) -> bool {
        self.records
            .iter()
            .filter(|r| r.provenance == Provenance::PaperBound)
            .all(|r| r.passed)
    }

    pub fn all_passed(&self) -> bool {
        self.records.iter().all(|r| r.passed)
    }

    pub fn failures(&self) -> Vec<&VerificationRecord> {
        self.records.iter().filter(|r| !r.passed).collect()
    }

    /// Fixed-schema CSV: check_id, m, x, tau, a, z, measured, allowed,
    /// passed, provenance; empty cells for non-applicable params.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut csv = csv::Writer::from_writer(writer);
        csv.write_record([
            "check_id", "m", "x", "tau", "a", "z", "measured", "allowed", "passed", "provenance",
        ])
        .map_err(|e| Error::Oracle(format!("csv write failed: {e}")))?;
        let opt_u = |v: Option<u64>| v.map(|v| v.to_string()).unwrap_or_default();
        let opt_f = |v: Option<f64>| v.map(fmt_real).unwrap_or_default();
        for r in self.records() {
            csv.write_record([
                r.check_id.clone(),
                opt_u(r.m),
                opt_f(r.x),
                opt_f(r.tau),
                opt_u(r.a),
                opt_f(r.z),
                fmt_real(r.measured),
                fmt_real(r.allowed),
                r.passed.to_string(),
                r.provenance.label().to_string(),
            ])
            .map_err(|e| Error::Oracle(format!("csv write failed: {e}")))?;
        }
        csv.flush().map_err(|e| Error::Oracle(format!("csv flush failed: {e}")))?;
        Ok(())
    }

    /// Flat JSON array with the same keys as the CSV columns.
    pub fn write_json<W: Write>(&self, mut writer: W) -> Result<()> {
        serde_json::to_writer_pretty(&mut writer, &self.records())
            .map_err(|e| Error::Oracle(format!("json write failed: {e}")))?;
        writeln!(writer).map_err(|e| Error::Oracle(format!("json write failed: {e}")))?;
        Ok(())
    }
}

/// Shortest round-trip decimal form, so reports are bit-faithful.
fn fmt_real(v: f64) -> String {
    format!("{v}")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> VerificationReport {
        let mut report = VerificationReport::new();
        report.push(
            VerificationRecord::new("b_check", 0.5, 1.0)
                .with_m(1000)
                .with_tau(2.0),
        );
        report.push(
            VerificationRecord::new("a_check", 2.0, 1.0)
                .with_m(100)
                .with_provenance(Provenance::RegressionGuard),
        );
        report.push(VerificationRecord::new("a_check", 0.1, 1.0).with_m(10).with_z(-1.5));
        report
    }

    #[test]
    fn pass_flag_follows_bound() {
        let r = VerificationRecord::new("x", 0.2, 0.1);
        assert!(!r.passed);
        let r = VerificationRecord::new("x", 0.1, 0.1);
        assert!(r.passed);
    }

    #[test]
    fn paper_summary_ignores_guards() {
        let report = sample();
        assert!(report.all_paper_passed());
        assert!(!report.all_passed());
        assert_eq!(report.failures().len(), 1);
    }

    #[test]
    fn records_are_sorted() {
        let records = sample().records();
        assert_eq!(records[0].check_id, "a_check");
        assert_eq!(records[0].m, Some(10));
        assert_eq!(records[1].m, Some(100));
        assert_eq!(records[2].check_id, "b_check");
    }

    #[test]
    fn csv_schema_and_empty_cells() {
        let mut buf = Vec::new();
        sample().write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(
            lines.next().unwrap(),
            "check_id,m,x,tau,a,z,measured,allowed,passed,provenance"
        );
        let first = lines.next().unwrap();
        assert!(first.starts_with("a_check,10,,,,-1.5,"));
        assert!(text.contains("regression_guard"));
        assert_eq!(text.lines().count(), 4);
    }

    #[test]
    fn csv_is_deterministic() {
        let mut a = Vec::new();
        let mut b = Vec::new();
        sample().write_csv(&mut a).unwrap();
        sample().write_csv(&mut b).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn json_is_flat_array() {
        let mut buf = Vec::new();
        sample().write_json(&mut buf).unwrap();
        let parsed: serde_json::Value = serde_json::from_slice(&buf).unwrap();
        let array = parsed.as_array().unwrap();
        assert_eq!(array.len(), 3);
        assert!(array[0].get("check_id").is_some());
        assert!(array[0].get("provenance").is_some());
        assert_eq!(array[1]["provenance"], "regression_guard");
    }
}
