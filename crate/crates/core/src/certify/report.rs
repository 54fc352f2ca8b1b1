use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::scalars::{Rational, Scalar};
use crate::spaces::SpaceSpec;

use super::{Certificate, CertifyError};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteResult {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
    pub certificates: Vec<Certificate>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
}

impl Summary {
    pub fn tally(suites: &[SuiteResult]) -> Summary {
        let total = suites.iter().map(|s| s.certificates.len()).sum();
        let passed = suites
            .iter()
            .flat_map(|s| &s.certificates)
            .filter(|c| c.passed())
            .count();
        Summary {
            total,
            passed,
            failed: total - passed,
        }
    }
}

/// Residual norm against its bound at visit `m`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitPoint {
    pub space: String,
    pub m: usize,
    pub bound: String,
    pub residual_norm_hi: String,
}

impl OrbitPoint {
    pub fn new(space: &SpaceSpec, m: usize, bound: &Rational, residual_norm_hi: &Rational) -> Self {
        OrbitPoint {
            space: space.to_string(),
            m,
            bound: bound.to_string(),
            residual_norm_hi: residual_norm_hi.to_string(),
        }
    }
}

/// Distance from target `y^(target)` to a periodic point of period `n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistancePoint {
    pub target: usize,
    #[serde(rename = "N")]
    pub n: usize,
    pub bound: String,
    pub distance_hi: String,
}

impl DistancePoint {
    pub fn new(target: usize, n: usize, bound: &Rational, distance_hi: &Rational) -> Self {
        DistancePoint {
            target,
            n,
            bound: bound.to_string(),
            distance_hi: distance_hi.to_string(),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Curves {
    pub orbit: Vec<OrbitPoint>,
    pub distance: Vec<DistancePoint>,
}

impl Curves {
    /// Orders each series by its key and then by the independent variable.
    pub fn sort(&mut self) {
        self.orbit.sort_by(|a, b| (&a.space, a.m).cmp(&(&b.space, b.m)));
        self.distance.sort_by_key(|d| (d.target, d.n));
    }
}

/// Result of a certification run; see [`run_suite`](super::run_suite).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generated_at: Option<String>,
    pub config: BTreeMap<String, String>,
    pub summary: Summary,
    pub suites: Vec<SuiteResult>,
    pub curves: Curves,
}

impl Report {
    pub fn certificates(&self) -> impl Iterator<Item = &Certificate> {
        self.suites.iter().flat_map(|s| &s.certificates)
    }

    pub fn passed(&self) -> bool {
        self.summary.failed == 0 && self.certificates().all(Certificate::passed)
    }

    pub fn suite(&self, name: &str) -> Option<&SuiteResult> {
        self.suites.iter().find(|s| s.name == name)
    }

    /// Summary matches the certificate list and every certificate re-checks
    /// to its recorded verdict.
    pub fn recheck(&self) -> bool {
        self.summary == Summary::tally(&self.suites) && self.certificates().all(Certificate::is_consistent)
    }

    pub fn from_json(json: &str) -> Result<Report, CertifyError> {
        let report: Report = serde_json::from_str(json).map_err(|e| CertifyError::Json(e.to_string()))?;
        if report.schema_version != SCHEMA_VERSION {
            return Err(CertifyError::Schema(report.schema_version));
        }
        Ok(report)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    CsvSummary,
    CsvCurves,
}

impl FromStr for ReportFormat {
    type Err = CertifyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "json" => Ok(ReportFormat::Json),
            "csv-summary" => Ok(ReportFormat::CsvSummary),
            "csv-curves" => Ok(ReportFormat::CsvCurves),
            other => Err(CertifyError::UnknownFormat(other.to_string())),
        }
    }
}

impl fmt::Display for ReportFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ReportFormat::Json => "json",
            ReportFormat::CsvSummary => "csv-summary",
            ReportFormat::CsvCurves => "csv-curves",
        })
    }
}

/// Decimal rendering of an exact real value for plotting; empty when the
/// string is not a real scalar or is out of `f64` range.
fn approx(exact: &str) -> String {
    let value = match exact.parse::<Scalar>() {
        Ok(Scalar::Real(r)) => r.to_f64(),
        _ => None,
    };
    match value {
        Some(x) if x.is_finite() => format!("{x:e}"),
        _ => String::new(),
    }
}

fn csv_error(e: impl fmt::Display) -> CertifyError {
    CertifyError::Csv(e.to_string())
}

fn summary_csv(report: &Report) -> Result<Vec<u8>, CertifyError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["suite", "name", "verdict", "lhs", "relation", "rhs", "lhs_approx", "rhs_approx"])
        .map_err(csv_error)?;
    for suite in &report.suites {
        for c in &suite.certificates {
            let relation = c.relation.to_string();
            let verdict = c.verdict.to_string();
            w.write_record([
                suite.name.as_str(),
                &c.name,
                &verdict,
                &c.lhs,
                &relation,
                &c.rhs,
                &approx(&c.lhs),
                &approx(&c.rhs),
            ])
            .map_err(csv_error)?;
        }
    }
    w.into_inner().map_err(csv_error)
}

fn curves_csv(report: &Report) -> Result<Vec<u8>, CertifyError> {
    let mut curves = report.curves.clone();
    curves.sort();
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["series", "key", "x", "bound", "value_hi", "bound_approx", "value_hi_approx"])
        .map_err(csv_error)?;
    for p in &curves.orbit {
        let m = p.m.to_string();
        w.write_record([
            "orbit",
            &p.space,
            &m,
            &p.bound,
            &p.residual_norm_hi,
            &approx(&p.bound),
            &approx(&p.residual_norm_hi),
        ])
        .map_err(csv_error)?;
    }
    for d in &curves.distance {
        let (key, n) = (format!("y{}", d.target), d.n.to_string());
        w.write_record([
            "distance",
            &key,
            &n,
            &d.bound,
            &d.distance_hi,
            &approx(&d.bound),
            &approx(&d.distance_hi),
        ])
        .map_err(csv_error)?;
    }
    w.into_inner().map_err(csv_error)
}

/// Serializes a report. JSON is pretty-printed with a trailing newline.
pub fn emit_report(report: &Report, format: ReportFormat) -> Result<Vec<u8>, CertifyError> {
    match format {
        ReportFormat::Json => {
            let mut out = serde_json::to_vec_pretty(report).map_err(|e| CertifyError::Json(e.to_string()))?;
            out.push(b'\n');
            Ok(out)
        }
        ReportFormat::CsvSummary => summary_csv(report),
        ReportFormat::CsvCurves => curves_csv(report),
    }
}
