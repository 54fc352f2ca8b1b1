//! Certificates and certification suites.
//!
//! A [`Certificate`] records one exact comparison; [`run_suite`] runs every
//! check for a configuration and collects them into a [`Report`], which
//! [`emit_report`] writes as JSON or CSV.
//!
//! JSON layout (`schema_version` 1):
//!
//! ```text
//! {
//!   "schema_version": 1,
//!   "generated_at": "2026-01-01T00:00:00Z",     (absent without timestamps)
//!   "config": { "K": "12", "M": "10", ... },
//!   "summary": { "total": .., "passed": .., "failed": .. },
//!   "suites": [ { "name": "weights", "elapsed_ms": 3, "certificates": [..] }, .. ],
//!   "curves": {
//!     "orbit":    [ { "space": "l1", "m": 1, "bound": "..", "residual_norm_hi": ".." }, .. ],
//!     "distance": [ { "target": 1, "N": 1, "bound": "..", "distance_hi": ".." }, .. ]
//!   }
//! }
//! ```
//!
//! Suites appear in the order weights, unboundedness, schedule, orbit,
//! periodic, distance; the schedule, orbit and distance suites are omitted
//! when `M = 0`. Every exact value is a string.
//!
//! CSV columns: `csv-summary` has `suite,name,verdict,lhs,relation,rhs,lhs_approx,rhs_approx`
//! (one row per certificate); `csv-curves` has
//! `series,key,x,bound,value_hi,bound_approx,value_hi_approx` with series
//! `orbit` (key = space, x = m) and `distance` (key = `y<target>`, x = N).

mod certificate;
mod report;
mod suite;

pub use certificate::{Certificate, Operand, Relation, Verdict};
pub use report::{
    emit_report, Curves, DistancePoint, OrbitPoint, Report, ReportFormat, SuiteResult, Summary, SCHEMA_VERSION,
};
pub use suite::{default_head, run_suite, SuiteConfig};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CertifyError {
    #[error("unknown report format `{0}` (expected json, csv-summary or csv-curves)")]
    UnknownFormat(String),
    #[error("unsupported report schema version {0}")]
    Schema(u32),
    #[error("malformed report: {0}")]
    Json(String),
    #[error("csv output failed: {0}")]
    Csv(String),
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> SuiteConfig {
        SuiteConfig {
            targets: 4,
            blocks: 4,
            periods: vec![1, 2, 3],
            n_max: 5,
            weight_prefix: 20,
            ..SuiteConfig::default()
        }
    }

    #[test]
    fn small_suite_passes_and_rechecks() {
        let report = run_suite(&small());
        assert!(report.passed(), "{:?}", report.certificates().find(|c| !c.passed()));
        let names: Vec<&str> = report.suites.iter().map(|s| s.name.as_str()).collect();
        assert_eq!(names, ["weights", "unboundedness", "schedule", "orbit", "periodic", "distance"]);
        let json = String::from_utf8(emit_report(&report, ReportFormat::Json).unwrap()).unwrap();
        let back = Report::from_json(&json).unwrap();
        assert_eq!(back, report);
        assert!(back.recheck());
    }

    #[test]
    fn flat_weights_fail_the_weight_suite() {
        let config = SuiteConfig {
            weights: "table:[1,1,1];tail=claim:5".parse().unwrap(),
            targets: 2,
            search_cap: 50,
            ..small()
        };
        let report = run_suite(&config);
        assert!(!report.passed());
        let weights = report.suite("weights").unwrap();
        assert!(weights.certificates.iter().any(|c| !c.passed() && c.name.starts_with("weights.summable")));
        assert!(report.recheck());
    }

    #[test]
    fn no_targets_leaves_weight_and_unboundedness_suites() {
        let config = SuiteConfig {
            targets: 0,
            periods: vec![],
            ..small()
        };
        let report = run_suite(&config);
        let names: Vec<&str> = report
            .suites
            .iter()
            .filter(|s| !s.certificates.is_empty())
            .map(|s| s.name.as_str())
            .collect();
        assert_eq!(names, ["weights", "unboundedness"]);
        assert!(report.passed());
    }

    #[test]
    fn parallel_run_is_identical() {
        let serial = run_suite(&small());
        let parallel = run_suite(&SuiteConfig {
            parallel: true,
            ..small()
        });
        assert_eq!(serial, parallel);
    }

    #[test]
    fn csv_outputs() {
        let mut config = small();
        config.spaces = vec!["l1".parse().unwrap(), "c0".parse().unwrap()];
        let report = run_suite(&config);
        let summary = String::from_utf8(emit_report(&report, ReportFormat::CsvSummary).unwrap()).unwrap();
        assert_eq!(summary.lines().count(), report.summary.total + 1);
        let curves = String::from_utf8(emit_report(&report, ReportFormat::CsvCurves).unwrap()).unwrap();
        let mut reader = csv::Reader::from_reader(curves.as_bytes());
        let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
        assert_eq!(rows.iter().filter(|r| &r[0] == "orbit").count(), 8);
        for series in ["orbit", "distance"] {
            let xs: Vec<(String, usize)> = rows
                .iter()
                .filter(|r| &r[0] == series)
                .map(|r| (r[1].to_string(), r[2].parse().unwrap()))
                .collect();
            assert!(xs.windows(2).all(|w| w[0] <= w[1]), "{series}: {xs:?}");
        }
        assert_eq!("xml".parse::<ReportFormat>(), Err(CertifyError::UnknownFormat("xml".into())));
    }
}
