use std::collections::BTreeMap;
use std::time::Instant;

use rayon::prelude::*;

use crate::constructions::{
    hypercyclic_prefix, orbit_visit, periodic_fixpoint_check, periodic_point, periodic_point_distance,
    schedule_from_enumeration, target_metadata, DenseEnumeration, HypercyclicPrefix, OrbitVisit, Schedule,
    DEFAULT_SEARCH_CAP,
};
use crate::operators::{ShiftOperator, WeightSequence};
use crate::scalars::{Field, Scalar};
use crate::spaces::{SpaceSpec, DEFAULT_PRECISION};

use super::report::{Curves, DistancePoint, OrbitPoint, Report, SuiteResult, Summary, SCHEMA_VERSION};
use super::{Certificate, Relation};

/// Everything a certification run depends on.
#[derive(Debug, Clone, PartialEq)]
pub struct SuiteConfig {
    pub weights: WeightSequence,
    /// Orbit residuals are certified in each space; the first one also hosts
    /// the unboundedness table and periodic distances.
    pub spaces: Vec<SpaceSpec>,
    pub precision: u32,
    /// `M`: number of enumeration targets.
    pub targets: usize,
    /// `K`: tail blocks materialized per periodic point.
    pub blocks: usize,
    pub periods: Vec<usize>,
    /// Explicit periodic heads; when empty each period `N` gets
    /// `x_m = (-1)^(m+1)/m`.
    pub heads: Vec<Vec<Scalar>>,
    pub n_max: usize,
    /// Prefix length for the weight-condition certificates.
    pub weight_prefix: usize,
    pub search_cap: usize,
    pub field: Field,
    pub parallel: bool,
    /// Record wall-clock data (timestamp and per-suite timings).
    pub timestamp: bool,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            weights: "exp:2".parse().expect("valid weights"),
            spaces: vec![SpaceSpec::l1()],
            precision: DEFAULT_PRECISION,
            targets: 10,
            blocks: 12,
            periods: (1..=5).collect(),
            heads: Vec::new(),
            n_max: 12,
            weight_prefix: 200,
            search_cap: DEFAULT_SEARCH_CAP,
            field: Field::Real,
            parallel: false,
            timestamp: false,
        }
    }
}

fn join<T: ToString>(items: &[T], sep: &str) -> String {
    items.iter().map(ToString::to_string).collect::<Vec<_>>().join(sep)
}

impl SuiteConfig {
    /// The configuration as `key → value` strings.
    pub fn echo(&self) -> BTreeMap<String, String> {
        let heads: Vec<String> = self.heads.iter().map(|h| join(h, ",")).collect();
        [
            ("weights", self.weights.to_string()),
            ("space", join(&self.spaces, ",")),
            ("precision", self.precision.to_string()),
            ("M", self.targets.to_string()),
            ("K", self.blocks.to_string()),
            ("N", join(&self.periods, ",")),
            ("heads", heads.join(";")),
            ("n_max", self.n_max.to_string()),
            ("weight_prefix", self.weight_prefix.to_string()),
            ("search_cap", self.search_cap.to_string()),
            (
                "field",
                match self.field {
                    Field::Real => "real".to_string(),
                    Field::Complex => "complex".to_string(),
                },
            ),
        ]
        .into_iter()
        .map(|(k, v)| (k.to_string(), v))
        .collect()
    }

    fn spaces(&self) -> Vec<SpaceSpec> {
        self.spaces
            .iter()
            .map(|s| s.clone().with_precision(self.precision))
            .collect()
    }

    fn primary(&self) -> ShiftOperator {
        let space = self.spaces().into_iter().next().unwrap_or_else(SpaceSpec::l1);
        ShiftOperator::new(self.weights.clone(), space)
    }

    fn periodic_heads(&self) -> Vec<Vec<Scalar>> {
        if !self.heads.is_empty() {
            return self.heads.clone();
        }
        self.periods.iter().map(|&n| default_head(n)).collect()
    }
}

/// `x_m = (-1)^(m+1)/m` for `m = 1..N`.
pub fn default_head(n: usize) -> Vec<Scalar> {
    (1..=n as i64)
        .map(|m| Scalar::ratio(if m % 2 == 1 { 1 } else { -1 }, m))
        .collect()
}

fn maybe_par<T, R, F>(parallel: bool, items: Vec<T>, f: F) -> Vec<R>
where
    T: Send,
    R: Send,
    F: Fn(T) -> R + Sync + Send,
{
    if parallel {
        items.into_par_iter().map(f).collect()
    } else {
        items.into_iter().map(f).collect()
    }
}

struct Timer {
    enabled: bool,
    start: Instant,
}

impl Timer {
    fn start(enabled: bool) -> Self {
        Timer {
            enabled,
            start: Instant::now(),
        }
    }

    fn finish(self, name: &str, certificates: Vec<Certificate>) -> SuiteResult {
        SuiteResult {
            name: name.to_string(),
            elapsed_ms: self.enabled.then(|| self.start.elapsed().as_millis() as u64),
            certificates,
        }
    }
}

fn weight_suite(config: &SuiteConfig) -> Vec<Certificate> {
    let conditions = config.weights.check_conditions(config.weight_prefix.max(2));
    let mut certs: Vec<Certificate> = conditions.certificates().cloned().collect();
    if let Some(v) = &conditions.violation {
        certs.push(Certificate::error(
            "weights.violation",
            "weights satisfy 1 <= |w_1| <= |w_2| <= ... and sum |w_k|^-1 < infinity",
            v,
        ));
    }
    certs
}

fn unboundedness_suite(op: &ShiftOperator, n_max: usize) -> Vec<Certificate> {
    let witnesses: Vec<_> = (1..=n_max).map(|n| op.unboundedness_witness(n)).collect();
    let mut certs = Vec::new();
    for (i, w) in witnesses.iter().enumerate() {
        let n = w.n;
        certs.push(
            Certificate::compare(
                format!("unbounded.witness[{n}]"),
                format!("||A^{n} e_{}|| >= |w_{n}| in {}", 2 * n, op.space()),
                w.value.lo.clone(),
                Relation::Ge,
                w.floor.hi.clone(),
            )
            .with("n", n)
            .with("space", op.space()),
        );
        if i > 0 {
            certs.push(
                Certificate::compare(
                    format!("unbounded.increasing[{n}]"),
                    format!("||A^{n} e_{}|| > ||A^{} e_{}||", 2 * n, n - 1, 2 * (n - 1)),
                    w.value.lo.clone(),
                    Relation::Gt,
                    witnesses[i - 1].value.hi.clone(),
                )
                .with("n", n)
                .with("space", op.space()),
            );
        }
    }
    certs
}

fn orbit_suite(
    config: &SuiteConfig,
    schedule: &Schedule,
    curves: &mut Vec<OrbitPoint>,
) -> Vec<Certificate> {
    let spaces = config.spaces();
    let primary = config.primary();
    let prefix: HypercyclicPrefix = match hypercyclic_prefix(&primary, schedule, config.targets) {
        Ok(p) => p,
        Err(e) => return vec![Certificate::error("prefix", "x_M is constructible", e)],
    };
    let mut certs = prefix.certificates.clone();
    let visits: Vec<Result<OrbitVisit, Certificate>> =
        maybe_par(config.parallel, (1..=config.targets).collect(), |m| {
            orbit_visit(&primary, &prefix, m)
                .map_err(|e| Certificate::error(format!("orbit.visit[{m}]"), "A^(n_m) x_M is computable", e))
        });
    for visit in &visits {
        match visit {
            Ok(v) => {
                certs.extend(v.certificates.iter().cloned());
                curves.push(OrbitPoint::new(primary.space(), v.m, &v.bound, &v.residual_norm.hi));
            }
            Err(c) => certs.push(c.clone()),
        }
    }
    for space in spaces.iter().skip(1) {
        let op = primary.with_space(space.clone());
        match hypercyclic_prefix(&op, schedule, config.targets) {
            Ok(p) => certs.extend(
                p.certificates
                    .into_iter()
                    .filter(|c| c.context.contains_key("space")),
            ),
            Err(e) => certs.push(Certificate::error(format!("prefix[{space}]"), "x_M is constructible", e)),
        }
        for v in visits.iter().flatten() {
            let (norm, cert) = v.residual_certificate(space);
            curves.push(OrbitPoint::new(space, v.m, &v.bound, &norm.hi));
            certs.push(cert);
        }
    }
    certs
}

fn periodic_suite(config: &SuiteConfig) -> Vec<Certificate> {
    let weights = &config.weights;
    let blocks = config.blocks;
    maybe_par(config.parallel, config.periodic_heads(), |head| {
        let n = head.len();
        match periodic_point(weights, head, blocks) {
            Ok(pp) => {
                let mut certs = vec![periodic_fixpoint_check(weights, &pp)];
                certs.extend(pp.block_mass_certificates(weights));
                certs
            }
            Err(e) => vec![Certificate::error(format!("periodic.build[N={n}]"), "periodic point is constructible", e)],
        }
    })
    .into_iter()
    .flatten()
    .collect()
}

fn distance_suite(config: &SuiteConfig, schedule: &Schedule, curves: &mut Vec<DistancePoint>) -> Vec<Certificate> {
    let op = config.primary();
    let jobs: Vec<(usize, usize)> = (1..=schedule.len())
        .flat_map(|m| {
            let k = target_metadata(schedule.target(m)).k.max(1);
            let mut periods: Vec<usize> = config.periods.iter().copied().filter(|&n| n >= k).collect();
            if periods.is_empty() {
                periods.push(k);
            }
            periods.into_iter().map(move |n| (m, n))
        })
        .collect();
    let results = maybe_par(config.parallel, jobs, |(m, n)| {
        let y = schedule.target(m);
        let out = periodic_point_distance(&op, y, n, config.blocks);
        (m, n, out)
    });
    let mut certs = Vec::new();
    for (m, n, out) in results {
        match out {
            Ok(d) => {
                curves.push(DistancePoint::new(m, n, &d.bound, &d.distance.hi));
                certs.push(d.certificate.with("target", m));
            }
            Err(e) => certs.push(
                Certificate::error(format!("periodic.distance[N={n}]"), "distance bound is computable", e)
                    .with("target", m),
            ),
        }
    }
    certs
}

/// Runs every suite in a fixed order. Failures of any kind become failing
/// certificates, so the run itself never aborts.
pub fn run_suite(config: &SuiteConfig) -> Report {
    let mut suites = Vec::new();
    let mut curves = Curves::default();
    let primary = config.primary();

    let t = Timer::start(config.timestamp);
    suites.push(t.finish("weights", weight_suite(config)));

    let t = Timer::start(config.timestamp);
    suites.push(t.finish("unboundedness", unboundedness_suite(&primary, config.n_max)));

    let schedule = if config.targets == 0 {
        None
    } else {
        let t = Timer::start(config.timestamp);
        let enumeration = DenseEnumeration::new(config.field);
        let built = schedule_from_enumeration(&config.weights, &enumeration, config.targets, config.search_cap);
        let (certs, schedule) = match built {
            Ok(s) => (s.certificates.clone(), Some(s)),
            Err(e) => (vec![Certificate::error("schedule", "an admissible schedule exists", e)], None),
        };
        suites.push(t.finish("schedule", certs));
        schedule
    };

    if let Some(schedule) = &schedule {
        let t = Timer::start(config.timestamp);
        suites.push(t.finish("orbit", orbit_suite(config, schedule, &mut curves.orbit)));
    }

    let t = Timer::start(config.timestamp);
    suites.push(t.finish("periodic", periodic_suite(config)));

    if let Some(schedule) = &schedule {
        let t = Timer::start(config.timestamp);
        suites.push(t.finish("distance", distance_suite(config, schedule, &mut curves.distance)));
    }

    curves.sort();
    let summary = Summary::tally(&suites);
    Report {
        schema_version: SCHEMA_VERSION,
        generated_at: config
            .timestamp
            .then(|| chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true)),
        config: config.echo(),
        summary,
        suites,
        curves,
    }
}
