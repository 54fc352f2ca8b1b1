//! The `hypershift` command line. Each subcommand parses its options into a
//! [`Config`], calls the library, and prints what it got back.
//!
//! Settings come from an optional `--config` file of `key = value` lines
//! (see `crates/core/configs/reference.conf`), overlaid by flags: a flag always wins over
//! the file. Exit status is 0 when every certificate printed passes, 1 when
//! one fails, and 2 on a usage or configuration error.

mod config;

pub use config::{parse_head, Config, ConfigError, RawConfig, KEYS, OUT_DIR_VAR};

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::certify::{emit_report, run_suite, Certificate};
use crate::constructions::{
    build_schedule, hypercyclic_prefix, orbit_visit, periodic_fixpoint_check, periodic_point, periodic_point_distance,
    DenseEnumeration,
};
use crate::operators::ShiftOperator;
use crate::spaces::CoordVector;

#[derive(Debug, Parser)]
#[command(name = "hypershift", version, about = "Exact certification of chaotic weighted backward shifts")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run every certification suite and write the report.
    Certify(Common),
    /// Visit target m along the orbit of the hypercyclic prefix x_M.
    Orbit {
        #[command(flatten)]
        common: Common,
        /// Target index, 1..=M.
        #[arg(long)]
        m: usize,
    },
    /// Build a periodic point, check A^N x = x and its distance bound.
    Periodic {
        #[command(flatten)]
        common: Common,
        /// Head coefficients x_1,...,x_N; N defaults to their count.
        #[arg(long, allow_hyphen_values = true)]
        head: String,
    },
    /// Print the greedy schedule n_1..n_M with its certificates.
    Schedule {
        #[command(flatten)]
        common: Common,
        /// Explicit target vector such as "{1: 2, 2: -1}"; repeat for each
        /// target. Without it the first M enumeration elements are used.
        #[arg(long = "target", allow_hyphen_values = true)]
        target: Vec<String>,
    },
    /// Print the unboundedness table ||A^n e_2n|| for n = 1..n_max.
    Witness(Common),
    /// Print y^(1)..y^(M) of the dense enumeration.
    Enumerate(Common),
}

/// Options shared by every subcommand. Each maps onto a config key.
#[derive(Debug, Clone, Default, Args)]
pub struct Common {
    /// key = value config file; flags override it.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// exp:<λ> or table:[w1,...][;tail=geometric:<r>|claim:<T>]
    #[arg(long)]
    pub weights: Option<String>,
    /// Comma-separated spaces: l1, l2, l<p>, lp:<a/b>, c0, c.
    #[arg(long)]
    pub space: Option<String>,
    #[arg(long)]
    pub precision: Option<String>,
    /// Number of targets.
    #[arg(long = "M")]
    pub targets: Option<String>,
    /// Periodic tail blocks.
    #[arg(long = "K")]
    pub blocks: Option<String>,
    /// Comma-separated periods.
    #[arg(long = "N")]
    pub periods: Option<String>,
    /// Semicolon-separated periodic heads.
    #[arg(long, allow_hyphen_values = true)]
    pub heads: Option<String>,
    #[arg(long = "n-max")]
    pub n_max: Option<String>,
    #[arg(long = "weight-prefix")]
    pub weight_prefix: Option<String>,
    #[arg(long = "search-cap")]
    pub search_cap: Option<String>,
    /// real or complex enumeration.
    #[arg(long)]
    pub field: Option<String>,
    /// json, csv-summary or csv-curves.
    #[arg(long)]
    pub format: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub parallel: bool,
    /// Omit the timestamp header and wall-clock timings.
    #[arg(long = "no-timestamp")]
    pub no_timestamp: bool,
}

impl Common {
    fn flags(&self) -> Result<RawConfig, ConfigError> {
        let mut raw = RawConfig::default();
        let pairs = [
            ("weights", &self.weights),
            ("space", &self.space),
            ("precision", &self.precision),
            ("M", &self.targets),
            ("K", &self.blocks),
            ("N", &self.periods),
            ("heads", &self.heads),
            ("n_max", &self.n_max),
            ("weight_prefix", &self.weight_prefix),
            ("search_cap", &self.search_cap),
            ("field", &self.field),
            ("format", &self.format),
        ];
        for (key, value) in pairs {
            if let Some(v) = value {
                raw.set(key, v)?;
            }
        }
        if let Some(out) = &self.out {
            raw.set("out", &out.to_string_lossy())?;
        }
        if self.parallel {
            raw.set("parallel", "true")?;
        }
        if self.no_timestamp {
            raw.set("timestamp", "false")?;
        }
        Ok(raw)
    }

    /// Config file (if any) overlaid by flags, validated.
    pub fn resolve(&self) -> Result<Config, ConfigError> {
        let file = match &self.config {
            Some(path) => RawConfig::load(path)?,
            None => RawConfig::default(),
        };
        Config::from_raw(&file.merge(self.flags()?))
    }
}

/// Text produced by a subcommand and whether all its certificates passed.
pub struct Outcome {
    pub text: String,
    pub passed: bool,
}

fn header(out: &mut String, config: &Config) {
    if config.suite.timestamp {
        let now = chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true);
        let _ = writeln!(out, "# generated {now}");
    }
}

fn list_certificates<'a>(out: &mut String, certs: impl IntoIterator<Item = &'a Certificate>) -> bool {
    let mut all = true;
    for c in certs {
        all &= c.passed();
        let _ = writeln!(out, "{c}");
    }
    all
}

fn operator(config: &Config) -> ShiftOperator {
    let space = config.suite.spaces[0].clone().with_precision(config.suite.precision);
    ShiftOperator::new(config.suite.weights.clone(), space)
}

fn enumeration_targets(config: &Config) -> Vec<CoordVector> {
    DenseEnumeration::new(config.suite.field).take(config.suite.targets)
}

fn schedule_cmd(config: &Config, explicit: &[String]) -> Result<Outcome, ConfigError> {
    let targets = if explicit.is_empty() {
        enumeration_targets(config)
    } else {
        explicit
            .iter()
            .map(|t| t.parse::<CoordVector>().map_err(|e| ConfigError::new("target", e)))
            .collect::<Result<Vec<_>, _>>()?
    };
    let mut text = String::new();
    header(&mut text, config);
    let schedule = match build_schedule(&config.suite.weights, &targets, config.suite.search_cap) {
        Ok(s) => s,
        Err(e) => {
            let _ = writeln!(text, "{}", Certificate::error("schedule", "an admissible schedule exists", e));
            return Ok(Outcome { text, passed: false });
        }
    };
    let ns: Vec<String> = schedule.exponents.iter().map(ToString::to_string).collect();
    let _ = writeln!(text, "n = {}", ns.join(", "));
    for m in 1..=schedule.len() {
        let meta = &schedule.metadata[m - 1];
        let _ = writeln!(
            text,
            "m = {m}: n = {}, y = {}, k = {}, S = {}",
            schedule.n(m),
            schedule.target(m),
            meta.k,
            meta.s
        );
    }
    let passed = list_certificates(&mut text, &schedule.certificates);
    Ok(Outcome { text, passed })
}

fn orbit_cmd(config: &Config, m: usize) -> Result<Outcome, ConfigError> {
    let op = operator(config);
    let mut text = String::new();
    header(&mut text, config);
    let targets = enumeration_targets(config);
    let visit = build_schedule(op.weights(), &targets, config.suite.search_cap)
        .map_err(|e| e.to_string())
        .and_then(|s| hypercyclic_prefix(&op, &s, config.suite.targets).map_err(|e| e.to_string()))
        .and_then(|p| orbit_visit(&op, &p, m).map_err(|e| e.to_string()));
    let visit = match visit {
        Ok(v) => v,
        Err(e) => {
            let _ = writeln!(text, "{}", Certificate::error(format!("orbit.visit[{m}]"), "A^(n_m) x_M is computable", e));
            return Ok(Outcome { text, passed: false });
        }
    };
    let _ = writeln!(text, "n_{m} = {}", visit.n_m);
    let _ = writeln!(text, "image = {}", visit.image);
    let _ = writeln!(text, "residual = {}", visit.residual);
    let _ = writeln!(text, "residual norm = {}", visit.residual_norm);
    let _ = writeln!(text, "bound = {}", visit.bound);
    let passed = list_certificates(&mut text, &visit.certificates);
    Ok(Outcome { text, passed })
}

fn periodic_cmd(config: &Config, head: &str, periods_given: bool) -> Result<Outcome, ConfigError> {
    let mut head = parse_head("head", head)?;
    if periods_given {
        let n = match config.suite.periods.as_slice() {
            [n] => *n,
            _ => return Err(ConfigError::new("N", "periodic takes a single period")),
        };
        if n < head.len() {
            return Err(ConfigError::new("N", format!("period {n} is shorter than the head ({})", head.len())));
        }
        head.resize(n, crate::scalars::Scalar::zero());
    }
    let op = operator(config);
    let weights = op.weights();
    let mut text = String::new();
    header(&mut text, config);
    let pp = periodic_point(weights, head.clone(), config.suite.blocks).map_err(|e| ConfigError::new("head", e))?;
    let coords: Vec<String> = (1..=pp.prefix_len())
        .map(|i| pp.vector().coordinate(i).to_string())
        .collect();
    let _ = writeln!(text, "coordinates = {}", coords.join(", "));
    let mut certs = vec![periodic_fixpoint_check(weights, &pp)];
    certs.extend(pp.block_mass_certificates(weights));
    let y = CoordVector::from_dense(&head);
    match periodic_point_distance(&op, &y, pp.period(), config.suite.blocks) {
        Ok(d) => {
            let _ = writeln!(text, "distance = {}", d.distance);
            let _ = writeln!(text, "bound = {}", d.bound);
            certs.push(d.certificate);
        }
        Err(e) => certs.push(Certificate::error("periodic.distance", "distance bound is computable", e)),
    }
    let passed = list_certificates(&mut text, &certs);
    Ok(Outcome { text, passed })
}

fn witness_cmd(config: &Config) -> Outcome {
    let op = operator(config);
    let mut text = String::new();
    header(&mut text, config);
    let _ = writeln!(text, "n\tnorm\t|w_n|\tverdict");
    let mut passed = true;
    let mut previous: Option<crate::spaces::NormInterval> = None;
    for n in 1..=config.suite.n_max {
        let w = op.unboundedness_witness(n);
        let increasing = previous.as_ref().is_none_or(|p| w.value.lo > p.hi);
        let ok = w.certified && increasing;
        passed &= ok;
        let verdict = if ok { "PASS" } else { "FAIL" };
        let _ = writeln!(text, "{n}\t{}\t{}\t{verdict}", w.value, w.floor);
        previous = Some(w.value);
    }
    Outcome { text, passed }
}

fn enumerate_cmd(config: &Config) -> Outcome {
    let mut text = String::new();
    header(&mut text, config);
    for (m, y) in enumeration_targets(config).iter().enumerate() {
        let _ = writeln!(text, "{}\t{y}", m + 1);
    }
    Outcome { text, passed: true }
}

/// Runs `certify`; the report goes to the configured path or is returned as text.
fn certify_cmd(config: &Config, env_dir: Option<&str>) -> Result<Outcome, ConfigError> {
    let report = run_suite(&config.suite);
    let bytes = emit_report(&report, config.format).map_err(|e| ConfigError::new("format", e))?;
    let passed = report.passed();
    match config.report_path(env_dir) {
        Some(path) => {
            if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
                std::fs::create_dir_all(parent).map_err(|e| ConfigError::new("out", e))?;
            }
            std::fs::write(&path, &bytes).map_err(|e| ConfigError::new("out", format!("{}: {e}", path.display())))?;
            let s = report.summary;
            let text = format!(
                "{} certificates, {} passed, {} failed; report written to {}\n",
                s.total,
                s.passed,
                s.failed,
                path.display()
            );
            Ok(Outcome { text, passed })
        }
        None => Ok(Outcome {
            text: String::from_utf8(bytes).expect("reports are UTF-8"),
            passed,
        }),
    }
}

/// Dispatches a parsed command line.
pub fn execute(cli: &Cli, env_dir: Option<&str>) -> Result<Outcome, ConfigError> {
    match &cli.command {
        Command::Certify(common) => certify_cmd(&common.resolve()?, env_dir),
        Command::Orbit { common, m } => orbit_cmd(&common.resolve()?, *m),
        Command::Periodic { common, head } => periodic_cmd(&common.resolve()?, head, common.periods.is_some()),
        Command::Schedule { common, target } => schedule_cmd(&common.resolve()?, target),
        Command::Witness(common) => Ok(witness_cmd(&common.resolve()?)),
        Command::Enumerate(common) => Ok(enumerate_cmd(&common.resolve()?)),
    }
}

/// Full entry point: parses `args`, writes to `stdout`/`stderr`, returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut impl Write, stderr: &mut impl Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = write!(if e.use_stderr() { stderr as &mut dyn Write } else { stdout as &mut dyn Write }, "{}", e.render());
            return code;
        }
    };
    let env_dir = std::env::var(OUT_DIR_VAR).ok();
    match execute(&cli, env_dir.as_deref()) {
        Ok(outcome) => {
            let _ = stdout.write_all(outcome.text.as_bytes());
            if outcome.passed {
                0
            } else {
                1
            }
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            2
        }
    }
}

/// [`run`] on the process arguments and standard streams.
pub fn main() -> i32 {
    run(std::env::args_os(), &mut std::io::stdout().lock(), &mut std::io::stderr().lock())
}
