use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::certify::{ReportFormat, SuiteConfig};
use crate::constructions::DEFAULT_SEARCH_CAP;
use crate::operators::WeightSequence;
use crate::scalars::{Field, Scalar};
use crate::spaces::{SpaceSpec, DEFAULT_PRECISION};

/// Environment variable naming the directory for `certify` reports when no
/// `--out` is given.
pub const OUT_DIR_VAR: &str = "HYPERSHIFT_OUT_DIR";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{field}: {message}")]
pub struct ConfigError {
    pub field: String,
    pub message: String,
}

impl ConfigError {
    pub fn new(field: &str, message: impl ToString) -> Self {
        ConfigError {
            field: field.to_string(),
            message: message.to_string(),
        }
    }
}

/// Raw `key = value` settings before validation. Later assignments win, so
/// applying the config file first and the flags second gives flags priority.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RawConfig {
    entries: Vec<(String, String)>,
}

pub const KEYS: &[&str] = &[
    "weights",
    "space",
    "precision",
    "M",
    "K",
    "N",
    "heads",
    "n_max",
    "weight_prefix",
    "search_cap",
    "field",
    "format",
    "out",
    "parallel",
    "timestamp",
];

impl RawConfig {
    /// Parses `key = value` lines; `#` starts a comment, blank lines are skipped.
    pub fn parse(text: &str) -> Result<RawConfig, ConfigError> {
        let mut raw = RawConfig::default();
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| ConfigError::new("config", format!("line {}: expected key = value", i + 1)))?;
            raw.set(key.trim(), value.trim())?;
        }
        Ok(raw)
    }

    pub fn load(path: &Path) -> Result<RawConfig, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError::new("config", format!("{}: {e}", path.display())))?;
        RawConfig::parse(&text)
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        if !KEYS.contains(&key) {
            return Err(ConfigError::new(key, "unknown key"));
        }
        self.entries.push((key.to_string(), value.to_string()));
        Ok(())
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries
            .iter()
            .rev()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    /// Overlays `other`; its values win.
    pub fn merge(mut self, other: RawConfig) -> RawConfig {
        self.entries.extend(other.entries);
        self
    }
}

/// Validated configuration shared by all subcommands.
#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    pub suite: SuiteConfig,
    pub format: ReportFormat,
    pub out: Option<PathBuf>,
}

fn parse_count(field: &str, value: &str) -> Result<usize, ConfigError> {
    value
        .trim()
        .parse()
        .map_err(|_| ConfigError::new(field, format!("expected a nonnegative integer, got `{value}`")))
}

fn parse_bool(field: &str, value: &str) -> Result<bool, ConfigError> {
    match value.trim() {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        other => Err(ConfigError::new(field, format!("expected true or false, got `{other}`"))),
    }
}

pub fn parse_list<T>(field: &str, value: &str, item: impl Fn(&str) -> Result<T, ConfigError>) -> Result<Vec<T>, ConfigError> {
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(item)
        .collect::<Result<Vec<T>, ConfigError>>()
        .map_err(|e| ConfigError::new(field, e.message))
}

/// `x_1,x_2,...` in exact scalar syntax.
pub fn parse_head(field: &str, value: &str) -> Result<Vec<Scalar>, ConfigError> {
    let head = parse_list(field, value, |s| s.parse::<Scalar>().map_err(|e| ConfigError::new(field, e)))?;
    if head.is_empty() {
        return Err(ConfigError::new(field, "head must have at least one coefficient"));
    }
    Ok(head)
}

impl Config {
    pub fn from_raw(raw: &RawConfig) -> Result<Config, ConfigError> {
        let mut suite = SuiteConfig {
            precision: DEFAULT_PRECISION,
            search_cap: DEFAULT_SEARCH_CAP,
            timestamp: true,
            ..SuiteConfig::default()
        };
        if let Some(v) = raw.get("weights") {
            suite.weights = v.parse::<WeightSequence>().map_err(|e| ConfigError::new("weights", e))?;
        }
        if let Some(v) = raw.get("space") {
            suite.spaces = parse_list("space", v, |s| s.parse::<SpaceSpec>().map_err(|e| ConfigError::new("space", e)))?;
            if suite.spaces.is_empty() {
                return Err(ConfigError::new("space", "at least one space is required"));
            }
        }
        if let Some(v) = raw.get("precision") {
            let p = parse_count("precision", v)?;
            if p == 0 || p > 4096 {
                return Err(ConfigError::new("precision", "must lie in 1..=4096"));
            }
            suite.precision = p as u32;
        }
        if let Some(v) = raw.get("M") {
            suite.targets = parse_count("M", v)?;
        }
        if let Some(v) = raw.get("K") {
            suite.blocks = parse_count("K", v)?;
        }
        if let Some(v) = raw.get("N") {
            suite.periods = parse_list("N", v, |s| match parse_count("N", s)? {
                0 => Err(ConfigError::new("N", "periods must be positive")),
                n => Ok(n),
            })?;
        }
        if let Some(v) = raw.get("heads") {
            suite.heads = v
                .split(';')
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .map(|h| parse_head("heads", h))
                .collect::<Result<_, _>>()?;
        }
        if let Some(v) = raw.get("n_max") {
            suite.n_max = parse_count("n_max", v)?;
        }
        if let Some(v) = raw.get("weight_prefix") {
            suite.weight_prefix = parse_count("weight_prefix", v)?;
            if suite.weight_prefix < 2 {
                return Err(ConfigError::new("weight_prefix", "must be at least 2"));
            }
        }
        if let Some(v) = raw.get("search_cap") {
            suite.search_cap = parse_count("search_cap", v)?;
        }
        if let Some(v) = raw.get("field") {
            suite.field = match v {
                "real" => Field::Real,
                "complex" => Field::Complex,
                other => return Err(ConfigError::new("field", format!("expected real or complex, got `{other}`"))),
            };
        }
        if let Some(v) = raw.get("parallel") {
            suite.parallel = parse_bool("parallel", v)?;
        }
        if let Some(v) = raw.get("timestamp") {
            suite.timestamp = parse_bool("timestamp", v)?;
        }
        let format = match raw.get("format") {
            Some(v) => v.parse().map_err(|e| ConfigError::new("format", e))?,
            None => ReportFormat::Json,
        };
        let out = raw.get("out").filter(|s| !s.is_empty()).map(PathBuf::from);
        Ok(Config { suite, format, out })
    }

    /// Where `certify` writes: `out` if set, else a file in the directory named
    /// by [`OUT_DIR_VAR`], else standard output (`None`).
    pub fn report_path(&self, env_dir: Option<&str>) -> Option<PathBuf> {
        if let Some(out) = &self.out {
            return Some(out.clone());
        }
        let dir = env_dir.filter(|d| !d.is_empty())?;
        let ext = match self.format {
            ReportFormat::Json => "json",
            ReportFormat::CsvSummary => "summary.csv",
            ReportFormat::CsvCurves => "curves.csv",
        };
        Some(Path::new(dir).join(format!("report.{ext}")))
    }
}
