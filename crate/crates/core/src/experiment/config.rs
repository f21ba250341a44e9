//! Line-based `key = value` run configuration.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::characters::validate_fundamental;
use crate::error::{Error, Result};

const REQUIRED: [&str; 3] = ["table_limit", "discriminants", "x_grid"];

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub table_limit: u64,
    pub discriminants: Vec<i64>,
    pub x_grid: Vec<f64>,
    pub q_grid: Vec<u64>,
    pub z_grid: Vec<f64>,
    pub epsilon: f64,
    /// Assumed quality η for report-only envelopes.
    pub eta: f64,
    /// Constant in `exp(−C√(V log η))` for report-only envelopes.
    pub c_eps: f64,
    pub seed: u64,
    /// Random cases for the seeded suites.
    pub cases: u64,
    pub output_path: PathBuf,
}

impl RunConfig {
    /// A configuration with every optional key at its default.
    pub fn new(table_limit: u64, discriminants: Vec<i64>, x_grid: Vec<f64>) -> Self {
        Self {
            table_limit,
            discriminants,
            x_grid,
            q_grid: vec![1, 3, 4, 5, 7, 8, 12, 15],
            z_grid: vec![5.0, 10.0, 30.0],
            epsilon: 0.005,
            eta: 100.0,
            c_eps: 1.0,
            seed: 0,
            cases: 100,
            output_path: PathBuf::from("exsieve-out"),
        }
    }

    /// The desk-scale run: `N = 10⁶`, the six smallest-modulus characters and
    /// `x ∈ {10⁴, 10⁵, 10⁶}`.
    pub fn standard() -> Self {
        Self::new(1_000_000, vec![-3, -4, 5, 8, -8, 12], vec![1e4, 1e5, 1e6])
    }

    pub fn max_x(&self) -> f64 {
        self.x_grid.iter().copied().fold(0.0, f64::max)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |field: &str, message: String| Error::ConfigInvalid {
            field: field.into(),
            message,
        };
        if self.table_limit < 2 {
            return Err(bad("table_limit", "must be at least 2".into()));
        }
        for (field, empty) in [
            ("discriminants", self.discriminants.is_empty()),
            ("x_grid", self.x_grid.is_empty()),
            ("q_grid", self.q_grid.is_empty()),
            ("z_grid", self.z_grid.is_empty()),
        ] {
            if empty {
                return Err(bad(field, "must not be empty".into()));
            }
        }
        if !(self.epsilon > 0.0 && self.epsilon <= 0.01) {
            return Err(bad(
                "epsilon",
                format!("{} is outside (0, 0.01]", self.epsilon),
            ));
        }
        if !(self.eta > 1.0) {
            return Err(bad("eta", format!("{} must exceed 1", self.eta)));
        }
        if !(self.c_eps > 0.0) {
            return Err(bad("c_eps", format!("{} must be positive", self.c_eps)));
        }
        if self.x_grid.iter().any(|&x| !(x >= 1.0)) {
            return Err(bad("x_grid", "entries must be at least 1".into()));
        }
        if self.max_x() > self.table_limit as f64 {
            return Err(bad(
                "table_limit",
                format!(
                    "{} is below max(x_grid) = {}",
                    self.table_limit,
                    self.max_x()
                ),
            ));
        }
        if self.q_grid.contains(&0) {
            return Err(bad("q_grid", "moduli must be positive".into()));
        }
        if self.z_grid.iter().any(|&z| !(z >= 1.0)) {
            return Err(bad("z_grid", "sifting levels must be at least 1".into()));
        }
        for &d in &self.discriminants {
            validate_fundamental(d).map_err(|e| bad("discriminants", e.to_string()))?;
        }
        Ok(())
    }
}

/// Parsed configuration plus warnings for unknown keys.
#[derive(Debug, Clone, PartialEq)]
pub struct LoadedConfig {
    pub config: RunConfig,
    pub warnings: Vec<String>,
}

fn parse_list<T: FromStr>(value: &str, line: usize) -> Result<Vec<T>> {
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| parse_scalar(s, line))
        .collect()
}

fn parse_scalar<T: FromStr>(value: &str, line: usize) -> Result<T> {
    value.trim().parse().map_err(|_| Error::ConfigParse {
        line,
        message: format!("cannot parse `{}`", value.trim()),
    })
}

pub fn parse_config(text: &str) -> Result<LoadedConfig> {
    let mut cfg = RunConfig::new(0, Vec::new(), Vec::new());
    let mut seen = Vec::new();
    let mut warnings = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let Some((key, value)) = content.split_once('=') else {
            return Err(Error::ConfigParse {
                line,
                message: format!("expected `key = value`, got `{content}`"),
            });
        };
        let (key, value) = (key.trim(), value.trim());
        match key {
            "table_limit" => {
                cfg.table_limit =
                    parse_scalar::<f64>(value, line).and_then(|v| as_count(v, line))?
            }
            "discriminants" => cfg.discriminants = parse_list(value, line)?,
            "x_grid" => cfg.x_grid = parse_list(value, line)?,
            "q_grid" => cfg.q_grid = parse_list(value, line)?,
            "z_grid" => cfg.z_grid = parse_list(value, line)?,
            "epsilon" => cfg.epsilon = parse_scalar(value, line)?,
            "eta" => cfg.eta = parse_scalar(value, line)?,
            "c_eps" => cfg.c_eps = parse_scalar(value, line)?,
            "seed" => cfg.seed = parse_scalar(value, line)?,
            "cases" => cfg.cases = parse_scalar(value, line)?,
            "output_path" => cfg.output_path = PathBuf::from(value),
            other => {
                warnings.push(format!("line {line}: unknown key `{other}` ignored"));
                continue;
            }
        }
        seen.push(key.to_string());
    }
    let missing: Vec<String> = REQUIRED
        .iter()
        .filter(|k| !seen.iter().any(|s| s == *k))
        .map(|k| k.to_string())
        .collect();
    if !missing.is_empty() {
        return Err(Error::ConfigMissing(missing));
    }
    cfg.validate()?;
    Ok(LoadedConfig {
        config: cfg,
        warnings,
    })
}

fn as_count(v: f64, line: usize) -> Result<u64> {
    if v >= 0.0 && v.fract() == 0.0 && v <= u64::MAX as f64 {
        Ok(v as u64)
    } else {
        Err(Error::ConfigParse {
            line,
            message: format!("`{v}` is not a non-negative integer"),
        })
    }
}

pub fn load_config(path: &Path) -> Result<LoadedConfig> {
    let text = std::fs::read_to_string(path)?;
    parse_config(&text)
}
