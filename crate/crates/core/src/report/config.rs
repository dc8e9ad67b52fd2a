//! Design-grid config files.
//!
//! One `key = value` per line, lists comma-separated, `#` starts a comment:
//!
//! ```text
//! series   = changepoint
//! ns       = 20, 50
//! mu_c     = 1
//! deltas   = -2, -1, 1, 2
//! sigma_cs = 0.2, 0.5, 1, 1.5, 2
//! alphas   = 0.3, 0.5, 0.7, 0.9
//! m        = 1000
//! b        = 2000
//! ```
//!
//! ```text
//! series = sigma
//! alphas = 0.1, 0.2, 0.3
//! ns     = 12, 22
//! reps   = 10000
//! k_grid = 5, 10
//! ```
//!
//! Only `m` (1000), `b` (2000), `reps` (10000) and `k_grid` (10, 20, …, 200
//! restricted to k ≤ n − 2) have defaults. The seed is supplied separately.

use std::collections::BTreeMap;
use std::str::FromStr;

use super::rows::Series;
use super::ReportError;
use crate::simulation::{ChangepointDesign, SigmaSeriesDesign};
use crate::Error;

#[derive(Debug, Clone, PartialEq)]
pub enum DesignConfig {
    Sigma(SigmaSeriesDesign),
    Changepoint(ChangepointDesign),
}

impl DesignConfig {
    pub fn series(&self) -> Series {
        match self {
            DesignConfig::Sigma(_) => Series::Sigma,
            DesignConfig::Changepoint(_) => Series::Changepoint,
        }
    }
}

fn config_err(field: &str, message: impl Into<String>) -> ReportError {
    ReportError::Config {
        field: field.to_string(),
        message: message.into(),
    }
}

struct Entries {
    map: BTreeMap<String, (usize, String)>,
}

impl Entries {
    fn parse(text: &str) -> Result<Self, ReportError> {
        let mut map = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| config_err(line, format!("line {}: expected `key = value`", i + 1)))?;
            let key = key.trim().to_string();
            if key.is_empty() {
                return Err(config_err("", format!("line {}: empty key", i + 1)));
            }
            if map.insert(key.clone(), (i + 1, value.trim().to_string())).is_some() {
                return Err(config_err(&key, format!("line {}: duplicate key", i + 1)));
            }
        }
        Ok(Self { map })
    }

    fn take(&mut self, key: &str) -> Option<(usize, String)> {
        self.map.remove(key)
    }

    fn required<T: FromStr>(&mut self, key: &str) -> Result<T, ReportError> {
        self.optional(key)?
            .ok_or_else(|| config_err(key, "required field is missing"))
    }

    fn optional<T: FromStr>(&mut self, key: &str) -> Result<Option<T>, ReportError> {
        self.take(key)
            .map(|(line, v)| {
                v.parse::<T>()
                    .map_err(|_| config_err(key, format!("line {line}: cannot parse `{v}`")))
            })
            .transpose()
    }

    fn required_list<T: FromStr>(&mut self, key: &str) -> Result<Vec<T>, ReportError> {
        self.optional_list(key)?
            .ok_or_else(|| config_err(key, "required field is missing"))
    }

    fn optional_list<T: FromStr>(&mut self, key: &str) -> Result<Option<Vec<T>>, ReportError> {
        let Some((line, v)) = self.take(key) else {
            return Ok(None);
        };
        v.split(',')
            .map(|item| {
                let item = item.trim();
                item.parse::<T>()
                    .map_err(|_| config_err(key, format!("line {line}: cannot parse list item `{item}`")))
            })
            .collect::<Result<Vec<T>, _>>()
            .map(Some)
    }

    fn finish(self) -> Result<(), ReportError> {
        match self.map.into_iter().next() {
            Some((key, (line, _))) => Err(config_err(&key, format!("line {line}: unknown field"))),
            None => Ok(()),
        }
    }
}

/// Parse and validate a design config. Validation failures name the field.
pub fn parse_config(text: &str, seed: u64) -> Result<DesignConfig, ReportError> {
    let mut e = Entries::parse(text)?;
    let series: String = e.required("series")?;
    let config = match series.as_str() {
        "sigma" => {
            let d = SigmaSeriesDesign {
                alphas: e.required_list("alphas")?,
                ns: e.required_list("ns")?,
                reps: e.optional("reps")?.unwrap_or(10_000),
                k_grid: e.optional_list("k_grid")?,
                seed,
            };
            e.finish()?;
            d.validate().map_err(validation_err)?;
            DesignConfig::Sigma(d)
        }
        "changepoint" => {
            let d = ChangepointDesign {
                ns: e.required_list("ns")?,
                mu_c: e.required("mu_c")?,
                deltas: e.required_list("deltas")?,
                sigma_cs: e.required_list("sigma_cs")?,
                alphas: e.required_list("alphas")?,
                m: e.optional("m")?.unwrap_or(1000),
                b: e.optional("b")?.unwrap_or(2000),
                seed,
            };
            e.finish()?;
            d.validate().map_err(validation_err)?;
            DesignConfig::Changepoint(d)
        }
        other => {
            return Err(config_err(
                "series",
                format!("expected `sigma` or `changepoint`, got `{other}`"),
            ))
        }
    };
    Ok(config)
}

fn validation_err(e: Error) -> ReportError {
    match e {
        Error::InvalidParameter { name, reason } => config_err(name, reason),
        Error::TruncationBound { .. } => config_err("k_grid", e.to_string()),
        Error::UndefinedRelativeWidth => config_err("deltas", "a cell has true changepoint 0"),
        other => ReportError::Core(other),
    }
}
