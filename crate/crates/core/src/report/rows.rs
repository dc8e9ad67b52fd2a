use std::fmt;
use std::io::{Read, Write};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::ReportError;
use crate::simulation::{CellMetrics, MetricValue, SigmaSeriesRow};

/// Which simulation series a row belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Series {
    Sigma,
    Changepoint,
}

/// The fixed metric vocabulary of result files.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    RelBiasPct,
    BootMedianRelBiasPct,
    Coverage95,
    Coverage90,
    #[serde(rename = "w_left_95")]
    WLeft95,
    #[serde(rename = "w_right_95")]
    WRight95,
    #[serde(rename = "w_left_90")]
    WLeft90,
    #[serde(rename = "w_right_90")]
    WRight90,
    SigmaRelBiasPct,
}

impl Metric {
    pub const ALL: [Metric; 9] = [
        Metric::RelBiasPct,
        Metric::BootMedianRelBiasPct,
        Metric::Coverage95,
        Metric::Coverage90,
        Metric::WLeft95,
        Metric::WRight95,
        Metric::WLeft90,
        Metric::WRight90,
        Metric::SigmaRelBiasPct,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Metric::RelBiasPct => "rel_bias_pct",
            Metric::BootMedianRelBiasPct => "boot_median_rel_bias_pct",
            Metric::Coverage95 => "coverage95",
            Metric::Coverage90 => "coverage90",
            Metric::WLeft95 => "w_left_95",
            Metric::WRight95 => "w_right_95",
            Metric::WLeft90 => "w_left_90",
            Metric::WRight90 => "w_right_90",
            Metric::SigmaRelBiasPct => "sigma_rel_bias_pct",
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Metric {
    type Err = ReportError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Metric::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| ReportError::UnknownMetric(s.to_string()))
    }
}

/// One metric value of one design point.
///
/// Sigma-series rows leave `delta` and `sigma_c` empty; their plug-in rows
/// leave `k` empty.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub series: Series,
    pub n: u32,
    pub delta: Option<f64>,
    pub sigma_c: Option<f64>,
    pub alpha: f64,
    pub k: Option<u32>,
    pub metric: Metric,
    pub value: f64,
    pub mc_se: f64,
}

/// CSV header, in column order.
pub const COLUMNS: [&str; 9] = [
    "series", "n", "delta", "sigma_c", "alpha", "k", "metric", "value", "mc_se",
];

/// Nine rows per cell, in [`Metric::ALL`] order.
pub fn rows_from_cells(cells: &[CellMetrics]) -> Vec<ResultRow> {
    let mut rows = Vec::with_capacity(cells.len() * Metric::ALL.len());
    for c in cells {
        let row = |metric, m: MetricValue| ResultRow {
            series: Series::Changepoint,
            n: c.cell.n,
            delta: Some(c.cell.delta),
            sigma_c: Some(c.cell.sigma_c),
            alpha: c.cell.alpha,
            k: Some(c.k),
            metric,
            value: m.value,
            mc_se: m.mc_se,
        };
        rows.extend([
            row(Metric::RelBiasPct, c.rel_bias_pct),
            row(Metric::BootMedianRelBiasPct, c.boot_median_rel_bias_pct),
            row(Metric::Coverage95, c.coverage95),
            row(Metric::Coverage90, c.coverage90),
            row(Metric::WLeft95, c.w_left_95),
            row(Metric::WRight95, c.w_right_95),
            row(Metric::WLeft90, c.w_left_90),
            row(Metric::WRight90, c.w_right_90),
            row(Metric::SigmaRelBiasPct, c.sigma_rel_bias_pct),
        ]);
    }
    rows
}

pub fn rows_from_sigma(rows: &[SigmaSeriesRow]) -> Vec<ResultRow> {
    rows.iter()
        .map(|r| ResultRow {
            series: Series::Sigma,
            n: r.n,
            delta: None,
            sigma_c: None,
            alpha: r.alpha,
            k: r.k,
            metric: Metric::SigmaRelBiasPct,
            value: r.rel_bias_pct.value,
            mc_se: r.rel_bias_pct.mc_se,
        })
        .collect()
}

pub fn write_csv<W: Write>(rows: &[ResultRow], out: W) -> Result<(), ReportError> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    w.write_record(COLUMNS)?;
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

/// Parse a result file, checking the header and the metric vocabulary.
pub fn read_csv<R: Read>(input: R) -> Result<Vec<ResultRow>, ReportError> {
    let mut r = csv::ReaderBuilder::new().has_headers(true).from_reader(input);
    let headers = r.headers()?.clone();
    let missing: Vec<String> = COLUMNS
        .iter()
        .filter(|c| !headers.iter().any(|h| h == **c))
        .map(|c| c.to_string())
        .collect();
    if !missing.is_empty() {
        return Err(ReportError::MissingColumns(missing));
    }
    let metric_col = headers.iter().position(|h| h == "metric").expect("checked above");
    let mut rows = Vec::new();
    for record in r.records() {
        let record = record?;
        if let Some(name) = record.get(metric_col) {
            name.parse::<Metric>()?;
        }
        rows.push(record.deserialize(Some(&headers))?);
    }
    Ok(rows)
}
