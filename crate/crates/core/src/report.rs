//! Flat-file outputs: the JSON experiment report, the CSV sweep table and
//! plot-ready two-column data. All text is UTF-8 with `\n` line endings and
//! floats in shortest round-trip decimal.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::harness::{ExperimentConfig, SweepResult};
use crate::instance::Distribution;
use crate::stats::TrialStats;

/// One experiment summary, the stable JSON contract.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrialReport {
    pub problem: crate::harness::Problem,
    pub m: usize,
    pub n: usize,
    pub dist: Distribution,
    pub trials: u64,
    pub mean: f64,
    pub std: f64,
    pub ci95: f64,
    pub seed: u64,
}

impl TrialReport {
    pub fn new(cfg: &ExperimentConfig, stats: &TrialStats) -> Self {
        Self {
            problem: cfg.problem,
            m: cfg.m,
            n: cfg.n,
            dist: cfg.dist,
            trials: stats.trials,
            mean: stats.mean,
            std: stats.std,
            ci95: stats.ci95,
            seed: cfg.master_seed,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string(self).expect("report serializes");
        s.push('\n');
        s
    }
}

pub fn parse_trial_report(text: &str) -> Result<TrialReport> {
    serde_json::from_str(text).map_err(|e| Error::data(format!("trial report: {e}")))
}

pub const SWEEP_HEADER: &str =
    "axis,value,mean,std,ci95,sk_lower,rs_upper,lowered_upper,minmax_simple_lower,minmax_lifted_lower";

/// One row of the sweep CSV.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub axis: crate::harness::SweepAxis,
    pub value: f64,
    pub mean: f64,
    pub std: f64,
    pub ci95: f64,
    pub sk_lower: f64,
    pub rs_upper: f64,
    pub lowered_upper: f64,
    pub minmax_simple_lower: f64,
    pub minmax_lifted_lower: f64,
}

pub fn sweep_rows(result: &SweepResult) -> Vec<SweepRow> {
    result
        .points
        .iter()
        .map(|p| SweepRow {
            axis: result.axis,
            value: p.value,
            mean: p.stats.mean,
            std: p.stats.std,
            ci95: p.stats.ci95,
            sk_lower: p.bounds.sk_lower,
            rs_upper: p.bounds.rs_upper,
            lowered_upper: p.bounds.lowered_upper,
            minmax_simple_lower: p.bounds.minmax_simple_lower,
            minmax_lifted_lower: p.bounds.minmax_lifted_lower,
        })
        .collect()
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    for row in rows {
        w.serialize(row).expect("in-memory csv write");
    }
    let body = String::from_utf8(w.into_inner().expect("in-memory csv flush")).expect("csv is utf-8");
    format!("{SWEEP_HEADER}\n{body}")
}

pub fn parse_sweep_csv(text: &str) -> Result<Vec<SweepRow>> {
    let mut lines = text.splitn(2, '\n');
    let header = lines.next().unwrap_or_default().trim_end_matches('\r');
    if header != SWEEP_HEADER {
        return Err(Error::data(format!("sweep csv: unexpected header `{header}`")));
    }
    let body = lines.next().unwrap_or_default();
    csv::ReaderBuilder::new()
        .has_headers(false)
        .from_reader(body.as_bytes())
        .deserialize()
        .enumerate()
        .map(|(i, r)| r.map_err(|e| Error::data(format!("sweep csv row {}: {e}", i + 1))))
        .collect()
}

/// `#`-commented header lines followed by `axis_value mean` rows.
pub fn plot_data(result: &SweepResult) -> String {
    let axis = result.axis.as_str();
    let mut out = format!("# little sweep\n# axis: {axis}\n# columns: {axis} mean\n");
    for p in &result.points {
        out.push_str(&format!("{} {}\n", p.value, p.stats.mean));
    }
    out
}

pub fn parse_plot_data(text: &str) -> Result<Vec<(f64, f64)>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut fields = line.split_whitespace();
        let parse = |f: Option<&str>| -> Result<f64> {
            f.ok_or_else(|| Error::data(format!("plot data line {}: missing column", i + 1)))?
                .parse()
                .map_err(|e| Error::data(format!("plot data line {}: {e}", i + 1)))
        };
        let x = parse(fields.next())?;
        let y = parse(fields.next())?;
        if fields.next().is_some() {
            return Err(Error::data(format!("plot data line {}: more than two columns", i + 1)));
        }
        out.push((x, y));
    }
    Ok(out)
}

/// Comma-separated list of positive finite numbers, as taken by `--values`.
pub fn parse_value_list(text: &str) -> Result<Vec<f64>> {
    text.split(',')
        .map(|s| {
            let s = s.trim();
            let v: f64 = s.parse().map_err(|e| Error::data(format!("value `{s}`: {e}")))?;
            if v.is_finite() && v > 0.0 {
                Ok(v)
            } else {
                Err(Error::data(format!("value `{s}` must be positive and finite")))
            }
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Plot,
}

pub enum Results<'a> {
    Trial(&'a TrialReport),
    Sweep(&'a SweepResult),
}

pub fn render(results: &Results<'_>, format: Format) -> Result<String> {
    match (results, format) {
        (Results::Trial(r), Format::Json) => Ok(r.to_json()),
        (Results::Sweep(s), Format::Json) => {
            let mut text = serde_json::to_string(&sweep_rows(s)).expect("rows serialize");
            text.push('\n');
            Ok(text)
        }
        (Results::Sweep(s), Format::Csv) => Ok(sweep_csv(&sweep_rows(s))),
        (Results::Sweep(s), Format::Plot) => Ok(plot_data(s)),
        (Results::Trial(_), f) => Err(Error::data(format!("{f:?} output needs a sweep"))),
    }
}

pub fn persist(results: &Results<'_>, path: &Path, format: Format) -> Result<()> {
    let text = render(results, format)?;
    fs::write(path, text).map_err(|source| Error::Io {
        path: path.to_owned(),
        source,
    })
}

pub fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_owned(),
        source,
    })
}
