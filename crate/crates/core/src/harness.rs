//! Seeded Monte Carlo over disorder: trials, sweeps, and the statistical
//! checks built on them.
//!
//! Trial `t` of an experiment with master seed `s` draws its matrices from
//! `derive_seed(s, t, tag)`, one tag per matrix role, so results depend only
//! on the config and never on the worker count. Aggregation happens in trial
//! order with compensated summation.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{bound_report, BoundReport};
use crate::error::{Error, Result};
use crate::instance::{derive_seed, generate_instance, symmetrize, Distribution};
use crate::solvers::{solve_max, solve_minmax, solve_quadratic, solve_sk, SolverLimits};
use crate::stats::TrialStats;

/// Seed stream for the primary instance of a trial.
pub const TAG_INSTANCE: u64 = 0;
/// Seed stream for the `m x m` quadratic-form matrix in the SK comparison.
pub const TAG_ROW_QUADRATIC: u64 = 1;
/// Seed stream for the `n x n` quadratic-form matrix in the SK comparison.
pub const TAG_COL_QUADRATIC: u64 = 2;

/// Sample size below which a comparison is reported as underpowered.
pub const UNDERPOWERED_TRIALS: u64 = 30;

/// Width of the statistical checks, in CI half-widths.
pub const CHECK_SIGMAS: f64 = 3.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Problem {
    #[serde(rename = "max")]
    MaxLittle,
    #[serde(rename = "minmax")]
    MinmaxLittle,
    Sk,
}

impl Problem {
    pub fn as_str(self) -> &'static str {
        match self {
            Problem::MaxLittle => "max",
            Problem::MinmaxLittle => "minmax",
            Problem::Sk => "sk",
        }
    }
}

impl std::fmt::Display for Problem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Problem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "max" => Ok(Problem::MaxLittle),
            "minmax" => Ok(Problem::MinmaxLittle),
            "sk" => Ok(Problem::Sk),
            other => Err(Error::data(format!("unknown problem `{other}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub problem: Problem,
    /// Ignored for [`Problem::Sk`].
    pub m: usize,
    pub n: usize,
    pub dist: Distribution,
    pub trials: u64,
    pub master_seed: u64,
    pub workers: usize,
    pub limits: SolverLimits,
    pub keep_per_trial: bool,
}

impl ExperimentConfig {
    pub fn new(problem: Problem, m: usize, n: usize, dist: Distribution, trials: u64, master_seed: u64) -> Self {
        Self {
            problem,
            m,
            n,
            dist,
            trials,
            master_seed,
            workers: 1,
            limits: SolverLimits::default(),
            keep_per_trial: false,
        }
    }

    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = workers;
        self
    }

    /// Ratio used for the matching bound report; 1 for the SK problem.
    pub fn alpha(&self) -> f64 {
        match self.problem {
            Problem::Sk => 1.0,
            _ => self.m as f64 / self.n as f64,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::data("trials must be at least 1"));
        }
        if self.workers == 0 {
            return Err(Error::data("workers must be at least 1"));
        }
        if self.n == 0 || (self.problem != Problem::Sk && self.m == 0) {
            return Err(Error::shape(format!("dimensions must be positive, got m = {}, n = {}", self.m, self.n)));
        }
        self.limits.validate()?;
        if self.n > self.limits.max_n_enumeration {
            return Err(Error::size(format!(
                "n = {} exceeds the enumeration cap {}",
                self.n, self.limits.max_n_enumeration
            )));
        }
        Ok(())
    }
}

/// Maps `trial` over `0..trials` on `workers` threads, keeping trial order.
/// The lowest failing trial index is reported.
fn par_trials<T, F>(trials: u64, workers: usize, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(u64) -> Result<T> + Sync,
{
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::data(format!("thread pool: {e}")))?;
    let results: Vec<Result<T>> = pool.install(|| (0..trials).into_par_iter().map(&f).collect());
    results
        .into_iter()
        .enumerate()
        .map(|(t, r)| {
            r.map_err(|e| Error::Trial {
                index: t as u64,
                source: Box::new(e),
            })
        })
        .collect()
}

/// Scaled ground-state energy of trial `t`.
pub fn trial_value(cfg: &ExperimentConfig, t: u64) -> Result<f64> {
    let seed = derive_seed(cfg.master_seed, t, TAG_INSTANCE);
    let result = match cfg.problem {
        Problem::MaxLittle => solve_max(&generate_instance(cfg.m, cfg.n, cfg.dist, seed)?, &cfg.limits)?,
        Problem::MinmaxLittle => solve_minmax(&generate_instance(cfg.m, cfg.n, cfg.dist, seed)?, &cfg.limits)?,
        Problem::Sk => {
            let square = generate_instance(cfg.n, cfg.n, cfg.dist, seed)?;
            solve_sk(&symmetrize(&square)?, &cfg.limits)?
        }
    };
    Ok(result.scaled)
}

pub fn run_trials(cfg: &ExperimentConfig) -> Result<TrialStats> {
    cfg.validate()?;
    let values = par_trials(cfg.trials, cfg.workers, |t| trial_value(cfg, t))?;
    Ok(if cfg.keep_per_trial {
        TrialStats::with_samples(values)
    } else {
        TrialStats::from_samples(&values)
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepAxis {
    N,
    Alpha,
}

impl SweepAxis {
    pub fn as_str(self) -> &'static str {
        match self {
            SweepAxis::N => "n",
            SweepAxis::Alpha => "alpha",
        }
    }
}

impl std::str::FromStr for SweepAxis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "n" => Ok(SweepAxis::N),
            "alpha" => Ok(SweepAxis::Alpha),
            other => Err(Error::data(format!("unknown sweep axis `{other}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    /// Requested axis value.
    pub value: f64,
    pub m: usize,
    pub n: usize,
    pub stats: TrialStats,
    /// Evaluated at the realized ratio `m / n`.
    pub bounds: BoundReport,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub axis: SweepAxis,
    pub points: Vec<SweepPoint>,
}

fn rounded_rows(alpha: f64, n: usize) -> Result<usize> {
    let m = (alpha * n as f64).round();
    if !(m >= 1.0) {
        return Err(Error::shape(format!("alpha = {alpha} at n = {n} gives no rows")));
    }
    Ok(m as usize)
}

/// One experiment per axis value, all sharing the template's master seed.
///
/// Along `n` the template's `m / n` ratio is kept (rows rounded); along
/// `alpha` the template's `n` is kept and `m = round(alpha * n)`.
pub fn sweep(template: &ExperimentConfig, axis: SweepAxis, values: &[f64], xi_sk: f64) -> Result<SweepResult> {
    if values.is_empty() {
        return Err(Error::data("sweep needs at least one axis value"));
    }
    if values.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::data("sweep values must be strictly increasing"));
    }
    if values.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
        return Err(Error::data("sweep values must be positive and finite"));
    }
    if axis == SweepAxis::Alpha && template.problem == Problem::Sk {
        return Err(Error::data("the SK problem has no alpha axis"));
    }

    let base_alpha = template.m as f64 / template.n as f64;
    let mut points = Vec::with_capacity(values.len());
    for &value in values {
        let (m, n) = match axis {
            SweepAxis::N => {
                if value.fract() != 0.0 {
                    return Err(Error::data(format!("n must be an integer, got {value}")));
                }
                let n = value as usize;
                let m = if template.problem == Problem::Sk { n } else { rounded_rows(base_alpha, n)? };
                (m, n)
            }
            SweepAxis::Alpha => (rounded_rows(value, template.n)?, template.n),
        };
        let cfg = ExperimentConfig { m, n, ..template.clone() };
        let stats = run_trials(&cfg)?;
        let bounds = bound_report(cfg.alpha(), xi_sk)?;
        points.push(SweepPoint { value, m, n, stats, bounds });
    }
    Ok(SweepResult { axis, points })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UniversalityReport {
    pub m: usize,
    pub n: usize,
    pub trials: u64,
    pub seed: u64,
    pub gaussian: TrialStats,
    pub bernoulli: TrialStats,
    pub mean_difference: f64,
    /// `sqrt((3 ci_g)^2 + (3 ci_b)^2)`.
    pub threshold: f64,
    pub compatible: bool,
    pub underpowered: bool,
}

/// Max-form experiments under both disorder laws with the same seed policy.
pub fn universality_compare(m: usize, n: usize, trials: u64, master_seed: u64, workers: usize) -> Result<UniversalityReport> {
    let run = |dist| {
        run_trials(&ExperimentConfig::new(Problem::MaxLittle, m, n, dist, trials, master_seed).with_workers(workers))
    };
    let gaussian = run(Distribution::Gaussian)?;
    let bernoulli = run(Distribution::Bernoulli)?;
    let mean_difference = gaussian.mean - bernoulli.mean;
    let threshold = (CHECK_SIGMAS * gaussian.ci95).hypot(CHECK_SIGMAS * bernoulli.ci95);
    Ok(UniversalityReport {
        m,
        n,
        trials,
        seed: master_seed,
        compatible: mean_difference.abs() <= threshold,
        underpowered: trials < UNDERPOWERED_TRIALS,
        gaussian,
        bernoulli,
        mean_difference,
        threshold,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SkComparisonReport {
    pub n: usize,
    pub trials: u64,
    pub seed: u64,
    pub xi_sk: f64,
    /// `E max y^T H x / sqrt(n)`.
    pub bilinear: TrialStats,
    /// `E max y^T H1 y / sqrt(2n)` with `H1` of size `m x m`.
    pub row_quadratic: TrialStats,
    /// `E max x^T H2 x / sqrt(2n)` with `H2` of size `n x n`.
    pub col_quadratic: TrialStats,
    /// Per-trial sum of the two quadratic terms.
    pub quadratic_sum: TrialStats,
    /// `sqrt(ci_bilinear^2 + ci_sum^2)`.
    pub combined_ci95: f64,
    pub margin: f64,
    /// `bilinear.mean >= quadratic_sum.mean - 3 * combined_ci95`.
    pub holds: bool,
    /// `(sqrt(alpha) + 1) * xi_sk`, the limit of the right-hand side.
    pub asymptotic_lower: f64,
}

/// Finite-`n` check of the Gaussian comparison
/// `E max y^T H x / sqrt(n) >= E max y^T H1 y / sqrt(2n) + E max x^T H2 x / sqrt(2n)`
/// on square Gaussian instances. The quadratic maxima are exact, diagonal
/// included, through the symmetrized SK walk plus the trace shift.
pub fn sk_comparison_report(n: usize, trials: u64, master_seed: u64, xi_sk: f64, workers: usize) -> Result<SkComparisonReport> {
    let cfg = ExperimentConfig::new(Problem::MaxLittle, n, n, Distribution::Gaussian, trials, master_seed)
        .with_workers(workers);
    cfg.validate()?;
    let limits = cfg.limits;
    let norm = (2.0 * n as f64).sqrt();
    let rows = par_trials(trials, workers, |t| {
        let bilinear = trial_value(&cfg, t)?;
        let quad = |tag| -> Result<f64> {
            let h = generate_instance(n, n, Distribution::Gaussian, derive_seed(master_seed, t, tag))?;
            Ok(solve_quadratic(&h, &limits)?.value / norm)
        };
        Ok((bilinear, quad(TAG_ROW_QUADRATIC)?, quad(TAG_COL_QUADRATIC)?))
    })?;

    let bilinear = TrialStats::from_samples(&rows.iter().map(|r| r.0).collect::<Vec<_>>());
    let row_quadratic = TrialStats::from_samples(&rows.iter().map(|r| r.1).collect::<Vec<_>>());
    let col_quadratic = TrialStats::from_samples(&rows.iter().map(|r| r.2).collect::<Vec<_>>());
    let quadratic_sum = TrialStats::from_samples(&rows.iter().map(|r| r.1 + r.2).collect::<Vec<_>>());
    let combined_ci95 = bilinear.ci95.hypot(quadratic_sum.ci95);
    let margin = bilinear.mean - quadratic_sum.mean;
    Ok(SkComparisonReport {
        n,
        trials,
        seed: master_seed,
        xi_sk,
        holds: margin >= -CHECK_SIGMAS * combined_ci95,
        asymptotic_lower: 2.0 * xi_sk,
        bilinear,
        row_quadratic,
        col_quadratic,
        quadratic_sum,
        combined_ci95,
        margin,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_trial_has_no_spread() {
        let cfg = ExperimentConfig::new(Problem::MaxLittle, 5, 6, Distribution::Gaussian, 1, 3);
        let s = run_trials(&cfg).unwrap();
        assert_eq!(s.std, 0.0);
        assert_eq!(s.ci95, 0.0);
        assert_eq!(s.mean, trial_value(&cfg, 0).unwrap());
    }

    #[test]
    fn worker_count_does_not_change_results() {
        let cfg = ExperimentConfig::new(Problem::MinmaxLittle, 7, 9, Distribution::Bernoulli, 40, 17);
        let a = run_trials(&cfg).unwrap();
        let b = run_trials(&cfg.clone().with_workers(4)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn adding_trials_extends_earlier_ones() {
        let mut cfg = ExperimentConfig::new(Problem::Sk, 0, 8, Distribution::Gaussian, 5, 2);
        cfg.keep_per_trial = true;
        let short = run_trials(&cfg).unwrap().per_trial.unwrap();
        cfg.trials = 9;
        let long = run_trials(&cfg).unwrap().per_trial.unwrap();
        assert_eq!(short[..], long[..5]);
    }

    #[test]
    fn per_trial_reproduces_summary() {
        let mut cfg = ExperimentConfig::new(Problem::MaxLittle, 4, 8, Distribution::Gaussian, 25, 8);
        cfg.keep_per_trial = true;
        let s = run_trials(&cfg).unwrap();
        let again = TrialStats::from_samples(s.per_trial.as_ref().unwrap());
        assert_eq!(again.mean, s.mean);
        assert_eq!(again.std, s.std);
    }

    #[test]
    fn invalid_configs() {
        let base = ExperimentConfig::new(Problem::MaxLittle, 4, 4, Distribution::Gaussian, 3, 0);
        assert!(matches!(run_trials(&ExperimentConfig { trials: 0, ..base.clone() }), Err(Error::Data(_))));
        assert!(matches!(run_trials(&ExperimentConfig { workers: 0, ..base.clone() }), Err(Error::Data(_))));
        assert!(matches!(run_trials(&ExperimentConfig { n: 31, ..base.clone() }), Err(Error::Size(_))));
        assert!(matches!(run_trials(&ExperimentConfig { m: 0, ..base }), Err(Error::Shape(_))));
    }

    #[test]
    fn failing_trial_reports_index() {
        let cfg = ExperimentConfig::new(Problem::MaxLittle, (1 << 23) + 1, 8, Distribution::Gaussian, 2, 0);
        match run_trials(&cfg) {
            Err(Error::Trial { index, source }) => {
                assert_eq!(index, 0);
                assert!(matches!(*source, Error::Size(_)));
            }
            other => panic!("expected a trial error, got {other:?}"),
        }
    }

    #[test]
    fn sweep_rejects_bad_axes() {
        let base = ExperimentConfig::new(Problem::MaxLittle, 4, 4, Distribution::Gaussian, 3, 0);
        assert!(sweep(&base, SweepAxis::N, &[], 0.763).is_err());
        assert!(sweep(&base, SweepAxis::N, &[6.0, 4.0], 0.763).is_err());
        assert!(sweep(&base, SweepAxis::N, &[4.5], 0.763).is_err());
        assert!(sweep(&base, SweepAxis::Alpha, &[0.01], 0.763).is_err());
    }

    #[test]
    fn sweep_alpha_realizes_rows() {
        let base = ExperimentConfig::new(Problem::MaxLittle, 8, 8, Distribution::Gaussian, 4, 0);
        let r = sweep(&base, SweepAxis::Alpha, &[0.5, 1.0, 2.0], 0.763).unwrap();
        let ms: Vec<usize> = r.points.iter().map(|p| p.m).collect();
        assert_eq!(ms, vec![4, 8, 16]);
        for p in &r.points {
            assert_eq!(p.bounds.alpha, p.m as f64 / p.n as f64);
        }
    }

    #[test]
    fn universality_single_trial_is_flagged() {
        let r = universality_compare(3, 3, 1, 5, 1).unwrap();
        assert!(r.underpowered);
        assert_eq!(r.threshold, 0.0);
        assert_eq!(r.compatible, r.gaussian.mean == r.bernoulli.mean);
    }
}
