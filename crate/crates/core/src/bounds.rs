//! Asymptotic bounds on the scaled ground-state energies `E xi_p / sqrt(n)`
//! (max form) and `E xi_n / sqrt(n)` (minmax form) as functions of `alpha = m / n`.
//!
//! | bound | form |
//! |---|---|
//! | SK comparison lower, max form | `(sqrt(alpha) + 1) * xi_sk` |
//! | replica-symmetric upper, max form | `(sqrt(alpha) + 1) * sqrt(2/pi)` |
//! | lowered upper, max form | `min_c f(c)` |
//! | simple lower, minmax form | `(sqrt(alpha) - 1) * sqrt(2/pi)` |
//! | lifted lower, minmax form | `max_c g(c)` |
//!
//! with
//!
//! ```text
//! f(c) =  c/2 + ln erfc(-c/sqrt 2)/c + alpha ln erfc(-c/sqrt(2 alpha))/c
//! g(c) = -c/2 - ln erfc(-c/sqrt 2)/c - alpha ln erfc( c/sqrt(2 alpha))/c
//! ```

use std::f64::consts::{FRAC_2_PI, SQRT_2};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::optimize::{Optimum, ScalarOptProblem, Sense};
use crate::special::ln_erfc;

/// Default SK ground-state constant.
pub const XI_SK: f64 = 0.763;

/// Search range for the exponential rate constant `c`.
pub const RATE_BRACKET: (f64, f64) = (1e-6, 50.0);
pub const RATE_TOL: f64 = 1e-10;
pub const RATE_GRID: usize = 200;

const CHAIN_SLACK: f64 = 1e-12;

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha.is_finite() {
        Ok(())
    } else {
        Err(Error::data(format!("alpha must be positive and finite, got {alpha}")))
    }
}

pub fn rs_upper(alpha: f64) -> f64 {
    (alpha.sqrt() + 1.0) * FRAC_2_PI.sqrt()
}

pub fn sk_scaled_lower(alpha: f64, xi_sk: f64) -> f64 {
    (alpha.sqrt() + 1.0) * xi_sk
}

/// Negative for `alpha < 1`, where it carries no information.
pub fn minmax_simple_lower(alpha: f64) -> f64 {
    (alpha.sqrt() - 1.0) * FRAC_2_PI.sqrt()
}

pub fn lowered_upper_objective(alpha: f64, c: f64) -> f64 {
    c / 2.0 + ln_erfc(-c / SQRT_2) / c + alpha * ln_erfc(-c / (SQRT_2 * alpha.sqrt())) / c
}

pub fn lifted_lower_objective(alpha: f64, c: f64) -> f64 {
    -c / 2.0 - ln_erfc(-c / SQRT_2) / c - alpha * ln_erfc(c / (SQRT_2 * alpha.sqrt())) / c
}

fn optimize_rate(alpha: f64, sense: Sense, grid: usize, objective: fn(f64, f64) -> f64) -> Result<Optimum> {
    check_alpha(alpha)?;
    ScalarOptProblem::new(|c| objective(alpha, c), sense, RATE_BRACKET, RATE_TOL)
        .with_grid_points(grid)
        .solve()
        .map_err(|e| match e {
            Error::Optimizer(msg) => Error::Optimizer(format!("alpha = {alpha}: {msg}")),
            other => other,
        })
}

/// `min_c f(c)`; `arg` is the optimal rate constant.
pub fn lowered_upper(alpha: f64) -> Result<Optimum> {
    lowered_upper_with_grid(alpha, RATE_GRID)
}

pub fn lowered_upper_with_grid(alpha: f64, grid: usize) -> Result<Optimum> {
    optimize_rate(alpha, Sense::Minimize, grid, lowered_upper_objective)
}

/// `max_c g(c)`; `arg` is the optimal rate constant.
pub fn minmax_lifted_lower(alpha: f64) -> Result<Optimum> {
    minmax_lifted_lower_with_grid(alpha, RATE_GRID)
}

pub fn minmax_lifted_lower_with_grid(alpha: f64, grid: usize) -> Result<Optimum> {
    optimize_rate(alpha, Sense::Maximize, grid, lifted_lower_objective)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OptimizerDiagnostics {
    pub upper_bracket: (f64, f64),
    pub upper_iterations: u32,
    pub lifted_bracket: (f64, f64),
    pub lifted_iterations: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub alpha: f64,
    pub xi_sk: f64,
    pub sk_lower: f64,
    pub rs_upper: f64,
    pub lowered_upper: f64,
    pub c3_star_upper: f64,
    pub minmax_simple_lower: f64,
    pub minmax_lifted_lower: f64,
    pub c3_star_minmax: f64,
    pub optimizer: OptimizerDiagnostics,
}

pub fn bound_report(alpha: f64, xi_sk: f64) -> Result<BoundReport> {
    check_alpha(alpha)?;
    if !(0.0..1.0).contains(&xi_sk) {
        return Err(Error::data(format!("xi_sk must lie in [0, 1), got {xi_sk}")));
    }
    let upper = lowered_upper(alpha)?;
    let lifted = minmax_lifted_lower(alpha)?;
    let report = BoundReport {
        alpha,
        xi_sk,
        sk_lower: sk_scaled_lower(alpha, xi_sk),
        rs_upper: rs_upper(alpha),
        lowered_upper: upper.value,
        c3_star_upper: upper.arg,
        minmax_simple_lower: minmax_simple_lower(alpha),
        minmax_lifted_lower: lifted.value,
        c3_star_minmax: lifted.arg,
        optimizer: OptimizerDiagnostics {
            upper_bracket: upper.bracket,
            upper_iterations: upper.iterations,
            lifted_bracket: lifted.bracket,
            lifted_iterations: lifted.iterations,
        },
    };
    report.check()?;
    Ok(report)
}

impl BoundReport {
    /// Verifies the bound chain and rate-constant sanity.
    pub fn check(&self) -> Result<()> {
        let fail = |what: &str| Err(Error::data(format!("alpha = {}: {what}", self.alpha)));
        if self.sk_lower > self.lowered_upper + CHAIN_SLACK {
            return fail(&format!(
                "sk_lower {} exceeds lowered_upper {} (xi_sk = {} too large)",
                self.sk_lower, self.lowered_upper, self.xi_sk
            ));
        }
        if self.lowered_upper > self.rs_upper + CHAIN_SLACK {
            return fail(&format!("lowered_upper {} exceeds rs_upper {}", self.lowered_upper, self.rs_upper));
        }
        if self.minmax_lifted_lower < self.minmax_simple_lower - CHAIN_SLACK {
            return fail(&format!(
                "minmax_lifted_lower {} below minmax_simple_lower {}",
                self.minmax_lifted_lower, self.minmax_simple_lower
            ));
        }
        for c in [self.c3_star_upper, self.c3_star_minmax] {
            if !(c > 0.0 && c.is_finite()) {
                return fail(&format!("rate constant {c} not positive and finite"));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_forms() {
        let r2pi = (2.0 / std::f64::consts::PI).sqrt();
        assert!((rs_upper(1.0) - 1.595_769_121_605_730_8).abs() < 1e-12);
        assert!((rs_upper(4.0) - 3.0 * r2pi).abs() < 1e-15);
        assert!((rs_upper(1e-14) - r2pi).abs() < 1e-6);
        assert_eq!(sk_scaled_lower(1.0, 0.763), 1.526);
        assert!((sk_scaled_lower(1.0, 0.7632) - 1.5264).abs() < 1e-15);
        assert_eq!(sk_scaled_lower(3.0, 0.0), 0.0);
        assert_eq!(minmax_simple_lower(1.0), 0.0);
        assert!((minmax_simple_lower(4.0) - r2pi).abs() < 1e-15);
        assert!((minmax_simple_lower(0.25) + 0.5 * r2pi).abs() < 1e-15);
    }

    #[test]
    fn lowered_upper_at_square() {
        let o = lowered_upper(1.0).unwrap();
        assert!((o.value - 1.5376).abs() < 5e-4, "{}", o.value);
        assert!(o.value < rs_upper(1.0));
        assert_eq!(lowered_upper_objective(1.0, o.arg), o.value);
        for s in [1.0 - 1e-3, 1.0 + 1e-3] {
            assert!(lowered_upper_objective(1.0, o.arg * s) >= o.value - 1e-9);
        }
    }

    #[test]
    fn lifted_lower_at_square() {
        let o = minmax_lifted_lower(1.0).unwrap();
        assert!((o.value - 0.24439).abs() < 5e-5, "{}", o.value);
        assert!(o.value > 0.0);
        for s in [1.0 - 1e-3, 1.0 + 1e-3] {
            assert!(lifted_lower_objective(1.0, o.arg * s) <= o.value + 1e-9);
        }
    }

    #[test]
    fn small_rate_limit_recovers_rs_values() {
        for alpha in [0.25, 1.0, 4.0] {
            assert!((lowered_upper_objective(alpha, 1e-4) - rs_upper(alpha)).abs() < 1e-3);
            assert!((lifted_lower_objective(alpha, 1e-4) - minmax_simple_lower(alpha)).abs() < 1e-3);
        }
    }

    #[test]
    fn report_rejects_bad_inputs() {
        assert!(matches!(bound_report(0.0, 0.763), Err(Error::Data(_))));
        assert!(matches!(bound_report(f64::NAN, 0.763), Err(Error::Data(_))));
        assert!(matches!(bound_report(1.0, 1.2), Err(Error::Data(_))));
        // xi_sk so large the SK lower bound overtakes the upper bound.
        assert!(matches!(bound_report(1.0, 0.9), Err(Error::Data(_))));
    }

    #[test]
    fn xi_sk_only_moves_sk_lower() {
        let a = bound_report(2.0, 0.763).unwrap();
        let b = bound_report(2.0, 0.5).unwrap();
        assert_eq!(a.rs_upper.to_bits(), b.rs_upper.to_bits());
        assert_eq!(a.lowered_upper.to_bits(), b.lowered_upper.to_bits());
        assert_eq!(a.minmax_lifted_lower.to_bits(), b.minmax_lifted_lower.to_bits());
        assert_eq!(a.c3_star_upper.to_bits(), b.c3_star_upper.to_bits());
        assert_ne!(a.sk_lower, b.sk_lower);
    }
}
