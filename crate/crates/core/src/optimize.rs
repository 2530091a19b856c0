//! One-dimensional optimization on a positive bracket: log-spaced grid scan
//! to locate the basin, then golden-section refinement.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sense {
    Minimize,
    Maximize,
}

pub struct ScalarOptProblem<F> {
    pub objective: F,
    pub sense: Sense,
    pub bracket: (f64, f64),
    /// Absolute tolerance on the argument.
    pub tol: f64,
    pub grid_points: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Optimum {
    pub arg: f64,
    pub value: f64,
    /// Grid cell that bracketed the optimum before refinement.
    pub bracket: (f64, f64),
    pub iterations: u32,
}

const INV_PHI: f64 = 0.618_033_988_749_894_9;

impl<F: Fn(f64) -> f64> ScalarOptProblem<F> {
    pub fn new(objective: F, sense: Sense, bracket: (f64, f64), tol: f64) -> Self {
        Self {
            objective,
            sense,
            bracket,
            tol,
            grid_points: 200,
        }
    }

    pub fn with_grid_points(mut self, points: usize) -> Self {
        self.grid_points = points;
        self
    }

    /// Objective oriented so that smaller is better.
    fn cost(&self, x: f64) -> f64 {
        let v = (self.objective)(x);
        match self.sense {
            Sense::Minimize => v,
            Sense::Maximize => -v,
        }
    }

    pub fn solve(&self) -> Result<Optimum> {
        let (lo, hi) = self.bracket;
        if !(lo > 0.0 && hi > lo && hi.is_finite()) {
            return Err(Error::Optimizer(format!("invalid bracket [{lo}, {hi}]")));
        }
        if !(self.tol > 0.0) {
            return Err(Error::Optimizer(format!("tolerance must be positive, got {}", self.tol)));
        }
        if self.grid_points < 3 {
            return Err(Error::Optimizer("grid needs at least 3 points".into()));
        }

        let ratio = (hi / lo).ln() / (self.grid_points - 1) as f64;
        let grid: Vec<f64> = (0..self.grid_points)
            .map(|i| if i + 1 == self.grid_points { hi } else { lo * (ratio * i as f64).exp() })
            .collect();
        let costs: Vec<f64> = grid.iter().map(|&x| self.cost(x)).collect();
        if let Some(i) = costs.iter().position(|c| c.is_nan()) {
            return Err(Error::Optimizer(format!("objective is NaN at {}", grid[i])));
        }
        let best = costs
            .iter()
            .enumerate()
            .fold(0, |b, (i, &c)| if c < costs[b] { i } else { b });
        if best == 0 || best + 1 == self.grid_points {
            return Err(Error::Optimizer(format!(
                "grid optimum at endpoint {} of [{lo}, {hi}]; objective looks monotone (f(lo) = {}, f(hi) = {})",
                grid[best],
                (self.objective)(lo),
                (self.objective)(hi),
            )));
        }

        let cell = (grid[best - 1], grid[best + 1]);
        let (mut a, mut b) = cell;
        let mut c = b - INV_PHI * (b - a);
        let mut d = a + INV_PHI * (b - a);
        let mut fc = self.cost(c);
        let mut fd = self.cost(d);
        let mut iterations = 0;
        while b - a > self.tol {
            iterations += 1;
            if fc < fd {
                b = d;
                d = c;
                fd = fc;
                c = b - INV_PHI * (b - a);
                fc = self.cost(c);
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + INV_PHI * (b - a);
                fd = self.cost(d);
            }
        }
        let mid = 0.5 * (a + b);
        let (arg, cost) = [(mid, self.cost(mid)), (c, fc), (d, fd)]
            .into_iter()
            .fold((mid, f64::INFINITY), |acc, p| if p.1 < acc.1 { p } else { acc });
        let value = match self.sense {
            Sense::Minimize => cost,
            Sense::Maximize => -cost,
        };
        Ok(Optimum {
            arg,
            value,
            bracket: cell,
            iterations,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_minimum() {
        let p = ScalarOptProblem::new(|x: f64| (x - 2.5).powi(2) + 1.0, Sense::Minimize, (1e-3, 10.0), 1e-10);
        let r = p.solve().unwrap();
        // Argument resolution is limited to ~sqrt(eps) by the flat minimum.
        assert!((r.arg - 2.5).abs() < 1e-7);
        assert!((r.value - 1.0).abs() < 1e-15);
        assert!(r.bracket.0 < 2.5 && 2.5 < r.bracket.1);
        assert!(r.iterations > 0);
    }

    #[test]
    fn maximize_flips_sense() {
        let p = ScalarOptProblem::new(|x: f64| -(x.ln() - 1.0).powi(2), Sense::Maximize, (0.01, 100.0), 1e-10);
        let r = p.solve().unwrap();
        assert!((r.arg - std::f64::consts::E).abs() < 1e-6);
        assert!(r.value.abs() < 1e-15);
    }

    #[test]
    fn monotone_objective_is_rejected() {
        let p = ScalarOptProblem::new(|x: f64| x, Sense::Minimize, (1.0, 2.0), 1e-10);
        assert!(matches!(p.solve(), Err(Error::Optimizer(_))));
        let p = ScalarOptProblem::new(|x: f64| x, Sense::Maximize, (1.0, 2.0), 1e-10);
        assert!(matches!(p.solve(), Err(Error::Optimizer(_))));
    }

    #[test]
    fn invalid_inputs() {
        let f = |x: f64| x * x;
        assert!(ScalarOptProblem::new(f, Sense::Minimize, (0.0, 1.0), 1e-3).solve().is_err());
        assert!(ScalarOptProblem::new(f, Sense::Minimize, (2.0, 1.0), 1e-3).solve().is_err());
        assert!(ScalarOptProblem::new(f, Sense::Minimize, (1.0, 2.0), 0.0).solve().is_err());
        assert!(ScalarOptProblem::new(f, Sense::Minimize, (1.0, 2.0), 1e-3)
            .with_grid_points(2)
            .solve()
            .is_err());
    }
}
