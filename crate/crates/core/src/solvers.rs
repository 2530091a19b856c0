//! Exact ground states by exhaustive Gray-code enumeration.
//!
//! For the bilinear forms the inner maximum over `y` is taken analytically:
//! `max_y y^T h x = ||h x||_1 / sqrt(m)` with `y_j = sign((h x)_j)`, so only
//! the `x` cube is walked. Every objective here is invariant under
//! `x -> -x`, which lets the walks pin `x_0 = +1` and visit `2^(n-1)`
//! configurations.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instance::{symmetrize, LittleInstance, SpinAssignment, SymmetricInstance};

/// Hard ceiling on exhaustively enumerated spins.
pub const ENUMERATION_CEILING: usize = 30;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolverLimits {
    pub max_n_enumeration: usize,
    /// Gray-code steps between cold refreshes of the running vector.
    pub recompute_period: u64,
}

impl Default for SolverLimits {
    fn default() -> Self {
        Self {
            max_n_enumeration: ENUMERATION_CEILING,
            recompute_period: 1 << 16,
        }
    }
}

impl SolverLimits {
    pub fn validate(&self) -> Result<()> {
        if self.max_n_enumeration > ENUMERATION_CEILING {
            return Err(Error::data(format!(
                "max_n_enumeration {} exceeds {ENUMERATION_CEILING}",
                self.max_n_enumeration
            )));
        }
        if self.recompute_period == 0 {
            return Err(Error::data("recompute_period must be at least 1"));
        }
        Ok(())
    }

    fn admit(&self, n: usize) -> Result<()> {
        self.validate()?;
        if n > self.max_n_enumeration {
            return Err(Error::size(format!(
                "n = {n} exceeds the enumeration cap {}",
                self.max_n_enumeration
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroundStateResult {
    /// Optimal objective.
    pub value: f64,
    /// `value / sqrt(n)`.
    pub scaled: f64,
    pub assignment: SpinAssignment,
    pub configs_visited: u64,
    /// Wall time in seconds.
    pub elapsed: f64,
    /// Largest max-norm gap between the maintained running vector and a cold
    /// recomputation, over all refresh points.
    pub max_refresh_drift: f64,
}

impl GroundStateResult {
    fn new(value: f64, n: usize, assignment: SpinAssignment, configs: u64, drift: f64, start: Instant) -> Self {
        Self {
            value,
            scaled: value / (n as f64).sqrt(),
            assignment,
            configs_visited: configs,
            elapsed: start.elapsed().as_secs_f64(),
            max_refresh_drift: drift,
        }
    }
}

fn sign_of(v: f64) -> i8 {
    if v < 0.0 {
        -1
    } else {
        1
    }
}

fn l1(v: &[f64]) -> f64 {
    v.iter().map(|a| a.abs()).sum()
}

fn max_gap(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(p, q)| (p - q).abs()).fold(0.0, f64::max)
}

/// Spins at Gray-code step `k` of a walk over `x_1..x_{n-1}` with `x_0 = +1`.
fn gray_spins(n: usize, k: u64) -> Vec<i8> {
    let g = k ^ (k >> 1);
    (0..n)
        .map(|i| if i > 0 && (g >> (i - 1)) & 1 == 1 { -1 } else { 1 })
        .collect()
}

/// `y^T h x / (sqrt(m) sqrt(n))` for `±1` spins.
pub fn bilinear(inst: &LittleInstance, x: &[i8], y: &[i8]) -> f64 {
    assert_eq!(y.len(), inst.m(), "y length");
    let hx = inst.apply(x);
    let s: f64 = hx.iter().zip(y).map(|(&a, &b)| a * f64::from(b)).sum();
    s / ((inst.m() as f64).sqrt() * (inst.n() as f64).sqrt())
}

/// `max_y y^T h x / (sqrt(m) sqrt(n)) = ||h x||_1 / (sqrt(m) sqrt(n))`.
pub fn reduced_objective(inst: &LittleInstance, x: &[i8]) -> f64 {
    l1(&inst.apply(x)) / ((inst.m() as f64).sqrt() * (inst.n() as f64).sqrt())
}

/// `(1/n) sum_{i<j} hs_ij x_i x_j`.
pub fn sk_objective(sym: &SymmetricInstance, x: &[i8]) -> f64 {
    let n = sym.n();
    let mut e = 0.0;
    for i in 0..n {
        let row = sym.row(i);
        let mut acc = 0.0;
        for j in (i + 1)..n {
            acc += row[j] * f64::from(x[j]);
        }
        e += f64::from(x[i]) * acc;
    }
    e / n as f64
}

/// `(1/n) x^T h x` over the full square matrix, diagonal included.
pub fn quadratic_form(square: &LittleInstance, x: &[i8]) -> f64 {
    let hx = square.apply(x);
    let s: f64 = hx.iter().zip(x).map(|(&a, &b)| a * f64::from(b)).sum();
    s / square.n() as f64
}

#[derive(Clone, Copy)]
enum Sense {
    Max,
    Min,
}

impl Sense {
    fn improves(self, candidate: f64, best: f64) -> bool {
        match self {
            Sense::Max => candidate > best,
            Sense::Min => candidate < best,
        }
    }
}

struct L1Walk {
    best_step: u64,
    configs: u64,
    drift: f64,
}

fn walk_l1(inst: &LittleInstance, limits: &SolverLimits, sense: Sense) -> L1Walk {
    let (m, n) = (inst.m(), inst.n());
    let cols = inst.column_major();
    let mut x = vec![1i8; n];
    let mut v = inst.apply(&x);
    let mut best = l1(&v);
    let mut best_step = 0;
    let mut drift = 0.0f64;
    let steps = 1u64 << (n - 1);
    let mut since_refresh = 0u64;

    for k in 1..steps {
        let i = k.trailing_zeros() as usize + 1;
        x[i] = -x[i];
        let delta = 2.0 * f64::from(x[i]);
        for (vj, cj) in v.iter_mut().zip(&cols[i * m..(i + 1) * m]) {
            *vj += delta * cj;
        }
        since_refresh += 1;
        if since_refresh == limits.recompute_period {
            since_refresh = 0;
            let cold = inst.apply(&x);
            drift = drift.max(max_gap(&v, &cold));
            v = cold;
        }
        let val = l1(&v);
        if sense.improves(val, best) {
            best = val;
            best_step = k;
        }
    }
    L1Walk {
        best_step,
        configs: steps,
        drift,
    }
}

fn solve_l1(inst: &LittleInstance, limits: &SolverLimits, sense: Sense) -> Result<GroundStateResult> {
    limits.admit(inst.n())?;
    let start = Instant::now();
    let walk = walk_l1(inst, limits, sense);
    let x = gray_spins(inst.n(), walk.best_step);
    let y: Vec<i8> = inst.apply(&x).into_iter().map(sign_of).collect();
    let value = reduced_objective(inst, &x);
    Ok(GroundStateResult::new(
        value,
        inst.n(),
        SpinAssignment { x, y: Some(y) },
        walk.configs,
        walk.drift,
        start,
    ))
}

/// Max form: `max_{x,y} y^T h x / (sqrt(m) sqrt(n))`.
pub fn solve_max(inst: &LittleInstance, limits: &SolverLimits) -> Result<GroundStateResult> {
    solve_l1(inst, limits, Sense::Max)
}

/// Minmax form: `min_x max_y y^T h x / (sqrt(m) sqrt(n))`.
pub fn solve_minmax(inst: &LittleInstance, limits: &SolverLimits) -> Result<GroundStateResult> {
    solve_l1(inst, limits, Sense::Min)
}

/// SK form: `max_x (1/n) sum_{i<j} hs_ij x_i x_j`, local fields updated per flip.
pub fn solve_sk(sym: &SymmetricInstance, limits: &SolverLimits) -> Result<GroundStateResult> {
    let n = sym.n();
    limits.admit(n)?;
    let start = Instant::now();

    let fields = |x: &[i8]| -> Vec<f64> {
        (0..n)
            .map(|i| sym.row(i).iter().zip(x).map(|(&a, &s)| a * f64::from(s)).sum())
            .collect()
    };
    let energy = |x: &[i8], f: &[f64]| -> f64 {
        0.5 * x.iter().zip(f).map(|(&s, &a)| f64::from(s) * a).sum::<f64>()
    };

    let mut x = vec![1i8; n];
    let mut f = fields(&x);
    let mut e = energy(&x, &f);
    let mut best = e;
    let mut best_step = 0;
    let mut drift = 0.0f64;
    let steps = 1u64 << (n - 1);
    let mut since_refresh = 0u64;

    for k in 1..steps {
        let i = k.trailing_zeros() as usize + 1;
        let old = f64::from(x[i]);
        e -= 2.0 * old * f[i];
        x[i] = -x[i];
        let delta = -2.0 * old;
        for (fj, &c) in f.iter_mut().zip(sym.row(i)) {
            *fj += delta * c;
        }
        since_refresh += 1;
        if since_refresh == limits.recompute_period {
            since_refresh = 0;
            let cold = fields(&x);
            drift = drift.max(max_gap(&f, &cold));
            f = cold;
            e = energy(&x, &f);
        }
        if e > best {
            best = e;
            best_step = k;
        }
    }

    let x = gray_spins(n, best_step);
    let value = sk_objective(sym, &x);
    Ok(GroundStateResult::new(
        value,
        n,
        SpinAssignment { x, y: None },
        steps,
        drift,
        start,
    ))
}

/// `max_x (1/n) x^T h x` for a square `h`, via the zero-diagonal symmetrized
/// matrix: `x^T h x = sqrt(2) sum_{i<j} hs_ij x_i x_j + trace(h)`.
pub fn solve_quadratic(square: &LittleInstance, limits: &SolverLimits) -> Result<GroundStateResult> {
    let sym = symmetrize(square)?;
    let n = square.n();
    let sk = solve_sk(&sym, limits)?;
    let value = std::f64::consts::SQRT_2 * sk.value + square.trace() / n as f64;
    Ok(GroundStateResult {
        value,
        scaled: value / (n as f64).sqrt(),
        ..sk
    })
}

/// Largest `n + m` accepted by [`brute_force_max`].
pub const BRUTE_MAX_JOINT: usize = 24;
/// Largest `n` accepted by [`brute_force_minmax`].
pub const BRUTE_MINMAX_N: usize = 20;

fn spins_from_mask(len: usize, mask: u64) -> Vec<i8> {
    (0..len).map(|i| if (mask >> i) & 1 == 1 { -1 } else { 1 }).collect()
}

/// Direct joint enumeration of every `(x, y)`; no incremental updates or symmetry.
pub fn brute_force_max(inst: &LittleInstance) -> Result<GroundStateResult> {
    let (m, n) = (inst.m(), inst.n());
    if n + m > BRUTE_MAX_JOINT {
        return Err(Error::size(format!("n + m = {} exceeds {BRUTE_MAX_JOINT}", n + m)));
    }
    let start = Instant::now();
    let mut best = f64::NEG_INFINITY;
    let mut arg = (0, 0);
    for xm in 0..(1u64 << n) {
        let x = spins_from_mask(n, xm);
        for ym in 0..(1u64 << m) {
            let y = spins_from_mask(m, ym);
            let mut s = 0.0;
            for i in 0..m {
                for j in 0..n {
                    s += f64::from(y[i]) * inst.get(i, j) * f64::from(x[j]);
                }
            }
            let val = s / ((m as f64).sqrt() * (n as f64).sqrt());
            if val > best {
                best = val;
                arg = (xm, ym);
            }
        }
    }
    let assignment = SpinAssignment {
        x: spins_from_mask(n, arg.0),
        y: Some(spins_from_mask(m, arg.1)),
    };
    Ok(GroundStateResult::new(best, n, assignment, 1u64 << (n + m), 0.0, start))
}

/// Every `x` with the reduced objective recomputed from scratch.
pub fn brute_force_minmax(inst: &LittleInstance) -> Result<GroundStateResult> {
    let n = inst.n();
    if n > BRUTE_MINMAX_N {
        return Err(Error::size(format!("n = {n} exceeds {BRUTE_MINMAX_N}")));
    }
    let start = Instant::now();
    let mut best = f64::INFINITY;
    let mut arg = 0;
    for xm in 0..(1u64 << n) {
        let val = reduced_objective(inst, &spins_from_mask(n, xm));
        if val < best {
            best = val;
            arg = xm;
        }
    }
    let x = spins_from_mask(n, arg);
    let y = inst.apply(&x).into_iter().map(sign_of).collect();
    Ok(GroundStateResult::new(
        best,
        n,
        SpinAssignment { x, y: Some(y) },
        1u64 << n,
        0.0,
        start,
    ))
}
