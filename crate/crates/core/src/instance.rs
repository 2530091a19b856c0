//! Disorder matrices, spin assignments and reproducible instance generation.
//!
//! The seed to matrix map is frozen:
//!
//! 1. The 64-bit instance seed is expanded into a 32-byte ChaCha8 key by
//!    four successive SplitMix64 outputs, little-endian.
//! 2. Entries are filled row-major.
//! 3. Bernoulli entries take the top bit of one `next_u64` draw: set is `+1`.
//! 4. Gaussian entries come in pairs from the Marsaglia polar method. Each
//!    uniform on `[-1, 1)` is `2 * (next_u64 >> 11) * 2^-53 - 1`; pairs with
//!    `s = u^2 + v^2` outside `(0, 1)` are rejected. Logarithms go through
//!    `libm` so the map does not depend on the platform math library. An
//!    odd trailing entry discards the second variate of its pair.
//!
//! Per-trial seeds are derived from a master seed with [`derive_seed`].

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest number of matrix entries [`generate_instance`] will allocate.
pub const MAX_ENTRIES: usize = 1 << 26;

const GOLDEN_GAMMA: u64 = 0x9e37_79b9_7f4a_7c15;

/// SplitMix64 output function.
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(GOLDEN_GAMMA);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed for the `index`-th draw of stream `tag` under `master`.
///
/// `splitmix64(splitmix64(master ^ splitmix64(tag)) ^ index)`. Seeds for a
/// given `(master, tag)` depend only on `index`, so extending a run never
/// perturbs earlier trials.
pub fn derive_seed(master: u64, index: u64, tag: u64) -> u64 {
    splitmix64(splitmix64(master ^ splitmix64(tag)) ^ index)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Distribution {
    Gaussian,
    Bernoulli,
}

impl Distribution {
    pub fn as_str(self) -> &'static str {
        match self {
            Distribution::Gaussian => "gaussian",
            Distribution::Bernoulli => "bernoulli",
        }
    }
}

impl std::fmt::Display for Distribution {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Distribution {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gaussian" => Ok(Distribution::Gaussian),
            "bernoulli" => Ok(Distribution::Bernoulli),
            other => Err(Error::data(format!("unknown distribution `{other}`"))),
        }
    }
}

/// Where an instance's entries came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Source {
    Generated { dist: Distribution, seed: u64 },
    Explicit,
}

/// Dense `m x n` interaction matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct LittleInstance {
    m: usize,
    n: usize,
    h: Vec<f64>,
    source: Source,
}

impl LittleInstance {
    /// Wraps an explicit row-major matrix. Entries must be finite.
    pub fn from_row_major(m: usize, n: usize, h: Vec<f64>) -> Result<Self> {
        check_dims(m, n)?;
        if h.len() != m * n {
            return Err(Error::shape(format!(
                "expected {} entries for a {m}x{n} matrix, got {}",
                m * n,
                h.len()
            )));
        }
        if let Some(pos) = h.iter().position(|v| !v.is_finite()) {
            return Err(Error::data(format!(
                "non-finite entry at ({}, {})",
                pos / n,
                pos % n
            )));
        }
        Ok(Self {
            m,
            n,
            h,
            source: Source::Explicit,
        })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let m = rows.len();
        let n = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::shape("ragged rows"));
        }
        Self::from_row_major(m, n, rows.concat())
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `m / n`.
    pub fn alpha(&self) -> f64 {
        self.m as f64 / self.n as f64
    }

    pub fn source(&self) -> Source {
        self.source
    }

    pub fn dist(&self) -> Option<Distribution> {
        match self.source {
            Source::Generated { dist, .. } => Some(dist),
            Source::Explicit => None,
        }
    }

    pub fn seed(&self) -> Option<u64> {
        match self.source {
            Source::Generated { seed, .. } => Some(seed),
            Source::Explicit => None,
        }
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.h[row * self.n + col]
    }

    pub fn row(&self, row: usize) -> &[f64] {
        &self.h[row * self.n..(row + 1) * self.n]
    }

    pub fn as_row_major(&self) -> &[f64] {
        &self.h
    }

    /// Column-major copy: column `j` occupies `[j*m, (j+1)*m)`.
    pub fn column_major(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.m * self.n];
        for i in 0..self.m {
            for j in 0..self.n {
                out[j * self.m + i] = self.h[i * self.n + j];
            }
        }
        out
    }

    /// `h * x` for a sign vector given as `±1` values.
    pub fn apply(&self, x: &[i8]) -> Vec<f64> {
        assert_eq!(x.len(), self.n, "spin vector length");
        (0..self.m)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(x)
                    .map(|(&a, &s)| a * f64::from(s))
                    .sum()
            })
            .collect()
    }

    pub fn trace(&self) -> f64 {
        (0..self.m.min(self.n)).map(|i| self.get(i, i)).sum()
    }
}

fn check_dims(m: usize, n: usize) -> Result<()> {
    if m == 0 || n == 0 {
        return Err(Error::shape(format!("dimensions must be positive, got {m}x{n}")));
    }
    match m.checked_mul(n) {
        Some(e) if e <= MAX_ENTRIES => Ok(()),
        _ => Err(Error::size(format!(
            "{m}x{n} exceeds the {MAX_ENTRIES}-entry memory guard"
        ))),
    }
}

fn key_from_seed(seed: u64) -> [u8; 32] {
    let mut key = [0u8; 32];
    let mut state = seed;
    for chunk in key.chunks_exact_mut(8) {
        let word = splitmix64(state);
        state = state.wrapping_add(GOLDEN_GAMMA);
        chunk.copy_from_slice(&word.to_le_bytes());
    }
    key
}

fn unit_interval(rng: &mut ChaCha8Rng) -> f64 {
    const SCALE: f64 = 1.0 / (1u64 << 53) as f64;
    2.0 * ((rng.next_u64() >> 11) as f64 * SCALE) - 1.0
}

fn polar_pair(rng: &mut ChaCha8Rng) -> (f64, f64) {
    loop {
        let u = unit_interval(rng);
        let v = unit_interval(rng);
        let s = u * u + v * v;
        if s > 0.0 && s < 1.0 {
            let f = libm::sqrt(-2.0 * libm::log(s) / s);
            return (u * f, v * f);
        }
    }
}

/// Draws an `m x n` instance with i.i.d. entries; a pure function of its arguments.
pub fn generate_instance(m: usize, n: usize, dist: Distribution, seed: u64) -> Result<LittleInstance> {
    check_dims(m, n)?;
    let len = m * n;
    let mut rng = ChaCha8Rng::from_seed(key_from_seed(seed));
    let mut h = Vec::with_capacity(len);
    match dist {
        Distribution::Bernoulli => {
            h.extend((0..len).map(|_| if rng.next_u64() >> 63 == 1 { 1.0 } else { -1.0 }));
        }
        Distribution::Gaussian => {
            while h.len() < len {
                let (a, b) = polar_pair(&mut rng);
                h.push(a);
                if h.len() < len {
                    h.push(b);
                }
            }
        }
    }
    Ok(LittleInstance {
        m,
        n,
        h,
        source: Source::Generated { dist, seed },
    })
}

/// Symmetric coupling matrix with zero diagonal.
#[derive(Clone, Debug, PartialEq)]
pub struct SymmetricInstance {
    n: usize,
    hs: Vec<f64>,
}

impl SymmetricInstance {
    /// Builds from a full row-major matrix; only the strict upper triangle is read.
    pub fn from_upper(n: usize, full: &[f64]) -> Result<Self> {
        check_dims(n, n)?;
        if full.len() != n * n {
            return Err(Error::shape(format!("expected {} entries, got {}", n * n, full.len())));
        }
        let mut hs = vec![0.0; n * n];
        for i in 0..n {
            for j in (i + 1)..n {
                let v = full[i * n + j];
                if !v.is_finite() {
                    return Err(Error::data(format!("non-finite coupling at ({i}, {j})")));
                }
                hs[i * n + j] = v;
                hs[j * n + i] = v;
            }
        }
        Ok(Self { n, hs })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.hs[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.hs[i * self.n..(i + 1) * self.n]
    }
}

/// `hs[i][j] = (h[i][j] + h[j][i]) / sqrt(2)` off the diagonal, zero on it.
pub fn symmetrize(square: &LittleInstance) -> Result<SymmetricInstance> {
    let n = square.n();
    if square.m() != n {
        return Err(Error::shape(format!(
            "symmetrize needs a square matrix, got {}x{n}",
            square.m()
        )));
    }
    let mut hs = vec![0.0; n * n];
    for i in 0..n {
        for j in (i + 1)..n {
            let v = (square.get(i, j) + square.get(j, i)) / std::f64::consts::SQRT_2;
            hs[i * n + j] = v;
            hs[j * n + i] = v;
        }
    }
    Ok(SymmetricInstance { n, hs })
}

/// Spins stored as `±1`; the physical vectors are `x / sqrt(n)` and `y / sqrt(m)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpinAssignment {
    pub x: Vec<i8>,
    pub y: Option<Vec<i8>>,
}

impl SpinAssignment {
    pub fn is_valid(&self) -> bool {
        let ok = |v: &[i8]| v.iter().all(|&s| s == 1 || s == -1);
        ok(&self.x) && self.y.as_deref().is_none_or(ok)
    }

    /// Renders spins as a `+`/`-` string.
    pub fn signs(v: &[i8]) -> String {
        v.iter().map(|&s| if s > 0 { '+' } else { '-' }).collect()
    }
}
