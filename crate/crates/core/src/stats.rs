use serde::{Deserialize, Serialize};

/// Neumaier-compensated sum, accumulated in slice order.
pub fn compensated_sum(values: &[f64]) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for &v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// Summary of scaled ground-state energies over independent trials.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialStats {
    pub mean: f64,
    /// Sample standard deviation (`n - 1` denominator); zero for one trial.
    pub std: f64,
    /// `1.96 * std / sqrt(trials)`.
    pub ci95: f64,
    pub trials: u64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub per_trial: Option<Vec<f64>>,
}

impl TrialStats {
    /// Panics on an empty sample.
    pub fn from_samples(samples: &[f64]) -> Self {
        assert!(!samples.is_empty(), "no samples");
        let k = samples.len() as f64;
        let mean = compensated_sum(samples) / k;
        let std = if samples.len() < 2 {
            0.0
        } else {
            let sq: Vec<f64> = samples.iter().map(|v| (v - mean).powi(2)).collect();
            (compensated_sum(&sq) / (k - 1.0)).sqrt()
        };
        Self {
            mean,
            std,
            ci95: 1.96 * std / k.sqrt(),
            trials: samples.len() as u64,
            per_trial: None,
        }
    }

    pub fn with_samples(samples: Vec<f64>) -> Self {
        Self {
            per_trial: Some(samples.clone()),
            ..Self::from_samples(&samples)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_sample() {
        let s = TrialStats::from_samples(&[1.25]);
        assert_eq!(s.mean, 1.25);
        assert_eq!(s.std, 0.0);
        assert_eq!(s.ci95, 0.0);
        assert_eq!(s.trials, 1);
    }

    #[test]
    fn known_sample() {
        let s = TrialStats::from_samples(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(s.mean, 2.5);
        assert!((s.std - (5.0f64 / 3.0).sqrt()).abs() < 1e-15);
        assert!((s.ci95 - 1.96 * s.std / 2.0).abs() < 1e-15);
    }

    #[test]
    fn compensation_recovers_cancelled_terms() {
        assert_eq!(compensated_sum(&[1e16, 1.0, -1e16]), 1.0);
    }
}
