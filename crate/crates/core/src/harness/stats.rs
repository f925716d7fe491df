//! Small statistics helpers for the Monte Carlo checks.

use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::engine::{Distribution, MeasureOutcome};
use std::collections::BTreeMap;

/// Result of comparing empirical counts against an exact distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct ChiSquareReport {
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
    /// Samples that landed outside the exact support.
    pub off_support: u64,
    pub samples: u64,
}

impl ChiSquareReport {
    pub fn passes(&self, significance: f64) -> bool {
        self.off_support == 0 && (self.dof == 0 || self.p_value >= significance)
    }
}

/// Pearson chi-square goodness of fit of `counts` against `exact`.
pub fn chi_square(exact: &Distribution, counts: &BTreeMap<Vec<MeasureOutcome>, u64>) -> ChiSquareReport {
    let samples: u64 = counts.values().sum();
    let off_support = counts
        .iter()
        .filter(|(k, _)| !exact.contains_key(*k))
        .map(|(_, c)| *c)
        .sum();
    let n = samples as f64;
    let statistic = exact
        .iter()
        .map(|(k, p)| {
            let expected = p * n;
            let observed = counts.get(k).copied().unwrap_or(0) as f64;
            (observed - expected).powi(2) / expected
        })
        .sum::<f64>();
    let dof = exact.len().saturating_sub(1);
    let p_value = if dof == 0 {
        1.0
    } else {
        let dist = ChiSquared::new(dof as f64).expect("positive degrees of freedom");
        1.0 - dist.cdf(statistic)
    };
    ChiSquareReport { statistic, dof, p_value, off_support, samples }
}

/// Binomial standard deviation of an empirical rate over `trials`.
pub fn binomial_sigma(p: f64, trials: u64) -> f64 {
    (p * (1.0 - p) / trials as f64).sqrt()
}

/// Mean and standard error of the mean.
pub fn mean_and_se(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    if values.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}
