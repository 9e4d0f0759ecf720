//! Small statistical helpers shared by the experiments.

use statrs::distribution::{ChiSquared, ContinuousCDF};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChiSquareTest {
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
}

impl ChiSquareTest {
    pub fn rejects_at(&self, significance: f64) -> bool {
        self.p_value < significance
    }
}

/// Pearson goodness-of-fit of `observed` counts against `probabilities`.
///
/// Categories with zero expected probability must have zero counts; they are
/// dropped from the degrees of freedom. Returns `None` when fewer than two
/// categories carry mass.
pub fn chi_square(observed: &[u64], probabilities: &[f64]) -> Option<ChiSquareTest> {
    assert_eq!(observed.len(), probabilities.len());
    let total: u64 = observed.iter().sum();
    let mut statistic = 0.0;
    let mut categories = 0usize;
    for (&o, &q) in observed.iter().zip(probabilities) {
        if q <= 0.0 {
            if o > 0 {
                return Some(ChiSquareTest {
                    statistic: f64::INFINITY,
                    dof: 0,
                    p_value: 0.0,
                });
            }
            continue;
        }
        categories += 1;
        let e = q * total as f64;
        statistic += (o as f64 - e).powi(2) / e;
    }
    if categories < 2 || total == 0 {
        return None;
    }
    let dof = categories - 1;
    let dist = ChiSquared::new(dof as f64).expect("positive dof");
    Some(ChiSquareTest {
        statistic,
        dof,
        p_value: 1.0 - dist.cdf(statistic),
    })
}

/// Sample mean and its standard error.
pub fn mean_and_se(samples: &[f64]) -> (f64, f64) {
    let n = samples.len() as f64;
    if samples.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let mean = samples.iter().sum::<f64>() / n;
    if samples.len() < 2 {
        return (mean, 0.0);
    }
    let var = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Standard error of a Bernoulli frequency estimated from `n` samples.
pub fn bernoulli_se(q: f64, n: usize) -> f64 {
    (q * (1.0 - q) / n as f64).sqrt()
}
