//! Concentration of induced coefficients under random minors.
//!
//! Each coordinate of `Q` is sent to an independent uniform target in `[m]`.
//! Changing one `π(i)` moves any single `R̂(S)` by at most `ω_i[Q]`, so
//! McDiarmid gives `Pr[|R̂(S) − μ| ≥ t] ≤ 2·exp(−2t²/Σ ω_i²)`.

use rand::Rng;
use rayon::prelude::*;

use super::{Mode, Representation};
use crate::error::{Error, Result};
use crate::pullback::binomial;
use crate::rng::trial_rng;

pub const MAX_TARGET: usize = 10;
/// `m^n` maps for the exhaustive variant.
pub const MAX_EXHAUSTIVE_MAPS: u64 = 1 << 22;

#[derive(Clone, Debug, PartialEq)]
pub struct ExceedanceRow {
    pub t: f64,
    /// Largest frequency of `|R̂(S) − μ| ≥ t` over the sets `S` of this size.
    pub observed: f64,
    pub worst_set: u32,
    pub bound: f64,
    pub std_error: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SizeClassReport {
    pub size: usize,
    /// exact `E[R̂(S)]` for `|S| = size`
    pub mean: f64,
    pub empirical_mean: f64,
    pub worst_deviation: f64,
    pub exceedance: Vec<ExceedanceRow>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct McDiarmidReport {
    pub m: usize,
    pub trials: u64,
    /// `Σ c_i²` with `c_i = ω_i[Q]`
    pub sum_c_sq: f64,
    pub classes: Vec<SizeClassReport>,
}

impl McDiarmidReport {
    /// Every observed exceedance is within `bound + se_multiplier·SE`.
    pub fn respects_bound(&self, se_multiplier: f64) -> bool {
        self.classes
            .iter()
            .flat_map(|c| &c.exceedance)
            .all(|r| r.observed <= r.bound + se_multiplier * r.std_error)
    }
}

/// `Pr[π(T) = S]` for `|T| = a`, `|S| = s`: surjections `T → S` over `m^a`.
fn onto_probability(a: usize, s: usize, m: usize) -> f64 {
    if s > a || s > m {
        return 0.0;
    }
    (0..=s)
        .map(|j| {
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            sign * binomial(s as u32, j as u32) as f64 * ((s - j) as f64 / m as f64).powi(a as i32)
        })
        .sum()
}

fn check(rep: &Representation, m: usize) -> Result<()> {
    if rep.mode() != Mode::Positive {
        return Err(Error::param("the concentration experiment needs a positive representation"));
    }
    if m == 0 || m > MAX_TARGET {
        return Err(Error::param(format!("target arity m={m} must lie in 1..={MAX_TARGET}")));
    }
    Ok(())
}

fn induced_dense(rep: &Representation, image: &[usize], m: usize) -> Vec<f64> {
    let mut r = vec![0.0; 1 << m];
    for (mask, c) in rep.poly().terms() {
        let mut s = 0usize;
        let mut rest = mask;
        while rest != 0 {
            s |= 1 << image[rest.trailing_zeros() as usize];
            rest &= rest - 1;
        }
        r[s] += c;
    }
    r
}

fn summarise(rep: &Representation, m: usize, samples: &[Vec<f64>], ts: &[f64], exact: bool) -> McDiarmidReport {
    let weights = rep.poly().weights();
    let sum_c_sq: f64 = weights.iter().map(|w| w * w).sum();
    let trials = samples.len() as u64;
    let max_size = rep.poly().degree().min(m);
    let mut by_size = vec![0.0; rep.poly().degree() + 1];
    for (mask, c) in rep.poly().terms() {
        by_size[mask.count_ones() as usize] += c;
    }
    let classes = (1..=max_size)
        .map(|s| {
            let mean: f64 = by_size
                .iter()
                .enumerate()
                .map(|(a, c)| c * onto_probability(a, s, m))
                .sum();
            let sets: Vec<usize> = (0..1usize << m).filter(|x| x.count_ones() as usize == s).collect();
            let mut total = 0.0;
            let mut worst_deviation: f64 = 0.0;
            let mut counts = vec![vec![0u64; sets.len()]; ts.len()];
            for r in samples {
                for (k, &set) in sets.iter().enumerate() {
                    total += r[set];
                    let dev = (r[set] - mean).abs();
                    worst_deviation = worst_deviation.max(dev);
                    for (ti, &t) in ts.iter().enumerate() {
                        if dev >= t {
                            counts[ti][k] += 1;
                        }
                    }
                }
            }
            let exceedance = ts
                .iter()
                .zip(&counts)
                .map(|(&t, row)| {
                    let (k, &hits) = row
                        .iter()
                        .enumerate()
                        .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(&a.0)))
                        .expect("at least one set");
                    let observed = hits as f64 / trials as f64;
                    ExceedanceRow {
                        t,
                        observed,
                        worst_set: sets[k] as u32,
                        bound: 2.0 * (-2.0 * t * t / sum_c_sq).exp(),
                        std_error: if exact {
                            0.0
                        } else {
                            crate::stats::bernoulli_se(observed, trials as usize)
                        },
                    }
                })
                .collect();
            SizeClassReport {
                size: s,
                mean,
                empirical_mean: total / (trials as f64 * sets.len() as f64),
                worst_deviation,
                exceedance,
            }
        })
        .collect();
    McDiarmidReport {
        m,
        trials,
        sum_c_sq,
        classes,
    }
}

/// Sample `trials` iid-uniform maps `[n] → [m]`; trial `t` uses stream `t`.
pub fn mcdiarmid_experiment(
    rep: &Representation,
    m: usize,
    trials: usize,
    ts: &[f64],
    seed: u64,
) -> Result<McDiarmidReport> {
    check(rep, m)?;
    let n = rep.arity();
    let samples: Vec<Vec<f64>> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(seed, t as u64);
            let image: Vec<usize> = (0..n).map(|_| rng.random_range(0..m)).collect();
            induced_dense(rep, &image, m)
        })
        .collect();
    Ok(summarise(rep, m, &samples, ts, false))
}

/// The same report over all `m^n` maps, giving exact probabilities.
pub fn mcdiarmid_exhaustive(rep: &Representation, m: usize, ts: &[f64]) -> Result<McDiarmidReport> {
    check(rep, m)?;
    let n = rep.arity();
    let total = (m as u64).checked_pow(n as u32).filter(|&c| c <= MAX_EXHAUSTIVE_MAPS);
    let Some(total) = total else {
        return Err(Error::SizeCap {
            size: (m as u128).saturating_pow(n as u32),
            cap: MAX_EXHAUSTIVE_MAPS as u128,
        });
    };
    let samples: Vec<Vec<f64>> = (0..total)
        .into_par_iter()
        .map(|code| {
            let mut c = code;
            let image: Vec<usize> = (0..n)
                .map(|_| {
                    let d = (c % m as u64) as usize;
                    c /= m as u64;
                    d
                })
                .collect();
            induced_dense(rep, &image, m)
        })
        .collect();
    Ok(summarise(rep, m, &samples, ts, true))
}
