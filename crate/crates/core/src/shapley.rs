//! Shapley values of monotone Boolean functions.
//!
//! Flip the coordinates of `0ⁿ` to 1 in a uniformly random order; `Φᵢ[f]` is
//! the probability that flipping `i` is what turns `f` from 0 to 1.

use rand::seq::SliceRandom;
use rayon::prelude::*;

use crate::boolfn::{point, BooleanFunction};
use crate::error::{Error, Result};
use crate::fourier::{flip_probability, BiasParam};
use crate::ptf::Representation;
use crate::rng::trial_rng;

pub const MAX_SHAPLEY_ARITY: usize = 20;
/// Permutations drawn from one RNG stream in the Monte-Carlo path.
const CHUNK: usize = 1024;

#[derive(Clone, Debug, PartialEq)]
pub struct ShapleyVector {
    values: Vec<f64>,
    /// numerators over `n!` (exact path only)
    numerators: Option<Vec<u128>>,
    std_errors: Option<Vec<f64>>,
    degenerate: bool,
}

impl ShapleyVector {
    pub fn arity(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value(&self, i: usize) -> f64 {
        self.values[i]
    }

    /// `Φᵢ·n!` as integers, when computed exactly.
    pub fn numerators(&self) -> Option<&[u128]> {
        self.numerators.as_deref()
    }

    /// Per-coordinate standard errors of a Monte-Carlo estimate.
    pub fn std_errors(&self) -> Option<&[f64]> {
        self.std_errors.as_deref()
    }

    /// Constant input: no step of the process is pivotal.
    pub fn is_degenerate(&self) -> bool {
        self.degenerate
    }

    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(0.0, f64::max)
    }
}

pub fn is_monotone(f: &BooleanFunction) -> bool {
    f.is_monotone()
}

fn check(f: &BooleanFunction) -> Result<()> {
    if f.arity() > MAX_SHAPLEY_ARITY {
        return Err(Error::ArityCap {
            arity: f.arity(),
            cap: MAX_SHAPLEY_ARITY,
        });
    }
    if !f.is_monotone() {
        return Err(Error::NotMonotone);
    }
    Ok(())
}

fn factorial(n: usize) -> u128 {
    (1..=n as u128).product()
}

/// `c[k]` = number of `S ∌ i` with `|S| = k`, `f(1_S) = 0` and `f(1_{S∪i}) = 1`.
fn pivotal_counts(f: &BooleanFunction, i: usize) -> Vec<u64> {
    let mut c = vec![0u64; f.arity()];
    for x in (0..f.len()).filter(|&x| !point::bit(x, i)) {
        if !f.get(x) && f.get(point::flip(x, i)) {
            c[x.count_ones() as usize] += 1;
        }
    }
    c
}

/// `Φᵢ = Σ_S |S|!(n−1−|S|)!/n! · [S pivotal for i]`, summed in integers.
pub fn shapley_exact(f: &BooleanFunction) -> Result<ShapleyVector> {
    check(f)?;
    let n = f.arity();
    if f.is_constant() {
        return Ok(ShapleyVector {
            values: vec![0.0; n],
            numerators: Some(vec![0; n]),
            std_errors: None,
            degenerate: true,
        });
    }
    let weights: Vec<u128> = (0..n).map(|k| factorial(k) * factorial(n - 1 - k)).collect();
    let numerators: Vec<u128> = (0..n)
        .into_par_iter()
        .map(|i| {
            pivotal_counts(f, i)
                .iter()
                .zip(&weights)
                .map(|(&c, &w)| c as u128 * w)
                .sum()
        })
        .collect();
    let total = factorial(n);
    let values = numerators.iter().map(|&a| ratio(a, total)).collect();
    Ok(ShapleyVector {
        values,
        numerators: Some(numerators),
        std_errors: None,
        degenerate: false,
    })
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// `a/b` reduced before conversion.
fn ratio(a: u128, b: u128) -> f64 {
    let g = gcd(a, b).max(1);
    (a / g) as f64 / (b / g) as f64
}

/// Simulate the permutation process `trials` times.
pub fn shapley_mc(f: &BooleanFunction, trials: usize, seed: u64) -> Result<ShapleyVector> {
    check(f)?;
    if trials == 0 {
        return Err(Error::param("trials must be positive"));
    }
    let n = f.arity();
    if f.is_constant() {
        return Ok(ShapleyVector {
            values: vec![0.0; n],
            numerators: None,
            std_errors: Some(vec![0.0; n]),
            degenerate: true,
        });
    }
    let chunks = trials.div_ceil(CHUNK);
    let counts = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = trial_rng(seed, c as u64);
            let mut order: Vec<usize> = (0..n).collect();
            let mut counts = vec![0u64; n];
            for _ in c * CHUNK..((c + 1) * CHUNK).min(trials) {
                order.shuffle(&mut rng);
                let mut x = 0usize;
                for &i in &order {
                    x |= 1 << i;
                    if f.get(x) {
                        counts[i] += 1;
                        break;
                    }
                }
            }
            counts
        })
        .reduce(
            || vec![0u64; n],
            |mut a, b| {
                a.iter_mut().zip(&b).for_each(|(x, y)| *x += y);
                a
            },
        );
    let values: Vec<f64> = counts.iter().map(|&c| c as f64 / trials as f64).collect();
    let std_errors = values.iter().map(|&q| crate::stats::bernoulli_se(q, trials)).collect();
    Ok(ShapleyVector {
        values,
        numerators: None,
        std_errors: Some(std_errors),
        degenerate: false,
    })
}

/// Nodes and weights of the `points`-point Gauss–Legendre rule on `[0,1]`.
pub fn gauss_legendre(points: usize) -> Vec<(f64, f64)> {
    let n = points;
    let mut rule = Vec::with_capacity(n);
    for k in 0..n {
        // Tricomi's initial guess, then Newton on P_n
        let mut x = (std::f64::consts::PI * (k as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for j in 2..=n {
                let p2 = ((2 * j - 1) as f64 * x * p1 - (j - 1) as f64 * p0) / j as f64;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 1 { x } else { p1 };
            let pm = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (x * pn - pm) / (x * x - 1.0);
            let step = pn / dp;
            x -= step;
            if step.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.push(((1.0 - x) / 2.0, w / 2.0));
    }
    rule
}

/// `∫₀¹ Pr_p[f(x) ≠ f(x⊕i)] dp` by Gauss–Legendre quadrature.
///
/// The integrand is `Inf^{(p)}[f,i]/(p(1−p))`, a polynomial of degree `n−1`
/// in `p`, so any rule with `2·points > n − 1` is exact up to round-off.
pub fn shapley_influence_integral(f: &BooleanFunction, i: usize, points: usize) -> Result<f64> {
    check(f)?;
    if i >= f.arity() {
        return Err(Error::CoordinateOutOfRange {
            index: i,
            arity: f.arity(),
        });
    }
    if points == 0 {
        return Err(Error::param("quadrature needs at least one point"));
    }
    gauss_legendre(points)
        .into_iter()
        .map(|(p, w)| Ok(w * flip_probability(f, BiasParam::new(p)?, i)?))
        .sum()
}

#[derive(Clone, Debug, PartialEq)]
pub struct ShapleyAudit {
    /// `max |Q̂(S) − Q̂(T)|` over `|S| = |T| ≥ 1`, absent terms counted as 0
    pub max_pairwise_gap: f64,
    pub max_shapley: f64,
    pub tau: f64,
    pub shapley: ShapleyVector,
}

impl ShapleyAudit {
    pub fn gap_within_tau(&self) -> bool {
        self.max_pairwise_gap <= self.tau
    }
}

/// Same-size coefficient spread of `Q` next to the Shapley values of `⌈Q⌉_t`.
pub fn regular_coefficients_shapley_audit(rep: &Representation, tau: f64) -> Result<ShapleyAudit> {
    let f = rep.sign_function()?;
    let n = rep.arity();
    let poly = rep.poly();
    let mut max_pairwise_gap: f64 = 0.0;
    for s in 1..=poly.degree().min(n) {
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        let mut seen = 0u128;
        for (mask, c) in poly.terms() {
            if mask.count_ones() as usize == s {
                lo = lo.min(c);
                hi = hi.max(c);
                seen += 1;
            }
        }
        if seen < crate::pullback::binomial(n as u32, s as u32) {
            lo = lo.min(0.0);
            hi = hi.max(0.0);
        }
        if hi >= lo {
            max_pairwise_gap = max_pairwise_gap.max(hi - lo);
        }
    }
    let shapley = shapley_exact(&f)?;
    Ok(ShapleyAudit {
        max_pairwise_gap,
        max_shapley: shapley.max(),
        tau,
        shapley,
    })
}
