//! Random 2-to-1 minors and the pull-back measure `D_{p,2m}`.
//!
//! `D_{p,2m}` is the law of `z = π⁻¹(x)` for a uniform 2-to-1 map
//! `π : [2m] → [m]` and `x ∼ μ_{p,m}`, i.e. `z_j = x_{π(j)}`.

use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;

use crate::boolfn::{BooleanFunction, MinorMap, TwoToOneMap};
use crate::error::{Error, Result};
use crate::fourier::{flip_probability, influence, BiasParam, Estimate, InfluenceMethod};
use crate::rng::trial_rng;

/// Largest `m` for which masses are defined (`2m ≤ 64` bits per point).
pub const MAX_M: usize = 32;
/// Exhaustive audits run over `2^{2m}` points.
pub const MAX_AUDIT_M: usize = 6;

/// `C(n, k)` in exact 128-bit arithmetic; exact for `n ≤ 64` at least.
pub fn binomial(n: u32, k: u32) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for j in 0..k {
        // acc·(n−j) is divisible by j+1 at every step
        acc = acc * (n - j) as u128 / (j + 1) as u128;
    }
    acc
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PullbackMeasure {
    m: usize,
    p: BiasParam,
}

impl PullbackMeasure {
    pub fn new(m: usize, p: BiasParam) -> Result<Self> {
        if m == 0 {
            return Err(Error::param("pull-back measure needs m ≥ 1"));
        }
        if m > MAX_M {
            return Err(Error::ArityCap { arity: m, cap: MAX_M });
        }
        Ok(Self { m, p })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn dimension(&self) -> usize {
        2 * self.m
    }

    pub fn bias(&self) -> BiasParam {
        self.p
    }

    /// Mass of any single point with `2k` ones:
    /// `p^k (1−p)^{m−k} · C(m,k) / C(2m,2k)`.
    pub fn mass_at_weight(&self, ones: usize) -> f64 {
        if ones % 2 == 1 || ones > 2 * self.m {
            return 0.0;
        }
        let (m, k) = (self.m as u32, (ones / 2) as u32);
        let q = self.p.value();
        let ratio = binomial(m, k) as f64 / binomial(2 * m, 2 * k) as f64;
        q.powi(k as i32) * (1.0 - q).powi((m - k) as i32) * ratio
    }

    /// `D_p(z)` for a point of `2m` bits.
    pub fn mass(&self, z: u64) -> Result<f64> {
        if self.m < MAX_M && z >> (2 * self.m) != 0 {
            return Err(Error::LengthMismatch {
                expected: 2 * self.m,
                actual: 64 - z.leading_zeros() as usize,
            });
        }
        Ok(self.mass_at_weight(z.count_ones() as usize))
    }

    /// `D_p(z)` for an explicit bit tuple.
    pub fn mass_of(&self, z: &[bool]) -> Result<f64> {
        if z.len() != 2 * self.m {
            return Err(Error::LengthMismatch {
                expected: 2 * self.m,
                actual: z.len(),
            });
        }
        Ok(self.mass_at_weight(z.iter().filter(|&&b| b).count()))
    }

    /// `μ_p(z)` on `2m` coordinates, for comparison.
    pub fn product_mass(&self, z: u64) -> f64 {
        let k = z.count_ones() as i32;
        let q = self.p.value();
        q.powi(k) * (1.0 - q).powi(2 * self.m as i32 - k)
    }

    /// Draw `π`, draw `x ∼ μ_{p,m}`, return `π⁻¹(x)`.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        let pi = TwoToOneMap::random(self.m, rng).expect("m ≥ 1");
        let x = self.p.sample(self.m, rng) as u64;
        pull_back(&pi, x)
    }

    /// `Σ_z D_p(z)` over `{0,1}^{2m}`, grouped by weight.
    pub fn total_mass(&self) -> f64 {
        (0..=self.m)
            .map(|k| binomial(2 * self.m as u32, 2 * k as u32) as f64 * self.mass_at_weight(2 * k))
            .sum()
    }
}

/// `z_j = x_{π(j)}`.
pub fn pull_back(pi: &MinorMap, x: u64) -> u64 {
    pi.image()
        .iter()
        .enumerate()
        .fold(0, |z, (j, &t)| z | ((x >> t) & 1) << j)
}

/// Result of the exhaustive density comparison `D_p(z) / μ_p(z)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DensityAudit {
    pub min_ratio: f64,
    pub argmin: u64,
    pub max_ratio: f64,
    pub argmax: u64,
}

/// Min and max of `D_p(z)/μ_p(z)` over even-weight `z ∈ {0,1}^{2m}`.
pub fn density_ratio_audit(m: usize, p: BiasParam) -> Result<DensityAudit> {
    if m > MAX_AUDIT_M {
        return Err(Error::ArityCap {
            arity: m,
            cap: MAX_AUDIT_M,
        });
    }
    let measure = PullbackMeasure::new(m, p)?;
    let mut audit = DensityAudit {
        min_ratio: f64::INFINITY,
        argmin: 0,
        max_ratio: f64::NEG_INFINITY,
        argmax: 0,
    };
    for z in 0u64..1 << (2 * m) {
        if z.count_ones() % 2 == 1 {
            continue;
        }
        let ratio = measure.mass_at_weight(z.count_ones() as usize) / measure.product_mass(z);
        if ratio < audit.min_ratio {
            audit.min_ratio = ratio;
            audit.argmin = z;
        }
        if ratio > audit.max_ratio {
            audit.max_ratio = ratio;
            audit.argmax = z;
        }
    }
    Ok(audit)
}

/// Both sides of the gluing inequality for identifying the last two
/// coordinates `m−2, m−1` (0-based) into `m−2`:
/// `Inf[f^π, m−2] ≥ λ·Inf[f, m−2] − Inf[f, m−1]/λ`, `λ = min(p, 1−p)`.
pub fn gluing_bound_audit(f: &BooleanFunction, p: BiasParam) -> Result<(f64, f64)> {
    let m = f.arity();
    if m < 2 {
        return Err(Error::param("gluing needs arity ≥ 2"));
    }
    let glue = MinorMap::identify(m, &[m - 2, m - 1])?;
    let g = f.apply_minor(&glue)?;
    let lambda = p.lambda();
    let lhs = influence(&g, p, m - 2, InfluenceMethod::Flip)?;
    let rhs = lambda * influence(f, p, m - 2, InfluenceMethod::Flip)?
        - influence(f, p, m - 1, InfluenceMethod::Flip)? / lambda;
    Ok((lhs, rhs))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExpectationMode {
    Exact,
    MonteCarlo { samples: usize, seed: u64 },
}

/// `E_{z∼D_p}[h(z)]` for `h` of even arity `2m`.
pub fn pullback_expectation(h: &BooleanFunction, p: BiasParam, mode: ExpectationMode) -> Result<Estimate> {
    if h.arity() % 2 == 1 || h.arity() == 0 {
        return Err(Error::param("pull-back expectation needs even positive arity"));
    }
    let measure = PullbackMeasure::new(h.arity() / 2, p)?;
    match mode {
        ExpectationMode::Exact => {
            if measure.m() > MAX_AUDIT_M {
                return Err(Error::ArityCap {
                    arity: measure.m(),
                    cap: MAX_AUDIT_M,
                });
            }
            let value = (0..h.len())
                .filter(|&z| h.get(z))
                .map(|z| measure.mass_at_weight(z.count_ones() as usize))
                .sum();
            Ok(Estimate { value, std_error: 0.0 })
        }
        ExpectationMode::MonteCarlo { samples, seed } => {
            let hits = count_parallel(samples, seed, |rng| h.get(measure.sample(rng) as usize));
            let q = hits as f64 / samples as f64;
            Ok(Estimate {
                value: q,
                std_error: crate::stats::bernoulli_se(q, samples),
            })
        }
    }
}

/// Count successes of `trial` over `samples` draws, chunked so that chunk `c`
/// always uses stream `c` of `seed`.
fn count_parallel<F>(samples: usize, seed: u64, trial: F) -> usize
where
    F: Fn(&mut crate::rng::ExperimentRng) -> bool + Sync,
{
    const CHUNK: usize = 1 << 13;
    (0..samples.div_ceil(CHUNK))
        .into_par_iter()
        .map(|c| {
            let mut rng = trial_rng(seed, c as u64);
            let len = CHUNK.min(samples - c * CHUNK);
            (0..len).filter(|_| trial(&mut rng)).count()
        })
        .sum()
}

/// Draw a uniform 2-to-1 map in two steps: pick the partner `j` of `i`
/// uniformly among the other `2m−1` coordinates, then pair the rest
/// uniformly. Fiber labels are a uniform permutation of `[m]`.
pub fn split_sample<R: Rng + ?Sized>(m: usize, i: usize, rng: &mut R) -> Result<TwoToOneMap> {
    if m == 0 {
        return Err(Error::param("2-to-1 maps need m ≥ 1"));
    }
    if i >= 2 * m {
        return Err(Error::CoordinateOutOfRange { index: i, arity: 2 * m });
    }
    let mut j = rng.random_range(0..2 * m - 1);
    if j >= i {
        j += 1;
    }
    let mut rest: Vec<usize> = (0..2 * m).filter(|&c| c != i && c != j).collect();
    rest.shuffle(rng);
    let mut labels: Vec<usize> = (0..m).collect();
    labels.shuffle(rng);
    let mut image = vec![0; 2 * m];
    image[i] = labels[0];
    image[j] = labels[0];
    for (pair, chunk) in rest.chunks(2).enumerate() {
        image[chunk[0]] = labels[pair + 1];
        image[chunk[1]] = labels[pair + 1];
    }
    TwoToOneMap::new(MinorMap::new(m, image)?)
}

/// Outcome of the random 2-to-1 influence-preservation experiment.
#[derive(Clone, Debug, PartialEq)]
pub struct PreservationReport {
    pub coordinate: usize,
    /// `(target coordinate, Inf[f^π, π(i)])` per trial, in trial order.
    pub trials: Vec<(usize, f64)>,
    /// `(τ, Pr[Inf ≥ τ])`
    pub exceedance: Vec<(f64, f64)>,
    /// `I[f]/m`
    pub total_influence_per_m: f64,
    /// `Inf[f, i]`
    pub source_influence: f64,
}

impl PreservationReport {
    pub fn mean_influence(&self) -> f64 {
        self.trials.iter().map(|t| t.1).sum::<f64>() / self.trials.len().max(1) as f64
    }
}

fn exceedance(values: &[f64], taus: &[f64]) -> Vec<(f64, f64)> {
    taus.iter()
        .map(|&tau| {
            let hits = values.iter().filter(|&&v| v >= tau).count();
            (tau, hits as f64 / values.len().max(1) as f64)
        })
        .collect()
}

fn check_even(f: &BooleanFunction, i: usize) -> Result<usize> {
    if f.arity() % 2 == 1 || f.arity() == 0 {
        return Err(Error::param("2-to-1 experiments need even positive arity; pad with a dummy coordinate"));
    }
    if i >= f.arity() {
        return Err(Error::CoordinateOutOfRange {
            index: i,
            arity: f.arity(),
        });
    }
    Ok(f.arity() / 2)
}

fn minor_influence(f: &BooleanFunction, pi: &MinorMap, i: usize, p: BiasParam) -> (usize, f64) {
    let g = f.apply_minor(pi).expect("arity checked");
    let target = pi.apply(i);
    (target, p.variance() * flip_probability(&g, p, target).expect("in range"))
}

/// Pad an odd-arity function with a dummy trailing coordinate.
pub fn pad_to_even(f: &BooleanFunction) -> BooleanFunction {
    if f.arity().is_multiple_of(2) {
        return f.clone();
    }
    let n = f.arity();
    BooleanFunction::from_fn(n + 1, |x| f.get(x & ((1 << n) - 1))).expect("arity within cap")
}

/// For `trials` independent uniform 2-to-1 maps, record `Inf[f^π, π(i)]`.
/// Trial `t` draws its map from stream `t` of `seed`.
pub fn influence_preservation_experiment(
    f: &BooleanFunction,
    i: usize,
    p: BiasParam,
    trials: usize,
    taus: &[f64],
    seed: u64,
) -> Result<PreservationReport> {
    let m = check_even(f, i)?;
    let results: Vec<(usize, f64)> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(seed, t as u64);
            let pi = TwoToOneMap::random(m, &mut rng).expect("m ≥ 1");
            minor_influence(f, &pi, i, p)
        })
        .collect();
    report(f, i, p, results, taus)
}

/// The same report computed over every 2-to-1 map (uniform weights).
pub fn influence_preservation_exact(
    f: &BooleanFunction,
    i: usize,
    p: BiasParam,
    taus: &[f64],
) -> Result<PreservationReport> {
    let m = check_even(f, i)?;
    let results: Vec<(usize, f64)> = TwoToOneMap::enumerate(m)?
        .par_iter()
        .map(|pi| minor_influence(f, pi, i, p))
        .collect();
    report(f, i, p, results, taus)
}

fn report(
    f: &BooleanFunction,
    i: usize,
    p: BiasParam,
    trials: Vec<(usize, f64)>,
    taus: &[f64],
) -> Result<PreservationReport> {
    let values: Vec<f64> = trials.iter().map(|t| t.1).collect();
    Ok(PreservationReport {
        coordinate: i,
        exceedance: exceedance(&values, taus),
        trials,
        total_influence_per_m: crate::fourier::total_influence_summed(f, p) / (f.arity() / 2) as f64,
        source_influence: influence(f, p, i, InfluenceMethod::Flip)?,
    })
}
