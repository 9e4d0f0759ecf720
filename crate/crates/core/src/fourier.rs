//! p-biased Fourier analysis.
//!
//! Characters are `χ_S(x) = Π_{i∈S} (xᵢ − p)/√(p(1−p))`, orthonormal under the
//! product measure `μ_p`. Coefficients are indexed by the subset bitmask `S`.

use rand::Rng;
use rayon::prelude::*;

use crate::boolfn::{point, BooleanFunction};
use crate::error::{Error, Result};
use crate::rng::trial_rng;

/// Tables at least this long are transformed with rayon. Each output element
/// is computed by the same expression either way, so results are identical.
const PARALLEL_LEN: usize = 1 << 14;

/// Bias `p ∈ (0,1)` of the product measure `μ_p`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct BiasParam(f64);

impl BiasParam {
    pub const UNIFORM: BiasParam = BiasParam(0.5);

    pub fn new(p: f64) -> Result<Self> {
        if p > 0.0 && p < 1.0 {
            Ok(Self(p))
        } else {
            Err(Error::param(format!("bias p={p} must lie strictly in (0,1)")))
        }
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }

    /// `p(1−p)`
    #[inline]
    pub fn variance(self) -> f64 {
        self.0 * (1.0 - self.0)
    }

    #[inline]
    pub fn sigma(self) -> f64 {
        self.variance().sqrt()
    }

    /// `min(p, 1−p)`
    #[inline]
    pub fn lambda(self) -> f64 {
        self.0.min(1.0 - self.0)
    }

    /// `μ_p(x)` for every `x ∈ {0,1}ⁿ`.
    pub fn point_masses(self, n: usize) -> Vec<f64> {
        let by_weight = self.masses_by_weight(n);
        (0..1usize << n)
            .map(|x| by_weight[x.count_ones() as usize])
            .collect()
    }

    /// `p^k (1−p)^{n−k}` for `k = 0..=n`.
    pub fn masses_by_weight(self, n: usize) -> Vec<f64> {
        let p = self.0;
        (0..=n)
            .map(|k| p.powi(k as i32) * (1.0 - p).powi((n - k) as i32))
            .collect()
    }

    /// Draw `x ∼ μ_p` on `n` coordinates.
    pub fn sample<R: Rng + ?Sized>(self, n: usize, rng: &mut R) -> usize {
        (0..n).fold(0, |x, i| x | ((rng.random::<f64>() < self.0) as usize) << i)
    }
}

/// `E_p[f]` computed directly from the table.
pub fn expectation(f: &BooleanFunction, p: BiasParam) -> f64 {
    let masses = p.masses_by_weight(f.arity());
    (0..f.len())
        .filter(|&x| f.get(x))
        .map(|x| masses[x.count_ones() as usize])
        .sum()
}

/// `E_p[g]` for a real table.
pub fn expectation_real(table: &[f64], p: BiasParam) -> f64 {
    let n = table.len().trailing_zeros() as usize;
    let masses = p.masses_by_weight(n);
    table
        .iter()
        .enumerate()
        .map(|(x, v)| masses[x.count_ones() as usize] * v)
        .sum()
}

#[derive(Clone, Debug, PartialEq)]
pub struct FourierExpansion {
    arity: usize,
    p: BiasParam,
    coeffs: Vec<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    /// keep `|S| ≤ d`
    Low,
    /// keep `|S| > d`
    High,
}

fn butterfly(table: &mut [f64], pass: impl Fn(f64, f64) -> (f64, f64) + Sync + Send + Copy) {
    let n = table.len().trailing_zeros() as usize;
    for i in 0..n {
        let half = 1usize << i;
        let block = |chunk: &mut [f64]| {
            let (lo, hi) = chunk.split_at_mut(half);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (x, y) = pass(*a, *b);
                *a = x;
                *b = y;
            }
        };
        if table.len() >= PARALLEL_LEN {
            table.par_chunks_mut(2 * half).for_each(block);
        } else {
            table.chunks_mut(2 * half).for_each(block);
        }
    }
}

impl FourierExpansion {
    /// Expand a Boolean function under `μ_p`.
    pub fn expand(f: &BooleanFunction, p: BiasParam) -> Self {
        let table: Vec<f64> = (0..f.len()).map(|x| f.value(x)).collect();
        Self::expand_real(table, p)
    }

    /// Expand a real-valued table of length `2ⁿ`.
    ///
    /// Per coordinate the pair `(f₀, f₁)` becomes
    /// `((1−p)f₀ + p f₁, √(p(1−p))·(f₁ − f₀))`.
    pub fn expand_real(mut table: Vec<f64>, p: BiasParam) -> Self {
        assert!(table.len().is_power_of_two(), "table length must be 2^n");
        let arity = table.len().trailing_zeros() as usize;
        let (q, s) = (p.value(), p.sigma());
        butterfly(&mut table, move |f0, f1| ((1.0 - q) * f0 + q * f1, s * (f1 - f0)));
        Self {
            arity,
            p,
            coeffs: table,
        }
    }

    pub fn from_coefficients(coeffs: Vec<f64>, p: BiasParam) -> Result<Self> {
        if !coeffs.len().is_power_of_two() {
            return Err(Error::param("coefficient count must be 2^n"));
        }
        Ok(Self {
            arity: coeffs.len().trailing_zeros() as usize,
            p,
            coeffs,
        })
    }

    pub fn zero(arity: usize, p: BiasParam) -> Self {
        Self {
            arity,
            p,
            coeffs: vec![0.0; 1 << arity],
        }
    }

    /// The real function `Σ_S f̂(S) χ_S` as a table.
    pub fn synthesize(&self) -> Vec<f64> {
        let (q, s) = (self.p.value(), self.p.sigma());
        let mut table = self.coeffs.clone();
        // χ(0) = −p/σ, χ(1) = (1−p)/σ
        butterfly(&mut table, move |c0, c1| (c0 - c1 * q / s, c0 + c1 * (1.0 - q) / s));
        table
    }

    /// Synthesize and threshold at 1/2.
    pub fn to_boolean(&self) -> BooleanFunction {
        let table = self.synthesize();
        BooleanFunction::from_fn(self.arity, |x| table[x] > 0.5).expect("arity within cap")
    }

    #[inline]
    pub fn arity(&self) -> usize {
        self.arity
    }

    #[inline]
    pub fn bias(&self) -> BiasParam {
        self.p
    }

    #[inline]
    pub fn coefficient(&self, mask: usize) -> f64 {
        self.coeffs[mask]
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coeffs
    }

    /// `f̂(∅) = E_p[f]`
    pub fn mean(&self) -> f64 {
        self.coeffs[0]
    }

    /// `‖f‖² = Σ_S f̂(S)²`
    pub fn norm_sq(&self) -> f64 {
        self.coeffs.iter().map(|c| c * c).sum()
    }

    /// `⟨f, g⟩ = Σ_S f̂(S) ĝ(S)`
    pub fn inner(&self, other: &Self) -> f64 {
        self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a * b).sum()
    }

    /// `Σ_{S∋i} f̂(S)²`
    pub fn influence(&self, i: usize) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(s, _)| (s >> i) & 1 == 1)
            .map(|(_, c)| c * c)
            .sum()
    }

    /// `Σ_S |S|·f̂(S)²`
    pub fn total_influence(&self) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(s, c)| s.count_ones() as f64 * c * c)
            .sum()
    }

    /// Fourier weight at each level `|S| = 0..=n`.
    pub fn level_weights(&self) -> Vec<f64> {
        let mut w = vec![0.0; self.arity + 1];
        for (s, c) in self.coeffs.iter().enumerate() {
            w[s.count_ones() as usize] += c * c;
        }
        w
    }

    pub fn truncate(&self, d: usize, side: Side) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(s, &c)| {
                let low = s.count_ones() as usize <= d;
                if low == (side == Side::Low) {
                    c
                } else {
                    0.0
                }
            })
            .collect();
        Self {
            arity: self.arity,
            p: self.p,
            coeffs,
        }
    }

    /// `T_δ`: scale `f̂(S)` by `δ^{|S|}`.
    pub fn noise_operator(&self, delta: f64) -> Result<Self> {
        check_delta(delta)?;
        let powers: Vec<f64> = (0..=self.arity).map(|k| delta.powi(k as i32)).collect();
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(s, &c)| powers[s.count_ones() as usize] * c)
            .collect();
        Ok(Self {
            arity: self.arity,
            p: self.p,
            coeffs,
        })
    }

    /// CSV with columns `mask,size,coefficient`, sorted by mask.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("mask,size,coefficient\n");
        for (s, c) in self.coeffs.iter().enumerate() {
            out.push_str(&format!("{s},{},{c:.16e}\n", s.count_ones()));
        }
        out
    }
}

fn check_delta(delta: f64) -> Result<()> {
    if (0.0..=1.0).contains(&delta) {
        Ok(())
    } else {
        Err(Error::param(format!("noise δ={delta} outside [0,1]")))
    }
}

fn check_coordinate(f: &BooleanFunction, i: usize) -> Result<()> {
    if i < f.arity() {
        Ok(())
    } else {
        Err(Error::CoordinateOutOfRange {
            index: i,
            arity: f.arity(),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InfluenceMethod {
    /// `E_x[(f(x) − E_s f(x^{i→s}))²]`
    Definition,
    /// `Σ_{S∋i} f̂(S)²`
    Spectral,
    /// `p(1−p)·Pr_p[f(x) ≠ f(x⊕i)]`
    Flip,
}

/// `Pr_p[f(x) ≠ f(x ⊕ i)]`, the unnormalized influence.
pub fn flip_probability(f: &BooleanFunction, p: BiasParam, i: usize) -> Result<f64> {
    check_coordinate(f, i)?;
    let masses = p.masses_by_weight(f.arity());
    Ok((0..f.len())
        .filter(|&x| f.get(x) != f.get(point::flip(x, i)))
        .map(|x| masses[x.count_ones() as usize])
        .sum())
}

/// `Inf_i^{(p)}[f]`.
pub fn influence(f: &BooleanFunction, p: BiasParam, i: usize, method: InfluenceMethod) -> Result<f64> {
    check_coordinate(f, i)?;
    match method {
        InfluenceMethod::Spectral => Ok(FourierExpansion::expand(f, p).influence(i)),
        InfluenceMethod::Flip => Ok(p.variance() * flip_probability(f, p, i)?),
        InfluenceMethod::Definition => {
            let q = p.value();
            let masses = p.masses_by_weight(f.arity());
            Ok((0..f.len())
                .map(|x| {
                    let resampled = (1.0 - q) * f.value(point::set(x, i, false))
                        + q * f.value(point::set(x, i, true));
                    let d = f.value(x) - resampled;
                    masses[x.count_ones() as usize] * d * d
                })
                .sum())
        }
    }
}

/// `I^{(p)}[f] = Σ_S |S|·f̂(S)²`.
pub fn total_influence(f: &BooleanFunction, p: BiasParam) -> f64 {
    FourierExpansion::expand(f, p).total_influence()
}

/// `Σᵢ Inf_i^{(p)}[f]` via flip probabilities.
pub fn total_influence_summed(f: &BooleanFunction, p: BiasParam) -> f64 {
    (0..f.arity())
        .map(|i| influence(f, p, i, InfluenceMethod::Flip).expect("coordinate in range"))
        .sum()
}

/// `T_{δ,p} g` evaluated straight from the noisy-distribution definition:
/// per coordinate, keep `xᵢ` with probability δ, else resample from `μ_p`.
pub fn noise_operator_direct(table: &[f64], p: BiasParam, delta: f64) -> Result<Vec<f64>> {
    check_delta(delta)?;
    let q = p.value();
    let n = table.len().trailing_zeros() as usize;
    let mut cur = table.to_vec();
    for i in 0..n {
        let next: Vec<f64> = (0..cur.len())
            .map(|x| {
                let resampled = (1.0 - q) * cur[point::set(x, i, false)] + q * cur[point::set(x, i, true)];
                delta * cur[x] + (1.0 - delta) * resampled
            })
            .collect();
        cur = next;
    }
    Ok(cur)
}

/// Draw `y ∼ N_{δ,p}(x)`.
pub fn noisy_copy<R: Rng + ?Sized>(x: usize, n: usize, p: BiasParam, delta: f64, rng: &mut R) -> usize {
    let mut y = x;
    for i in 0..n {
        if rng.random::<f64>() >= delta {
            y = point::set(y, i, rng.random::<f64>() < p.value());
        }
    }
    y
}

/// A point estimate with its standard error (zero for exact paths).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub std_error: f64,
}

/// Monte-Carlo estimate of `T_{δ,p} f (x)`.
pub fn noise_operator_mc(
    f: &BooleanFunction,
    p: BiasParam,
    delta: f64,
    x: usize,
    samples: usize,
    seed: u64,
) -> Result<Estimate> {
    check_delta(delta)?;
    let mut rng = trial_rng(seed, 0);
    let hits = (0..samples)
        .filter(|_| f.get(noisy_copy(x, f.arity(), p, delta, &mut rng)))
        .count();
    let q = hits as f64 / samples as f64;
    Ok(Estimate {
        value: q,
        std_error: crate::stats::bernoulli_se(q, samples),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NoiseMethod {
    /// `2·E_p[f] − 2·Σ_S δ^{|S|} f̂(S)²`
    Spectral,
    MonteCarlo { samples: usize, seed: u64 },
}

/// `NS_{δ,p}[f] = Pr[f(x) ≠ f(y)]`, `x ∼ μ_p`, `y ∼ N_{δ,p}(x)`.
///
/// For Boolean `f`, `Pr[f(x) ≠ f(y)] = E f(x) + E f(y) − 2E[f(x)f(y)]` and
/// both marginals are `μ_p`, so the spectral path is
/// `2E_p[f] − 2⟨f, T_δ f⟩` with `⟨f, T_δ f⟩ = Σ δ^{|S|} f̂(S)²`.
pub fn noise_sensitivity(f: &BooleanFunction, p: BiasParam, delta: f64, method: NoiseMethod) -> Result<Estimate> {
    check_delta(delta)?;
    match method {
        NoiseMethod::Spectral => {
            let e = FourierExpansion::expand(f, p);
            let stable = e.inner(&e.noise_operator(delta)?);
            Ok(Estimate {
                value: (2.0 * e.mean() - 2.0 * stable).max(0.0),
                std_error: 0.0,
            })
        }
        NoiseMethod::MonteCarlo { samples, seed } => {
            const CHUNK: usize = 1 << 14;
            let chunks = samples.div_ceil(CHUNK);
            let n = f.arity();
            let differ: usize = (0..chunks)
                .into_par_iter()
                .map(|c| {
                    let mut rng = trial_rng(seed, c as u64);
                    let len = CHUNK.min(samples - c * CHUNK);
                    (0..len)
                        .filter(|_| {
                            let x = p.sample(n, &mut rng);
                            let y = noisy_copy(x, n, p, delta, &mut rng);
                            f.get(x) != f.get(y)
                        })
                        .count()
                })
                .sum();
            let q = differ as f64 / samples as f64;
            Ok(Estimate {
                value: q,
                std_error: crate::stats::bernoulli_se(q, samples),
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolfn::MinorMap;
    use crate::rng::seeded;
    use proptest::prelude::*;

    const EPS: f64 = 1e-9;

    fn p(v: f64) -> BiasParam {
        BiasParam::new(v).unwrap()
    }

    /// `⟨f, χ_S⟩` by brute force over the cube.
    fn brute_coefficient(f: &BooleanFunction, bias: BiasParam, s: usize) -> f64 {
        let q = bias.value();
        let masses = bias.point_masses(f.arity());
        (0..f.len())
            .map(|x| {
                let chi: f64 = (0..f.arity())
                    .filter(|i| (s >> i) & 1 == 1)
                    .map(|i| (point::bit(x, i) as u8 as f64 - q) / bias.sigma())
                    .product();
                masses[x] * f.value(x) * chi
            })
            .sum()
    }

    fn collapse_example() -> BooleanFunction {
        BooleanFunction::from_fn(4, |x| {
            let (b, c, d) = (point::bit(x, 1), point::bit(x, 2), point::bit(x, 3));
            !(b == c && c == d) && point::bit(x, 0)
        })
        .unwrap()
    }

    #[test]
    fn bias_rejects_endpoints() {
        assert!(BiasParam::new(0.0).is_err());
        assert!(BiasParam::new(1.0).is_err());
        assert!(BiasParam::new(f64::NAN).is_err());
        assert!(BiasParam::new(0.3).is_ok());
    }

    #[test]
    fn constant_expansion() {
        for q in [0.1, 0.5, 0.9] {
            let e = FourierExpansion::expand(&BooleanFunction::constant(3, true).unwrap(), p(q));
            assert!((e.mean() - 1.0).abs() < EPS);
            assert!(e.coefficients()[1..].iter().all(|c| c.abs() < EPS));
        }
    }

    #[test]
    fn dictator_expansion() {
        for q in [0.2, 0.5, 0.7] {
            let e = FourierExpansion::expand(&BooleanFunction::dictator(1, 0).unwrap(), p(q));
            assert!((e.coefficient(0) - q).abs() < EPS);
            assert!((e.coefficient(1) - (q * (1.0 - q)).sqrt()).abs() < EPS);
        }
    }

    #[test]
    fn parity2_expansion_matches_brute_force() {
        let f = BooleanFunction::parity(2).unwrap();
        let e = FourierExpansion::expand(&f, BiasParam::UNIFORM);
        let expected = [0.5, 0.0, 0.0, -0.5];
        for s in 0..4 {
            assert!((brute_coefficient(&f, BiasParam::UNIFORM, s) - expected[s]).abs() < EPS);
            assert!((e.coefficient(s) - expected[s]).abs() < EPS);
        }
    }

    #[test]
    fn butterfly_matches_brute_force_inner_products() {
        let mut rng = seeded(3);
        for q in [0.1, 1.0 / 3.0, 0.9] {
            let f = BooleanFunction::random(5, &mut rng).unwrap();
            let e = FourierExpansion::expand(&f, p(q));
            for s in 0..32 {
                assert!((e.coefficient(s) - brute_coefficient(&f, p(q), s)).abs() < EPS);
            }
        }
    }

    #[test]
    fn synthesize_examples() {
        // χ_{0} at p=1/2 is ±1
        let mut c = vec![0.0; 2];
        c[1] = 1.0;
        let e = FourierExpansion::from_coefficients(c, BiasParam::UNIFORM).unwrap();
        let t = e.synthesize();
        assert!((t[0] + 1.0).abs() < EPS && (t[1] - 1.0).abs() < EPS);
        let z = FourierExpansion::zero(3, p(0.3));
        assert!(z.synthesize().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn influence_examples() {
        let c = BooleanFunction::constant(3, true).unwrap();
        for m in [InfluenceMethod::Definition, InfluenceMethod::Spectral, InfluenceMethod::Flip] {
            assert_eq!(influence(&c, p(0.3), 1, m).unwrap(), 0.0);
            let d = BooleanFunction::dictator(3, 0).unwrap();
            assert!((influence(&d, p(0.3), 0, m).unwrap() - 0.21).abs() < EPS);
            assert!(influence(&d, p(0.3), 2, m).unwrap().abs() < EPS);
        }
        assert!(influence(&c, p(0.3), 3, InfluenceMethod::Flip).is_err());
    }

    #[test]
    fn influence_collapse_values() {
        let f = collapse_example();
        let u = BiasParam::UNIFORM;
        let expected = [3.0 / 16.0, 1.0 / 16.0, 1.0 / 16.0, 1.0 / 16.0];
        for (i, want) in expected.iter().enumerate() {
            for m in [InfluenceMethod::Definition, InfluenceMethod::Spectral, InfluenceMethod::Flip] {
                assert!((influence(&f, u, i, m).unwrap() - want).abs() < EPS);
            }
            // unnormalized convention: 3/4 and 1/4
            assert!((flip_probability(&f, u, i).unwrap() - want * 4.0).abs() < EPS);
        }
        let g = f.apply_minor(&MinorMap::identify(4, &[1, 2, 3]).unwrap()).unwrap();
        assert_eq!(influence(&g, u, 0, InfluenceMethod::Flip).unwrap(), 0.0);
    }

    #[test]
    fn total_influence_examples() {
        assert_eq!(total_influence(&BooleanFunction::constant(4, false).unwrap(), p(0.4)), 0.0);
        let d = BooleanFunction::dictator(4, 2).unwrap();
        assert!((total_influence(&d, p(0.4)) - 0.24).abs() < EPS);
        for n in 1..=10 {
            let par = BooleanFunction::parity(n).unwrap();
            assert!((total_influence(&par, BiasParam::UNIFORM) - n as f64 / 4.0).abs() < EPS);
            assert!((total_influence_summed(&par, BiasParam::UNIFORM) - n as f64 / 4.0).abs() < EPS);
        }
    }

    #[test]
    fn truncation_examples() {
        let f = BooleanFunction::parity(2).unwrap();
        let e = FourierExpansion::expand(&f, BiasParam::UNIFORM);
        assert_eq!(e.truncate(2, Side::Low), e);
        let low0 = e.truncate(0, Side::Low);
        assert_eq!(low0.coefficients(), &[0.5, 0.0, 0.0, 0.0]);
        let high1 = e.truncate(1, Side::High);
        assert!((high1.coefficient(3) + 0.5).abs() < EPS);
        assert!((high1.norm_sq() - 0.25).abs() < EPS);
    }

    #[test]
    fn noise_operator_examples() {
        let f = BooleanFunction::dictator(1, 0).unwrap();
        let q = p(0.3);
        let e = FourierExpansion::expand(&f, q);
        assert_eq!(e.noise_operator(1.0).unwrap(), e);
        let z = e.noise_operator(0.0).unwrap();
        assert!((z.mean() - 0.3).abs() < EPS && z.coefficient(1) == 0.0);
        let half = e.noise_operator(0.5).unwrap();
        assert!((half.coefficient(1) - 0.5 * 0.21f64.sqrt()).abs() < EPS);
        assert!(e.noise_operator(1.5).is_err());
    }

    #[test]
    fn noise_operator_spectral_matches_definition() {
        let mut rng = seeded(11);
        for n in 1..=6 {
            for (q, delta) in [(0.5, 0.3), (0.2, 0.8), (0.9, 0.55)] {
                let f = BooleanFunction::random(n, &mut rng).unwrap();
                let table: Vec<f64> = (0..f.len()).map(|x| f.value(x)).collect();
                let direct = noise_operator_direct(&table, p(q), delta).unwrap();
                let spectral = FourierExpansion::expand(&f, p(q))
                    .noise_operator(delta)
                    .unwrap()
                    .synthesize();
                for x in 0..f.len() {
                    assert!((direct[x] - spectral[x]).abs() < EPS);
                }
            }
        }
    }

    #[test]
    fn noise_operator_mc_agrees_within_standard_errors() {
        let f = BooleanFunction::majority(5).unwrap();
        let q = p(0.4);
        let table: Vec<f64> = (0..f.len()).map(|x| f.value(x)).collect();
        let direct = noise_operator_direct(&table, q, 0.6).unwrap();
        for x in [0usize, 7, 19, 31] {
            let est = noise_operator_mc(&f, q, 0.6, x, 200_000, x as u64).unwrap();
            assert!((est.value - direct[x]).abs() <= 4.0 * est.std_error.max(1e-4), "x={x}");
        }
    }

    #[test]
    fn noise_sensitivity_examples() {
        let d = BooleanFunction::dictator(3, 0).unwrap();
        for delta in [0.0, 0.25, 0.5, 0.9] {
            let ns = noise_sensitivity(&d, BiasParam::UNIFORM, delta, NoiseMethod::Spectral).unwrap();
            assert!((ns.value - (1.0 - delta) / 2.0).abs() < EPS);
        }
        let c = BooleanFunction::constant(3, true).unwrap();
        assert!(noise_sensitivity(&c, p(0.3), 0.5, NoiseMethod::Spectral).unwrap().value.abs() < EPS);
        let f = BooleanFunction::majority(5).unwrap();
        assert!(noise_sensitivity(&f, p(0.3), 1.0, NoiseMethod::Spectral).unwrap().value.abs() < EPS);
        assert!(noise_sensitivity(&f, p(0.3), -0.1, NoiseMethod::Spectral).is_err());
    }

    #[test]
    fn noise_sensitivity_mc_matches_spectral() {
        let mut rng = seeded(5);
        for (q, delta) in [(0.5, 0.7), (0.25, 0.4)] {
            let f = BooleanFunction::random(6, &mut rng).unwrap();
            let exact = noise_sensitivity(&f, p(q), delta, NoiseMethod::Spectral).unwrap();
            let mc = noise_sensitivity(&f, p(q), delta, NoiseMethod::MonteCarlo { samples: 200_000, seed: 9 }).unwrap();
            assert!((exact.value - mc.value).abs() <= 3.0 * mc.std_error, "{exact:?} vs {mc:?}");
        }
    }

    #[test]
    fn csv_layout() {
        let e = FourierExpansion::expand(&BooleanFunction::dictator(1, 0).unwrap(), BiasParam::UNIFORM);
        let csv = e.to_csv();
        let lines: Vec<_> = csv.lines().collect();
        assert_eq!(lines[0], "mask,size,coefficient");
        assert!(lines[1].starts_with("0,0,5.0000000000000000e-1"));
        assert!(lines[2].starts_with("1,1,"));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn parseval_and_roundtrip(n in 0usize..10, seed in any::<u64>(), qi in 0usize..4) {
            let q = p([0.1, 1.0 / 3.0, 0.5, 0.9][qi]);
            let f = BooleanFunction::random(n, &mut seeded(seed)).unwrap();
            let e = FourierExpansion::expand(&f, q);
            let mean = expectation(&f, q);
            prop_assert!((e.norm_sq() - mean).abs() < EPS);
            prop_assert!((e.mean() - mean).abs() < EPS);
            prop_assert_eq!(e.to_boolean(), f.clone());
            let t = e.synthesize();
            for x in 0..f.len() {
                prop_assert!((t[x] - f.value(x)).abs() < EPS);
            }
            for d in 0..=n {
                let lo = e.truncate(d, Side::Low).norm_sq();
                let hi = e.truncate(d, Side::High).norm_sq();
                prop_assert!((lo + hi - e.norm_sq()).abs() < EPS);
            }
        }

        #[test]
        fn influence_methods_agree(n in 1usize..9, seed in any::<u64>(), q in 0.05f64..0.95) {
            let f = BooleanFunction::random(n, &mut seeded(seed)).unwrap();
            let bias = p(q);
            for i in 0..n {
                let a = influence(&f, bias, i, InfluenceMethod::Definition).unwrap();
                let b = influence(&f, bias, i, InfluenceMethod::Spectral).unwrap();
                let c = influence(&f, bias, i, InfluenceMethod::Flip).unwrap();
                prop_assert!((a - b).abs() < EPS && (b - c).abs() < EPS);
            }
            prop_assert!((total_influence(&f, bias) - total_influence_summed(&f, bias)).abs() < EPS);
        }
    }
}
