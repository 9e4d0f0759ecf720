//! Multilinear polynomials, threshold representations `⌈Q⌉_t` and the LP
//! machinery around them.

pub mod lp;
pub mod mcdiarmid;
pub mod search;

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;

use crate::boolfn::{BooleanFunction, MinorMap, MAX_ARITY};
use crate::error::{Error, Result};

pub use mcdiarmid::{mcdiarmid_exhaustive, mcdiarmid_experiment, McDiarmidReport, SizeClassReport};
pub use search::{
    find_heavy_set, find_representation, find_representation_with, is_heavy_set, min_max_weight,
    Backend, HeavySetOutcome, DEFAULT_MARGIN,
};

/// Polynomials index monomials by `u128` masks.
pub const MAX_POLY_ARITY: usize = 128;
const NORMALIZED_TOLERANCE: f64 = 1e-9;

/// `Q(x) = Σ_S Q̂(S) Π_{i∈S} xᵢ`, stored sparsely.
#[derive(Clone, Debug, PartialEq)]
pub struct MultilinearPoly {
    arity: usize,
    degree: usize,
    coeffs: BTreeMap<u128, f64>,
}

impl MultilinearPoly {
    pub fn new(arity: usize, degree: usize) -> Result<Self> {
        if arity > MAX_POLY_ARITY {
            return Err(Error::ArityCap {
                arity,
                cap: MAX_POLY_ARITY,
            });
        }
        Ok(Self {
            arity,
            degree,
            coeffs: BTreeMap::new(),
        })
    }

    pub fn from_terms(arity: usize, degree: usize, terms: impl IntoIterator<Item = (u128, f64)>) -> Result<Self> {
        let mut q = Self::new(arity, degree)?;
        for (mask, c) in terms {
            q.add_term(mask, c)?;
        }
        Ok(q)
    }

    /// `(x₀ + … + x_{n−1}) / n`
    pub fn uniform_linear(arity: usize) -> Result<Self> {
        Self::from_terms(arity, 1, (0..arity).map(|i| (1u128 << i, 1.0 / arity as f64)))
    }

    /// Add `c` to `Q̂(mask)`.
    pub fn add_term(&mut self, mask: u128, c: f64) -> Result<()> {
        if self.arity < MAX_POLY_ARITY && mask >> self.arity != 0 {
            return Err(Error::CoordinateOutOfRange {
                index: 127 - mask.leading_zeros() as usize,
                arity: self.arity,
            });
        }
        if mask.count_ones() as usize > self.degree {
            return Err(Error::param(format!(
                "monomial of size {} exceeds degree {}",
                mask.count_ones(),
                self.degree
            )));
        }
        *self.coeffs.entry(mask).or_insert(0.0) += c;
        Ok(())
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Largest stored monomial size.
    pub fn effective_degree(&self) -> usize {
        self.coeffs
            .iter()
            .filter(|(_, c)| **c != 0.0)
            .map(|(m, _)| m.count_ones() as usize)
            .max()
            .unwrap_or(0)
    }

    pub fn coefficient(&self, mask: u128) -> f64 {
        self.coeffs.get(&mask).copied().unwrap_or(0.0)
    }

    /// Stored `(mask, Q̂(mask))` in increasing mask order.
    pub fn terms(&self) -> impl Iterator<Item = (u128, f64)> + '_ {
        self.coeffs.iter().map(|(&m, &c)| (m, c))
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.len()
    }

    /// `Q(x)` for a point given as a mask.
    pub fn eval(&self, x: u128) -> f64 {
        self.coeffs
            .iter()
            .filter(|(&m, _)| m & !x == 0)
            .map(|(_, &c)| c)
            .sum()
    }

    /// `Q(x)` for an explicit bit tuple.
    pub fn eval_bits(&self, x: &[bool]) -> Result<f64> {
        if x.len() != self.arity {
            return Err(Error::LengthMismatch {
                expected: self.arity,
                actual: x.len(),
            });
        }
        let mask = x.iter().enumerate().fold(0u128, |m, (i, &b)| m | (b as u128) << i);
        Ok(self.eval(mask))
    }

    /// `ω_i[Q] = Σ_{S∋i} Q̂(S)`
    pub fn weight(&self, i: usize) -> Result<f64> {
        if i >= self.arity {
            return Err(Error::CoordinateOutOfRange {
                index: i,
                arity: self.arity,
            });
        }
        Ok(self.terms().filter(|(m, _)| (m >> i) & 1 == 1).map(|(_, c)| c).sum())
    }

    pub fn weights(&self) -> Vec<f64> {
        let mut w = vec![0.0; self.arity];
        for (m, c) in self.terms() {
            let mut rest = m;
            while rest != 0 {
                let i = rest.trailing_zeros() as usize;
                w[i] += c;
                rest &= rest - 1;
            }
        }
        w
    }

    pub fn max_weight(&self) -> f64 {
        self.weights().into_iter().fold(0.0, f64::max)
    }

    pub fn coefficient_sum(&self) -> f64 {
        self.coeffs.values().sum()
    }

    /// `Q̂(∅) = 0`
    pub fn is_unbiased(&self) -> bool {
        self.coefficient(0) == 0.0
    }

    /// All non-constant coefficients are `≥ 0`.
    pub fn is_positive(&self) -> bool {
        self.terms().all(|(m, c)| m == 0 || c >= 0.0)
    }

    /// `Σ_S Q̂(S) = 1` within `1e-9`.
    pub fn is_normalized(&self) -> bool {
        (self.coefficient_sum() - 1.0).abs() <= NORMALIZED_TOLERANCE
    }

    /// Coefficients `R̂(S) = Σ{Q̂(T) : π(T) = S}`.
    pub fn induce(&self, pi: &MinorMap) -> Result<Self> {
        if pi.source_arity() != self.arity {
            return Err(Error::ArityMismatch {
                expected: self.arity,
                actual: pi.source_arity(),
            });
        }
        let mut out = Self::new(pi.target_arity(), self.degree)?;
        for (m, c) in self.terms() {
            *out.coeffs.entry(map_mask(pi, m)).or_insert(0.0) += c;
        }
        Ok(out)
    }

    /// Dense coefficient table, for arity ≤ 16.
    pub fn dense(&self) -> Result<Vec<f64>> {
        if self.arity > 16 {
            return Err(Error::ArityCap {
                arity: self.arity,
                cap: 16,
            });
        }
        let mut out = vec![0.0; 1 << self.arity];
        for (m, c) in self.terms() {
            out[m as usize] = c;
        }
        Ok(out)
    }
}

/// `π(T)` as a mask.
pub fn map_mask(pi: &MinorMap, mask: u128) -> u128 {
    let mut out = 0u128;
    let mut rest = mask;
    while rest != 0 {
        let i = rest.trailing_zeros() as usize;
        out |= 1u128 << pi.apply(i);
        rest &= rest - 1;
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    General,
    Positive,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::General => "general",
            Mode::Positive => "positive",
        }
    }
}

impl std::str::FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "general" => Ok(Mode::General),
            "positive" => Ok(Mode::Positive),
            other => Err(Error::param(format!("unknown mode `{other}`"))),
        }
    }
}

/// `⌈Q⌉_t`: `1` iff `Q(x) ≥ t`.
#[derive(Clone, Debug, PartialEq)]
pub struct Representation {
    poly: MultilinearPoly,
    t: f64,
    mode: Mode,
}

impl Representation {
    /// Positive mode requires `Q` unbiased, positive, normalized and `t ≥ 0`.
    pub fn new(poly: MultilinearPoly, t: f64, mode: Mode) -> Result<Self> {
        if mode == Mode::Positive {
            if !poly.is_unbiased() {
                return Err(Error::param("positive representations need Q̂(∅) = 0"));
            }
            if !poly.is_positive() {
                return Err(Error::param("positive representations need non-negative coefficients"));
            }
            if !poly.is_normalized() {
                return Err(Error::param("positive representations need coefficients summing to 1"));
            }
            if t < 0.0 {
                return Err(Error::param("positive representations need t ≥ 0"));
            }
        }
        Ok(Self { poly, t, mode })
    }

    pub fn poly(&self) -> &MultilinearPoly {
        &self.poly
    }

    pub fn threshold(&self) -> f64 {
        self.t
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn arity(&self) -> usize {
        self.poly.arity
    }

    pub fn evaluate(&self, x: u128) -> bool {
        self.poly.eval(x) >= self.t
    }

    pub fn sign_function(&self) -> Result<BooleanFunction> {
        sign_function(self)
    }

    /// The representation of `f^π` with the same threshold.
    pub fn induce_minor(&self, pi: &MinorMap) -> Result<Self> {
        Ok(Self {
            poly: self.poly.induce(pi)?,
            t: self.t,
            mode: self.mode,
        })
    }

    /// Header `arity= degree= t= mode=` then `mask_hex coefficient` lines.
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "arity={} degree={} t={} mode={}\n",
            self.poly.arity,
            self.poly.degree,
            self.t,
            self.mode.name()
        );
        for (m, c) in self.poly.terms() {
            out.push_str(&format!("{m:x} {c}\n"));
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let (hline, header) = lines.next().ok_or_else(|| Error::parse(0, "missing header"))?;
        let mut fields = BTreeMap::new();
        for tok in header.split_whitespace() {
            let (k, v) = tok
                .split_once('=')
                .ok_or_else(|| Error::parse(hline, format!("expected key=value, got `{tok}`")))?;
            fields.insert(k, v);
        }
        let get = |k: &str| {
            fields
                .get(k)
                .copied()
                .ok_or_else(|| Error::parse(hline, format!("missing `{k}`")))
        };
        let num = |k: &str| -> Result<usize> {
            get(k)?
                .parse()
                .map_err(|_| Error::parse(hline, format!("bad integer for `{k}`")))
        };
        let arity = num("arity")?;
        let degree = num("degree")?;
        let t: f64 = get("t")?
            .parse()
            .map_err(|_| Error::parse(hline, "bad threshold"))?;
        let mode: Mode = get("mode")?.parse().map_err(|_| Error::parse(hline, "bad mode"))?;
        let mut poly = MultilinearPoly::new(arity, degree)?;
        for (line, body) in lines {
            let mut parts = body.split_whitespace();
            let (Some(mh), Some(ch), None) = (parts.next(), parts.next(), parts.next()) else {
                return Err(Error::parse(line, "expected `mask_hex coefficient`"));
            };
            let mask = u128::from_str_radix(mh, 16).map_err(|_| Error::parse(line, "bad mask"))?;
            let c: f64 = ch.parse().map_err(|_| Error::parse(line, "bad coefficient"))?;
            poly.add_term(mask, c).map_err(|e| Error::parse(line, e.to_string()))?;
        }
        Self::new(poly, t, mode)
    }
}

impl fmt::Display for Representation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .poly
            .terms()
            .map(|(m, c)| {
                let vars: Vec<String> = (0..self.poly.arity)
                    .filter(|i| (m >> i) & 1 == 1)
                    .map(|i| format!("x{i}"))
                    .collect();
                if vars.is_empty() {
                    format!("{c}")
                } else {
                    format!("{c}·{}", vars.join(""))
                }
            })
            .collect();
        write!(f, "[{} ≥ {}]", terms.join(" + "), self.t)
    }
}

/// `eval_poly(Q, x)`
pub fn eval_poly(q: &MultilinearPoly, x: &[bool]) -> Result<f64> {
    q.eval_bits(x)
}

/// `ω_i[Q]`
pub fn weight(q: &MultilinearPoly, i: usize) -> Result<f64> {
    q.weight(i)
}

/// The Boolean function `⌈Q⌉_t`.
pub fn sign_function(rep: &Representation) -> Result<BooleanFunction> {
    let n = rep.arity();
    if n > MAX_ARITY {
        return Err(Error::ArityCap { arity: n, cap: MAX_ARITY });
    }
    let values: Vec<bool> = (0..1usize << n)
        .into_par_iter()
        .map(|x| rep.evaluate(x as u128))
        .collect();
    BooleanFunction::from_table(n, &values)
}
