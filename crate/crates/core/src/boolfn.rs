//! Bit-packed Boolean functions, minor maps and point helpers.
//!
//! A point `x ∈ {0,1}ⁿ` is encoded as the integer `Σ xᵢ·2ⁱ`; coordinate 0 is
//! the least-significant bit. The truth table stores `f(x)` at bit `x`.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};

/// Hard cap on arity (a 16 MiB table).
pub const MAX_ARITY: usize = 24;

/// Point helpers on integer-encoded tuples.
pub mod point {
    /// `x ⊕ i`: flip coordinate `i`.
    #[inline]
    pub fn flip(x: usize, i: usize) -> usize {
        x ^ (1 << i)
    }

    /// `x^{i→s}`: set coordinate `i` to `s`.
    #[inline]
    pub fn set(x: usize, i: usize, s: bool) -> usize {
        if s {
            x | (1 << i)
        } else {
            x & !(1 << i)
        }
    }

    /// `x0` / `x1`: append `s` as a new last coordinate of an `n`-tuple.
    #[inline]
    pub fn append(x: usize, n: usize, s: bool) -> usize {
        x | ((s as usize) << n)
    }

    #[inline]
    pub fn bit(x: usize, i: usize) -> bool {
        (x >> i) & 1 == 1
    }

    /// Encode a bit slice as a point index.
    pub fn encode(bits: &[bool]) -> usize {
        bits.iter()
            .enumerate()
            .fold(0, |acc, (i, &b)| acc | ((b as usize) << i))
    }

    pub fn decode(x: usize, n: usize) -> Vec<bool> {
        (0..n).map(|i| bit(x, i)).collect()
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BooleanFunction {
    arity: usize,
    words: Vec<u64>,
}

fn word_count(arity: usize) -> usize {
    (1usize << arity).div_ceil(64)
}

impl BooleanFunction {
    fn zeroed(arity: usize) -> Result<Self> {
        if arity > MAX_ARITY {
            return Err(Error::ArityCap {
                arity,
                cap: MAX_ARITY,
            });
        }
        Ok(Self {
            arity,
            words: vec![0; word_count(arity)],
        })
    }

    /// Build from a predicate on integer-encoded points.
    pub fn from_fn(arity: usize, mut f: impl FnMut(usize) -> bool) -> Result<Self> {
        let mut g = Self::zeroed(arity)?;
        for x in 0..g.len() {
            if f(x) {
                g.words[x >> 6] |= 1 << (x & 63);
            }
        }
        Ok(g)
    }

    pub fn from_table(arity: usize, table: &[bool]) -> Result<Self> {
        if table.len() != 1 << arity.min(MAX_ARITY + 1) {
            return Err(Error::LengthMismatch {
                expected: 1 << arity.min(MAX_ARITY + 1),
                actual: table.len(),
            });
        }
        Self::from_fn(arity, |x| table[x])
    }

    pub fn constant(arity: usize, value: bool) -> Result<Self> {
        Self::from_fn(arity, |_| value)
    }

    pub fn dictator(arity: usize, i: usize) -> Result<Self> {
        if i >= arity {
            return Err(Error::CoordinateOutOfRange { index: i, arity });
        }
        Self::from_fn(arity, |x| point::bit(x, i))
    }

    pub fn parity(arity: usize) -> Result<Self> {
        Self::from_fn(arity, |x| x.count_ones() % 2 == 1)
    }

    pub fn conjunction(arity: usize) -> Result<Self> {
        Self::threshold(arity, arity)
    }

    pub fn disjunction(arity: usize) -> Result<Self> {
        Self::threshold(arity, 1)
    }

    /// `THR_t`: one iff at least `t` ones. `t = 0` and `t = n + 1` give the
    /// constants.
    pub fn threshold(arity: usize, t: usize) -> Result<Self> {
        if t > arity + 1 {
            return Err(Error::param(format!(
                "threshold {t} outside 0..={}",
                arity + 1
            )));
        }
        Self::from_fn(arity, |x| x.count_ones() as usize >= t)
    }

    /// Strict majority for odd arity, `THR_{⌈n/2⌉}` in general.
    pub fn majority(arity: usize) -> Result<Self> {
        Self::threshold(arity, arity.div_ceil(2))
    }

    /// OR of `s` disjoint ANDs of width `w` (arity `w·s`).
    pub fn tribes(width: usize, count: usize) -> Result<Self> {
        let arity = width * count;
        let block = if width == 0 { 0 } else { (1usize << width) - 1 };
        Self::from_fn(arity, |x| {
            (0..count).any(|j| width > 0 && (x >> (j * width)) & block == block)
        })
    }

    /// Uniformly random function of the given arity.
    pub fn random<R: Rng + ?Sized>(arity: usize, rng: &mut R) -> Result<Self> {
        let mut g = Self::zeroed(arity)?;
        for w in g.words.iter_mut() {
            *w = rng.random();
        }
        g.mask_tail();
        Ok(g)
    }

    fn mask_tail(&mut self) {
        let len = self.len();
        if len < 64 {
            self.words[0] &= (1u64 << len) - 1;
        }
    }

    #[inline]
    pub fn arity(&self) -> usize {
        self.arity
    }

    /// Table length `2ⁿ`.
    #[inline]
    pub fn len(&self) -> usize {
        1 << self.arity
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn get(&self, x: usize) -> bool {
        (self.words[x >> 6] >> (x & 63)) & 1 == 1
    }

    /// Value as 0.0/1.0 for spectral work.
    #[inline]
    pub fn value(&self, x: usize) -> f64 {
        if self.get(x) {
            1.0
        } else {
            0.0
        }
    }

    pub fn eval(&self, x: &[bool]) -> Result<bool> {
        if x.len() != self.arity {
            return Err(Error::LengthMismatch {
                expected: self.arity,
                actual: x.len(),
            });
        }
        Ok(self.get(point::encode(x)))
    }

    pub fn count_ones(&self) -> u64 {
        self.words.iter().map(|w| w.count_ones() as u64).sum()
    }

    pub fn is_constant(&self) -> bool {
        let ones = self.count_ones();
        ones == 0 || ones == self.len() as u64
    }

    /// Depends only on the number of ones.
    pub fn is_symmetric(&self) -> bool {
        let mut by_weight: Vec<Option<bool>> = vec![None; self.arity + 1];
        for x in 0..self.len() {
            let w = x.count_ones() as usize;
            match by_weight[w] {
                None => by_weight[w] = Some(self.get(x)),
                Some(v) if v != self.get(x) => return false,
                _ => {}
            }
        }
        true
    }

    /// If `self` is `THR_t` for some `t` (constants included), that `t`.
    pub fn threshold_level(&self) -> Option<usize> {
        if !self.is_symmetric() {
            return None;
        }
        let n = self.arity;
        let values: Vec<bool> = (0..=n).map(|w| self.get((1usize << w) - 1)).collect();
        let t = values.iter().position(|&v| v).unwrap_or(n + 1);
        values[t..].iter().all(|&v| v).then_some(t)
    }

    /// If `self` is the dictator of some coordinate, that coordinate.
    pub fn dictator_coordinate(&self) -> Option<usize> {
        (0..self.arity).find(|&i| (0..self.len()).all(|x| self.get(x) == point::bit(x, i)))
    }

    pub fn negate(&self) -> Self {
        let mut g = self.clone();
        for w in g.words.iter_mut() {
            *w = !*w;
        }
        g.mask_tail();
        g
    }

    /// True iff `f` depends on coordinate `i`.
    pub fn depends_on(&self, i: usize) -> bool {
        (0..self.len()).any(|x| !point::bit(x, i) && self.get(x) != self.get(point::flip(x, i)))
    }

    /// `f(x) ≤ f(x^{i→1})` for every `x` and `i`.
    pub fn is_monotone(&self) -> bool {
        (0..self.arity).all(|i| {
            (0..self.len())
                .filter(|&x| !point::bit(x, i))
                .all(|x| !self.get(x) || self.get(point::flip(x, i)))
        })
    }

    /// The minor `f^π`: `g(a) = f(a_{π(0)}, …, a_{π(n-1)})`.
    pub fn apply_minor(&self, map: &MinorMap) -> Result<Self> {
        if map.source_arity() != self.arity {
            return Err(Error::ArityMismatch {
                expected: self.arity,
                actual: map.source_arity(),
            });
        }
        let m = map.target_arity();
        // source mask spread by each target bit
        let mut spread = vec![0usize; m];
        for (j, &t) in map.image().iter().enumerate() {
            spread[t] |= 1 << j;
        }
        Self::from_fn(m, |a| {
            let mut x = 0usize;
            let mut rest = a;
            while rest != 0 {
                let t = rest.trailing_zeros() as usize;
                x |= spread[t];
                rest &= rest - 1;
            }
            self.get(x)
        })
    }

    /// Hex encoding of the table: byte `k` holds bits `8k..8k+8` (bit `8k`
    /// least significant), bytes in increasing order, two digits each.
    pub fn to_hex(&self) -> String {
        let bytes = self.len().div_ceil(8);
        let mut s = String::with_capacity(bytes * 2);
        for k in 0..bytes {
            let byte = (self.words[k / 8] >> ((k % 8) * 8)) & 0xff;
            s.push_str(&format!("{byte:02x}"));
        }
        s
    }

    pub fn parse_hex(arity: usize, hex: &str) -> Result<Self> {
        let mut g = Self::zeroed(arity)?;
        let bytes = g.len().div_ceil(8);
        let hex = hex.trim();
        if hex.len() != bytes * 2 {
            return Err(Error::LengthMismatch {
                expected: bytes * 2,
                actual: hex.len(),
            });
        }
        for k in 0..bytes {
            let byte = u64::from_str_radix(&hex[2 * k..2 * k + 2], 16)
                .map_err(|e| Error::param(format!("bad hex digit: {e}")))?;
            g.words[k / 8] |= byte << ((k % 8) * 8);
        }
        if g.len() < 8 && g.words[0] >> g.len() != 0 {
            return Err(Error::param("padding bits must be zero"));
        }
        Ok(g)
    }

    /// Parse a file of `arity=<n> table=<hex>` records (blank lines and
    /// `#` comments skipped).
    pub fn parse_records(text: &str) -> Result<Vec<Self>> {
        text.lines()
            .enumerate()
            .filter(|(_, l)| {
                let t = l.trim();
                !t.is_empty() && !t.starts_with('#')
            })
            .map(|(i, l)| l.parse().map_err(|e: Error| relocate(e, i + 1)))
            .collect()
    }

    pub fn write_records<'a>(fns: impl IntoIterator<Item = &'a Self>) -> String {
        fns.into_iter().map(|f| format!("{f}\n")).collect()
    }
}

fn relocate(e: Error, line: usize) -> Error {
    match e {
        Error::Parse { message, .. } => Error::Parse { line, message },
        other => Error::Parse {
            line,
            message: other.to_string(),
        },
    }
}

impl fmt::Display for BooleanFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "arity={} table={}", self.arity, self.to_hex())
    }
}

impl fmt::Debug for BooleanFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BooleanFunction({self})")
    }
}

impl FromStr for BooleanFunction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut arity = None;
        let mut table = None;
        for field in s.split_whitespace() {
            match field.split_once('=') {
                Some(("arity", v)) => {
                    arity = Some(
                        v.parse::<usize>()
                            .map_err(|e| Error::parse(1, format!("arity: {e}")))?,
                    )
                }
                Some(("table", v)) => table = Some(v),
                _ => return Err(Error::parse(1, format!("unexpected field `{field}`"))),
            }
        }
        match (arity, table) {
            (Some(a), Some(t)) => Self::parse_hex(a, t),
            _ => Err(Error::parse(1, "expected `arity=<n> table=<hex>`")),
        }
    }
}

/// A map `π : [n] → [m]`. Surjectivity is not required.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct MinorMap {
    target_arity: usize,
    image: Vec<usize>,
}

impl MinorMap {
    pub fn new(target_arity: usize, image: Vec<usize>) -> Result<Self> {
        if let Some((i, _)) = image.iter().enumerate().find(|(_, &t)| t >= target_arity) {
            return Err(Error::CoordinateOutOfRange {
                index: image[i],
                arity: target_arity,
            });
        }
        Ok(Self {
            target_arity,
            image,
        })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            target_arity: n,
            image: (0..n).collect(),
        }
    }

    /// Identify the coordinates in `group` into one (the smallest of them),
    /// keeping the order of the remaining coordinates.
    pub fn identify(n: usize, group: &[usize]) -> Result<Self> {
        let anchor = *group
            .iter()
            .min()
            .ok_or_else(|| Error::param("empty identification group"))?;
        if let Some(&bad) = group.iter().find(|&&g| g >= n) {
            return Err(Error::CoordinateOutOfRange { index: bad, arity: n });
        }
        let mut image = vec![0; n];
        let mut next = 0;
        for (i, slot) in image.iter_mut().enumerate() {
            if group.contains(&i) && i != anchor {
                continue;
            }
            *slot = next;
            next += 1;
        }
        let anchor_target = image[anchor];
        for &g in group {
            image[g] = anchor_target;
        }
        Self::new(next, image)
    }

    #[inline]
    pub fn source_arity(&self) -> usize {
        self.image.len()
    }

    #[inline]
    pub fn target_arity(&self) -> usize {
        self.target_arity
    }

    #[inline]
    pub fn image(&self) -> &[usize] {
        &self.image
    }

    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.image[i]
    }

    /// `other ∘ self`: first `self`, then `other`.
    pub fn then(&self, other: &MinorMap) -> Result<Self> {
        if other.source_arity() != self.target_arity {
            return Err(Error::ArityMismatch {
                expected: self.target_arity,
                actual: other.source_arity(),
            });
        }
        Ok(Self {
            target_arity: other.target_arity,
            image: self.image.iter().map(|&t| other.image[t]).collect(),
        })
    }

    /// Image of a coordinate set given as a bitmask.
    pub fn map_mask(&self, mask: u64) -> u64 {
        let mut out = 0;
        let mut rest = mask;
        while rest != 0 {
            let i = rest.trailing_zeros() as usize;
            out |= 1 << self.image[i];
            rest &= rest - 1;
        }
        out
    }

    /// Preimage of a coordinate set given as a bitmask.
    pub fn preimage_mask(&self, mask: u64) -> u64 {
        self.image
            .iter()
            .enumerate()
            .filter(|(_, &t)| (mask >> t) & 1 == 1)
            .fold(0, |acc, (i, _)| acc | (1 << i))
    }

    /// All maps `[n] → [m]` in lexicographic order of their image arrays.
    pub fn all(n: usize, m: usize) -> impl Iterator<Item = MinorMap> {
        let total = if m == 0 {
            (n == 0) as usize
        } else {
            m.checked_pow(n as u32).unwrap_or(usize::MAX)
        };
        (0..total).map(move |mut code| {
            let mut image = vec![0; n];
            for slot in image.iter_mut().rev() {
                *slot = code % m;
                code /= m;
            }
            MinorMap {
                target_arity: m,
                image,
            }
        })
    }
}

/// A 2-to-1 map `[2m] → [m]`: every target has exactly two preimages.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct TwoToOneMap(MinorMap);

/// Exhaustive enumeration is capped at `m = 5` (113 400 maps).
pub const MAX_ENUMERATED_2TO1: usize = 5;

impl TwoToOneMap {
    pub fn new(map: MinorMap) -> Result<Self> {
        let m = map.target_arity();
        if map.source_arity() != 2 * m {
            return Err(Error::ArityMismatch {
                expected: 2 * m,
                actual: map.source_arity(),
            });
        }
        let mut fibers = vec![0usize; m];
        for &t in map.image() {
            fibers[t] += 1;
        }
        if fibers.iter().any(|&c| c != 2) {
            return Err(Error::param("every target needs exactly two preimages"));
        }
        Ok(Self(map))
    }

    /// Uniform sample: shuffle `[2m]` and send positions `2j, 2j+1` of the
    /// shuffled order to `j`. Every map is hit by exactly `2^m` permutations.
    pub fn random<R: Rng + ?Sized>(m: usize, rng: &mut R) -> Result<Self> {
        if m == 0 {
            return Err(Error::param("2-to-1 maps need m ≥ 1"));
        }
        let mut order: Vec<usize> = (0..2 * m).collect();
        order.shuffle(rng);
        let mut image = vec![0; 2 * m];
        for (pos, &coord) in order.iter().enumerate() {
            image[coord] = pos / 2;
        }
        Ok(Self(MinorMap {
            target_arity: m,
            image,
        }))
    }

    /// All `(2m)!/2^m` maps, lexicographic in the image array.
    pub fn enumerate(m: usize) -> Result<Vec<Self>> {
        if m == 0 {
            return Err(Error::param("2-to-1 maps need m ≥ 1"));
        }
        if m > MAX_ENUMERATED_2TO1 {
            return Err(Error::ArityCap {
                arity: m,
                cap: MAX_ENUMERATED_2TO1,
            });
        }
        fn rec(pos: usize, image: &mut Vec<usize>, used: &mut [u8], out: &mut Vec<TwoToOneMap>) {
            let m = used.len();
            if pos == 2 * m {
                out.push(TwoToOneMap(MinorMap {
                    target_arity: m,
                    image: image.clone(),
                }));
                return;
            }
            for t in 0..m {
                if used[t] < 2 {
                    used[t] += 1;
                    image.push(t);
                    rec(pos + 1, image, used, out);
                    image.pop();
                    used[t] -= 1;
                }
            }
        }
        let mut out = Vec::new();
        rec(0, &mut Vec::with_capacity(2 * m), &mut vec![0; m], &mut out);
        Ok(out)
    }

    /// Number of 2-to-1 maps `[2m] → [m]`.
    pub fn count(m: usize) -> u128 {
        (1..=2 * m as u128).product::<u128>() >> m
    }

    pub fn as_minor(&self) -> &MinorMap {
        &self.0
    }

    pub fn into_minor(self) -> MinorMap {
        self.0
    }

    pub fn target_arity(&self) -> usize {
        self.0.target_arity
    }

    /// The other coordinate sharing `i`'s fiber.
    pub fn partner(&self, i: usize) -> usize {
        let t = self.0.image[i];
        self.0
            .image
            .iter()
            .enumerate()
            .find(|&(j, &s)| j != i && s == t)
            .map(|(j, _)| j)
            .expect("2-to-1 fibers have two elements")
    }
}

impl std::ops::Deref for TwoToOneMap {
    type Target = MinorMap;
    fn deref(&self) -> &MinorMap {
        &self.0
    }
}
