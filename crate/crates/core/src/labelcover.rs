//! Label Cover instances: evaluation, exact optimisation, generators and
//! the richness statistic.

use std::collections::VecDeque;
use std::fmt;

use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;

use crate::boolfn::TwoToOneMap;
use crate::error::{Error, Result};
use crate::rng::seeded;
use crate::stats::{chi_square, ChiSquareTest};

/// `Σ_L^{|L|}·Σ_R^{|R|}` labelings.
pub const MAX_BRUTE_FORCE: u128 = 10_000_000;
pub const MAX_RICHNESS_SIGMA_R: usize = 4;

/// Bipartite graph `L ∪ R` with a constraint `π_e : [Σ_L] → [Σ_R]` per edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabelCoverInstance {
    left: usize,
    right: usize,
    sigma_l: usize,
    sigma_r: usize,
    edges: Vec<(usize, usize)>,
    constraints: Vec<Vec<u32>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Labeling {
    pub left: Vec<u32>,
    pub right: Vec<u32>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GapVerdict {
    Yes,
    No,
    Neither,
}

impl fmt::Display for GapVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GapVerdict::Yes => "YES",
            GapVerdict::No => "NO",
            GapVerdict::Neither => "NEITHER",
        })
    }
}

impl LabelCoverInstance {
    pub fn new(
        left: usize,
        right: usize,
        sigma_l: usize,
        sigma_r: usize,
        edges: Vec<(usize, usize)>,
        constraints: Vec<Vec<u32>>,
    ) -> Result<Self> {
        if sigma_l == 0 || sigma_r == 0 {
            return Err(Error::param("alphabets must be non-empty"));
        }
        if edges.len() != constraints.len() {
            return Err(Error::LengthMismatch {
                expected: edges.len(),
                actual: constraints.len(),
            });
        }
        for (&(u, v), table) in edges.iter().zip(&constraints) {
            if u >= left {
                return Err(Error::CoordinateOutOfRange { index: u, arity: left });
            }
            if v >= right {
                return Err(Error::CoordinateOutOfRange { index: v, arity: right });
            }
            if table.len() != sigma_l {
                return Err(Error::LengthMismatch {
                    expected: sigma_l,
                    actual: table.len(),
                });
            }
            if let Some(&b) = table.iter().find(|&&b| b as usize >= sigma_r) {
                return Err(Error::CoordinateOutOfRange {
                    index: b as usize,
                    arity: sigma_r,
                });
            }
        }
        Ok(Self {
            left,
            right,
            sigma_l,
            sigma_r,
            edges,
            constraints,
        })
    }

    pub fn left(&self) -> usize {
        self.left
    }

    pub fn right(&self) -> usize {
        self.right
    }

    pub fn sigma_l(&self) -> usize {
        self.sigma_l
    }

    pub fn sigma_r(&self) -> usize {
        self.sigma_r
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn constraints(&self) -> &[Vec<u32>] {
        &self.constraints
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    /// `Σ_L = 2Σ_R` and every constraint has fibers of size 2.
    pub fn is_two_to_one(&self) -> bool {
        self.sigma_l == 2 * self.sigma_r
            && self.constraints.iter().all(|t| {
                let mut fibers = vec![0u8; self.sigma_r];
                t.iter().for_each(|&b| fibers[b as usize] += 1);
                fibers.iter().all(|&c| c == 2)
            })
    }

    /// `Σ_L = Σ_R` and every constraint is a bijection.
    pub fn is_unique(&self) -> bool {
        self.sigma_l == self.sigma_r
            && self.constraints.iter().all(|t| {
                let mut seen = vec![false; self.sigma_r];
                t.iter().all(|&b| !std::mem::replace(&mut seen[b as usize], true))
            })
    }

    fn check_labeling(&self, s: &Labeling) -> Result<()> {
        if s.left.len() != self.left {
            return Err(Error::LengthMismatch {
                expected: self.left,
                actual: s.left.len(),
            });
        }
        if s.right.len() != self.right {
            return Err(Error::LengthMismatch {
                expected: self.right,
                actual: s.right.len(),
            });
        }
        if s.left.iter().any(|&a| a as usize >= self.sigma_l) || s.right.iter().any(|&b| b as usize >= self.sigma_r) {
            return Err(Error::param("label outside the alphabet"));
        }
        Ok(())
    }

    pub fn satisfied_count(&self, s: &Labeling) -> Result<usize> {
        self.check_labeling(s)?;
        Ok(self
            .edges
            .iter()
            .zip(&self.constraints)
            .filter(|(&(u, v), t)| t[s.left[u] as usize] == s.right[v])
            .count())
    }

    /// Satisfied edges over all edges; 1 for an instance without edges.
    pub fn satisfied_fraction(&self, s: &Labeling) -> Result<f64> {
        let c = self.satisfied_count(s)?;
        Ok(if self.edges.is_empty() {
            1.0
        } else {
            c as f64 / self.edges.len() as f64
        })
    }

    /// For a fixed left labeling, each right vertex takes the label hit by
    /// most of its edges (smallest on ties).
    fn best_right(&self, left: &[u32]) -> (usize, Vec<u32>) {
        let mut votes = vec![0u32; self.right * self.sigma_r];
        for (&(u, v), t) in self.edges.iter().zip(&self.constraints) {
            votes[v * self.sigma_r + t[left[u] as usize] as usize] += 1;
        }
        let mut total = 0usize;
        let right = votes
            .chunks(self.sigma_r)
            .map(|c| {
                let (b, &n) = c
                    .iter()
                    .enumerate()
                    .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(&a.0)))
                    .expect("non-empty alphabet");
                total += n as usize;
                b as u32
            })
            .collect();
        (total, right)
    }

    fn decode_left(&self, mut code: u128) -> Vec<u32> {
        (0..self.left)
            .map(|_| {
                let a = (code % self.sigma_l as u128) as u32;
                code /= self.sigma_l as u128;
                a
            })
            .collect()
    }

    /// Exact optimum and a labeling attaining it.
    ///
    /// Only left labelings are enumerated; the best right labeling for each
    /// is read off by majority. Ties go to the smallest left code.
    pub fn brute_force_optimum(&self) -> Result<(f64, Labeling)> {
        let size = (self.sigma_l as u128)
            .checked_pow(self.left as u32)
            .and_then(|a| a.checked_mul((self.sigma_r as u128).checked_pow(self.right as u32)?))
            .unwrap_or(u128::MAX);
        if size > MAX_BRUTE_FORCE {
            return Err(Error::SizeCap {
                size,
                cap: MAX_BRUTE_FORCE,
            });
        }
        let codes = (self.sigma_l as u128).pow(self.left as u32);
        let (best, code) = (0..codes as u64)
            .into_par_iter()
            .map(|code| (self.best_right(&self.decode_left(code as u128)).0, code))
            .reduce(
                || (0, u64::MAX),
                |a, b| if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) { b } else { a },
            );
        let left = self.decode_left(code as u128);
        let (_, right) = self.best_right(&left);
        let frac = if self.edges.is_empty() {
            1.0
        } else {
            best as f64 / self.edges.len() as f64
        };
        Ok((frac, Labeling { left, right }))
    }

    /// YES if the optimum is at least `t`, NO if at most `s`.
    pub fn gap_classify(&self, t: f64, s: f64) -> Result<GapVerdict> {
        if s > t {
            return Err(Error::param("gap classification needs s ≤ t"));
        }
        let (opt, _) = self.brute_force_optimum()?;
        const EPS: f64 = 1e-12;
        Ok(if opt >= t - EPS {
            GapVerdict::Yes
        } else if opt <= s + EPS {
            GapVerdict::No
        } else {
            GapVerdict::Neither
        })
    }

    /// For unique instances: a labeling satisfying every edge, if one
    /// exists, found by propagating from the first vertex of each component.
    pub fn unique_propagation(&self) -> Result<Option<Labeling>> {
        if !self.is_unique() {
            return Err(Error::param("propagation needs bijective constraints"));
        }
        let n = self.sigma_l;
        let mut inverse = Vec::with_capacity(self.constraints.len());
        for t in &self.constraints {
            let mut inv = vec![0u32; n];
            for (a, &b) in t.iter().enumerate() {
                inv[b as usize] = a as u32;
            }
            inverse.push(inv);
        }
        // vertices 0..left are left, left.. are right
        let total = self.left + self.right;
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); total];
        for (e, &(u, v)) in self.edges.iter().enumerate() {
            adj[u].push(e);
            adj[self.left + v].push(e);
        }
        let mut label: Vec<Option<u32>> = vec![None; total];
        for seed in 0..total {
            if label[seed].is_some() {
                continue;
            }
            let mut found = false;
            for a in 0..n as u32 {
                let mut trial = label.clone();
                trial[seed] = Some(a);
                let mut queue = VecDeque::from([seed]);
                let mut ok = true;
                'bfs: while let Some(x) = queue.pop_front() {
                    let lx = trial[x].expect("labelled");
                    for &e in &adj[x] {
                        let (u, v) = self.edges[e];
                        let (y, want) = if x < self.left {
                            (self.left + v, self.constraints[e][lx as usize])
                        } else {
                            (u, inverse[e][lx as usize])
                        };
                        match trial[y] {
                            None => {
                                trial[y] = Some(want);
                                queue.push_back(y);
                            }
                            Some(l) if l != want => {
                                ok = false;
                                break 'bfs;
                            }
                            Some(_) => {}
                        }
                    }
                }
                if ok {
                    label = trial;
                    found = true;
                    break;
                }
            }
            if !found {
                return Ok(None);
            }
        }
        let labels: Vec<u32> = label.into_iter().map(|l| l.expect("every vertex labelled")).collect();
        Ok(Some(Labeling {
            left: labels[..self.left].to_vec(),
            right: labels[self.left..].to_vec(),
        }))
    }

    /// Compare the constraints at left vertex `u` with the uniform law on
    /// all 2-to-1 maps `[2Σ_R] → [Σ_R]`.
    pub fn richness_statistic(&self, u: usize) -> Result<RichnessReport> {
        if !self.is_two_to_one() {
            return Err(Error::param("richness needs a 2-to-1 instance"));
        }
        if self.sigma_r > MAX_RICHNESS_SIGMA_R {
            return Err(Error::ArityCap {
                arity: self.sigma_r,
                cap: MAX_RICHNESS_SIGMA_R,
            });
        }
        if u >= self.left {
            return Err(Error::CoordinateOutOfRange {
                index: u,
                arity: self.left,
            });
        }
        let support: Vec<Vec<u32>> = TwoToOneMap::enumerate(self.sigma_r)?
            .iter()
            .map(|m| m.image().iter().map(|&t| t as u32).collect())
            .collect();
        let mut counts = vec![0u64; support.len()];
        for (&(x, _), t) in self.edges.iter().zip(&self.constraints) {
            if x == u {
                let k = support.binary_search(t).expect("2-to-1 table is in the support");
                counts[k] += 1;
            }
        }
        let samples: u64 = counts.iter().sum();
        let probs = vec![1.0 / support.len() as f64; support.len()];
        let test = chi_square(&counts, &probs);
        let expected = samples as f64 / support.len() as f64;
        Ok(RichnessReport {
            samples,
            test,
            degenerate: test.is_none() || expected < 5.0,
            table: support.into_iter().zip(counts).collect(),
        })
    }

    /// Header `L=<n> R=<m> sigmaL=<a> sigmaR=<b>`, then `u v table…` per edge.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let (hl, header) = lines.next().ok_or_else(|| Error::parse(0, "missing header"))?;
        let mut vals = [0usize; 4];
        let keys = ["L", "R", "sigmaL", "sigmaR"];
        let mut parts = header.split_whitespace();
        for (slot, key) in vals.iter_mut().zip(keys) {
            let tok = parts.next().unwrap_or("");
            *slot = tok
                .strip_prefix(key)
                .and_then(|r| r.strip_prefix('='))
                .and_then(|r| r.parse().ok())
                .ok_or_else(|| Error::parse(hl, format!("expected `{key}=<n>`, found `{tok}`")))?;
        }
        if parts.next().is_some() {
            return Err(Error::parse(hl, "unexpected token in header"));
        }
        let mut edges = Vec::new();
        let mut constraints = Vec::new();
        for (line, row) in lines {
            let nums = row
                .split_whitespace()
                .map(|v| v.parse::<usize>().map_err(|_| Error::parse(line, format!("bad number `{v}`"))))
                .collect::<Result<Vec<usize>>>()?;
            if nums.len() != 2 + vals[2] {
                return Err(Error::parse(line, format!("expected {} numbers, found {}", 2 + vals[2], nums.len())));
            }
            edges.push((nums[0], nums[1]));
            constraints.push(nums[2..].iter().map(|&b| b as u32).collect());
        }
        Self::new(vals[0], vals[1], vals[2], vals[3], edges, constraints).map_err(|e| Error::parse(hl, e.to_string()))
    }
}

impl fmt::Display for LabelCoverInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "L={} R={} sigmaL={} sigmaR={}",
            self.left, self.right, self.sigma_l, self.sigma_r
        )?;
        for (&(u, v), t) in self.edges.iter().zip(&self.constraints) {
            write!(f, "{u} {v}")?;
            for b in t {
                write!(f, " {b}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

impl std::str::FromStr for LabelCoverInstance {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RichnessReport {
    pub samples: u64,
    /// `None` when fewer than two categories carry data
    pub test: Option<ChiSquareTest>,
    /// fewer than five expected samples per 2-to-1 map
    pub degenerate: bool,
    /// every 2-to-1 table with its count, lexicographic
    pub table: Vec<(Vec<u32>, u64)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variant {
    /// uniform tables `[Σ_L] → [Σ_R]`
    Plain,
    /// uniform bijections
    Unique,
    /// uniform 2-to-1 maps
    TwoToOne,
    /// uniform 2-to-1 maps, iid per edge of each left vertex
    Rich,
}

impl std::str::FromStr for Variant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "plain" => Ok(Variant::Plain),
            "unique" => Ok(Variant::Unique),
            "two_to_one" | "2to1" => Ok(Variant::TwoToOne),
            "rich" => Ok(Variant::Rich),
            _ => Err(Error::param(format!("unknown variant `{s}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GenParams {
    pub variant: Variant,
    pub left: usize,
    pub right: usize,
    /// ignored for unique (= Σ_R) and 2-to-1 (= 2Σ_R) variants
    pub sigma_l: usize,
    pub sigma_r: usize,
    /// edges per left vertex, endpoints uniform in `R`
    pub degree: usize,
    /// plant a labeling and make every constraint consistent with it
    pub planted: bool,
    pub seed: u64,
}

/// A random instance of the given variant.
pub fn generate(params: &GenParams) -> Result<LabelCoverInstance> {
    let sigma_r = params.sigma_r;
    let sigma_l = match params.variant {
        Variant::Plain => params.sigma_l,
        Variant::Unique => sigma_r,
        Variant::TwoToOne | Variant::Rich => 2 * sigma_r,
    };
    if params.variant != Variant::Plain && params.sigma_l != 0 && params.sigma_l != sigma_l {
        return Err(Error::param(format!(
            "variant needs Σ_L = {sigma_l} for Σ_R = {sigma_r}, got {}",
            params.sigma_l
        )));
    }
    if sigma_l == 0 || sigma_r == 0 {
        return Err(Error::param("alphabets must be non-empty"));
    }
    if params.right == 0 && params.degree > 0 && params.left > 0 {
        return Err(Error::param("edges need at least one right vertex"));
    }
    let mut rng = seeded(params.seed);
    let planted = params.planted.then(|| {
        let left: Vec<u32> = (0..params.left).map(|_| rng.random_range(0..sigma_l as u32)).collect();
        let right: Vec<u32> = (0..params.right).map(|_| rng.random_range(0..sigma_r as u32)).collect();
        Labeling { left, right }
    });
    let mut edges = Vec::with_capacity(params.left * params.degree);
    let mut constraints = Vec::with_capacity(params.left * params.degree);
    for u in 0..params.left {
        for _ in 0..params.degree {
            let v = rng.random_range(0..params.right);
            let mut table: Vec<u32> = match params.variant {
                Variant::Plain => (0..sigma_l).map(|_| rng.random_range(0..sigma_r as u32)).collect(),
                Variant::Unique => {
                    let mut p: Vec<u32> = (0..sigma_r as u32).collect();
                    p.shuffle(&mut rng);
                    p
                }
                Variant::TwoToOne | Variant::Rich => TwoToOneMap::random(sigma_r, &mut rng)?
                    .image()
                    .iter()
                    .map(|&t| t as u32)
                    .collect(),
            };
            if let Some(s) = &planted {
                // relabel the targets so that σ(u) ↦ σ(v); uniform among
                // consistent tables
                let (a, b) = (s.left[u] as usize, s.right[v]);
                let c = table[a];
                if params.variant == Variant::Plain {
                    table[a] = b;
                } else {
                    table.iter_mut().for_each(|x| {
                        if *x == c {
                            *x = b;
                        } else if *x == b {
                            *x = c;
                        }
                    });
                }
            }
            edges.push((u, v));
            constraints.push(table);
        }
    }
    LabelCoverInstance::new(params.left, params.right, sigma_l, sigma_r, edges, constraints)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn single_edge() -> LabelCoverInstance {
        LabelCoverInstance::new(1, 1, 4, 2, vec![(0, 0)], vec![vec![0, 0, 1, 1]]).unwrap()
    }

    /// Two edges force contradictory bijections on left vertex 0.
    pub(crate) fn contradictory() -> LabelCoverInstance {
        LabelCoverInstance::new(1, 1, 2, 2, vec![(0, 0), (0, 0)], vec![vec![0, 1], vec![1, 0]]).unwrap()
    }

    #[test]
    fn fraction_examples() {
        let i = single_edge();
        assert!(i.is_two_to_one());
        let good = Labeling {
            left: vec![2],
            right: vec![1],
        };
        assert_eq!(i.satisfied_fraction(&good).unwrap(), 1.0);
        let bad = Labeling {
            left: vec![2],
            right: vec![0],
        };
        assert_eq!(i.satisfied_fraction(&bad).unwrap(), 0.0);
        let three = LabelCoverInstance::new(
            2,
            2,
            2,
            2,
            vec![(0, 0), (1, 0), (1, 1)],
            vec![vec![0, 1], vec![1, 0], vec![0, 1]],
        )
        .unwrap();
        let s = Labeling {
            left: vec![0, 0],
            right: vec![0, 0],
        };
        // edge 0: 0 ↦ 0 ✓, edge 1: 0 ↦ 1 ✗, edge 2: 0 ↦ 0 ✓
        assert_eq!(three.satisfied_count(&s).unwrap(), 2);
        assert!((three.satisfied_fraction(&s).unwrap() - 2.0 / 3.0).abs() < 1e-15);
        assert!(three.satisfied_fraction(&Labeling { left: vec![0], right: vec![0, 0] }).is_err());
    }

    #[test]
    fn brute_force_and_gap() {
        let (opt, w) = single_edge().brute_force_optimum().unwrap();
        assert_eq!(opt, 1.0);
        assert_eq!(single_edge().satisfied_fraction(&w).unwrap(), 1.0);
        let c = contradictory();
        assert!(c.is_unique());
        let (opt, w) = c.brute_force_optimum().unwrap();
        assert_eq!(opt, 0.5);
        assert_eq!(c.satisfied_fraction(&w).unwrap(), 0.5);
        assert_eq!(single_edge().gap_classify(1.0, 0.5).unwrap(), GapVerdict::Yes);
        assert_eq!(c.gap_classify(1.0, 0.6).unwrap(), GapVerdict::No);
        assert_eq!(c.gap_classify(1.0, 0.4).unwrap(), GapVerdict::Neither);
        assert!(c.gap_classify(0.4, 0.6).is_err());
    }

    #[test]
    fn brute_force_matches_naive_enumeration() {
        for seed in 0..20 {
            let inst = generate(&GenParams {
                variant: Variant::Plain,
                left: 3,
                right: 3,
                sigma_l: 3,
                sigma_r: 2,
                degree: 2,
                planted: false,
                seed,
            })
            .unwrap();
            let (opt, _) = inst.brute_force_optimum().unwrap();
            let mut best = 0;
            for l in 0..27u32 {
                for r in 0..8u32 {
                    let s = Labeling {
                        left: (0..3).map(|i| (l / 3u32.pow(i)) % 3).collect(),
                        right: (0..3).map(|i| (r >> i) & 1).collect(),
                    };
                    best = best.max(inst.satisfied_count(&s).unwrap());
                }
            }
            assert_eq!(opt, best as f64 / inst.num_edges() as f64);
        }
    }

    #[test]
    fn brute_force_cap() {
        let big = LabelCoverInstance::new(10, 10, 4, 4, vec![], vec![]).unwrap();
        assert!(matches!(big.brute_force_optimum(), Err(Error::SizeCap { .. })));
    }

    #[test]
    fn generators_respect_variants() {
        let base = GenParams {
            variant: Variant::Unique,
            left: 5,
            right: 4,
            sigma_l: 0,
            sigma_r: 3,
            degree: 3,
            planted: false,
            seed: 7,
        };
        assert!(generate(&base).unwrap().is_unique());
        let two = generate(&GenParams {
            variant: Variant::TwoToOne,
            sigma_r: 2,
            ..base
        })
        .unwrap();
        assert!(two.is_two_to_one());
        assert!(generate(&GenParams {
            variant: Variant::TwoToOne,
            sigma_l: 5,
            ..base
        })
        .is_err());
        for variant in [Variant::Plain, Variant::Unique, Variant::TwoToOne] {
            let p = GenParams {
                variant,
                sigma_l: if variant == Variant::Plain { 3 } else { 0 },
                sigma_r: 2,
                left: 3,
                right: 3,
                planted: true,
                ..base
            };
            let inst = generate(&p).unwrap();
            assert_eq!(inst.brute_force_optimum().unwrap().0, 1.0, "{variant:?}");
        }
    }

    #[test]
    fn propagation_matches_brute_force() {
        for seed in 0..60 {
            let inst = generate(&GenParams {
                variant: Variant::Unique,
                left: 3,
                right: 3,
                sigma_l: 0,
                sigma_r: 3,
                degree: 2,
                planted: seed % 2 == 0,
                seed,
            })
            .unwrap();
            let (opt, _) = inst.brute_force_optimum().unwrap();
            let prop = inst.unique_propagation().unwrap();
            assert_eq!(prop.is_some(), opt == 1.0, "seed {seed}");
            if let Some(s) = prop {
                assert_eq!(inst.satisfied_fraction(&s).unwrap(), 1.0);
            }
        }
    }

    #[test]
    fn richness() {
        let rich = generate(&GenParams {
            variant: Variant::Rich,
            left: 1,
            right: 50,
            sigma_l: 0,
            sigma_r: 2,
            degree: 6000,
            planted: false,
            seed: 1,
        })
        .unwrap();
        let r = rich.richness_statistic(0).unwrap();
        assert_eq!(r.table.len(), 6);
        assert_eq!(r.samples, 6000);
        assert!(!r.degenerate && !r.test.unwrap().rejects_at(1e-3));

        let one = single_edge().richness_statistic(0).unwrap();
        assert!(one.degenerate);

        let same = LabelCoverInstance::new(1, 1, 4, 2, vec![(0, 0); 600], vec![vec![0, 0, 1, 1]; 600]).unwrap();
        assert!(same.richness_statistic(0).unwrap().test.unwrap().rejects_at(1e-3));
        assert!(contradictory().richness_statistic(0).is_err());
    }

    #[test]
    fn text_roundtrip() {
        let inst = generate(&GenParams {
            variant: Variant::Rich,
            left: 4,
            right: 3,
            sigma_l: 0,
            sigma_r: 3,
            degree: 2,
            planted: true,
            seed: 3,
        })
        .unwrap();
        let text = inst.to_string();
        let back: LabelCoverInstance = text.parse().unwrap();
        assert_eq!(back, inst);
        assert_eq!(back.to_string(), text);
        assert!(LabelCoverInstance::parse("L=1 R=1 sigmaL=2 sigmaR=2\n0 0 1\n").is_err());
        assert!(LabelCoverInstance::parse("L=1 R=1 sigmaL=2 sigmaR=2\n0 0 1 2\n").is_err());
    }
}
