//! Homomorphism search, powers and polymorphism enumeration.

use rayon::prelude::*;

use super::structure::RelationalStructure;
use super::Template;
use crate::boolfn::{BooleanFunction, MinorMap};
use crate::error::{Error, Result};

/// Domains are `u64` bitsets.
pub const MAX_TARGET_UNIVERSE: usize = 64;
pub const MAX_POWER_UNIVERSE: u128 = 1_000_000;
pub const MAX_POWER_TUPLES: u128 = 10_000_000;
pub const MAX_POLYMORPHISMS: usize = 1 << 20;

/// True iff `phi` maps every tuple of `x` into the matching relation of `a`.
pub fn is_homomorphism(phi: &[u32], x: &RelationalStructure, a: &RelationalStructure) -> Result<bool> {
    if !x.is_similar(a) {
        return Err(Error::SignatureMismatch);
    }
    if phi.len() != x.universe() {
        return Err(Error::LengthMismatch {
            expected: x.universe(),
            actual: phi.len(),
        });
    }
    if phi.iter().any(|&v| v as usize >= a.universe()) {
        return Ok(false);
    }
    Ok(x.relations().iter().zip(a.relations()).all(|(rx, ra)| {
        let allowed: std::collections::HashSet<&[u32]> = ra.iter().map(Vec::as_slice).collect();
        let mut image = Vec::new();
        rx.iter().all(|t| {
            image.clear();
            image.extend(t.iter().map(|&v| phi[v as usize]));
            allowed.contains(image.as_slice())
        })
    }))
}

/// Backtracking with forward checking over `x`'s elements, highest degree
/// first.
struct Search<'a> {
    x: &'a RelationalStructure,
    a: &'a RelationalStructure,
    order: Vec<usize>,
    /// `(relation, tuple)` pairs containing each element of `x`
    incidence: Vec<Vec<(usize, usize)>>,
    /// tuples of `x` with a repeated element
    repeated: Vec<Vec<bool>>,
}

struct State {
    domains: Vec<u64>,
    trail: Vec<(usize, u64)>,
}

impl<'a> Search<'a> {
    fn new(x: &'a RelationalStructure, a: &'a RelationalStructure) -> Result<Self> {
        if !x.is_similar(a) {
            return Err(Error::SignatureMismatch);
        }
        if a.universe() > MAX_TARGET_UNIVERSE {
            return Err(Error::SizeCap {
                size: a.universe() as u128,
                cap: MAX_TARGET_UNIVERSE as u128,
            });
        }
        let mut incidence = vec![Vec::new(); x.universe()];
        let mut repeated = Vec::with_capacity(x.relations().len());
        for (k, rel) in x.relations().iter().enumerate() {
            let mut rep = Vec::with_capacity(rel.len());
            for (ti, t) in rel.iter().enumerate() {
                let mut seen: Vec<u32> = Vec::with_capacity(t.len());
                for &v in t {
                    if !seen.contains(&v) {
                        incidence[v as usize].push((k, ti));
                        seen.push(v);
                    }
                }
                rep.push(seen.len() < t.len());
            }
            repeated.push(rep);
        }
        let mut order: Vec<usize> = (0..x.universe()).collect();
        order.sort_by(|&u, &v| incidence[v].len().cmp(&incidence[u].len()).then(u.cmp(&v)));
        Ok(Self {
            x,
            a,
            order,
            incidence,
            repeated,
        })
    }

    fn full(&self) -> u64 {
        if self.a.universe() == 64 {
            u64::MAX
        } else {
            (1u64 << self.a.universe()) - 1
        }
    }

    /// Narrow the domains of one tuple's elements to values supported by
    /// some tuple of the target relation. False on a wipe-out.
    fn filter(&self, st: &mut State, k: usize, ti: usize) -> bool {
        let t = &self.x.relation(k)[ti];
        let check_repeats = self.repeated[k][ti];
        let mut support = [0u64; 16];
        let mut support_vec;
        let support: &mut [u64] = if t.len() <= 16 {
            &mut support[..t.len()]
        } else {
            support_vec = vec![0u64; t.len()];
            &mut support_vec
        };
        'rows: for s in self.a.relation(k) {
            for (p, (&v, &b)) in t.iter().zip(s).enumerate() {
                if (st.domains[v as usize] >> b) & 1 == 0 {
                    continue 'rows;
                }
                if check_repeats && t[..p].iter().zip(s).any(|(&w, &c)| w == v && c != b) {
                    continue 'rows;
                }
            }
            for (sup, &b) in support.iter_mut().zip(s) {
                *sup |= 1 << b;
            }
        }
        for (&v, &sup) in t.iter().zip(support.iter()) {
            let old = st.domains[v as usize];
            let new = old & sup;
            if new != old {
                st.trail.push((v as usize, old));
                st.domains[v as usize] = new;
            }
            if new == 0 {
                return false;
            }
        }
        true
    }

    fn undo(st: &mut State, mark: usize) {
        while st.trail.len() > mark {
            let (v, d) = st.trail.pop().expect("non-empty trail");
            st.domains[v] = d;
        }
    }

    fn initial(&self) -> Option<State> {
        let mut st = State {
            domains: vec![self.full(); self.x.universe()],
            trail: Vec::new(),
        };
        for (k, rel) in self.x.relations().iter().enumerate() {
            for ti in 0..rel.len() {
                if !self.filter(&mut st, k, ti) {
                    return None;
                }
            }
        }
        st.trail.clear();
        Some(st)
    }

    fn assign(&self, st: &mut State, v: usize, b: u32) -> bool {
        st.trail.push((v, st.domains[v]));
        st.domains[v] = 1 << b;
        self.incidence[v].iter().all(|&(k, ti)| self.filter(st, k, ti))
    }

    /// Depth-first from `depth`; pushes solutions until `limit` is reached.
    /// Returns false once the limit is hit.
    fn dfs(&self, st: &mut State, depth: usize, out: &mut Vec<Vec<u32>>, limit: usize) -> bool {
        if depth == self.order.len() {
            out.push(st.domains.iter().map(|d| d.trailing_zeros()).collect());
            return out.len() < limit;
        }
        let v = self.order[depth];
        let mut dom = st.domains[v];
        while dom != 0 {
            let b = dom.trailing_zeros();
            dom &= dom - 1;
            let mark = st.trail.len();
            let ok = self.assign(st, v, b);
            let go_on = !ok || self.dfs(st, depth + 1, out, limit);
            Self::undo(st, mark);
            if !go_on {
                return false;
            }
        }
        true
    }

    /// Every solution, up to `limit`, branching on the first element in
    /// parallel. The output order is that of the sequential search.
    fn all(&self, limit: usize) -> Result<Vec<Vec<u32>>> {
        let Some(st) = self.initial() else {
            return Ok(Vec::new());
        };
        if self.order.is_empty() {
            return Ok(vec![Vec::new()]);
        }
        let v = self.order[0];
        let values: Vec<u32> = (0..self.a.universe() as u32)
            .filter(|&b| (st.domains[v] >> b) & 1 == 1)
            .collect();
        let branches: Vec<(Vec<Vec<u32>>, bool)> = values
            .par_iter()
            .map(|&b| {
                let mut st = State {
                    domains: st.domains.clone(),
                    trail: Vec::new(),
                };
                let mut out = Vec::new();
                if !self.assign(&mut st, v, b) {
                    return (out, true);
                }
                let complete = self.dfs(&mut st, 1, &mut out, limit);
                (out, complete)
            })
            .collect();
        let mut out = Vec::new();
        for (sols, complete) in branches {
            if !complete || out.len() + sols.len() > limit {
                return Err(Error::SizeCap {
                    size: (out.len() + sols.len()) as u128,
                    cap: limit as u128,
                });
            }
            out.extend(sols);
        }
        Ok(out)
    }

    fn first(&self) -> Option<Vec<u32>> {
        let mut st = self.initial()?;
        let mut out = Vec::new();
        self.dfs(&mut st, 0, &mut out, 1);
        out.pop()
    }
}

/// Some homomorphism `x → a`, or `None` if there is none.
pub fn find_homomorphism(x: &RelationalStructure, a: &RelationalStructure) -> Result<Option<Vec<u32>>> {
    Ok(Search::new(x, a)?.first())
}

/// All homomorphisms `x → a`, up to `limit`, in search order.
pub fn all_homomorphisms(x: &RelationalStructure, a: &RelationalStructure, limit: usize) -> Result<Vec<Vec<u32>>> {
    Search::new(x, a)?.all(limit)
}

/// `Aⁿ`: element `Σ aᵢ·|A|ⁱ` is the tuple `(a₀, …, a_{n−1})`; relations hold
/// coordinatewise.
pub fn power_structure(a: &RelationalStructure, n: usize) -> Result<RelationalStructure> {
    if n == 0 {
        return Err(Error::param("power exponent must be positive"));
    }
    let size = (a.universe() as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if size > MAX_POWER_UNIVERSE {
        return Err(Error::SizeCap {
            size,
            cap: MAX_POWER_UNIVERSE,
        });
    }
    let tuples: u128 = a
        .relations()
        .iter()
        .map(|r| (r.len() as u128).checked_pow(n as u32).unwrap_or(u128::MAX))
        .fold(0u128, u128::saturating_add);
    if tuples > MAX_POWER_TUPLES {
        return Err(Error::SizeCap {
            size: tuples,
            cap: MAX_POWER_TUPLES,
        });
    }
    let base = a.universe() as u32;
    let relations = a
        .relations()
        .iter()
        .zip(a.signature().arities())
        .map(|(rel, &r)| {
            let count = rel.len().pow(n as u32);
            (0..count)
                .map(|mut code| {
                    let mut out = vec![0u32; r];
                    let mut scale = 1u32;
                    for _ in 0..n {
                        let s = &rel[code % rel.len()];
                        code /= rel.len();
                        for (o, &v) in out.iter_mut().zip(s) {
                            *o += v * scale;
                        }
                        scale *= base;
                    }
                    out
                })
                .collect()
        })
        .collect();
    RelationalStructure::new(a.signature().clone(), size as usize, relations)
}

/// A function `[d]ⁿ → [e]` stored as a table; index `Σ xᵢ·dⁱ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Polymorphism {
    table: Vec<u32>,
    arity: usize,
    domain: usize,
    codomain: usize,
}

impl Polymorphism {
    pub fn new(arity: usize, domain: usize, codomain: usize, table: Vec<u32>) -> Result<Self> {
        let len = domain.checked_pow(arity as u32).ok_or(Error::param("table too large"))?;
        if table.len() != len {
            return Err(Error::LengthMismatch {
                expected: len,
                actual: table.len(),
            });
        }
        if table.iter().any(|&v| v as usize >= codomain) {
            return Err(Error::param("table value outside the codomain"));
        }
        Ok(Self {
            table,
            arity,
            domain,
            codomain,
        })
    }

    /// `(x₀, …, x_{n−1}) ↦ xᵢ`.
    pub fn projection(domain: usize, arity: usize, i: usize) -> Self {
        let table = (0..domain.pow(arity as u32))
            .map(|x| ((x / domain.pow(i as u32)) % domain) as u32)
            .collect();
        Self {
            table,
            arity,
            domain,
            codomain: domain,
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn domain(&self) -> usize {
        self.domain
    }

    pub fn codomain(&self) -> usize {
        self.codomain
    }

    pub fn table(&self) -> &[u32] {
        &self.table
    }

    pub fn digits(&self, mut x: usize) -> Vec<usize> {
        (0..self.arity)
            .map(|_| {
                let d = x % self.domain;
                x /= self.domain;
                d
            })
            .collect()
    }

    fn index(&self, digits: &[usize]) -> usize {
        digits.iter().rev().fold(0, |acc, &d| acc * self.domain + d)
    }

    pub fn eval(&self, x: &[usize]) -> Result<u32> {
        if x.len() != self.arity {
            return Err(Error::LengthMismatch {
                expected: self.arity,
                actual: x.len(),
            });
        }
        if x.iter().any(|&v| v >= self.domain) {
            return Err(Error::param("argument outside the domain"));
        }
        Ok(self.table[self.index(x)])
    }

    /// `g(a) = f(a_{π(0)}, …, a_{π(n−1)})`.
    pub fn minor(&self, map: &MinorMap) -> Result<Self> {
        if map.source_arity() != self.arity {
            return Err(Error::ArityMismatch {
                expected: self.arity,
                actual: map.source_arity(),
            });
        }
        let m = map.target_arity();
        let len = self.domain.pow(m as u32);
        let table = (0..len)
            .map(|y| {
                let a: Vec<usize> = (0..m).map(|j| (y / self.domain.pow(j as u32)) % self.domain).collect();
                let x: Vec<usize> = map.image().iter().map(|&t| a[t]).collect();
                self.table[self.index(&x)]
            })
            .collect();
        Ok(Self {
            table,
            arity: m,
            domain: self.domain,
            codomain: self.codomain,
        })
    }

    /// The coordinate `i` if this is the `i`-th projection.
    pub fn projection_coordinate(&self) -> Option<usize> {
        if self.domain != self.codomain {
            return None;
        }
        (0..self.arity).find(|&i| *self == Self::projection(self.domain, self.arity, i))
    }

    /// Invariant under every permutation of the arguments.
    pub fn is_symmetric(&self) -> bool {
        (0..self.table.len()).all(|x| {
            let mut d = self.digits(x);
            d.sort_unstable();
            self.table[self.index(&d)] == self.table[x]
        })
    }

    /// Boolean case: the same function as a [`BooleanFunction`].
    pub fn to_boolean(&self) -> Option<BooleanFunction> {
        if self.domain != 2 || self.codomain != 2 {
            return None;
        }
        BooleanFunction::from_fn(self.arity, |x| self.table[x] == 1).ok()
    }

    pub fn from_boolean(f: &BooleanFunction) -> Self {
        Self {
            table: (0..f.len()).map(|x| f.get(x) as u32).collect(),
            arity: f.arity(),
            domain: 2,
            codomain: 2,
        }
    }
}

/// `Pol(A, B)` at arity `n`: every homomorphism `Aⁿ → B`, sorted by table.
pub fn enumerate_polymorphisms(t: &Template, n: usize) -> Result<Vec<Polymorphism>> {
    let power = power_structure(t.a(), n)?;
    let mut out: Vec<Polymorphism> = all_homomorphisms(&power, t.b(), MAX_POLYMORPHISMS)?
        .into_iter()
        .map(|table| Polymorphism {
            table,
            arity: n,
            domain: t.a().universe(),
            codomain: t.b().universe(),
        })
        .collect();
    out.sort_unstable_by(|a, b| a.table.cmp(&b.table));
    Ok(out)
}

pub fn has_symmetric_of_arity(polys: &[Polymorphism], n: usize) -> bool {
    polys.iter().any(|p| p.arity() == n && p.is_symmetric())
}
