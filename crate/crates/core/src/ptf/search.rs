//! Representation search, weight minimisation and heavy sets.
//!
//! Every query is an LP over the coefficients `Q̂(S)`, `|S| ≤ k`, with one
//! row per point of the cube. Rows are generated lazily: solve on a subset
//! of points, add the points the solution misclassifies, repeat.

use num_rational::BigRational;

use super::lp::{LpOutcome, LpProblem, Scalar, Sense};
use super::{Mode, MultilinearPoly, Representation};
use crate::boolfn::BooleanFunction;
use crate::error::{Error, Result};

pub const DEFAULT_MARGIN: f64 = 1e-6;
/// `2ⁿ` point rows.
pub const MAX_SEARCH_ARITY: usize = 12;
pub const MAX_EXACT_ARITY: usize = 8;
const ROWS_PER_ROUND: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Backend {
    #[default]
    Float,
    /// Exact rational simplex; arity ≤ 8.
    Exact,
}

struct Query<'a> {
    f: &'a BooleanFunction,
    degree: usize,
    mode: Mode,
    margin: f64,
    /// `ω_i ≤ cap` for `i` in the set
    capped: Vec<usize>,
    cap: f64,
    minimise_max_weight: bool,
}

struct Solution {
    coeffs: Vec<(usize, f64)>,
    t: f64,
    objective: Option<f64>,
}

impl<'a> Query<'a> {
    fn new(f: &'a BooleanFunction, degree: usize, mode: Mode, margin: f64) -> Result<Self> {
        let n = f.arity();
        if n > MAX_SEARCH_ARITY {
            return Err(Error::ArityCap {
                arity: n,
                cap: MAX_SEARCH_ARITY,
            });
        }
        if degree > n.max(1) {
            return Err(Error::param(format!("degree {degree} exceeds arity {n}")));
        }
        if mode == Mode::Positive && !(margin > 1e-8 && margin.is_finite()) {
            return Err(Error::param("margin must be a positive number above 1e-8"));
        }
        Ok(Self {
            f,
            degree,
            mode,
            margin,
            capped: Vec::new(),
            cap: 0.0,
            minimise_max_weight: false,
        })
    }

    fn monomials(&self) -> Vec<usize> {
        let skip_empty = self.mode == Mode::Positive;
        (0..self.f.len())
            .filter(|&s| (s.count_ones() as usize) <= self.degree && !(skip_empty && s == 0))
            .collect()
    }

    fn solve(&self, backend: Backend) -> Result<Option<Solution>> {
        match backend {
            Backend::Float => self.solve_in::<f64>(),
            Backend::Exact => {
                if self.f.arity() > MAX_EXACT_ARITY {
                    return Err(Error::ArityCap {
                        arity: self.f.arity(),
                        cap: MAX_EXACT_ARITY,
                    });
                }
                self.solve_in::<BigRational>()
            }
        }
    }

    fn solve_in<T: Scalar>(&self) -> Result<Option<Solution>> {
        let n = self.f.arity();
        let monos = self.monomials();
        let positive = self.mode == Mode::Positive;
        let t_var = positive.then_some(monos.len());
        let u_var = self.minimise_max_weight.then_some(monos.len() + positive as usize);
        let num_vars = monos.len() + positive as usize + self.minimise_max_weight as usize;
        let margin = T::from_f64(if positive { self.margin } else { 1.0 });

        let mut included = vec![false; self.f.len()];
        for (x, inc) in included.iter_mut().enumerate() {
            let w = x.count_ones() as usize;
            *inc = n <= 6 || w <= 1 || w + 1 >= n;
        }

        loop {
            let mut lp: LpProblem<T> = LpProblem::new(num_vars);
            if !positive {
                (0..num_vars).for_each(|v| lp.set_free(v));
            }
            if positive {
                lp.add((0..monos.len()).map(|v| (v, T::one())).collect(), Sense::Eq, T::one())?;
            }
            let weight_row = |i: usize| -> Vec<(usize, T)> {
                monos
                    .iter()
                    .enumerate()
                    .filter(|(_, &s)| (s >> i) & 1 == 1)
                    .map(|(v, _)| (v, T::one()))
                    .collect()
            };
            for &i in &self.capped {
                lp.add(weight_row(i), Sense::Le, T::from_f64(self.cap))?;
            }
            if let Some(u) = u_var {
                for i in 0..n {
                    let mut row = weight_row(i);
                    row.push((u, T::one().neg()));
                    lp.add(row, Sense::Le, T::zero())?;
                }
                lp.minimize(vec![(u, T::one())]);
            }
            for x in (0..self.f.len()).filter(|&x| included[x]) {
                let mut row: Vec<(usize, T)> = monos
                    .iter()
                    .enumerate()
                    .filter(|(_, &s)| s & !x == 0)
                    .map(|(v, _)| (v, T::one()))
                    .collect();
                if let Some(t) = t_var {
                    row.push((t, T::one().neg()));
                }
                if self.f.get(x) {
                    lp.add(row, Sense::Ge, T::zero())?;
                } else {
                    lp.add(row, Sense::Le, margin.neg())?;
                }
            }
            let (point, objective) = match lp.solve()? {
                LpOutcome::Infeasible => return Ok(None),
                LpOutcome::Feasible { point, objective } => (point, objective),
            };

            // Q(x) − t at every point via a subset-sum transform
            let mut dense = vec![T::zero(); self.f.len()];
            for (v, &s) in monos.iter().enumerate() {
                dense[s] = point[v].clone();
            }
            for i in 0..n {
                for x in 0..self.f.len() {
                    if (x >> i) & 1 == 1 {
                        dense[x] = dense[x].add(&dense[x ^ (1 << i)]);
                    }
                }
            }
            let t = t_var.map(|t| point[t].clone()).unwrap_or_else(T::zero);
            let mut violated: Vec<(f64, usize)> = Vec::new();
            for (x, q) in dense.iter().enumerate() {
                if included[x] {
                    continue;
                }
                let slack = q.sub(&t);
                let amount = if self.f.get(x) {
                    slack.is_negative().then(|| slack.neg().to_f64())
                } else {
                    let over = slack.add(&margin);
                    over.is_positive().then(|| over.to_f64())
                };
                if let Some(a) = amount {
                    violated.push((a, x));
                }
            }
            if violated.is_empty() {
                return Ok(Some(Solution {
                    coeffs: monos.iter().enumerate().map(|(v, &s)| (s, point[v].to_f64())).collect(),
                    t: t.to_f64(),
                    objective: objective.map(|o| o.to_f64()),
                }));
            }
            violated.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
            for &(_, x) in violated.iter().take(ROWS_PER_ROUND) {
                included[x] = true;
            }
        }
    }

    /// Turn an LP point into a representation whose sign function is `f`.
    ///
    /// Positive mode clamps round-off negatives and renormalises. The
    /// threshold is then moved to the smallest `Q(x)` over the ones of `f`,
    /// which keeps every one on the right side under the same evaluation
    /// order that `sign_function` uses.
    fn finish(&self, sol: &Solution) -> Result<Option<Representation>> {
        let n = self.f.arity();
        let positive = self.mode == Mode::Positive;
        let mut coeffs: Vec<(usize, f64)> = sol
            .coeffs
            .iter()
            .map(|&(s, c)| (s, if positive { c.max(0.0) } else { c }))
            .filter(|&(_, c)| c != 0.0)
            .collect();
        if positive {
            let sum: f64 = coeffs.iter().map(|c| c.1).sum();
            if sum <= 0.0 {
                return Ok(None);
            }
            coeffs.iter_mut().for_each(|c| c.1 /= sum);
        }
        let poly = MultilinearPoly::from_terms(n, self.degree, coeffs.iter().map(|&(s, c)| (s as u128, c)))?;
        let values: Vec<f64> = (0..self.f.len()).map(|x| poly.eval(x as u128)).collect();
        let lowest_one = (0..self.f.len())
            .filter(|&x| self.f.get(x))
            .map(|x| values[x])
            .fold(f64::INFINITY, f64::min);
        let highest_zero = (0..self.f.len())
            .filter(|&x| !self.f.get(x))
            .map(|x| values[x])
            .fold(f64::NEG_INFINITY, f64::max);
        let t = if lowest_one.is_finite() {
            lowest_one
        } else {
            let margin = if positive { self.margin } else { 1.0 };
            (highest_zero + margin).max(if positive { sol.t.max(0.0) } else { f64::NEG_INFINITY })
        };
        if !(highest_zero < t) {
            return Ok(None);
        }
        let t = if positive { t.max(0.0) } else { t };
        let rep = Representation::new(poly, t, self.mode)?;
        Ok((0..self.f.len())
            .all(|x| rep.evaluate(x as u128) == self.f.get(x))
            .then_some(rep))
    }

    /// Solve and build a checked representation, retrying in exact
    /// arithmetic when float round-off breaks the sign pattern.
    fn run(&self, backend: Backend) -> Result<Option<(Representation, Option<f64>)>> {
        let Some(sol) = self.solve(backend)? else {
            return Ok(None);
        };
        if let Some(rep) = self.finish(&sol)? {
            return Ok(Some((rep, sol.objective)));
        }
        if backend == Backend::Float && self.f.arity() <= MAX_EXACT_ARITY {
            return self.run(Backend::Exact);
        }
        Err(Error::Numerical(
            "LP solution does not reproduce the function within tolerance".into(),
        ))
    }
}

/// A degree-`k` representation of `f` in the given mode, or `None`.
///
/// General mode solves `Q(x) ≥ 0` on ones and `Q(x) ≤ −1` on zeros (the unit
/// gap is free by scaling). Positive mode solves `Q(x) − t ≥ 0` on ones and
/// `Q(x) − t ≤ −margin` on zeros with `Q̂(∅) = 0`, `Q̂ ≥ 0`, `ΣQ̂ = 1`, `t ≥ 0`.
pub fn find_representation(f: &BooleanFunction, k: usize, mode: Mode, margin: f64) -> Result<Option<Representation>> {
    find_representation_with(f, k, mode, margin, Backend::Float)
}

pub fn find_representation_with(
    f: &BooleanFunction,
    k: usize,
    mode: Mode,
    margin: f64,
    backend: Backend,
) -> Result<Option<Representation>> {
    let q = Query::new(f, k, mode, margin)?;
    if mode == Mode::Positive && !f.is_monotone() {
        return Ok(None);
    }
    Ok(q.run(backend)?.map(|r| r.0))
}

/// `min u` over positive representations with `ω_i[Q] ≤ u` for all `i`.
/// The constant-1 function is reported as `0` (zero polynomial, `t = 0`).
pub fn min_max_weight(f: &BooleanFunction, k: usize, margin: f64) -> Result<Option<f64>> {
    let mut q = Query::new(f, k, Mode::Positive, margin)?;
    if !f.is_monotone() {
        return Ok(None);
    }
    if f.count_ones() == f.len() as u64 {
        return Ok(Some(0.0));
    }
    q.minimise_max_weight = true;
    Ok(q.run(Backend::Float)?.map(|(rep, obj)| obj.unwrap_or_else(|| rep.poly().max_weight())))
}

/// True iff every positive degree-`k` representation has some `i ∈ A` with
/// `ω_i ≥ α`, decided as infeasibility of `ω_i ≤ α − margin` on `A`.
pub fn is_heavy_set(f: &BooleanFunction, k: usize, alpha: f64, set: &[usize], margin: f64) -> Result<bool> {
    if let Some(&i) = set.iter().find(|&&i| i >= f.arity()) {
        return Err(Error::CoordinateOutOfRange {
            index: i,
            arity: f.arity(),
        });
    }
    if set.is_empty() {
        return Ok(false);
    }
    if find_representation(f, k, Mode::Positive, margin)?.is_none() {
        return Err(Error::NotRepresentable {
            degree: k,
            mode: Mode::Positive.name(),
        });
    }
    Ok(capped(f, k, alpha - margin, set, margin)?.is_none())
}

fn capped(f: &BooleanFunction, k: usize, cap: f64, set: &[usize], margin: f64) -> Result<Option<Representation>> {
    let mut q = Query::new(f, k, Mode::Positive, margin)?;
    q.capped = set.to_vec();
    q.cap = cap;
    Ok(q.run(Backend::Float)?.map(|r| r.0))
}

#[derive(Clone, Debug, PartialEq)]
pub enum HeavySetOutcome {
    /// A certified `(k, ε/2)`-heavy set, found after `rounds` LP calls.
    Heavy { set: Vec<usize>, rounds: usize },
    /// All `⌈2/ε⌉ + 1` rounds produced representations; their average has
    /// every weight below `ε`.
    Regular { witness: Representation },
}

impl HeavySetOutcome {
    pub fn heavy_set(&self) -> Option<&[usize]> {
        match self {
            HeavySetOutcome::Heavy { set, .. } => Some(set),
            HeavySetOutcome::Regular { .. } => None,
        }
    }
}

/// The iterative heavy-set procedure at level `ε`.
///
/// Start from any representation `Q₀` and `A = {i : ω_i[Q₀] ≥ ε/2}`. For
/// `r = ⌈2/ε⌉` rounds ask for a representation with `ω_i < ε/2` on `A`; if
/// none exists `A` is heavy, otherwise add its `ε/2`-heavy coordinates.
pub fn find_heavy_set(f: &BooleanFunction, k: usize, epsilon: f64, margin: f64) -> Result<HeavySetOutcome> {
    if !(epsilon > 0.0 && epsilon <= 2.0) {
        return Err(Error::param("ε must lie in (0, 2]"));
    }
    let half = epsilon / 2.0;
    let heavy_of = |rep: &Representation| -> Vec<usize> {
        rep.poly()
            .weights()
            .iter()
            .enumerate()
            .filter(|(_, &w)| w >= half - 1e-12)
            .map(|(i, _)| i)
            .collect()
    };
    let first = find_representation(f, k, Mode::Positive, margin)?.ok_or(Error::NotRepresentable {
        degree: k,
        mode: Mode::Positive.name(),
    })?;
    let mut set = heavy_of(&first);
    let mut reps = vec![first];
    let rounds = (2.0 / epsilon).ceil() as usize;
    for round in 1..=rounds {
        match capped(f, k, half - margin, &set, margin)? {
            None => {
                let bound = 4.0 * k as f64 / (epsilon * epsilon);
                if set.len() as f64 > bound + 1.0 {
                    return Err(Error::Numerical(format!(
                        "heavy set of size {} exceeds 4k/ε² = {bound}",
                        set.len()
                    )));
                }
                return Ok(HeavySetOutcome::Heavy { set, rounds: round });
            }
            Some(rep) => {
                for i in heavy_of(&rep) {
                    if !set.contains(&i) {
                        set.push(i);
                    }
                }
                set.sort_unstable();
                reps.push(rep);
            }
        }
    }
    Ok(HeavySetOutcome::Regular {
        witness: average(&reps, k)?,
    })
}

fn average(reps: &[Representation], k: usize) -> Result<Representation> {
    let n = reps[0].arity();
    let scale = 1.0 / reps.len() as f64;
    let mut poly = MultilinearPoly::new(n, k)?;
    for rep in reps {
        for (m, c) in rep.poly().terms() {
            poly.add_term(m, c * scale)?;
        }
    }
    let t = reps.iter().map(|r| r.threshold()).sum::<f64>() * scale;
    Representation::new(poly, t, Mode::Positive)
}
