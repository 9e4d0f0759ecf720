//! Dense-tableau two-phase simplex with Bland's rule.
//!
//! Generic over [`Scalar`] so the same code runs in `f64` (pivot tolerance
//! `1e-9`) and in exact rationals.

use std::fmt::Debug;

use num_rational::BigRational;
use num_traits::{FromPrimitive, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Sparse coefficients, sense and right-hand side of one constraint.
type Row<T> = (Vec<(usize, T)>, Sense, T);

pub const PIVOT_TOLERANCE: f64 = 1e-9;

pub trait Scalar: Clone + Debug + PartialOrd + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_f64(v: f64) -> Self;
    fn to_f64(&self) -> f64;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn div(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn is_positive(&self) -> bool;
    fn is_negative(&self) -> bool;
    /// Flush round-off to zero after a pivot.
    fn snap(self) -> Self {
        self
    }
}

impl Scalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_f64(v: f64) -> Self {
        v
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn is_zero(&self) -> bool {
        self.abs() <= PIVOT_TOLERANCE
    }
    fn is_positive(&self) -> bool {
        *self > PIVOT_TOLERANCE
    }
    fn is_negative(&self) -> bool {
        *self < -PIVOT_TOLERANCE
    }
    fn snap(self) -> Self {
        if self.abs() < 1e-12 { 0.0 } else { self }
    }
}

impl Scalar for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        <BigRational as num_traits::One>::one()
    }
    fn from_f64(v: f64) -> Self {
        <BigRational as FromPrimitive>::from_f64(v).expect("finite value")
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_positive(&self) -> bool {
        Signed::is_positive(self)
    }
    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sense {
    Le,
    Ge,
    Eq,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Constraint<T> {
    pub coeffs: Vec<(usize, T)>,
    pub sense: Sense,
    pub rhs: T,
}

/// `find x` (or `minimize c·x`) subject to the constraints, with each
/// variable either free or non-negative.
#[derive(Clone, Debug, PartialEq)]
pub struct LpProblem<T> {
    free: Vec<bool>,
    constraints: Vec<Constraint<T>>,
    objective: Option<Vec<(usize, T)>>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome<T> {
    Feasible { point: Vec<T>, objective: Option<T> },
    Infeasible,
}

impl<T> LpOutcome<T> {
    pub fn is_feasible(&self) -> bool {
        matches!(self, LpOutcome::Feasible { .. })
    }
}

impl<T: Scalar> LpProblem<T> {
    /// `num_vars` variables, all non-negative unless marked free.
    pub fn new(num_vars: usize) -> Self {
        Self {
            free: vec![false; num_vars],
            constraints: Vec::new(),
            objective: None,
        }
    }

    pub fn num_vars(&self) -> usize {
        self.free.len()
    }

    pub fn num_constraints(&self) -> usize {
        self.constraints.len()
    }

    pub fn set_free(&mut self, var: usize) {
        self.free[var] = true;
    }

    pub fn add(&mut self, coeffs: Vec<(usize, T)>, sense: Sense, rhs: T) -> Result<()> {
        if let Some(&(v, _)) = coeffs.iter().find(|(v, _)| *v >= self.free.len()) {
            return Err(Error::CoordinateOutOfRange {
                index: v,
                arity: self.free.len(),
            });
        }
        self.constraints.push(Constraint { coeffs, sense, rhs });
        Ok(())
    }

    pub fn minimize(&mut self, objective: Vec<(usize, T)>) {
        self.objective = Some(objective);
    }

    pub fn solve(&self) -> Result<LpOutcome<T>> {
        Tableau::build(self).run(self)
    }

    /// Phase 1 only: ignores any objective.
    pub fn feasible(&self) -> Result<LpOutcome<T>> {
        let mut p = self.clone();
        p.objective = None;
        p.solve()
    }
}

/// `lp_feasible` entry point.
pub fn lp_feasible<T: Scalar>(problem: &LpProblem<T>) -> Result<LpOutcome<T>> {
    problem.feasible()
}

struct Tableau<T> {
    /// `rows × (cols + 1)`, last column is the right-hand side
    a: Vec<Vec<T>>,
    cost: Vec<T>,
    basis: Vec<usize>,
    cols: usize,
    /// column pair per variable: (positive part, negative part if free)
    var_cols: Vec<(usize, Option<usize>)>,
    first_artificial: usize,
}

impl<T: Scalar> Tableau<T> {
    fn build(p: &LpProblem<T>) -> Self {
        let mut var_cols = Vec::with_capacity(p.free.len());
        let mut next = 0;
        for &free in &p.free {
            if free {
                var_cols.push((next, Some(next + 1)));
                next += 2;
            } else {
                var_cols.push((next, None));
                next += 1;
            }
        }
        let structural = next;
        // normalise rhs ≥ 0
        let rows: Vec<Row<T>> = p
            .constraints
            .iter()
            .map(|c| {
                if c.rhs.is_negative() {
                    let sense = match c.sense {
                        Sense::Le => Sense::Ge,
                        Sense::Ge => Sense::Le,
                        Sense::Eq => Sense::Eq,
                    };
                    (c.coeffs.iter().map(|(v, x)| (*v, x.neg())).collect(), sense, c.rhs.neg())
                } else {
                    (c.coeffs.clone(), c.sense, c.rhs.clone())
                }
            })
            .collect();
        let slacks = rows.iter().filter(|r| r.1 != Sense::Eq).count();
        let artificials = rows.iter().filter(|r| r.1 != Sense::Le).count();
        let first_artificial = structural + slacks;
        let cols = first_artificial + artificials;
        let mut a = Vec::with_capacity(rows.len());
        let mut basis = Vec::with_capacity(rows.len());
        let (mut slack, mut art) = (structural, first_artificial);
        for (coeffs, sense, rhs) in rows {
            let mut row = vec![T::zero(); cols + 1];
            for (v, x) in coeffs {
                let (pos, neg) = var_cols[v];
                row[pos] = row[pos].add(&x);
                if let Some(neg) = neg {
                    row[neg] = row[neg].sub(&x);
                }
            }
            row[cols] = rhs;
            match sense {
                Sense::Le => {
                    row[slack] = T::one();
                    basis.push(slack);
                    slack += 1;
                }
                Sense::Ge => {
                    row[slack] = T::one().neg();
                    slack += 1;
                    row[art] = T::one();
                    basis.push(art);
                    art += 1;
                }
                Sense::Eq => {
                    row[art] = T::one();
                    basis.push(art);
                    art += 1;
                }
            }
            a.push(row);
        }
        Self {
            a,
            cost: vec![T::zero(); cols + 1],
            basis,
            cols,
            var_cols,
            first_artificial,
        }
    }

    /// Set the cost row to reduced costs of `c` for the current basis.
    fn price(&mut self, c: &[T]) {
        let mut cost: Vec<T> = c.to_vec();
        cost.push(T::zero());
        for (row, &b) in self.a.iter().zip(&self.basis) {
            let cb = &c[b];
            if cb.is_zero() {
                continue;
            }
            for (dst, x) in cost.iter_mut().zip(row) {
                *dst = dst.sub(&cb.mul(x));
            }
        }
        self.cost = cost;
    }

    fn pivot(&mut self, r: usize, j: usize) {
        let piv = self.a[r][j].clone();
        for x in self.a[r].iter_mut() {
            *x = x.div(&piv);
        }
        let pivot_row = self.a[r].clone();
        for (i, row) in self.a.iter_mut().enumerate() {
            if i == r || row[j].is_zero() {
                if i != r {
                    row[j] = T::zero();
                }
                continue;
            }
            let factor = row[j].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                *x = x.sub(&factor.mul(p)).snap();
            }
            row[j] = T::zero();
        }
        if !self.cost[j].is_zero() {
            let factor = self.cost[j].clone();
            for (x, p) in self.cost.iter_mut().zip(&pivot_row) {
                *x = x.sub(&factor.mul(p)).snap();
            }
        }
        self.cost[j] = T::zero();
        self.basis[r] = j;
    }

    /// Dantzig's rule while the objective moves, Bland's rule (lowest-index
    /// improving column, lowest basic index on ties) after a run of
    /// degenerate pivots.
    fn optimise(&mut self, allowed: usize) -> Result<()> {
        let limit = 200 * (self.a.len() + self.cols) + 10_000;
        let mut stalled = 0usize;
        for _ in 0..limit {
            let bland = stalled > 50;
            let entering = if bland {
                (0..allowed).find(|&j| self.cost[j].is_negative())
            } else {
                (0..allowed)
                    .filter(|&j| self.cost[j].is_negative())
                    .min_by(|&a, &b| self.cost[a].partial_cmp(&self.cost[b]).expect("ordered").then(a.cmp(&b)))
            };
            let Some(j) = entering else {
                return Ok(());
            };
            let mut best: Option<(usize, T)> = None;
            for (i, row) in self.a.iter().enumerate() {
                if !row[j].is_positive() {
                    continue;
                }
                let ratio = row[self.cols].div(&row[j]);
                best = match best {
                    None => Some((i, ratio)),
                    Some((bi, br)) => {
                        let diff = ratio.sub(&br);
                        if diff.is_negative() || (diff.is_zero() && self.basis[i] < self.basis[bi]) {
                            Some((i, ratio))
                        } else {
                            Some((bi, br))
                        }
                    }
                };
            }
            let Some((r, ratio)) = best else {
                return Err(Error::Unbounded);
            };
            if ratio.is_zero() {
                stalled += 1;
            } else {
                stalled = 0;
            }
            self.pivot(r, j);
        }
        Err(Error::Numerical("simplex iteration limit reached".into()))
    }

    fn run(mut self, p: &LpProblem<T>) -> Result<LpOutcome<T>> {
        // phase 1: minimise the sum of artificials
        let mut c1 = vec![T::zero(); self.cols];
        for c in c1.iter_mut().skip(self.first_artificial) {
            *c = T::one();
        }
        self.price(&c1);
        self.optimise(self.cols)?;
        let infeasibility = self.cost[self.cols].neg();
        if infeasibility.is_positive() {
            return Ok(LpOutcome::Infeasible);
        }
        // drive artificials out of the basis, dropping redundant rows
        let mut r = 0;
        while r < self.a.len() {
            if self.basis[r] >= self.first_artificial {
                match (0..self.first_artificial).find(|&j| !self.a[r][j].is_zero()) {
                    Some(j) => self.pivot(r, j),
                    None => {
                        self.a.remove(r);
                        self.basis.remove(r);
                        continue;
                    }
                }
            }
            r += 1;
        }
        let mut objective = None;
        if let Some(obj) = &p.objective {
            let mut c2 = vec![T::zero(); self.cols];
            for (v, x) in obj {
                let (pos, neg) = self.var_cols[*v];
                c2[pos] = c2[pos].add(x);
                if let Some(neg) = neg {
                    c2[neg] = c2[neg].sub(x);
                }
            }
            self.price(&c2);
            self.optimise(self.first_artificial)?;
            objective = Some(self.cost[self.cols].neg());
        }
        let mut col_value = vec![T::zero(); self.cols];
        for (row, &b) in self.a.iter().zip(&self.basis) {
            col_value[b] = row[self.cols].clone();
        }
        let point = self
            .var_cols
            .iter()
            .map(|&(pos, neg)| match neg {
                Some(neg) => col_value[pos].sub(&col_value[neg]),
                None => col_value[pos].clone(),
            })
            .collect();
        Ok(LpOutcome::Feasible { point, objective })
    }
}
