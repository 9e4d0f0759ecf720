//! Relational structures, polymorphisms and choice conditions.

mod choice;
mod hom;
mod structure;

pub use choice::{
    find_choice_table, heavy_set_choice_table, layered_bound, verify_choice_condition, ChoiceTable,
    ChoiceVariant, ChoiceVerdict, ClosurePolicy, Counterexample, MinionSlice, RandomMinorEstimate,
    MAX_EXISTENTIAL_MEMBERS,
};
pub use hom::{
    all_homomorphisms, enumerate_polymorphisms, find_homomorphism, has_symmetric_of_arity, is_homomorphism,
    power_structure, Polymorphism, MAX_POLYMORPHISMS, MAX_POWER_TUPLES, MAX_POWER_UNIVERSE, MAX_TARGET_UNIVERSE,
};
pub use structure::{RelationalStructure, Signature, Template};

use crate::boolfn::{BooleanFunction, MinorMap};
use crate::error::{Error, Result};

pub const MAX_THRESHOLD_SEARCH_ARITY: usize = 8;

/// A literal `xᵥ` or `¬xᵥ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Literal {
    pub var: usize,
    pub negated: bool,
}

impl Literal {
    pub fn pos(var: usize) -> Self {
        Self { var, negated: false }
    }

    pub fn neg(var: usize) -> Self {
        Self { var, negated: true }
    }

    /// DIMACS convention: `v` is `x_{v−1}`, `−v` its negation, `0` invalid.
    pub fn from_dimacs(v: i64) -> Result<Self> {
        if v == 0 {
            return Err(Error::param("0 is not a literal"));
        }
        Ok(Self {
            var: (v.unsigned_abs() - 1) as usize,
            negated: v < 0,
        })
    }

    fn element(self) -> u32 {
        2 * self.var as u32 + self.negated as u32
    }
}

/// `X = (literals; C, {(xᵢ, ¬xᵢ)})` over the 3-SAT signature. Element `2v`
/// is `x_v` and `2v+1` is `¬x_v`; homomorphisms into
/// [`RelationalStructure::three_sat`] are the satisfying assignments.
pub fn encode_3sat(num_vars: usize, clauses: &[[Literal; 3]]) -> Result<RelationalStructure> {
    if num_vars == 0 {
        return Err(Error::param("a formula needs at least one variable"));
    }
    if let Some(l) = clauses.iter().flatten().find(|l| l.var >= num_vars) {
        return Err(Error::CoordinateOutOfRange {
            index: l.var,
            arity: num_vars,
        });
    }
    let c = clauses.iter().map(|cl| cl.iter().map(|l| l.element()).collect()).collect();
    let neq = (0..num_vars as u32).map(|v| vec![2 * v, 2 * v + 1]).collect();
    RelationalStructure::new_dedup(Signature::new(vec![3, 2])?, 2 * num_vars, vec![c, neq])
}

/// Truth assignment from a homomorphism of an [`encode_3sat`] structure.
pub fn assignment_from_homomorphism(phi: &[u32]) -> Vec<bool> {
    phi.chunks(2).map(|p| p[0] == 1).collect()
}

/// Value only depends on the number of ones.
pub fn is_symmetric(f: &BooleanFunction) -> bool {
    f.is_symmetric()
}

/// The first map `[n] → [m]` (lexicographic) whose minor is a threshold
/// function. With `proper`, constants and arity-1 thresholds do not count.
pub fn has_threshold_minor(f: &BooleanFunction, m: usize, proper: bool) -> Result<Option<MinorMap>> {
    let n = f.arity();
    if n > MAX_THRESHOLD_SEARCH_ARITY {
        return Err(Error::ArityCap {
            arity: n,
            cap: MAX_THRESHOLD_SEARCH_ARITY,
        });
    }
    if m == 0 || m > n {
        return Err(Error::param(format!("target arity m={m} must lie in 1..={n}")));
    }
    for map in MinorMap::all(n, m) {
        let g = f.apply_minor(&map)?;
        if let Some(t) = g.threshold_level() {
            if !proper || (m >= 2 && t >= 1 && t <= m) {
                return Ok(Some(map));
            }
        }
    }
    Ok(None)
}
