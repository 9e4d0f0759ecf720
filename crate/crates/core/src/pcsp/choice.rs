//! Choice functions on finite minion slices.
//!
//! A slice is an explicit list of Boolean functions. Verification looks at
//! every minor map between arities present in the slice, so the verdict is
//! only as strong as the slice is closed.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use rayon::prelude::*;

use crate::boolfn::{BooleanFunction, MinorMap, TwoToOneMap};
use crate::error::{Error, Result};
use crate::fourier::Estimate;
use crate::ptf::{find_heavy_set, HeavySetOutcome};
use crate::rng::trial_rng;

/// Slices built by enumerating every table stop at this arity.
pub const MAX_ENUMERATED_SLICE_ARITY: usize = 4;
/// Exhaustive search for a choice table is limited to this many members.
pub const MAX_EXISTENTIAL_MEMBERS: usize = 12;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinionSlice {
    members: Vec<BooleanFunction>,
    index: HashMap<BooleanFunction, usize>,
}

impl MinionSlice {
    /// Repeated members are dropped, keeping the first occurrence.
    pub fn new(members: impl IntoIterator<Item = BooleanFunction>) -> Self {
        let mut out = Vec::new();
        let mut index = HashMap::new();
        for f in members {
            if !index.contains_key(&f) {
                index.insert(f.clone(), out.len());
                out.push(f);
            }
        }
        Self { members: out, index }
    }

    /// Every function of arity `1..=max_arity` accepted by `keep`, ordered by
    /// arity and then by table.
    pub fn from_predicate(max_arity: usize, keep: impl Fn(&BooleanFunction) -> bool + Sync) -> Result<Self> {
        if max_arity > MAX_ENUMERATED_SLICE_ARITY {
            return Err(Error::ArityCap {
                arity: max_arity,
                cap: MAX_ENUMERATED_SLICE_ARITY,
            });
        }
        let mut members = Vec::new();
        for n in 1..=max_arity {
            let tables = 1u64 << (1u64 << n);
            let found: Vec<BooleanFunction> = (0..tables)
                .into_par_iter()
                .map(|t| BooleanFunction::from_fn(n, |x| (t >> x) & 1 == 1).expect("small arity"))
                .filter(|f| keep(f))
                .collect();
            members.extend(found);
        }
        Ok(Self::new(members))
    }

    /// All projections of arity `1..=max_arity`.
    pub fn projections(max_arity: usize) -> Result<Self> {
        let mut members = Vec::new();
        for n in 1..=max_arity {
            for i in 0..n {
                members.push(BooleanFunction::dictator(n, i)?);
            }
        }
        Ok(Self::new(members))
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[BooleanFunction] {
        &self.members
    }

    pub fn position(&self, f: &BooleanFunction) -> Option<usize> {
        self.index.get(f).copied()
    }

    pub fn contains(&self, f: &BooleanFunction) -> bool {
        self.index.contains_key(f)
    }

    /// Distinct member arities, ascending.
    pub fn arities(&self) -> Vec<usize> {
        let mut a: Vec<usize> = self.members.iter().map(BooleanFunction::arity).collect();
        a.sort_unstable();
        a.dedup();
        a
    }

    /// `(π, index of f^π)` for every member `f` and every map into a slice
    /// arity. Minors leaving the slice are an error under
    /// [`ClosurePolicy::Strict`] and skipped otherwise.
    fn minor_edges(&self, policy: ClosurePolicy) -> Result<Vec<Vec<(MinorMap, usize)>>> {
        let arities = self.arities();
        self.members
            .par_iter()
            .enumerate()
            .map(|(i, f)| {
                let mut edges = Vec::new();
                for &m in &arities {
                    for map in MinorMap::all(f.arity(), m) {
                        let g = f.apply_minor(&map)?;
                        match self.position(&g) {
                            Some(j) => edges.push((map, j)),
                            None if policy == ClosurePolicy::Strict => {
                                return Err(Error::SliceNotClosed { member: i })
                            }
                            None => {}
                        }
                    }
                }
                Ok(edges)
            })
            .collect()
    }
}

/// `C(f) ⊆ [arity f]` for finitely many `f`, with `|C(f)| ≤ bound`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChoiceTable {
    bound: usize,
    entries: BTreeMap<BooleanFunction, Vec<usize>>,
}

impl ChoiceTable {
    pub fn new(bound: usize) -> Self {
        Self {
            bound,
            entries: BTreeMap::new(),
        }
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    /// Coordinates are sorted and deduplicated.
    pub fn insert(&mut self, f: BooleanFunction, mut coords: Vec<usize>) -> Result<()> {
        coords.sort_unstable();
        coords.dedup();
        if coords.is_empty() {
            return Err(Error::param("a choice must be non-empty"));
        }
        if coords.len() > self.bound {
            return Err(Error::param(format!(
                "choice of size {} exceeds the bound {}",
                coords.len(),
                self.bound
            )));
        }
        if let Some(&i) = coords.iter().find(|&&i| i >= f.arity()) {
            return Err(Error::CoordinateOutOfRange {
                index: i,
                arity: f.arity(),
            });
        }
        self.entries.insert(f, coords);
        Ok(())
    }

    pub fn get(&self, f: &BooleanFunction) -> Option<&[usize]> {
        self.entries.get(f).map(Vec::as_slice)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&BooleanFunction, &[usize])> {
        self.entries.iter().map(|(f, c)| (f, c.as_slice()))
    }

    fn mask(&self, f: &BooleanFunction) -> Option<u64> {
        self.get(f).map(|c| c.iter().fold(0u64, |m, &i| m | 1 << i))
    }

    /// Header `bound=<M>`, then `arity=<n> table=<hex> choice=<i,j,…>` lines.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let (line, head) = lines.next().ok_or_else(|| Error::parse(0, "missing `bound=` header"))?;
        let bound = head
            .strip_prefix("bound=")
            .and_then(|b| b.parse().ok())
            .ok_or_else(|| Error::parse(line, "expected `bound=<M>`"))?;
        let mut table = Self::new(bound);
        for (line, row) in lines {
            let (func, choice) = row
                .rsplit_once(" choice=")
                .ok_or_else(|| Error::parse(line, "expected `… choice=<coords>`"))?;
            let f: BooleanFunction = func.parse().map_err(|e: Error| Error::parse(line, e.to_string()))?;
            let coords = choice
                .split(',')
                .map(|c| c.trim().parse::<usize>().map_err(|_| Error::parse(line, format!("bad coordinate `{c}`"))))
                .collect::<Result<Vec<usize>>>()?;
            table.insert(f, coords).map_err(|e| Error::parse(line, e.to_string()))?;
        }
        Ok(table)
    }
}

impl fmt::Display for ChoiceTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "bound={}", self.bound)?;
        for (func, coords) in &self.entries {
            let c: Vec<String> = coords.iter().map(usize::to_string).collect();
            writeln!(f, "{func} choice={}", c.join(","))?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum ClosurePolicy {
    /// A minor outside the slice is an error.
    #[default]
    Strict,
    /// Maps whose minor leaves the slice are not examined.
    WithinSlice,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ChoiceVariant {
    /// `|C(f)| = 1` and `π(C(f)) = C(f^π)`.
    Single,
    /// `|C(f)| ≤ bound` and `π(C(f)) ∩ C(f^π) ≠ ∅`.
    Multiple { bound: usize },
    /// Every chain of `bound` members has `i < j` with
    /// `π_{i,j}(C(fᵢ)) ∩ C(fⱼ) ≠ ∅`.
    Layered { bound: usize },
    /// `Pr_π[π(C(f)) ∩ C(f^π) ≠ ∅] ≥ τ` for uniform 2-to-1 `π`, per
    /// even-arity member.
    RandomTwoToOne {
        bound: usize,
        tau: f64,
        trials: usize,
        seed: u64,
    },
}

impl ChoiceVariant {
    fn bound(&self) -> usize {
        match *self {
            ChoiceVariant::Single => 1,
            ChoiceVariant::Multiple { bound }
            | ChoiceVariant::Layered { bound }
            | ChoiceVariant::RandomTwoToOne { bound, .. } => bound,
        }
    }
}

/// A chain `f₁ →π₁ f₂ → …` of slice members (a single member when the
/// choice itself is out of bounds).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    pub chain: Vec<BooleanFunction>,
    pub maps: Vec<MinorMap>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RandomMinorEstimate {
    pub member: usize,
    pub estimate: Estimate,
    /// samples whose minor had a choice
    pub samples: usize,
    pub passes: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ChoiceVerdict {
    pub holds: bool,
    /// maps, chain extensions or samples examined
    pub checked: u64,
    pub counterexample: Option<Counterexample>,
    pub estimates: Vec<RandomMinorEstimate>,
}

impl ChoiceVerdict {
    fn fail(checked: u64, counterexample: Counterexample) -> Self {
        Self {
            holds: false,
            checked,
            counterexample: Some(counterexample),
            estimates: Vec::new(),
        }
    }

    fn pass(checked: u64) -> Self {
        Self {
            holds: true,
            checked,
            counterexample: None,
            estimates: Vec::new(),
        }
    }
}

fn masks(slice: &MinionSlice, table: &ChoiceTable) -> Result<Vec<u64>> {
    slice
        .members()
        .iter()
        .enumerate()
        .map(|(i, f)| table.mask(f).ok_or(Error::MissingChoice(i)))
        .collect()
}

/// Check `table` against `variant` on every map the slice offers.
pub fn verify_choice_condition(
    slice: &MinionSlice,
    table: &ChoiceTable,
    variant: ChoiceVariant,
    policy: ClosurePolicy,
) -> Result<ChoiceVerdict> {
    let masks = masks(slice, table)?;
    let bound = variant.bound();
    let single = variant == ChoiceVariant::Single;
    for (f, &m) in slice.members().iter().zip(&masks) {
        let size = m.count_ones() as usize;
        if size > bound || (single && size != 1) {
            return Ok(ChoiceVerdict::fail(
                0,
                Counterexample {
                    chain: vec![f.clone()],
                    maps: Vec::new(),
                },
            ));
        }
    }
    if let ChoiceVariant::RandomTwoToOne { tau, trials, seed, .. } = variant {
        return random_two_to_one(slice, table, &masks, tau, trials, seed, policy);
    }
    let edges = slice.minor_edges(policy)?;
    match variant {
        ChoiceVariant::Single | ChoiceVariant::Multiple { .. } => {
            let mut checked = 0;
            for (i, list) in edges.iter().enumerate() {
                for (map, j) in list {
                    checked += 1;
                    let image = map.map_mask(masks[i]);
                    let ok = if single { image == masks[*j] } else { image & masks[*j] != 0 };
                    if !ok {
                        return Ok(ChoiceVerdict::fail(
                            checked,
                            Counterexample {
                                chain: vec![slice.members()[i].clone(), slice.members()[*j].clone()],
                                maps: vec![map.clone()],
                            },
                        ));
                    }
                }
            }
            Ok(ChoiceVerdict::pass(checked))
        }
        ChoiceVariant::Layered { bound } => {
            let mut search = Layered {
                edges: &edges,
                masks: &masks,
                len: bound,
                memo: HashSet::new(),
                checked: 0,
                path: Vec::new(),
                maps: Vec::new(),
            };
            for i in 0..slice.len() {
                search.path = vec![i];
                search.maps.clear();
                if search.explore(i, 1, Vec::new()) {
                    let chain = search.path.iter().map(|&k| slice.members()[k].clone()).collect();
                    let maps = search.maps.iter().map(|m| (*m).clone()).collect();
                    return Ok(ChoiceVerdict::fail(search.checked, Counterexample { chain, maps }));
                }
            }
            Ok(ChoiceVerdict::pass(search.checked))
        }
        ChoiceVariant::RandomTwoToOne { .. } => unreachable!("handled above"),
    }
}

/// Depth-first search for a chain with no intersecting pair. The state of a
/// partial chain is its last member and the images `π_{i,j}(C(fᵢ))` of the
/// earlier choices; explored states are memoised.
struct Layered<'a> {
    edges: &'a [Vec<(MinorMap, usize)>],
    masks: &'a [u64],
    len: usize,
    memo: HashSet<(usize, usize, Vec<u64>)>,
    checked: u64,
    path: Vec<usize>,
    maps: Vec<&'a MinorMap>,
}

impl<'a> Layered<'a> {
    fn explore(&mut self, j: usize, depth: usize, family: Vec<u64>) -> bool {
        if depth >= self.len {
            return true;
        }
        let key = (j, depth, family);
        if self.memo.contains(&key) {
            return false;
        }
        let edges = self.edges;
        for (map, g) in &edges[j] {
            self.checked += 1;
            let mut next: Vec<u64> = key.2.iter().map(|&s| map.map_mask(s)).collect();
            next.push(map.map_mask(self.masks[j]));
            if next.iter().any(|&s| s & self.masks[*g] != 0) {
                continue;
            }
            next.sort_unstable();
            next.dedup();
            self.path.push(*g);
            self.maps.push(map);
            if self.explore(*g, depth + 1, next) {
                return true;
            }
            self.path.pop();
            self.maps.pop();
        }
        self.memo.insert(key);
        false
    }
}

fn random_two_to_one(
    slice: &MinionSlice,
    table: &ChoiceTable,
    masks: &[u64],
    tau: f64,
    trials: usize,
    seed: u64,
    policy: ClosurePolicy,
) -> Result<ChoiceVerdict> {
    if trials == 0 {
        return Err(Error::param("trials must be positive"));
    }
    let rows: Vec<Option<RandomMinorEstimate>> = slice
        .members()
        .par_iter()
        .enumerate()
        .map(|(i, f)| {
            if f.arity() % 2 == 1 {
                return Ok(None);
            }
            let m = f.arity() / 2;
            let mut rng = trial_rng(seed, i as u64);
            let (mut hits, mut samples) = (0usize, 0usize);
            for _ in 0..trials {
                let pi = TwoToOneMap::random(m, &mut rng)?;
                let g = f.apply_minor(&pi)?;
                match table.mask(&g) {
                    Some(c) => {
                        samples += 1;
                        hits += (pi.map_mask(masks[i]) & c != 0) as usize;
                    }
                    None if policy == ClosurePolicy::Strict => return Err(Error::MissingChoice(i)),
                    None => {}
                }
            }
            if samples == 0 {
                return Ok(None);
            }
            let q = hits as f64 / samples as f64;
            Ok(Some(RandomMinorEstimate {
                member: i,
                estimate: Estimate {
                    value: q,
                    std_error: crate::stats::bernoulli_se(q, samples),
                },
                samples,
                passes: q >= tau,
            }))
        })
        .collect::<Result<_>>()?;
    let estimates: Vec<RandomMinorEstimate> = rows.into_iter().flatten().collect();
    let checked = estimates.iter().map(|e| e.samples as u64).sum();
    Ok(ChoiceVerdict {
        holds: estimates.iter().all(|e| e.passes),
        checked,
        counterexample: None,
        estimates,
    })
}

/// `⌈2k/ε + 1⌉`, the chain length for heavy-set choices.
pub fn layered_bound(k: usize, epsilon: f64) -> usize {
    (2.0 * k as f64 / epsilon + 1.0 - 1e-9).ceil() as usize
}

/// `C(f)` = the heavy set found by the iterative procedure at level `ε`.
/// The bound is the larger of the chain length and the size guarantee
/// `4k/ε²`. A member without a heavy set is an error.
pub fn heavy_set_choice_table(slice: &MinionSlice, k: usize, epsilon: f64, margin: f64) -> Result<ChoiceTable> {
    let sets: Vec<Vec<usize>> = slice
        .members()
        .par_iter()
        .enumerate()
        .map(|(i, f)| match find_heavy_set(f, k, epsilon, margin)? {
            HeavySetOutcome::Heavy { set, .. } => Ok(set),
            HeavySetOutcome::Regular { .. } => Err(Error::param(format!(
                "member {i} has a representation with every weight below ε = {epsilon}"
            ))),
        })
        .collect::<Result<_>>()?;
    let size_bound = (4.0 * k as f64 / (epsilon * epsilon) + 1e-9).floor() as usize + 1;
    let mut table = ChoiceTable::new(layered_bound(k, epsilon).max(size_bound));
    for (f, set) in slice.members().iter().zip(sets) {
        table.insert(f.clone(), set)?;
    }
    Ok(table)
}

/// Exhaustive search for a table meeting the single or multiple condition
/// on a slice of at most [`MAX_EXISTENTIAL_MEMBERS`] members. Experimental.
pub fn find_choice_table(
    slice: &MinionSlice,
    variant: ChoiceVariant,
    policy: ClosurePolicy,
) -> Result<Option<ChoiceTable>> {
    if slice.len() > MAX_EXISTENTIAL_MEMBERS {
        return Err(Error::SizeCap {
            size: slice.len() as u128,
            cap: MAX_EXISTENTIAL_MEMBERS as u128,
        });
    }
    let (bound, single) = match variant {
        ChoiceVariant::Single => (1, true),
        ChoiceVariant::Multiple { bound } if (1..=2).contains(&bound) => (bound, false),
        _ => return Err(Error::param("existential search supports single and multiple (M ≤ 2) only")),
    };
    let edges = slice.minor_edges(policy)?;
    // constraints checked when the later of the two endpoints is assigned
    let mut due: Vec<Vec<(usize, usize, &MinorMap)>> = vec![Vec::new(); slice.len()];
    for (i, list) in edges.iter().enumerate() {
        for (map, j) in list {
            due[i.max(*j)].push((i, *j, map));
        }
    }
    let candidates: Vec<Vec<u64>> = slice
        .members()
        .iter()
        .map(|f| {
            let mut c: Vec<u64> = (1..1u64 << f.arity())
                .filter(|m| m.count_ones() as usize <= bound)
                .collect();
            c.sort_by_key(|m| (m.count_ones(), *m));
            c
        })
        .collect();
    fn rec(
        k: usize,
        chosen: &mut Vec<u64>,
        candidates: &[Vec<u64>],
        due: &[Vec<(usize, usize, &MinorMap)>],
        single: bool,
    ) -> bool {
        if k == candidates.len() {
            return true;
        }
        for &c in &candidates[k] {
            chosen.push(c);
            let ok = due[k].iter().all(|&(i, j, map)| {
                let image = map.map_mask(chosen[i]);
                if single {
                    image == chosen[j]
                } else {
                    image & chosen[j] != 0
                }
            });
            if ok && rec(k + 1, chosen, candidates, due, single) {
                return true;
            }
            chosen.pop();
        }
        false
    }
    let mut chosen = Vec::with_capacity(slice.len());
    if !rec(0, &mut chosen, &candidates, &due, single) {
        return Ok(None);
    }
    let mut table = ChoiceTable::new(bound);
    for (f, m) in slice.members().iter().zip(chosen) {
        table.insert(f.clone(), (0..f.arity()).filter(|i| (m >> i) & 1 == 1).collect())?;
    }
    Ok(Some(table))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn projection_table(slice: &MinionSlice) -> ChoiceTable {
        let mut t = ChoiceTable::new(1);
        for f in slice.members() {
            t.insert(f.clone(), vec![f.dictator_coordinate().unwrap()]).unwrap();
        }
        t
    }

    #[test]
    fn projections_pass_every_variant() {
        let slice = MinionSlice::projections(3).unwrap();
        let table = projection_table(&slice);
        let s = ClosurePolicy::Strict;
        assert!(verify_choice_condition(&slice, &table, ChoiceVariant::Single, s).unwrap().holds);
        assert!(verify_choice_condition(&slice, &table, ChoiceVariant::Multiple { bound: 1 }, s).unwrap().holds);
        assert!(verify_choice_condition(&slice, &table, ChoiceVariant::Layered { bound: 2 }, s).unwrap().holds);
        let r = ChoiceVariant::RandomTwoToOne {
            bound: 1,
            tau: 1.0,
            trials: 50,
            seed: 0,
        };
        let v = verify_choice_condition(&slice, &table, r, s).unwrap();
        assert!(v.holds && v.estimates.iter().all(|e| e.estimate.value == 1.0));
    }

    #[test]
    fn wrong_choice_is_caught() {
        let slice = MinionSlice::projections(2).unwrap();
        let mut table = projection_table(&slice);
        table.insert(BooleanFunction::dictator(2, 0).unwrap(), vec![1]).unwrap();
        let v = verify_choice_condition(&slice, &table, ChoiceVariant::Single, ClosurePolicy::Strict).unwrap();
        assert!(!v.holds);
        let cx = v.counterexample.unwrap();
        assert_eq!(cx.chain.len(), 2);
    }

    #[test]
    fn closure_and_missing_entries() {
        let slice = MinionSlice::new([BooleanFunction::majority(3).unwrap()]);
        let mut table = ChoiceTable::new(3);
        table.insert(BooleanFunction::majority(3).unwrap(), vec![0, 1, 2]).unwrap();
        let r = verify_choice_condition(&slice, &table, ChoiceVariant::Multiple { bound: 3 }, ClosurePolicy::Strict);
        assert!(matches!(r, Err(Error::SliceNotClosed { member: 0 })));
        let v = verify_choice_condition(
            &slice,
            &table,
            ChoiceVariant::Multiple { bound: 3 },
            ClosurePolicy::WithinSlice,
        )
        .unwrap();
        assert!(v.holds);
        let empty = ChoiceTable::new(1);
        assert!(matches!(
            verify_choice_condition(&slice, &empty, ChoiceVariant::Single, ClosurePolicy::WithinSlice),
            Err(Error::MissingChoice(0))
        ));
    }

    #[test]
    fn oversized_choice_fails() {
        let slice = MinionSlice::projections(2).unwrap();
        let mut table = ChoiceTable::new(2);
        for f in slice.members() {
            table.insert(f.clone(), (0..f.arity()).collect()).unwrap();
        }
        let v = verify_choice_condition(&slice, &table, ChoiceVariant::Single, ClosurePolicy::Strict).unwrap();
        assert!(!v.holds);
        assert_eq!(v.counterexample.unwrap().chain.len(), 1);
    }

    #[test]
    fn layered_length_one_always_fails() {
        let slice = MinionSlice::projections(1).unwrap();
        let table = projection_table(&slice);
        let v = verify_choice_condition(&slice, &table, ChoiceVariant::Layered { bound: 1 }, ClosurePolicy::Strict)
            .unwrap();
        assert!(!v.holds);
    }

    #[test]
    fn heavy_set_tables_are_layered() {
        let slice = MinionSlice::from_predicate(3, |f| {
            crate::ptf::find_representation(f, 1, crate::ptf::Mode::Positive, 1e-6)
                .unwrap()
                .is_some()
        })
        .unwrap();
        let table = heavy_set_choice_table(&slice, 1, 0.5, 1e-6).unwrap();
        let v = verify_choice_condition(
            &slice,
            &table,
            ChoiceVariant::Layered {
                bound: layered_bound(1, 0.5),
            },
            ClosurePolicy::Strict,
        )
        .unwrap();
        assert!(v.holds, "{:?}", v.counterexample);
    }

    #[test]
    fn existential_search() {
        let slice = MinionSlice::projections(2).unwrap();
        let t = find_choice_table(&slice, ChoiceVariant::Single, ClosurePolicy::Strict).unwrap().unwrap();
        assert!(verify_choice_condition(&slice, &t, ChoiceVariant::Single, ClosurePolicy::Strict).unwrap().holds);
        // a symmetric function admits no single choice
        let sym = MinionSlice::new([
            BooleanFunction::conjunction(2).unwrap(),
            BooleanFunction::conjunction(1).unwrap(),
        ]);
        assert!(find_choice_table(&sym, ChoiceVariant::Single, ClosurePolicy::WithinSlice).unwrap().is_none());
        let m = find_choice_table(&sym, ChoiceVariant::Multiple { bound: 2 }, ClosurePolicy::WithinSlice).unwrap();
        assert!(m.is_some());
    }

    #[test]
    fn table_text_roundtrip() {
        let slice = MinionSlice::projections(3).unwrap();
        let t = projection_table(&slice);
        assert_eq!(ChoiceTable::parse(&t.to_string()).unwrap(), t);
        assert!(ChoiceTable::parse("bound=1\narity=2 table=2 choice=5\n").is_err());
    }

    #[test]
    fn layered_bound_values() {
        assert_eq!(layered_bound(1, 0.5), 5);
        assert_eq!(layered_bound(2, 0.5), 9);
        assert_eq!(layered_bound(1, 0.3), 8);
    }
}
