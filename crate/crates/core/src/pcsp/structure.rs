//! Relational structures, templates and their text format.

use std::collections::HashSet;
use std::fmt;

use crate::error::{Error, Result};

/// Relation arities `r₁, …, r_k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Signature(Vec<usize>);

impl Signature {
    pub fn new(arities: Vec<usize>) -> Result<Self> {
        if arities.is_empty() {
            return Err(Error::param("a signature needs at least one relation symbol"));
        }
        if arities.contains(&0) {
            return Err(Error::param("relation arities must be positive"));
        }
        Ok(Self(arities))
    }

    pub fn arities(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// A finite structure over the universe `[n]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationalStructure {
    signature: Signature,
    universe: usize,
    relations: Vec<Vec<Vec<u32>>>,
}

impl RelationalStructure {
    /// Tuples must have the symbol's arity, stay in `[universe]` and be
    /// distinct within a relation.
    pub fn new(signature: Signature, universe: usize, relations: Vec<Vec<Vec<u32>>>) -> Result<Self> {
        if universe == 0 {
            return Err(Error::param("the universe must be non-empty"));
        }
        if universe > u32::MAX as usize {
            return Err(Error::param("universe too large"));
        }
        if relations.len() != signature.len() {
            return Err(Error::SignatureMismatch);
        }
        for (rel, &r) in relations.iter().zip(signature.arities()) {
            let mut seen = HashSet::with_capacity(rel.len());
            for t in rel {
                if t.len() != r {
                    return Err(Error::LengthMismatch {
                        expected: r,
                        actual: t.len(),
                    });
                }
                if let Some(&v) = t.iter().find(|&&v| v as usize >= universe) {
                    return Err(Error::CoordinateOutOfRange {
                        index: v as usize,
                        arity: universe,
                    });
                }
                if !seen.insert(t) {
                    return Err(Error::param(format!("duplicate tuple {t:?}")));
                }
            }
        }
        Ok(Self {
            signature,
            universe,
            relations,
        })
    }

    /// Like [`new`](Self::new) but silently drops repeated tuples.
    pub fn new_dedup(signature: Signature, universe: usize, mut relations: Vec<Vec<Vec<u32>>>) -> Result<Self> {
        for rel in relations.iter_mut() {
            let mut seen = HashSet::new();
            rel.retain(|t| seen.insert(t.clone()));
        }
        Self::new(signature, universe, relations)
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn relations(&self) -> &[Vec<Vec<u32>>] {
        &self.relations
    }

    pub fn relation(&self, k: usize) -> &[Vec<u32>] {
        &self.relations[k]
    }

    pub fn num_tuples(&self) -> usize {
        self.relations.iter().map(Vec::len).sum()
    }

    pub fn is_similar(&self, other: &Self) -> bool {
        self.signature == other.signature
    }

    /// The complete graph `K_n` as a symmetric binary relation.
    pub fn complete_graph(n: usize) -> Result<Self> {
        let edges = (0..n as u32)
            .flat_map(|a| (0..n as u32).filter(move |&b| b != a).map(move |b| vec![a, b]))
            .collect();
        Self::new(Signature::new(vec![2])?, n, vec![edges])
    }

    /// A single ternary relation on `{0,1}` given by the allowed popcounts.
    pub fn boolean_ternary(allowed_weights: &[u32]) -> Result<Self> {
        let rel = (0u32..8)
            .filter(|x| allowed_weights.contains(&x.count_ones()))
            .map(|x| (0..3).map(|i| (x >> i) & 1).collect())
            .collect();
        Self::new(Signature::new(vec![3])?, 2, vec![rel])
    }

    /// `{(a,b,c) : a+b+c = 1}`.
    pub fn one_in_three() -> Self {
        Self::boolean_ternary(&[1]).expect("valid structure")
    }

    /// `{0,1}³ ∖ {000, 111}`.
    pub fn not_all_equal() -> Self {
        Self::boolean_ternary(&[1, 2]).expect("valid structure")
    }

    /// The 3-SAT template: clauses `{0,1}³ ∖ {000}` and the relation `≠`.
    pub fn three_sat() -> Self {
        let clauses = (1u32..8).map(|x| (0..3).map(|i| (x >> i) & 1).collect()).collect();
        let neq = vec![vec![0, 1], vec![1, 0]];
        Self::new(Signature::new(vec![3, 2]).expect("valid"), 2, vec![clauses, neq]).expect("valid structure")
    }

    /// Parse the text format; `#` starts a comment.
    ///
    /// ```text
    /// universe=3 relations=1
    /// arity=2
    /// 0 1
    /// 1 0
    /// ```
    pub fn parse(text: &str) -> Result<Self> {
        let lines = tokenize(text);
        let mut pos = 0;
        let s = parse_structure(&lines, &mut pos)?;
        if let Some((line, _)) = lines.get(pos) {
            return Err(Error::parse(*line, "trailing content after the structure"));
        }
        Ok(s)
    }
}

impl fmt::Display for RelationalStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "universe={} relations={}", self.universe, self.relations.len())?;
        for (rel, r) in self.relations.iter().zip(self.signature.arities()) {
            writeln!(f, "arity={r}")?;
            for t in rel {
                let row: Vec<String> = t.iter().map(u32::to_string).collect();
                writeln!(f, "{}", row.join(" "))?;
            }
        }
        Ok(())
    }
}

impl std::str::FromStr for RelationalStructure {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

/// Non-empty lines with comments stripped, numbered from 1.
fn tokenize(text: &str) -> Vec<(usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty())
        .collect()
}

fn key_value<'a>(line: usize, token: &'a str, key: &str) -> Result<&'a str> {
    token
        .strip_prefix(key)
        .and_then(|r| r.strip_prefix('='))
        .ok_or_else(|| Error::parse(line, format!("expected `{key}=…`, found `{token}`")))
}

fn number(line: usize, s: &str) -> Result<usize> {
    s.parse().map_err(|_| Error::parse(line, format!("`{s}` is not a number")))
}

fn parse_structure(lines: &[(usize, &str)], pos: &mut usize) -> Result<RelationalStructure> {
    let &(line, header) = lines.get(*pos).ok_or_else(|| Error::parse(0, "missing structure header"))?;
    let mut parts = header.split_whitespace();
    let universe = number(line, key_value(line, parts.next().unwrap_or(""), "universe")?)?;
    let k = number(line, key_value(line, parts.next().unwrap_or(""), "relations")?)?;
    if parts.next().is_some() {
        return Err(Error::parse(line, "unexpected token in header"));
    }
    *pos += 1;
    let mut arities = Vec::with_capacity(k);
    let mut relations = Vec::with_capacity(k);
    for _ in 0..k {
        let &(line, head) = lines
            .get(*pos)
            .ok_or_else(|| Error::parse(line, "missing `arity=` line"))?;
        let r = number(line, key_value(line, head, "arity")?)?;
        *pos += 1;
        let mut tuples = Vec::new();
        while let Some(&(line, row)) = lines.get(*pos) {
            if row.contains('=') {
                break;
            }
            let t = row
                .split_whitespace()
                .map(|v| v.parse::<u32>().map_err(|_| Error::parse(line, format!("bad element `{v}`"))))
                .collect::<Result<Vec<u32>>>()?;
            if t.len() != r {
                return Err(Error::parse(line, format!("expected {r} elements, found {}", t.len())));
            }
            tuples.push(t);
            *pos += 1;
        }
        arities.push(r);
        relations.push(tuples);
    }
    let sig = Signature::new(arities).map_err(|e| Error::parse(line, e.to_string()))?;
    RelationalStructure::new(sig, universe, relations).map_err(|e| Error::parse(line, e.to_string()))
}

/// A PCSP template `(A, B)` with a homomorphism `A → B`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Template {
    a: RelationalStructure,
    b: RelationalStructure,
    witness: Vec<u32>,
}

impl Template {
    pub fn new(a: RelationalStructure, b: RelationalStructure, witness: Vec<u32>) -> Result<Self> {
        if !a.is_similar(&b) {
            return Err(Error::SignatureMismatch);
        }
        if witness.len() != a.universe() || witness.iter().any(|&v| v as usize >= b.universe()) {
            return Err(Error::InvalidWitness);
        }
        if !super::is_homomorphism(&witness, &a, &b)? {
            return Err(Error::InvalidWitness);
        }
        Ok(Self { a, b, witness })
    }

    /// Search for a witness.
    pub fn with_search(a: RelationalStructure, b: RelationalStructure) -> Result<Self> {
        let witness = super::find_homomorphism(&a, &b)?.ok_or(Error::InvalidWitness)?;
        Self::new(a, b, witness)
    }

    /// `(A, A)` with the identity witness.
    pub fn csp(a: RelationalStructure) -> Self {
        let id = (0..a.universe() as u32).collect();
        Self::new(a.clone(), a, id).expect("identity is a homomorphism")
    }

    pub fn a(&self) -> &RelationalStructure {
        &self.a
    }

    pub fn b(&self) -> &RelationalStructure {
        &self.b
    }

    pub fn witness(&self) -> &[u32] {
        &self.witness
    }

    pub fn is_boolean(&self) -> bool {
        self.a.universe() == 2 && self.b.universe() == 2
    }

    /// Built-in templates by name: `k2`, `k3`, `1in3`, `nae`, `1in3-nae`,
    /// `3sat`, `k<a>-k<b>` for graph colouring.
    pub fn standard(name: &str) -> Result<Self> {
        match name {
            "k2" => Ok(Self::csp(RelationalStructure::complete_graph(2)?)),
            "k3" => Ok(Self::csp(RelationalStructure::complete_graph(3)?)),
            "1in3" => Ok(Self::csp(RelationalStructure::one_in_three())),
            "nae" => Ok(Self::csp(RelationalStructure::not_all_equal())),
            "1in3-nae" => Self::new(RelationalStructure::one_in_three(), RelationalStructure::not_all_equal(), vec![0, 1]),
            "3sat" => Ok(Self::csp(RelationalStructure::three_sat())),
            _ => {
                let colours = name
                    .strip_prefix('k')
                    .and_then(|r| r.split_once("-k"))
                    .and_then(|(a, b)| Some((a.parse::<usize>().ok()?, b.parse::<usize>().ok()?)));
                match colours {
                    Some((a, b)) if a >= 1 && a <= b => Self::new(
                        RelationalStructure::complete_graph(a)?,
                        RelationalStructure::complete_graph(b)?,
                        (0..a as u32).collect(),
                    ),
                    _ => Err(Error::param(format!("unknown template `{name}`"))),
                }
            }
        }
    }

    /// Two structures followed by `witness=<images…>`. Without a witness line
    /// a homomorphism is searched for.
    pub fn parse(text: &str) -> Result<Self> {
        let lines = tokenize(text);
        let mut pos = 0;
        let a = parse_structure(&lines, &mut pos)?;
        let b = parse_structure(&lines, &mut pos)?;
        match lines.get(pos) {
            None => Self::with_search(a, b),
            Some(&(line, row)) => {
                let rest = key_value(line, row, "witness")?;
                let witness = rest
                    .split_whitespace()
                    .map(|v| v.parse::<u32>().map_err(|_| Error::parse(line, format!("bad image `{v}`"))))
                    .collect::<Result<Vec<u32>>>()?;
                if let Some(&(line, _)) = lines.get(pos + 1) {
                    return Err(Error::parse(line, "trailing content after the witness"));
                }
                Self::new(a, b, witness)
            }
        }
    }
}

impl fmt::Display for Template {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.a, self.b)?;
        let w: Vec<String> = self.witness.iter().map(u32::to_string).collect();
        writeln!(f, "witness={}", w.join(" "))
    }
}

impl std::str::FromStr for Template {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}
