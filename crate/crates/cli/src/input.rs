//! Loading functions, templates and instances from files or built-in names.

use std::path::Path;

use minionlab_core::pcsp::{encode_3sat, Literal, MinionSlice};
use minionlab_core::ptf::{find_representation, Mode};
use minionlab_core::{BooleanFunction, ChoiceTable, LabelCoverInstance, RelationalStructure, Representation, Template};

use crate::failure::{Failure, Outcome};

pub fn read_file(path: &Path) -> Outcome<String> {
    std::fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

/// Names with a separator or extension are paths, never built-ins.
fn missing_file(spec: &str) -> Option<Failure> {
    (spec.contains('/') || spec.contains('.')).then(|| Failure::Io(format!("{spec}: no such file")))
}

fn malformed(path: &Path, e: minionlab_core::Error) -> Failure {
    match Failure::from(e) {
        Failure::Malformed(m) => Failure::Malformed(format!("{}: {m}", path.display())),
        other => other,
    }
}

/// `MAJ_k(x₀⊕x₁, x₂⊕x₃, …)` on `2k` coordinates; strict majority of the
/// pair parities.
pub fn majority_of_xor_pairs(k: usize) -> minionlab_core::Result<BooleanFunction> {
    BooleanFunction::from_fn(2 * k, |x| {
        let odd = (0..k).filter(|j| ((x >> (2 * j)) ^ (x >> (2 * j + 1))) & 1 == 1).count();
        2 * odd > k
    })
}

pub const FUNCTION_SPEC_HELP: &str = "file of `arity=<n> table=<hex>` records (first record is used) or a \
built-in: maj:N, parity:N, and:N, or:N, dict:N:I, thr:N:T, const:N:B, tribes:W:C, hex:N:HEX, majxor:K \
(majority of K pair parities, arity 2K); a missing N is taken from --arity";

/// A function from a record file or a built-in name.
pub fn load_function(spec: &str, arity: Option<usize>) -> Outcome<BooleanFunction> {
    let path = Path::new(spec);
    if path.is_file() {
        let text = read_file(path)?;
        let mut records = BooleanFunction::parse_records(&text).map_err(|e| malformed(path, e))?;
        if records.is_empty() {
            return Err(Failure::Malformed(format!("{}: no function records", path.display())));
        }
        return Ok(records.swap_remove(0));
    }
    if let Some(e) = missing_file(spec) {
        return Err(e);
    }
    let mut parts = spec.split(':');
    let name = parts.next().unwrap_or_default();
    let args: Vec<&str> = parts.collect();
    let num = |i: usize, what: &str| -> Outcome<usize> {
        args.get(i)
            .ok_or_else(|| Failure::usage(format!("`{spec}` needs {what}")))?
            .parse()
            .map_err(|_| Failure::usage(format!("`{spec}`: {what} must be a non-negative integer")))
    };
    let n = || -> Outcome<usize> {
        match args.first() {
            Some(_) => num(0, "an arity"),
            None => arity.ok_or_else(|| Failure::usage(format!("`{spec}` needs an arity (`{name}:N` or --arity)"))),
        }
    };
    let f = match name {
        "maj" => BooleanFunction::majority(n()?),
        "parity" => BooleanFunction::parity(n()?),
        "and" => BooleanFunction::conjunction(n()?),
        "or" => BooleanFunction::disjunction(n()?),
        "dict" => BooleanFunction::dictator(num(0, "an arity")?, num(1, "a coordinate")?),
        "thr" => BooleanFunction::threshold(num(0, "an arity")?, num(1, "a threshold")?),
        "const" => BooleanFunction::constant(num(0, "an arity")?, num(1, "a value")? == 1),
        "tribes" => BooleanFunction::tribes(num(0, "a width")?, num(1, "a count")?),
        "majxor" => majority_of_xor_pairs(num(0, "a pair count")?),
        "hex" => {
            let hex = args.get(1).ok_or_else(|| Failure::usage(format!("`{spec}` needs a table")))?;
            BooleanFunction::parse_hex(num(0, "an arity")?, hex)
        }
        _ => {
            return Err(Failure::usage(format!(
                "`{spec}` is neither a file nor a built-in function"
            )))
        }
    };
    Ok(f?)
}

/// A template file or a built-in name (see [`Template::standard`]).
pub fn load_template(spec: &str) -> Outcome<(Template, String)> {
    let path = Path::new(spec);
    if path.is_file() {
        let text = read_file(path)?;
        let t = Template::parse(&text).map_err(|e| malformed(path, e))?;
        return Ok((t, text));
    }
    if let Some(e) = missing_file(spec) {
        return Err(e);
    }
    let t = Template::standard(spec).map_err(|_| {
        Failure::usage(format!(
            "`{spec}` is neither a file nor a built-in template (k2, k3, 1in3, nae, 1in3-nae, 3sat, k<a>-k<b>)"
        ))
    })?;
    let text = t.to_string();
    Ok((t, text))
}

pub fn load_structure(path: &Path) -> Outcome<RelationalStructure> {
    RelationalStructure::parse(&read_file(path)?).map_err(|e| malformed(path, e))
}

pub fn load_representation(path: &Path) -> Outcome<Representation> {
    Representation::parse(&read_file(path)?).map_err(|e| malformed(path, e))
}

pub fn load_instance(path: &Path) -> Outcome<LabelCoverInstance> {
    LabelCoverInstance::parse(&read_file(path)?).map_err(|e| malformed(path, e))
}

pub fn load_choice_table(path: &Path) -> Outcome<ChoiceTable> {
    ChoiceTable::parse(&read_file(path)?).map_err(|e| malformed(path, e))
}

/// DIMACS CNF with exactly three literals per clause.
pub fn load_cnf(path: &Path) -> Outcome<RelationalStructure> {
    let text = read_file(path)?;
    let bad = |line: usize, m: &str| Failure::Malformed(format!("{}:{line}: {m}", path.display()));
    let mut num_vars = None;
    let mut clauses = Vec::new();
    let mut pending: Vec<Literal> = Vec::new();
    for (ln, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('c') || line.starts_with('%') {
            continue;
        }
        if let Some(header) = line.strip_prefix('p') {
            let fields: Vec<&str> = header.split_whitespace().collect();
            if fields.len() != 3 || fields[0] != "cnf" {
                return Err(bad(ln + 1, "expected `p cnf <vars> <clauses>`"));
            }
            num_vars = Some(fields[1].parse::<usize>().map_err(|_| bad(ln + 1, "bad variable count"))?);
            continue;
        }
        for tok in line.split_whitespace() {
            let v: i64 = tok.parse().map_err(|_| bad(ln + 1, "bad literal"))?;
            if v == 0 {
                let clause: [Literal; 3] = pending
                    .as_slice()
                    .try_into()
                    .map_err(|_| bad(ln + 1, "clauses must have exactly three literals"))?;
                clauses.push(clause);
                pending.clear();
            } else {
                pending.push(Literal::from_dimacs(v)?);
            }
        }
    }
    if !pending.is_empty() {
        return Err(bad(text.lines().count(), "unterminated clause"));
    }
    let n = num_vars.ok_or_else(|| bad(1, "missing `p cnf` header"))?;
    Ok(encode_3sat(n, &clauses)?)
}

pub const SLICE_SPEC_HELP: &str = "projections:N (dictators of arity 1..=N), ptf:K:N (positive degree-K \
threshold functions of arity 1..=N, N ≤ 4) or a file of function records";

pub fn load_slice(spec: &str, margin: f64) -> Outcome<MinionSlice> {
    let path = Path::new(spec);
    if path.is_file() {
        let text = read_file(path)?;
        let fns = BooleanFunction::parse_records(&text).map_err(|e| malformed(path, e))?;
        return Ok(MinionSlice::new(fns));
    }
    if let Some(e) = missing_file(spec) {
        return Err(e);
    }
    let parts: Vec<&str> = spec.split(':').collect();
    let num = |s: &str| -> Outcome<usize> { s.parse().map_err(|_| Failure::usage(format!("bad slice `{spec}`"))) };
    match parts.as_slice() {
        ["projections", n] => Ok(MinionSlice::projections(num(n)?)?),
        ["ptf", k, n] => {
            let k = num(k)?;
            Ok(MinionSlice::from_predicate(num(n)?, |f| {
                matches!(find_representation(f, k, Mode::Positive, margin), Ok(Some(_)))
            })?)
        }
        _ => Err(Failure::usage(format!("`{spec}` is neither a file nor a slice ({SLICE_SPEC_HELP})"))),
    }
}

/// `C(f) = {i}` for every dictator `f = xᵢ`.
pub fn projection_table(slice: &MinionSlice) -> Outcome<ChoiceTable> {
    let mut table = ChoiceTable::new(1);
    for f in slice.members() {
        let i = f
            .dictator_coordinate()
            .ok_or_else(|| Failure::param(format!("`{f}` is not a projection")))?;
        table.insert(f.clone(), vec![i])?;
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtins() {
        assert_eq!(load_function("maj:3", None).unwrap(), BooleanFunction::majority(3).unwrap());
        assert_eq!(load_function("parity", Some(4)).unwrap(), BooleanFunction::parity(4).unwrap());
        assert_eq!(load_function("dict:3:1", None).unwrap(), BooleanFunction::dictator(3, 1).unwrap());
        assert!(matches!(load_function("parity", None), Err(Failure::Usage(_))));
        assert!(matches!(load_function("nope:3", None), Err(Failure::Usage(_))));
        assert!(matches!(load_function("maj:30", None), Err(Failure::Cap(_))));
        assert!(matches!(load_function("missing/maj3.fn", None), Err(Failure::Io(_))));
    }

    #[test]
    fn xor_pairs() {
        let f = majority_of_xor_pairs(3).unwrap();
        assert_eq!(f.arity(), 6);
        // pairs (1,0), (1,0), (0,0): two odd pairs of three
        assert!(f.get(0b00_0101));
        assert!(!f.get(0b00_0011));
    }

    #[test]
    fn cnf_files() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("f.cnf");
        std::fs::write(&p, "c demo\np cnf 2 2\n1 2 2 0\n-1 -1 2 0\n").unwrap();
        let x = load_cnf(&p).unwrap();
        assert_eq!(x.universe(), 4);
        std::fs::write(&p, "p cnf 2 1\n1 2 0\n").unwrap();
        assert!(matches!(load_cnf(&p), Err(Failure::Malformed(_))));
    }
}
