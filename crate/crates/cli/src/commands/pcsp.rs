use minionlab_core::pcsp::{
    find_choice_table, find_homomorphism, has_symmetric_of_arity, heavy_set_choice_table, verify_choice_condition,
    ChoiceVariant, ClosurePolicy, MinionSlice,
};
use minionlab_core::ChoiceTable;

use super::join;
use crate::args::{Common, PcspCmd, PolicyArg, VariantArg};
use crate::cache;
use crate::input::{load_choice_table, load_cnf, load_slice, load_structure, load_template, projection_table};
use crate::output::Artifact;
use crate::{Failure, Outcome, Report, Table};

pub fn run(cmd: &PcspCmd, c: &Common) -> Outcome<Report> {
    match cmd {
        PcspCmd::Enum { template } => {
            let n = c.arity.ok_or_else(|| Failure::usage("pcsp enum needs --arity"))?;
            let (t, text) = load_template(template)?;
            let (polys, cached) = cache::polymorphisms(&t, &text, n)?;
            let mut table = Table::new(&["index", "table", "projection", "symmetric", "boolean"]);
            for (k, p) in polys.iter().enumerate() {
                table.push(vec![
                    k.into(),
                    join(p.table()).into(),
                    p.projection_coordinate().into(),
                    p.is_symmetric().into(),
                    p.to_boolean().map(|f| f.to_hex()).into(),
                ]);
            }
            let projections = polys.iter().filter(|p| p.projection_coordinate().is_some()).count();
            let summary = format!(
                "pcsp enum: arity={n} count={} projections={projections} symmetric={} cached={cached}",
                polys.len(),
                has_symmetric_of_arity(&polys, n)
            );
            Ok(Report::new(table, summary))
        }
        PcspCmd::CheckChoice {
            slice,
            choice,
            variant,
            bound,
            policy,
            table_out,
        } => {
            let margin = c.margin();
            let slice = load_slice(slice, margin)?;
            let policy = match policy {
                PolicyArg::Strict => ClosurePolicy::Strict,
                PolicyArg::Within => ClosurePolicy::WithinSlice,
            };
            let table = choice_table(&slice, choice, *variant, *bound, policy, c)?;
            let Some(table) = table else {
                let t = Table::new(&["member", "function", "choice", "estimate", "std_error", "samples", "passes"]);
                return Ok(Report::new(t, format!("pcsp check-choice: members={} no table exists", slice.len()))
                    .check(false, || "search found no choice table".into()));
            };
            let m = bound.unwrap_or(table.bound());
            let v = match variant {
                VariantArg::Single => ChoiceVariant::Single,
                VariantArg::Multiple => ChoiceVariant::Multiple { bound: m },
                VariantArg::Layered => ChoiceVariant::Layered { bound: m },
                VariantArg::Random => ChoiceVariant::RandomTwoToOne {
                    bound: m,
                    tau: c.tau.first().copied().unwrap_or(0.5),
                    trials: c.trials_or(1000),
                    seed: c.seed,
                },
            };
            let verdict = verify_choice_condition(&slice, &table, v, policy)?;
            let mut t = Table::new(&["member", "function", "choice", "estimate", "std_error", "samples", "passes"]);
            for (i, f) in slice.members().iter().enumerate() {
                let est = verdict.estimates.iter().find(|e| e.member == i);
                t.push(vec![
                    i.into(),
                    f.to_string().into(),
                    table.get(f).map(join).into(),
                    est.map(|e| e.estimate.value).into(),
                    est.map(|e| e.estimate.std_error).into(),
                    est.map(|e| e.samples).into(),
                    est.map(|e| e.passes).into(),
                ]);
            }
            let witness = verdict.counterexample.as_ref().map(|ce| {
                let chain: Vec<String> = ce.chain.iter().map(ToString::to_string).collect();
                let maps: Vec<String> = ce.maps.iter().map(|m| format!("[{}]", join(m.image()))).collect();
                format!(" counterexample: {} via {}", chain.join(" -> "), maps.join(" "))
            });
            let summary = format!(
                "pcsp check-choice: members={} variant={variant:?} bound={m} holds={} checked={}{}",
                slice.len(),
                verdict.holds,
                verdict.checked,
                witness.clone().unwrap_or_default()
            );
            Ok(Report::new(t, summary)
                .check(verdict.holds, || "choice condition fails".into())
                .with_extra(table_out.clone(), Artifact::Text(table.to_string())))
        }
        PcspCmd::Solve { template, instance, cnf } => {
            let (t, _) = load_template(template)?;
            let x = match (instance, cnf) {
                (Some(p), None) => load_structure(p)?,
                (None, Some(p)) => load_cnf(p)?,
                _ => return Err(Failure::usage("pcsp solve takes exactly one of --instance and --cnf")),
            };
            let to_a = find_homomorphism(&x, t.a())?;
            let to_b = if to_a.is_some() {
                // composing with the witness gives X → B
                to_a.as_ref().map(|phi| phi.iter().map(|&v| t.witness()[v as usize]).collect::<Vec<u32>>())
            } else {
                find_homomorphism(&x, t.b())?
            };
            let answer = match (&to_a, &to_b) {
                (Some(_), _) => "YES",
                (None, None) => "NO",
                (None, Some(_)) => "OUTSIDE_PROMISE",
            };
            let mut table = Table::new(&["target", "exists", "homomorphism"]);
            table.push(vec!["A".into(), to_a.is_some().into(), to_a.as_deref().map(join).into()]);
            table.push(vec!["B".into(), to_b.is_some().into(), to_b.as_deref().map(join).into()]);
            let summary = format!(
                "pcsp solve: universe={} tuples={} answer={answer}",
                x.universe(),
                x.num_tuples()
            );
            Ok(Report::new(table, summary))
        }
    }
}

fn choice_table(
    slice: &MinionSlice,
    choice: &str,
    variant: VariantArg,
    bound: Option<usize>,
    policy: ClosurePolicy,
    c: &Common,
) -> Outcome<Option<ChoiceTable>> {
    match choice {
        "projection" => projection_table(slice).map(Some),
        "heavy" => {
            let eps = c.epsilon.ok_or_else(|| Failure::usage("a heavy-set table needs --epsilon"))?;
            Ok(Some(heavy_set_choice_table(slice, c.degree.unwrap_or(1), eps, c.margin())?))
        }
        "search" => {
            let v = match variant {
                VariantArg::Single => ChoiceVariant::Single,
                VariantArg::Multiple => ChoiceVariant::Multiple {
                    bound: bound.unwrap_or(2),
                },
                _ => return Err(Failure::usage("table search supports the single and multiple variants")),
            };
            Ok(find_choice_table(slice, v, policy)?)
        }
        path => {
            let p = std::path::Path::new(path);
            if !p.is_file() {
                return Err(Failure::usage(format!(
                    "`{path}` is neither a file nor one of projection, heavy, search"
                )));
            }
            load_choice_table(p).map(Some)
        }
    }
}

