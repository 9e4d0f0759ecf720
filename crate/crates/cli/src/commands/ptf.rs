use minionlab_core::ptf::{
    find_heavy_set, find_representation_with, is_heavy_set, mcdiarmid_exhaustive, mcdiarmid_experiment,
    min_max_weight, Backend, HeavySetOutcome,
};
use minionlab_core::{Mode, MultilinearPoly, Representation};

use super::join;
use crate::args::{Common, ModeArg, PtfCmd};
use crate::input::{load_function, load_representation};
use crate::output::Artifact;
use crate::{Failure, Outcome, Report, Table};

const MCDIARMID_SE_MULTIPLIER: f64 = 3.0;

fn coefficient_table(rep: &Representation) -> Table {
    let mut t = Table::new(&["mask", "size", "coefficient"]);
    for (mask, c) in rep.poly().terms() {
        t.push(vec![mask.into(), (mask.count_ones() as usize).into(), c.into()]);
    }
    t
}

pub fn run(cmd: &PtfCmd, c: &Common) -> Outcome<Report> {
    let k = c.degree.unwrap_or(1);
    let margin = c.margin();
    match cmd {
        PtfCmd::Represent { f, mode, exact, rep_out } => {
            let f = load_function(&f.function, c.arity)?;
            let mode = match mode {
                ModeArg::General => Mode::General,
                ModeArg::Positive => Mode::Positive,
            };
            let backend = if *exact { Backend::Exact } else { Backend::Float };
            match find_representation_with(&f, k, mode, margin, backend)? {
                Some(rep) => {
                    let ok = rep.sign_function()? == f;
                    let summary = format!(
                        "ptf represent: arity={} degree={k} mode={} representable t={} terms={} max_weight={}",
                        f.arity(),
                        mode.name(),
                        rep.threshold(),
                        rep.poly().num_terms(),
                        rep.poly().max_weight()
                    );
                    Ok(Report::new(coefficient_table(&rep), summary)
                        .check(ok, || "representation does not reproduce the function".into())
                        .with_extra(rep_out.clone(), Artifact::Text(rep.to_text())))
                }
                None => Ok(Report::new(
                    Table::new(&["mask", "size", "coefficient"]),
                    format!("ptf represent: arity={} degree={k} mode={} not representable", f.arity(), mode.name()),
                )),
            }
        }
        PtfCmd::Minmaxweight(a) => {
            let f = load_function(&a.function, c.arity)?;
            let w = min_max_weight(&f, k, margin)?;
            let mut t = Table::new(&["arity", "degree", "min_max_weight"]);
            t.push(vec![f.arity().into(), k.into(), w.into()]);
            let shown = w.map_or("none".to_string(), |w| w.to_string());
            Ok(Report::new(t, format!("ptf minmaxweight: arity={} degree={k} value={shown}", f.arity())))
        }
        PtfCmd::Heavyset(a) => {
            let f = load_function(&a.function, c.arity)?;
            let eps = c.epsilon.ok_or_else(|| Failure::usage("ptf heavyset needs --epsilon"))?;
            let outcome = find_heavy_set(&f, k, eps, margin)?;
            let bound = 4.0 * k as f64 / (eps * eps);
            let mut t = Table::new(&["outcome", "rounds", "set", "size", "size_bound", "witness_max_weight"]);
            match &outcome {
                HeavySetOutcome::Heavy { set, rounds } => {
                    let certified = is_heavy_set(&f, k, eps / 2.0, set, margin)?;
                    t.push(vec![
                        "heavy".into(),
                        (*rounds).into(),
                        join(set).into(),
                        set.len().into(),
                        bound.into(),
                        crate::Cell::Empty,
                    ]);
                    let summary = format!(
                        "ptf heavyset: arity={} degree={k} epsilon={eps} heavy set={{{}}} rounds={rounds} certified={certified}",
                        f.arity(),
                        join(set)
                    );
                    Ok(Report::new(t, summary)
                        .check(certified, || "set is not certified heavy".into())
                        .check(set.len() as f64 <= bound + 1.0, || format!("size {} above 4k/ε²", set.len())))
                }
                HeavySetOutcome::Regular { witness } => {
                    let w = witness.poly().max_weight();
                    t.push(vec!["regular".into(), crate::Cell::Empty, "".into(), 0usize.into(), bound.into(), w.into()]);
                    let summary = format!(
                        "ptf heavyset: arity={} degree={k} epsilon={eps} regular witness_max_weight={w}",
                        f.arity()
                    );
                    Ok(Report::new(t, summary).check(w < eps, || format!("averaged witness has weight {w} ≥ ε")))
                }
            }
        }
        PtfCmd::Mcdiarmid { rep, m, exhaustive } => {
            let rep = match rep {
                Some(path) => load_representation(path)?,
                None => Representation::new(
                    MultilinearPoly::uniform_linear(c.arity.unwrap_or(100))?,
                    0.5,
                    Mode::Positive,
                )?,
            };
            let ts = c.taus_or(&[0.01, 0.02, 0.05]);
            let report = if *exhaustive {
                mcdiarmid_exhaustive(&rep, *m, &ts)?
            } else {
                mcdiarmid_experiment(&rep, *m, c.trials_or(10_000), &ts, c.seed)?
            };
            let mut t = Table::new(&[
                "size",
                "t",
                "observed",
                "bound",
                "std_error",
                "worst_set",
                "mean",
                "empirical_mean",
                "worst_deviation",
            ]);
            for class in &report.classes {
                for row in &class.exceedance {
                    t.push(vec![
                        class.size.into(),
                        row.t.into(),
                        row.observed.into(),
                        row.bound.into(),
                        row.std_error.into(),
                        (row.worst_set as usize).into(),
                        class.mean.into(),
                        class.empirical_mean.into(),
                        class.worst_deviation.into(),
                    ]);
                }
            }
            let ok = report.respects_bound(MCDIARMID_SE_MULTIPLIER);
            let summary = format!(
                "ptf mcdiarmid: arity={} m={m} trials={} sum_c_sq={} within_bound={ok}",
                rep.arity(),
                report.trials,
                report.sum_c_sq
            );
            Ok(Report::new(t, summary).check(ok, || {
                format!("an exceedance frequency is above the bound plus {MCDIARMID_SE_MULTIPLIER} SE")
            }))
        }
    }
}
