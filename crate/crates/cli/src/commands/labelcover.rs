use minionlab_core::labelcover::{generate, GenParams, Variant};

use super::join;
use crate::args::{Common, LabelCoverCmd, LcVariantArg};
use crate::input::load_instance;
use crate::output::Artifact;
use crate::{Cell, Failure, Outcome, Report, Table};

pub fn run(cmd: &LabelCoverCmd, c: &Common) -> Outcome<Report> {
    match cmd {
        LabelCoverCmd::Gen {
            variant,
            left,
            right,
            sigma_l,
            sigma_r,
            planted,
        } => {
            let variant = match variant {
                LcVariantArg::Plain => Variant::Plain,
                LcVariantArg::Unique => Variant::Unique,
                LcVariantArg::TwoToOne => Variant::TwoToOne,
                LcVariantArg::Rich => Variant::Rich,
            };
            let inst = generate(&GenParams {
                variant,
                left: *left,
                right: *right,
                sigma_l: *sigma_l,
                sigma_r: *sigma_r,
                degree: c.degree.unwrap_or(3),
                planted: *planted,
                seed: c.seed,
            })?;
            let summary = format!(
                "labelcover gen: variant={variant:?} L={} R={} sigmaL={} sigmaR={} edges={}",
                inst.left(),
                inst.right(),
                inst.sigma_l(),
                inst.sigma_r(),
                inst.num_edges()
            );
            Ok(Report::new(Artifact::Text(inst.to_string()), summary))
        }
        LabelCoverCmd::Eval {
            instance,
            completeness,
            soundness,
        } => {
            let inst = load_instance(instance)?;
            if soundness > completeness {
                return Err(Failure::param("soundness must not exceed completeness"));
            }
            let (opt, best) = inst.brute_force_optimum()?;
            let verdict = inst.gap_classify(*completeness, *soundness)?;
            let propagation = if inst.is_unique() {
                Some(inst.unique_propagation()?)
            } else {
                None
            };
            let mut t = Table::new(&["edges", "optimum", "verdict", "left_labels", "right_labels", "propagation"]);
            t.push(vec![
                inst.num_edges().into(),
                opt.into(),
                verdict.to_string().into(),
                join(&best.left).into(),
                join(&best.right).into(),
                propagation
                    .as_ref()
                    .map_or(Cell::Empty, |p| if p.is_some() { "satisfiable" } else { "unsatisfiable" }.into()),
            ]);
            let consistent = match &propagation {
                Some(Some(s)) => inst.satisfied_fraction(s)? == 1.0 && opt == 1.0,
                Some(None) => opt < 1.0,
                None => true,
            };
            let summary = format!("labelcover eval: edges={} optimum={opt} verdict={verdict}", inst.num_edges());
            Ok(Report::new(t, summary).check(consistent, || "propagation disagrees with brute force".into()))
        }
        LabelCoverCmd::Rich {
            instance,
            vertex,
            significance,
        } => {
            let inst = load_instance(instance)?;
            let r = inst.richness_statistic(*vertex)?;
            let expected = r.samples as f64 / r.table.len() as f64;
            let mut t = Table::new(&["table", "count", "expected"]);
            for (image, count) in &r.table {
                t.push(vec![join(image).into(), (*count).into(), expected.into()]);
            }
            let (stat, p) = r.test.map_or((f64::NAN, f64::NAN), |x| (x.statistic, x.p_value));
            let rejected = r.test.is_some_and(|x| x.rejects_at(*significance));
            let summary = format!(
                "labelcover rich: vertex={vertex} samples={} chi2={stat} p_value={p} degenerate={}",
                r.samples, r.degenerate
            );
            Ok(Report::new(t, summary).check(!rejected, || format!("uniformity rejected at {significance}")))
        }
    }
}
