use minionlab_core::pullback::{
    density_ratio_audit, gluing_bound_audit, influence_preservation_exact, influence_preservation_experiment,
    MAX_AUDIT_M,
};
use minionlab_core::{Error, PullbackMeasure};

use crate::args::{Common, PullbackCmd};
use crate::input::load_function;
use crate::{Failure, Outcome, Report, Table};

const RATIO_SLACK: f64 = 1e-12;
const GLUING_SLACK: f64 = 1e-9;

pub fn run(cmd: &PullbackCmd, c: &Common) -> Outcome<Report> {
    let p = c.bias()?;
    match cmd {
        PullbackCmd::Mass { m } => {
            if *m > MAX_AUDIT_M {
                return Err(Error::ArityCap {
                    arity: *m,
                    cap: MAX_AUDIT_M,
                }
                .into());
            }
            let measure = PullbackMeasure::new(*m, p)?;
            let mut t = Table::new(&["point", "weight", "pullback_mass", "product_mass", "ratio"]);
            for z in 0u64..1 << (2 * m) {
                let mass = measure.mass(z)?;
                let product = measure.product_mass(z);
                t.push(vec![z.into(), (z.count_ones() as usize).into(), mass.into(), product.into(), (mass / product).into()]);
            }
            let total = measure.total_mass();
            Ok(Report::new(t, format!("pullback mass: m={m} p={} total={total}", p.value()))
                .check((total - 1.0).abs() <= 1e-9, || format!("total mass {total}")))
        }
        PullbackCmd::Audit { m, function } => match (m, function) {
            (Some(m), None) => {
                let mut t = Table::new(&["m", "p", "min_ratio", "argmin", "max_ratio", "argmax"]);
                let mut min = f64::INFINITY;
                for k in 1..=*m {
                    let a = density_ratio_audit(k, p)?;
                    min = min.min(a.min_ratio);
                    t.push(vec![
                        k.into(),
                        p.value().into(),
                        a.min_ratio.into(),
                        a.argmin.into(),
                        a.max_ratio.into(),
                        a.argmax.into(),
                    ]);
                }
                Ok(Report::new(t, format!("pullback audit: m=1..={m} p={} min_ratio={min}", p.value()))
                    .check(min >= 1.0 - RATIO_SLACK, || format!("density ratio {min} below 1")))
            }
            (None, Some(spec)) => {
                let f = load_function(spec, c.arity)?;
                let (lhs, rhs) = gluing_bound_audit(&f, p)?;
                let mut t = Table::new(&["arity", "p", "lhs", "rhs", "slack"]);
                t.push(vec![f.arity().into(), p.value().into(), lhs.into(), rhs.into(), (lhs - rhs).into()]);
                Ok(Report::new(
                    t,
                    format!("pullback audit: gluing arity={} p={} lhs={lhs} rhs={rhs}", f.arity(), p.value()),
                )
                .check(lhs >= rhs - GLUING_SLACK, || format!("gluing inequality violated by {}", rhs - lhs)))
            }
            _ => Err(Failure::usage("pullback audit takes exactly one of --m and --fn")),
        },
        PullbackCmd::Preserve {
            f,
            coordinate,
            exhaustive,
            exceedance_out,
        } => {
            let f = load_function(&f.function, c.arity)?;
            let taus = c.taus_or(&[0.01]);
            let report = if *exhaustive {
                influence_preservation_exact(&f, *coordinate, p, &taus)?
            } else {
                influence_preservation_experiment(&f, *coordinate, p, c.trials_or(2000), &taus, c.seed)?
            };
            let mut t = Table::new(&["trial", "target_coordinate", "influence"]);
            for (k, &(target, inf)) in report.trials.iter().enumerate() {
                t.push(vec![k.into(), target.into(), inf.into()]);
            }
            let mut ex = Table::new(&["tau", "probability"]);
            for &(tau, q) in &report.exceedance {
                ex.push(vec![tau.into(), q.into()]);
            }
            let rates: Vec<String> = report.exceedance.iter().map(|(tau, q)| format!("P[>={tau}]={q}")).collect();
            let summary = format!(
                "pullback preserve: arity={} i={} p={} trials={} source_influence={} total_per_m={} mean={} {}",
                f.arity(),
                coordinate,
                p.value(),
                report.trials.len(),
                report.source_influence,
                report.total_influence_per_m,
                report.mean_influence(),
                rates.join(" ")
            );
            Ok(Report::new(t, summary).with_extra(exceedance_out.clone(), ex))
        }
    }
}
