use minionlab_core::shapley::{shapley_exact, shapley_influence_integral, shapley_mc};

use crate::args::{Common, ShapleyArgs};
use crate::input::load_function;
use crate::{Outcome, Report, Table};

const SUM_TOLERANCE: f64 = 1e-9;
const INTEGRAL_TOLERANCE: f64 = 1e-6;
const SE_MULTIPLIER: f64 = 4.0;

pub fn run(a: &ShapleyArgs, c: &Common) -> Outcome<Report> {
    let f = load_function(&a.f.function, c.arity)?;
    let exact = shapley_exact(&f)?;
    let trials = c.trials_or(10_000);
    let mc = shapley_mc(&f, trials, c.seed)?;
    let se = mc.std_errors().unwrap_or_default();
    let mut t = Table::new(&["coordinate", "phi_exact", "phi_mc", "phi_mc_std_error", "phi_integral"]);
    let mut mc_ok = true;
    let mut integral_gap = 0.0f64;
    for i in 0..f.arity() {
        let integral = shapley_influence_integral(&f, i, a.points)?;
        integral_gap = integral_gap.max((integral - exact.value(i)).abs());
        let s = se.get(i).copied().unwrap_or(0.0);
        mc_ok &= (mc.value(i) - exact.value(i)).abs() <= SE_MULTIPLIER * s + 1e-12;
        t.push(vec![i.into(), exact.value(i).into(), mc.value(i).into(), s.into(), integral.into()]);
    }
    let sum = exact.sum();
    let sum_ok = exact.is_degenerate() || (sum - 1.0).abs() <= SUM_TOLERANCE;
    let summary = format!(
        "shapley: arity={} sum={sum} max={} degenerate={} trials={trials} integral_gap={integral_gap:e}",
        f.arity(),
        exact.max(),
        exact.is_degenerate()
    );
    Ok(Report::new(t, summary)
        .check(sum_ok, || format!("values sum to {sum}"))
        .check(mc_ok, || format!("a sampled value is more than {SE_MULTIPLIER} SE from the exact one"))
        .check(integral_gap <= INTEGRAL_TOLERANCE, || {
            format!("influence integral is {integral_gap:e} from the exact value")
        }))
}
