use minionlab_core::fourier::{flip_probability, influence, noise_sensitivity, total_influence_summed, NoiseMethod};
use minionlab_core::{FourierExpansion, InfluenceMethod};

use crate::args::{Common, FourierCmd};
use crate::input::load_function;
use crate::{Outcome, Report, Table};

const AGREEMENT: f64 = 1e-9;
const SE_MULTIPLIER: f64 = 4.0;

pub fn run(cmd: &FourierCmd, c: &Common) -> Outcome<Report> {
    let p = c.bias()?;
    match cmd {
        FourierCmd::Expand(a) => {
            let f = load_function(&a.function, c.arity)?;
            let e = FourierExpansion::expand(&f, p);
            let mut t = Table::new(&["mask", "size", "coefficient"]);
            for (mask, &v) in e.coefficients().iter().enumerate() {
                t.push(vec![mask.into(), (mask.count_ones() as usize).into(), v.into()]);
            }
            let summary = format!(
                "fourier expand: arity={} p={} mean={} norm_sq={}",
                f.arity(),
                p.value(),
                e.mean(),
                e.norm_sq()
            );
            Ok(Report::new(t, summary))
        }
        FourierCmd::Influence(a) => {
            let f = load_function(&a.function, c.arity)?;
            let e = FourierExpansion::expand(&f, p);
            let mut t = Table::new(&["coordinate", "definition", "spectral", "flip", "flip_probability"]);
            let mut worst = 0.0f64;
            for i in 0..f.arity() {
                let def = influence(&f, p, i, InfluenceMethod::Definition)?;
                let spec = e.influence(i);
                let flip = influence(&f, p, i, InfluenceMethod::Flip)?;
                worst = worst.max((def - spec).abs()).max((def - flip).abs());
                t.push(vec![i.into(), def.into(), spec.into(), flip.into(), flip_probability(&f, p, i)?.into()]);
            }
            let total = e.total_influence();
            let summed = total_influence_summed(&f, p);
            worst = worst.max((total - summed).abs());
            let summary = format!(
                "fourier influence: arity={} p={} total={total} max_disagreement={worst:e}",
                f.arity(),
                p.value()
            );
            Ok(Report::new(t, summary).check(worst <= AGREEMENT, || {
                format!("influence paths disagree by {worst:e}")
            }))
        }
        FourierCmd::Noise { f, delta } => {
            let f = load_function(&f.function, c.arity)?;
            let exact = noise_sensitivity(&f, p, *delta, NoiseMethod::Spectral)?;
            let samples = c.trials_or(100_000);
            let mc = noise_sensitivity(
                &f,
                p,
                *delta,
                NoiseMethod::MonteCarlo {
                    samples,
                    seed: c.seed,
                },
            )?;
            let mut t = Table::new(&["method", "value", "std_error"]);
            t.push(vec!["spectral".into(), exact.value.into(), exact.std_error.into()]);
            t.push(vec!["monte_carlo".into(), mc.value.into(), mc.std_error.into()]);
            let gap = (mc.value - exact.value).abs();
            let allowed = SE_MULTIPLIER * mc.std_error + 1e-12;
            let summary = format!(
                "fourier noise: arity={} p={} delta={delta} spectral={} mc={}±{} samples={samples}",
                f.arity(),
                p.value(),
                exact.value,
                mc.value,
                mc.std_error
            );
            Ok(Report::new(t, summary).check(gap <= allowed, || {
                format!("sampled value is {gap:e} from the spectral value ({SE_MULTIPLIER} SE = {allowed:e})")
            }))
        }
    }
}
