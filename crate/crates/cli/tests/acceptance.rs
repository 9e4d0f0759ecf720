//! Acceptance suite: one line per criterion, nonzero exit if any fails.

use std::collections::HashSet;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use minionlab_cli::input::majority_of_xor_pairs;
use minionlab_core::fourier::{flip_probability, influence, total_influence_summed};
use minionlab_core::labelcover::{generate, GenParams, Variant};
use minionlab_core::pcsp::{
    enumerate_polymorphisms, heavy_set_choice_table, layered_bound, verify_choice_condition, ChoiceVariant,
    ClosurePolicy, MinionSlice, Polymorphism,
};
use minionlab_core::ptf::{
    find_heavy_set, find_representation, is_heavy_set, mcdiarmid_experiment, min_max_weight, HeavySetOutcome,
};
use minionlab_core::pullback::{
    density_ratio_audit, gluing_bound_audit, influence_preservation_experiment, pullback_expectation,
    ExpectationMode,
};
use minionlab_core::rng::{seeded, trial_rng};
use minionlab_core::shapley::{shapley_exact, shapley_influence_integral, shapley_mc};
use minionlab_core::{
    BiasParam, BooleanFunction, ChoiceTable, FourierExpansion, InfluenceMethod, LabelCoverInstance, MinorMap, Mode,
    MultilinearPoly, PullbackMeasure, Representation, Template,
};
use rand::Rng;
use rayon::prelude::*;

type Check = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        let ok: bool = $cond;
        if !ok {
            return Err(format!($($msg)+));
        }
    };
}

fn bias(p: f64) -> BiasParam {
    BiasParam::new(p).unwrap()
}

const P_GRID: [f64; 4] = [0.1, 1.0 / 3.0, 0.5, 0.9];

fn point_mass(x: usize, n: usize, p: f64) -> f64 {
    let k = x.count_ones() as i32;
    p.powi(k) * (1.0 - p).powi(n as i32 - k)
}

fn expect(f: &BooleanFunction, p: f64) -> f64 {
    (0..f.len()).filter(|&x| f.get(x)).map(|x| point_mass(x, f.arity(), p)).sum()
}

/// 1000 random functions of arity 1..=12.
fn corpus() -> Vec<BooleanFunction> {
    let mut rng = seeded(2024);
    (0..1000)
        .map(|_| {
            let n = rng.random_range(1..=12);
            BooleanFunction::random(n, &mut rng).unwrap()
        })
        .collect()
}

fn spectral_identities() -> Check {
    let fns = corpus();
    let mut rng = seeded(7);
    let partners: Vec<BooleanFunction> = fns.iter().map(|f| BooleanFunction::random(f.arity(), &mut rng).unwrap()).collect();
    let worst = fns
        .par_iter()
        .zip(&partners)
        .map(|(f, g)| {
            let mut worst = 0.0f64;
            for p in P_GRID {
                let ef = FourierExpansion::expand(f, bias(p));
                let eg = FourierExpansion::expand(g, bias(p));
                let mean = expect(f, p);
                let joint: f64 = (0..f.len()).filter(|&x| f.get(x) && g.get(x)).map(|x| point_mass(x, f.arity(), p)).sum();
                worst = worst
                    .max((ef.norm_sq() - mean).abs())
                    .max((ef.coefficient(0) - mean).abs())
                    .max((ef.inner(&eg) - joint).abs());
            }
            worst
        })
        .reduce(|| 0.0, f64::max);
    ensure!(worst <= 1e-9, "max deviation {worst:e}");
    Ok(format!("4000 expansions, max deviation {worst:.1e}"))
}

fn influence_equivalences() -> Check {
    let fns = corpus();
    let worst = fns
        .par_iter()
        .map(|f| {
            let mut worst = 0.0f64;
            for p in P_GRID {
                let e = FourierExpansion::expand(f, bias(p));
                for i in 0..f.arity() {
                    let d = influence(f, bias(p), i, InfluenceMethod::Definition).unwrap();
                    let s = e.influence(i);
                    let fl = influence(f, bias(p), i, InfluenceMethod::Flip).unwrap();
                    worst = worst.max((d - s).abs()).max((d - fl).abs()).max((s - fl).abs());
                }
            }
            worst
        })
        .reduce(|| 0.0, f64::max);
    ensure!(worst <= 1e-9, "paths disagree by {worst:e}");
    // 0 if x₂ = x₃ = x₄, else x₁ (coordinates 0..4 here)
    let f = BooleanFunction::from_fn(4, |x| {
        let rest = (x >> 1) & 0b111;
        rest != 0 && rest != 0b111 && x & 1 == 1
    })
    .unwrap();
    let half = BiasParam::UNIFORM;
    let flips: Vec<f64> = (0..4).map(|i| flip_probability(&f, half, i).unwrap()).collect();
    ensure!(flips == [0.75, 0.25, 0.25, 0.25], "flip probabilities {flips:?}");
    let g = f.apply_minor(&MinorMap::identify(4, &[1, 2, 3]).unwrap()).unwrap();
    let collapsed = influence(&g, half, 0, InfluenceMethod::Flip).unwrap();
    ensure!(collapsed == 0.0, "identified minor keeps influence {collapsed}");
    Ok(format!("max disagreement {worst:.1e}; example flips {flips:?}, collapsed influence 0"))
}

fn total_influence_formula() -> Check {
    let fns = corpus();
    let worst = fns
        .par_iter()
        .map(|f| {
            P_GRID
                .iter()
                .map(|&p| (FourierExpansion::expand(f, bias(p)).total_influence() - total_influence_summed(f, bias(p))).abs())
                .fold(0.0, f64::max)
        })
        .reduce(|| 0.0, f64::max);
    ensure!(worst <= 1e-9, "spectral and summed differ by {worst:e}");
    for n in 1..=12 {
        let par = BooleanFunction::parity(n).unwrap();
        let summed = total_influence_summed(&par, BiasParam::UNIFORM);
        ensure!(summed == n as f64 / 4.0, "parity_{n} total influence {summed}");
        let spectral = FourierExpansion::expand(&par, BiasParam::UNIFORM).total_influence();
        ensure!((spectral - n as f64 / 4.0).abs() <= 1e-12, "parity_{n} spectral total {spectral}");
    }
    Ok(format!("max disagreement {worst:.1e}; parity_n = n/4 for n ≤ 12"))
}

/// Every image array `[2m] → [m]` hitting each target exactly twice.
fn two_to_one_images(m: usize) -> Vec<Vec<usize>> {
    MinorMap::all(2 * m, m)
        .map(|map| map.image().to_vec())
        .filter(|img| (0..m).all(|t| img.iter().filter(|&&s| s == t).count() == 2))
        .collect()
}

fn pullback_exactness() -> Check {
    let mut worst = 0.0f64;
    for m in 1..=4 {
        let images = two_to_one_images(m);
        for p in [1.0 / 3.0, 0.5, 0.9] {
            let mut dist = vec![0.0; 1 << (2 * m)];
            for img in &images {
                for x in 0..1usize << m {
                    let z = img.iter().enumerate().fold(0, |z, (i, &t)| z | ((x >> t) & 1) << i);
                    dist[z] += point_mass(x, m, p) / images.len() as f64;
                }
            }
            let measure = PullbackMeasure::new(m, bias(p)).unwrap();
            for (z, &d) in dist.iter().enumerate() {
                worst = worst.max((measure.mass(z as u64).unwrap() - d).abs());
            }
        }
    }
    ensure!(worst <= 1e-12, "closed form off by {worst:e}");
    let mut min_ratio = f64::INFINITY;
    for m in 1..=6 {
        for p in P_GRID.iter().chain(&[0.34, 0.66]) {
            let measure = PullbackMeasure::new(m, bias(*p)).unwrap();
            let total: f64 = (0u64..1 << (2 * m)).map(|z| measure.mass(z).unwrap()).sum();
            ensure!((total - 1.0).abs() <= 1e-9, "total mass {total} at m={m} p={p}");
            ensure!((measure.total_mass() - 1.0).abs() <= 1e-9, "reported total mass at m={m} p={p}");
            let audit = density_ratio_audit(m, bias(*p)).unwrap();
            min_ratio = min_ratio.min(audit.min_ratio);
            ensure!(audit.min_ratio >= 1.0, "density ratio {} at m={m} p={p}", audit.min_ratio);
        }
    }
    Ok(format!("max closed-form error {worst:.1e}; min density ratio {min_ratio:.6}"))
}

fn gluing_inequality() -> Check {
    let slack = 1e-9;
    let mut checked = 0usize;
    for p in [1.0 / 3.0, 0.5] {
        let bad = (0u32..1 << 16)
            .into_par_iter()
            .filter(|&code| {
                let f = BooleanFunction::from_fn(4, |x| (code >> x) & 1 == 1).unwrap();
                let (lhs, rhs) = gluing_bound_audit(&f, bias(p)).unwrap();
                lhs < rhs - slack
            })
            .count();
        ensure!(bad == 0, "{bad} arity-4 violations at p={p}");
        checked += 1 << 16;
    }
    for p in [0.34, 0.5, 0.66] {
        let bad = (0u64..10_000)
            .into_par_iter()
            .filter(|&k| {
                let f = BooleanFunction::random(10, &mut trial_rng(55, k)).unwrap();
                let (lhs, rhs) = gluing_bound_audit(&f, bias(p)).unwrap();
                lhs < rhs - slack
            })
            .count();
        ensure!(bad == 0, "{bad} arity-10 violations at p={p}");
        checked += 10_000;
    }
    Ok(format!("{checked} function/bias pairs, no violations"))
}

fn pullback_expectation_check() -> Check {
    let mut worst_se = 0.0f64;
    for m in 1..=6 {
        for p in [1.0 / 3.0, 0.5, 0.9] {
            let par = BooleanFunction::parity(2 * m).unwrap();
            let e = pullback_expectation(&par, bias(p), ExpectationMode::Exact).unwrap().value;
            ensure!(e == 0.0, "parity expectation {e} at m={m} p={p}");
            let dict = BooleanFunction::dictator(2 * m, 2 * m - 1).unwrap();
            let e = pullback_expectation(&dict, bias(p), ExpectationMode::Exact).unwrap().value;
            ensure!((e - p).abs() <= 1e-12, "dictator expectation {e} at m={m} p={p}");
            let random = BooleanFunction::random(2 * m, &mut trial_rng(31, (m * 10) as u64)).unwrap();
            let thr = BooleanFunction::threshold(2 * m, m).unwrap();
            for (k, h) in [par, dict, random, thr].iter().enumerate() {
                let exact = pullback_expectation(h, bias(p), ExpectationMode::Exact).unwrap().value;
                let mc = pullback_expectation(
                    h,
                    bias(p),
                    ExpectationMode::MonteCarlo {
                        samples: 100_000,
                        seed: (100 * m + k) as u64,
                    },
                )
                .unwrap();
                let gap = (mc.value - exact).abs();
                if mc.std_error == 0.0 {
                    ensure!(gap == 0.0, "sampled {} vs exact {exact} with zero SE", mc.value);
                } else {
                    worst_se = worst_se.max(gap / mc.std_error);
                    ensure!(gap <= 3.0 * mc.std_error, "sampled {} vs exact {exact} (SE {})", mc.value, mc.std_error);
                }
            }
        }
    }
    Ok(format!("m ≤ 6 on three biases; worst sampled gap {worst_se:.2} SE"))
}

fn pilot_threshold() -> Result<f64, String> {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data/pilot_influence_preservation.csv");
    let text = std::fs::read_to_string(&path).map_err(|e| format!("pilot file: {e}"))?;
    text.lines()
        .skip(1)
        .filter_map(|l| l.split_once(','))
        .filter_map(|(t, q)| Some((t.parse::<f64>().ok()?, q.parse::<f64>().ok()?)))
        .find(|(t, _)| (t - 0.01).abs() < 1e-12)
        .map(|(_, q)| q)
        .ok_or_else(|| "pilot file has no τ = 0.01 row".into())
}

fn influence_preservation() -> Check {
    let half = BiasParam::UNIFORM;
    let dict = BooleanFunction::dictator(20, 0).unwrap();
    let r = influence_preservation_experiment(&dict, 0, half, 2000, &[0.25], 0).unwrap();
    ensure!(r.trials.iter().all(|t| t.1 == 0.25), "a dictator minor lost influence");
    ensure!(r.exceedance[0].1 == 1.0, "dictator exceedance {}", r.exceedance[0].1);
    let f = majority_of_xor_pairs(10).unwrap();
    let min_inf = (0..20).map(|i| influence(&f, half, i, InfluenceMethod::Flip).unwrap()).fold(1.0, f64::min);
    let total = total_influence_summed(&f, half);
    ensure!(min_inf >= 0.05, "per-coordinate influence {min_inf}");
    ensure!(total <= 20.0 / 4.0, "total influence {total}");
    let threshold = 0.1;
    let pilot = pilot_threshold()?;
    ensure!(pilot > threshold, "pilot exceedance {pilot} does not support the threshold");
    let r = influence_preservation_experiment(&f, 0, half, 2000, &[0.01], 0).unwrap();
    let q = r.exceedance[0].1;
    ensure!(q > threshold, "Pr[Inf ≥ 0.01] = {q}");
    Ok(format!("dictator keeps 1/4 in 2000/2000; majxor:10 min Inf {min_inf:.4}, I = {total:.3}, Pr[Inf ≥ 0.01] = {q} (pilot {pilot})"))
}

/// Upward closure of a few random points, resampled until non-constant.
fn random_monotone(rng: &mut impl Rng) -> BooleanFunction {
    loop {
        let n = rng.random_range(1..=10);
        let gens: Vec<usize> = (0..rng.random_range(1..=4)).map(|_| rng.random_range(0..1usize << n)).collect();
        let f = BooleanFunction::from_fn(n, |x| gens.iter().any(|&g| x & g == g)).unwrap();
        if !f.is_constant() {
            return f;
        }
    }
}

/// `n!·Φ_i` by walking every permutation.
fn shapley_by_permutations(f: &BooleanFunction) -> Vec<u128> {
    fn walk(f: &BooleanFunction, perm: &mut Vec<usize>, used: usize, acc: &mut [u128]) {
        let n = f.arity();
        if perm.len() == n {
            let mut s = 0usize;
            for &i in perm.iter() {
                if !f.get(s) && f.get(s | 1 << i) {
                    acc[i] += 1;
                }
                s |= 1 << i;
            }
            return;
        }
        for i in 0..n {
            if used & (1 << i) == 0 {
                perm.push(i);
                walk(f, perm, used | 1 << i, acc);
                perm.pop();
            }
        }
    }
    let mut acc = vec![0; f.arity()];
    walk(f, &mut Vec::new(), 0, &mut acc);
    acc
}

fn factorial(n: usize) -> u128 {
    (1..=n as u128).product()
}

fn shapley_suite() -> Check {
    let mut rng = seeded(8);
    let fns: Vec<BooleanFunction> = (0..500).map(|_| random_monotone(&mut rng)).collect();
    let results: Vec<Result<(f64, usize), String>> = fns
        .par_iter()
        .enumerate()
        .map(|(k, f)| {
            let exact = shapley_exact(f).map_err(|e| e.to_string())?;
            ensure!((exact.sum() - 1.0).abs() <= 1e-9, "function {k}: sum {}", exact.sum());
            let mc = shapley_mc(f, 4000, k as u64).map_err(|e| e.to_string())?;
            let se = mc.std_errors().unwrap();
            let mut worst = 0.0f64;
            for i in 0..f.arity() {
                let gap = (mc.value(i) - exact.value(i)).abs();
                if se[i] > 0.0 {
                    worst = worst.max(gap / se[i]);
                }
                ensure!(gap <= 4.0 * se[i] + 1e-12, "function {k} coordinate {i}: MC {} vs {}", mc.value(i), exact.value(i));
                let integral = shapley_influence_integral(f, i, 64).map_err(|e| e.to_string())?;
                ensure!((integral - exact.value(i)).abs() <= 1e-6, "function {k} coordinate {i}: integral {integral}");
            }
            let mut oracle_checked = 0;
            if f.arity() <= 7 {
                let brute = shapley_by_permutations(f);
                let nf = factorial(f.arity());
                for i in 0..f.arity() {
                    ensure!(
                        (brute[i] as f64 / nf as f64 - exact.value(i)).abs() <= 1e-12,
                        "function {k} coordinate {i}: permutation oracle disagrees"
                    );
                }
                oracle_checked = 1;
            }
            Ok((worst, oracle_checked))
        })
        .collect();
    let mut worst = 0.0f64;
    let mut oracle = 0;
    for r in results {
        let (w, o) = r?;
        worst = worst.max(w);
        oracle += o;
    }
    let g = BooleanFunction::from_fn(3, |x| x & 1 == 1 || x & 0b110 == 0b110).unwrap();
    let phi = shapley_exact(&g).unwrap();
    ensure!(phi.numerators() == Some(&[4u128, 1, 1][..]), "numerators {:?}", phi.numerators());
    ensure!(phi.values() == [2.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0], "values {:?}", phi.values());
    Ok(format!(
        "500 functions, worst MC gap {worst:.2} SE, {oracle} checked by permutations; Φ(x₁∨(x₂∧x₃)) = (4,1,1)/3!"
    ))
}

fn ptf_oracle() -> Check {
    let margin = 1e-6;
    let maj3 = BooleanFunction::majority(3).unwrap();
    let rep = find_representation(&maj3, 1, Mode::Positive, margin).unwrap();
    ensure!(rep.is_some_and(|r| r.sign_function().unwrap() == maj3), "MAJ₃ not represented at k=1");
    let par2 = BooleanFunction::parity(2).unwrap();
    ensure!(find_representation(&par2, 1, Mode::General, margin).unwrap().is_none(), "parity₂ represented at k=1");
    let rep = find_representation(&par2, 2, Mode::General, margin).unwrap();
    ensure!(rep.is_some_and(|r| r.sign_function().unwrap() == par2), "parity₂ not represented at k=2");
    for k in 1..=2 {
        ensure!(find_representation(&par2, k, Mode::Positive, margin).unwrap().is_none(), "parity₂ positive at k={k}");
    }
    let dict = BooleanFunction::dictator(3, 0).unwrap();
    ensure!(is_heavy_set(&dict, 1, 0.5 - margin, &[0], margin).unwrap(), "dictator's {{0}} not heavy");
    let mut worst = 0.0f64;
    for n in [3, 5, 7, 9] {
        let w = min_max_weight(&BooleanFunction::majority(n).unwrap(), 1, margin).unwrap().unwrap();
        worst = worst.max((w - 1.0 / n as f64).abs());
        ensure!((w - 1.0 / n as f64).abs() <= 10.0 * margin, "min max weight of MAJ_{n} is {w}");
    }
    let mut rng = seeded(9);
    let mut heavy = 0;
    let mut largest = 0;
    for k in 0..50 {
        let n = rng.random_range(2..=8);
        let w: Vec<u32> = (0..n).map(|_| rng.random_range(1..=6)).collect();
        let t = rng.random_range(1..=w.iter().sum::<u32>());
        let f = BooleanFunction::from_fn(n, |x| (0..n).filter(|&i| x >> i & 1 == 1).map(|i| w[i]).sum::<u32>() >= t).unwrap();
        let eps = [0.5, 0.75, 1.0][k % 3];
        match find_heavy_set(&f, 1, eps, margin).map_err(|e| format!("function {k}: {e}"))? {
            HeavySetOutcome::Heavy { set, .. } => {
                ensure!(set.len() as f64 <= 4.0 / (eps * eps), "function {k}: heavy set of size {}", set.len());
                heavy += 1;
                largest = largest.max(set.len());
            }
            HeavySetOutcome::Regular { witness } => {
                ensure!(witness.poly().max_weight() < eps, "function {k}: regular witness too heavy");
            }
        }
    }
    Ok(format!("min-max-weight error {worst:.1e}; {heavy}/50 heavy, largest set {largest}"))
}

fn mcdiarmid() -> Check {
    let rep = Representation::new(MultilinearPoly::uniform_linear(100).unwrap(), 0.5, Mode::Positive).unwrap();
    let r = mcdiarmid_experiment(&rep, 5, 10_000, &[0.01, 0.02, 0.05], 0).unwrap();
    ensure!(r.respects_bound(3.0), "an exceedance frequency is above bound + 3 SE");
    let worst = r
        .classes
        .iter()
        .flat_map(|c| &c.exceedance)
        .map(|row| row.observed - row.bound)
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(format!("Σc² = {:.4}, max(observed − bound) = {worst:.4}", r.sum_c_sq))
}

/// Is `table` a polymorphism, checked tuple by tuple.
fn is_polymorphism(t: &Template, n: usize, table: &[u32]) -> bool {
    let (a, b) = (t.a(), t.b());
    let d = a.universe();
    for (k, rel) in a.relations().iter().enumerate() {
        let arity = t.a().signature().arities()[k];
        let target: HashSet<&Vec<u32>> = b.relation(k).iter().collect();
        let combos = rel.len().pow(n as u32);
        for c in 0..combos {
            let rows: Vec<&Vec<u32>> = (0..n).map(|j| &rel[(c / rel.len().pow(j as u32)) % rel.len()]).collect();
            let image: Vec<u32> = (0..arity)
                .map(|pos| {
                    let idx: usize = (0..n).map(|j| rows[j][pos] as usize * d.pow(j as u32)).sum();
                    table[idx]
                })
                .collect();
            if !target.contains(&image) {
                return false;
            }
        }
    }
    true
}

fn polymorphism_enumeration() -> Check {
    let k2 = Template::standard("k2").unwrap();
    let tables: HashSet<Vec<u32>> = enumerate_polymorphisms(&k2, 2).unwrap().iter().map(|p| p.table().to_vec()).collect();
    let expected: HashSet<Vec<u32>> = [vec![0, 1, 0, 1], vec![0, 0, 1, 1], vec![1, 0, 1, 0], vec![1, 1, 0, 0]].into();
    ensure!(tables == expected, "Pol(K₂) arity 2 = {tables:?}");
    let k3 = Template::standard("k3").unwrap();
    let unary: HashSet<Vec<u32>> = enumerate_polymorphisms(&k3, 1).unwrap().iter().map(|p| p.table().to_vec()).collect();
    let perms: HashSet<Vec<u32>> =
        [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]].iter().map(|p| p.to_vec()).collect();
    ensure!(unary == perms, "Pol(K₃) arity 1 = {unary:?}");
    // completeness against every function for small cases
    let mut brute_checked = 0;
    for (name, n) in [("k2", 2), ("1in3", 2), ("nae", 2), ("1in3-nae", 2), ("nae", 3), ("k3", 1), ("k2-k3", 2)] {
        let t = Template::standard(name).unwrap();
        let (d, e) = (t.a().universe(), t.b().universe());
        let len = d.pow(n as u32);
        let brute: HashSet<Vec<u32>> = (0..e.pow(len as u32))
            .map(|code| (0..len).map(|x| ((code / e.pow(x as u32)) % e) as u32).collect::<Vec<u32>>())
            .filter(|table| is_polymorphism(&t, n, table))
            .collect();
        let found: HashSet<Vec<u32>> = enumerate_polymorphisms(&t, n).unwrap().iter().map(|p| p.table().to_vec()).collect();
        ensure!(found == brute, "{name} arity {n}: {} enumerated, {} by brute force", found.len(), brute.len());
        brute_checked += 1;
    }
    for name in ["k2", "k3", "1in3", "nae", "1in3-nae", "3sat", "k2-k3"] {
        let t = Template::standard(name).unwrap();
        for n in 1..=3 {
            let polys = enumerate_polymorphisms(&t, n).unwrap();
            for i in 0..n {
                let proj = Polymorphism::projection(t.a().universe(), n, i);
                let want: Vec<u32> = proj.table().iter().map(|&v| t.witness()[v as usize]).collect();
                ensure!(polys.iter().any(|p| p.table() == want.as_slice()), "{name} arity {n}: projection {i} missing");
            }
            ensure!(polys.iter().all(|p| is_polymorphism(&t, n, p.table())), "{name} arity {n}: a non-polymorphism");
        }
    }
    let mut minors = 0usize;
    for name in ["k2", "1in3", "nae", "1in3-nae", "3sat"] {
        let t = Template::standard(name).unwrap();
        let pols: Vec<HashSet<Vec<u32>>> = (1..=3)
            .map(|n| enumerate_polymorphisms(&t, n).unwrap().iter().map(|p| p.table().to_vec()).collect())
            .collect();
        for n in 1..=3 {
            for p in enumerate_polymorphisms(&t, n).unwrap() {
                for m in 1..=3 {
                    for map in MinorMap::all(n, m) {
                        let q = p.minor(&map).unwrap();
                        ensure!(pols[m - 1].contains(q.table()), "{name}: a minor of arity {m} left Pol");
                        minors += 1;
                    }
                }
            }
        }
    }
    Ok(format!("{brute_checked} sets match brute force; {minors} minors stay in Pol"))
}

fn choice_conditions() -> Check {
    let slice = MinionSlice::projections(4).unwrap();
    let mut table = ChoiceTable::new(1);
    for f in slice.members() {
        table.insert(f.clone(), vec![f.dictator_coordinate().unwrap()]).unwrap();
    }
    let single = verify_choice_condition(&slice, &table, ChoiceVariant::Single, ClosurePolicy::Strict).unwrap();
    ensure!(single.holds, "projection slice fails the single condition");
    let margin = 1e-6;
    let ptf = MinionSlice::from_predicate(4, |f| matches!(find_representation(f, 1, Mode::Positive, margin), Ok(Some(_))))
        .unwrap();
    let eps = 0.5;
    let heavy = heavy_set_choice_table(&ptf, 1, eps, margin).map_err(|e| e.to_string())?;
    let bound = layered_bound(1, eps);
    let layered = verify_choice_condition(&ptf, &heavy, ChoiceVariant::Layered { bound }, ClosurePolicy::Strict)
        .map_err(|e| e.to_string())?;
    ensure!(layered.holds, "heavy-set table fails the layered condition: {:?}", layered.counterexample);
    Ok(format!(
        "single: {} maps on {} projections; layered M={bound}: {} chain steps on {} functions",
        single.checked,
        slice.len(),
        layered.checked,
        ptf.len()
    ))
}

fn fixture(name: &str) -> LabelCoverInstance {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name);
    LabelCoverInstance::parse(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn label_cover() -> Check {
    for (name, want) in [("parallel_edges.lc", 0.5), ("twisted_square.lc", 0.75), ("shared_right.lc", 2.0 / 3.0)] {
        let (opt, best) = fixture(name).brute_force_optimum().unwrap();
        ensure!((opt - want).abs() <= 1e-12, "{name}: optimum {opt}, expected {want}");
        ensure!(fixture(name).satisfied_fraction(&best).unwrap() == opt, "{name}: labeling does not attain optimum");
    }
    let mut satisfiable = 0;
    for seed in 0..200u64 {
        let inst = generate(&GenParams {
            variant: Variant::Unique,
            left: 3,
            right: 3,
            sigma_l: 0,
            sigma_r: 3,
            degree: 2,
            planted: seed < 100,
            seed,
        })
        .unwrap();
        let (opt, _) = inst.brute_force_optimum().unwrap();
        let prop = inst.unique_propagation().unwrap();
        if seed < 100 {
            ensure!(opt == 1.0, "planted instance {seed} has optimum {opt}");
        }
        ensure!(prop.is_some() == (opt == 1.0), "instance {seed}: propagation disagrees with optimum {opt}");
        if let Some(s) = prop {
            ensure!(inst.satisfied_fraction(&s).unwrap() == 1.0, "instance {seed}: propagated labeling fails");
            satisfiable += 1;
        }
    }
    let rich = generate(&GenParams {
        variant: Variant::Rich,
        left: 1,
        right: 20,
        sigma_l: 0,
        sigma_r: 2,
        degree: 6000,
        planted: false,
        seed: 0,
    })
    .unwrap();
    let r = rich.richness_statistic(0).unwrap();
    ensure!(r.samples == 6000 && !r.degenerate, "richness sample of {}", r.samples);
    let test = r.test.unwrap();
    ensure!(!test.rejects_at(1e-3), "χ² rejects uniformity: p = {}", test.p_value);
    Ok(format!("fixtures 1/2, 3/4, 2/3; propagation agrees on 200 ({satisfiable} satisfiable); χ² p = {:.3}", test.p_value))
}

struct Invocation {
    args: &'static [&'static str],
    extras: &'static [&'static str],
}

const INVOCATIONS: &[Invocation] = &[
    Invocation { args: &["fourier", "expand", "--fn", "tribes:2:3", "--p", "0.3"], extras: &[] },
    Invocation { args: &["fourier", "influence", "--fn", "maj:5", "--p", "0.7", "--format", "json"], extras: &[] },
    Invocation {
        args: &["fourier", "noise", "--fn", "tribes:3:3", "--delta", "0.2", "--trials", "50000", "--seed", "7"],
        extras: &[],
    },
    Invocation { args: &["shapley", "--fn", "tribes:2:3", "--trials", "20000", "--seed", "3"], extras: &[] },
    Invocation { args: &["pullback", "mass", "--m", "3", "--p", "0.9"], extras: &[] },
    Invocation { args: &["pullback", "audit", "--m", "4", "--p", "0.5"], extras: &[] },
    Invocation { args: &["pullback", "audit", "--fn", "maj:7", "--p", "0.34", "--format", "json"], extras: &[] },
    Invocation {
        args: &["pullback", "preserve", "--fn", "majxor:5", "--trials", "500", "--seed", "9", "--tau", "0.01,0.05"],
        extras: &["--exceedance-out"],
    },
    Invocation { args: &["ptf", "represent", "--fn", "thr:5:2"], extras: &["--rep-out"] },
    Invocation {
        args: &["ptf", "represent", "--fn", "parity:3", "--mode", "general", "--degree", "3", "--exact"],
        extras: &[],
    },
    Invocation { args: &["ptf", "minmaxweight", "--fn", "maj:7"], extras: &[] },
    Invocation { args: &["ptf", "heavyset", "--fn", "dict:4:1", "--epsilon", "0.5"], extras: &[] },
    Invocation { args: &["ptf", "mcdiarmid", "--m", "5", "--trials", "2000", "--seed", "4"], extras: &[] },
    Invocation { args: &["pcsp", "enum", "--template", "1in3-nae", "--arity", "3"], extras: &[] },
    Invocation { args: &["pcsp", "check-choice", "--slice", "projections:3"], extras: &[] },
    Invocation {
        args: &["pcsp", "check-choice", "--slice", "ptf:1:3", "--choice", "heavy", "--epsilon", "0.5", "--variant", "layered", "--bound", "5"],
        extras: &["--table-out"],
    },
    Invocation {
        args: &[
            "pcsp", "check-choice", "--slice", "ptf:1:2", "--choice", "heavy", "--epsilon", "0.5", "--variant", "random",
            "--trials", "300", "--tau", "0.1", "--seed", "2",
        ],
        extras: &[],
    },
    Invocation { args: &["pcsp", "solve", "--template", "k3", "--instance", "@c5.struct"], extras: &[] },
    Invocation { args: &["pcsp", "solve", "--template", "3sat", "--cnf", "@small.cnf"], extras: &[] },
    Invocation {
        args: &["labelcover", "gen", "--variant", "rich", "--left", "2", "--right", "5", "--sigma-r", "2", "--degree", "50", "--seed", "5"],
        extras: &[],
    },
    Invocation { args: &["labelcover", "eval", "--instance", "@twisted_square.lc"], extras: &[] },
    Invocation { args: &["labelcover", "rich", "--instance", "@rich.lc"], extras: &[] },
];

/// Exit code, stdout and every written file.
fn run_cli(inv: &Invocation, threads: usize, dir: &Path, cache: Option<&Path>) -> (Option<i32>, Vec<u8>, Vec<Vec<u8>>) {
    let data = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data");
    let out = dir.join("main");
    let extras: Vec<PathBuf> = (0..inv.extras.len()).map(|k| dir.join(format!("extra{k}"))).collect();
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_minionlab"));
    for a in inv.args {
        match a.strip_prefix('@') {
            Some(file) => cmd.arg(data.join(file)),
            None => cmd.arg(a),
        };
    }
    cmd.arg("--threads").arg(threads.to_string()).arg("--out").arg(&out);
    for (flag, path) in inv.extras.iter().zip(&extras) {
        cmd.arg(flag).arg(path);
    }
    match cache {
        Some(c) => cmd.env("MINIONLAB_CACHE", c),
        None => cmd.env_remove("MINIONLAB_CACHE"),
    };
    let output = cmd.output().expect("binary runs");
    let mut files = vec![std::fs::read(&out).unwrap_or_default()];
    files.extend(extras.iter().map(|p| std::fs::read(p).unwrap_or_default()));
    (output.status.code(), output.stdout, files)
}

fn determinism() -> Check {
    let root = tempfile::tempdir().map_err(|e| e.to_string())?;
    for (k, inv) in INVOCATIONS.iter().enumerate() {
        let runs: Vec<_> = [(1, "a"), (1, "b"), (8, "c")]
            .iter()
            .map(|&(threads, tag)| {
                let dir = root.path().join(format!("{k}{tag}"));
                std::fs::create_dir_all(&dir).unwrap();
                run_cli(inv, threads, &dir, None)
            })
            .collect();
        let label = inv.args.join(" ");
        ensure!(runs[0].0 == Some(0), "`{label}` exited with {:?}", runs[0].0);
        ensure!(!runs[0].2[0].is_empty(), "`{label}` wrote nothing");
        ensure!(runs[0] == runs[1], "`{label}` differs between two runs");
        ensure!(runs[0] == runs[2], "`{label}` differs between 1 and 8 threads");
    }
    let cache = root.path().join("cache");
    let enumerate = &INVOCATIONS[13];
    let dirs: Vec<PathBuf> = (0..2).map(|k| root.path().join(format!("cache{k}"))).collect();
    dirs.iter().for_each(|d| std::fs::create_dir_all(d).unwrap());
    let first = run_cli(enumerate, 8, &dirs[0], Some(&cache));
    let second = run_cli(enumerate, 1, &dirs[1], Some(&cache));
    ensure!(first.2 == second.2, "cached enumeration differs");
    ensure!(String::from_utf8_lossy(&second.1).contains("cached=true"), "second enumeration missed the cache");
    Ok(format!("{} invocations identical across runs and 1/8 threads; cache reuse identical", INVOCATIONS.len()))
}

struct Criterion {
    name: &'static str,
    limit: Option<Duration>,
    run: fn() -> Check,
}

fn main() {
    let criteria = [
        Criterion { name: "spectral identities", limit: Some(Duration::from_secs(30)), run: spectral_identities },
        Criterion { name: "influence equivalences", limit: Some(Duration::from_secs(30)), run: influence_equivalences },
        Criterion { name: "total-influence formula", limit: None, run: total_influence_formula },
        Criterion { name: "pull-back exactness", limit: Some(Duration::from_secs(120)), run: pullback_exactness },
        Criterion { name: "gluing inequality", limit: Some(Duration::from_secs(300)), run: gluing_inequality },
        Criterion { name: "pull-back expectation", limit: None, run: pullback_expectation_check },
        Criterion { name: "influence preservation", limit: None, run: influence_preservation },
        Criterion { name: "Shapley suite", limit: Some(Duration::from_secs(120)), run: shapley_suite },
        Criterion { name: "PTF LP oracle", limit: Some(Duration::from_secs(180)), run: ptf_oracle },
        Criterion { name: "McDiarmid experiment", limit: None, run: mcdiarmid },
        Criterion { name: "polymorphism enumeration", limit: Some(Duration::from_secs(60)), run: polymorphism_enumeration },
        Criterion { name: "choice-condition verification", limit: None, run: choice_conditions },
        Criterion { name: "Label Cover", limit: None, run: label_cover },
        Criterion { name: "CLI determinism", limit: None, run: determinism },
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (k, c) in criteria.iter().enumerate() {
        let id = (k + 1).to_string();
        if !filter.is_empty() && !filter.iter().any(|f| *f == id || c.name.contains(f.as_str())) {
            continue;
        }
        let start = Instant::now();
        let result = std::panic::catch_unwind(c.run).unwrap_or_else(|e| {
            Err(e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_else(|| "panicked".into()))
        });
        let elapsed = start.elapsed();
        let result = match (result, c.limit) {
            (Ok(_), Some(limit)) if elapsed > limit => Err(format!("took {elapsed:.1?}, limit {limit:?}")),
            (r, _) => r,
        };
        match result {
            Ok(detail) => println!("criterion {id:>2} PASS  {}: {detail} ({elapsed:.2?})", c.name),
            Err(reason) => {
                failed += 1;
                println!("criterion {id:>2} FAIL  {}: {reason} ({elapsed:.2?})", c.name);
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
