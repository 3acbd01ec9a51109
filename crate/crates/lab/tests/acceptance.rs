//! Desk-scale acceptance: window [-8, 8), L = 10, d ≤ 5. One line per
//! criterion, then a single assertion over all of them.

use bmo_core::dyadic::dyadics_within;
use bmo_core::growth::log_probes;
use bmo_core::norms::dyadic_family;
use bmo_core::{CoefficientArray, DyadicInterval, GrowthModel, Interval, WeightModel};
use bmo_lab::config::{CorpusSpec, GrowthSpec, WeightSpec};
use bmo_lab::constants;
use bmo_lab::corpus::{bmo_corpus, case_rng, random_arrays};
use bmo_lab::experiments::*;
use bmo_lab::ExperimentConfig;
use rand::Rng;

const SEED: u64 = 20240611;

fn desk() -> ExperimentConfig {
    let mut c = ExperimentConfig { seed: SEED, ..Default::default() };
    c.families.grid_points_log2 = 5;
    c
}

fn scalar_arrays(c: &ExperimentConfig, setup: &Setup, count: usize) -> Vec<CoefficientArray> {
    let spec = CorpusSpec { arrays: count, dim: 1, ..c.corpus };
    let region = Interval::symmetric_window(c.synthesis.region_m);
    random_arrays(&spec, &region, c.families.carleson_min_scale, c.synthesis.region_m, &setup.weight, &setup.rho, c.seed)
        .unwrap()
        .into_iter()
        .map(|a| a.array)
        .collect()
}

fn scalar_identity(c: &ExperimentConfig, setup: &Setup) -> Check {
    let region = Interval::symmetric_window(c.synthesis.region_m);
    let min = c.families.carleson_min_scale;
    let arrays = scalar_arrays(c, setup, 100);
    check_scalar_p2_identity(&arrays, &setup.weight, &setup.rho, &dyadic_family(&region, min), min, 1e-10)
}

fn khintchine(c: &ExperimentConfig, setup: &Setup) -> Check {
    let region = Interval::symmetric_window(c.synthesis.region_m);
    let min = c.families.carleson_min_scale;
    let fam = dyadic_family(&region, min);
    let arrays = scalar_arrays(c, setup, 100);
    let checks: Vec<Check> = [1.5, 2.0, 3.0, 4.0]
        .into_iter()
        .map(|p| check_khintchine(&arrays, &setup.weight, &setup.rho, &fam, min, p, 1e-10))
        .collect();
    combine("Khintchine equivalence, p ∈ {1.5, 2, 3, 4}", checks)
}

fn eta_transform(c: &ExperimentConfig) -> Check {
    let growths = vec![
        GrowthModel::constant(1.0).unwrap(),
        GrowthModel::power(0.1).unwrap(),
        GrowthModel::power(0.25).unwrap(),
        GrowthModel::power(0.45).unwrap(),
    ];
    check_eta(&growths, c.q, &log_probes(1e-4, 1e4, 33), 1e-6)
}

fn holder(c: &ExperimentConfig) -> Check {
    let grid = c.grid().unwrap();
    let mut weights = vec![WeightModel::constant(grid, 1.0).unwrap()];
    for (a, x) in [(0.5, 0.0), (-0.5, 0.0), (0.9, 0.3), (-0.9, 1.7)] {
        weights.push(WeightModel::power(grid, a, x).unwrap());
    }
    weights.push(WeightModel::step(grid, 0.25, 0.1, 4.0).unwrap());
    weights.push(WeightModel::step(grid, -3.0, 7.0, 0.5).unwrap());
    let intervals: Vec<Interval> = dyadics_within(&c.window(), -4).iter().map(|j| j.interval()).collect();
    check_holder(&weights, &intervals, &[1.1, 1.2, 1.5, 2.0, 3.0, 6.0])
}

fn corpus_functions(c: &ExperimentConfig) -> Vec<bmo_core::GridFunction> {
    let grid = c.grid().unwrap();
    bmo_corpus(&c.corpus, &c.window(), c.wavelet, c.seed)
        .iter()
        .map(|f| f.profile.sample(grid, c.corpus.space().unwrap()).unwrap())
        .collect()
}

fn oscillation(c: &ExperimentConfig, setup: &Setup, functions: &[bmo_core::GridFunction]) -> Check {
    let fam = bmo_family(c, &c.window()).unwrap();
    let intervals = dyadic_family(&Interval::symmetric_window(c.window_m - 3), -2);
    check_oscillation(functions, &setup.weight, &setup.rho, &fam, &intervals, 3, constants::OSCILLATION)
}

fn john_nirenberg(c: &ExperimentConfig, setup: &Setup, functions: &[bmo_core::GridFunction]) -> Check {
    let fam = bmo_family(c, &c.window()).unwrap();
    let q_dual = c.q / (c.q - 1.0);
    check_jn(functions, &setup.weight, &setup.rho, &fam, &[1.25, 1.5, 2.0, 2.5, q_dual], constants::JOHN_NIRENBERG)
}

fn theorem_a() -> Check {
    let configs = [
        ("w=1, ρ=1, p=2", WeightSpec::Constant { value: 1.0 }, GrowthSpec::Constant { value: 1.0 }, 2.0),
        ("w=|x|^½, ρ=t^¼, p=2", WeightSpec::Power { a: 0.5, center: 0.0 }, GrowthSpec::Power { alpha: 0.25, scale: 1.0 }, 2.0),
        ("w=1, ρ=1, p=1.5", WeightSpec::Constant { value: 1.0 }, GrowthSpec::Constant { value: 1.0 }, 1.5),
    ];
    let mut worst: f64 = 0.0;
    let mut pass = true;
    let mut detail = Vec::new();
    let mut cases = 0;
    for (label, weight, growth, p) in configs {
        let mut maxima = Vec::new();
        for level in [10, 11] {
            let c = ExperimentConfig { weight: weight.clone(), growth: growth.clone(), p, level, ..desk() };
            let corpus = bmo_corpus(&c.corpus, &c.window(), c.wavelet, c.seed);
            let r = run_theorem_a(&c, &corpus).unwrap();
            pass &= r.errors == 0 && r.max_ratio.is_finite() && r.max_ratio > 0.0;
            cases += r.cases.len();
            maxima.push(r.max_ratio);
        }
        let change = relative_change(maxima[0], maxima[1]);
        worst = worst.max(change);
        detail.push(format!("{label}: {:.4}→{:.4}", maxima[0], maxima[1]));
    }
    pass &= worst <= constants::STABILITY;
    Check::new("Theorem A ratio, L=10→11", pass, worst, constants::STABILITY, cases, detail.join("; "))
}

fn theorem_b() -> Check {
    let (coarse, fine) = (-6, -7);
    let mut worst: f64 = 0.0;
    let mut pieces = [0.0f64; 3];
    let mut pass = true;
    let mut detail = Vec::new();
    let mut cases = 0;
    for p in [1.5, 2.0, 3.0] {
        let base = ExperimentConfig { p, ..desk() };
        let setup = Setup::new(&base).unwrap();
        let region = Interval::symmetric_window(base.synthesis.region_m);
        let arrays =
            random_arrays(&base.corpus, &region, fine, base.synthesis.max_scale, &setup.weight, &setup.rho, base.seed).unwrap();
        let mut maxima = Vec::new();
        for min_scale in [coarse, fine] {
            let mut c = base.clone();
            c.synthesis.min_scale = min_scale;
            let r = run_theorem_b(&c, &arrays).unwrap();
            pass &= r.errors == 0 && r.max_ratio.is_finite() && r.max_ratio > 0.0;
            for k in 0..3 {
                pieces[k] = pieces[k].max(r.max_pieces[k]);
            }
            cases += r.cases.len();
            maxima.push(r.max_ratio);
        }
        worst = worst.max(relative_change(maxima[0], maxima[1]));
        detail.push(format!("p={p}: {:.4}→{:.4}", maxima[0], maxima[1]));
    }
    let within = pieces.iter().zip(constants::PIECES).all(|(m, b)| *m <= b);
    pass &= worst <= constants::STABILITY && within;
    detail.push(format!(
        "pieces f1 {:.4}/{} f2 {:.4}/{} f3 {:.4}/{}",
        pieces[0],
        constants::PIECES[0],
        pieces[1],
        constants::PIECES[1],
        pieces[2],
        constants::PIECES[2]
    ));
    Check::new("Theorem B ratio, cutoff -6→-7", pass, worst, constants::STABILITY, cases, detail.join("; "))
}

fn constancy(c: &ExperimentConfig, setup: &Setup) -> Check {
    let arrays = scalar_arrays(c, setup, 50);
    let cut = synthesis_cutoffs(c);
    let mut rng = case_rng(c.seed, 7);
    let cases: Vec<_> = arrays
        .into_iter()
        .map(|a| {
            // I' dyadic of length 1 or 2 inside the region, I a dyadic descendant
            let j: i32 = rng.gen_range(0..=1);
            let k: i64 = rng.gen_range(-(4i64 >> j)..(4i64 >> j));
            let outer = DyadicInterval::new(j, k).unwrap();
            let depth: i32 = rng.gen_range(1..=4);
            let inner = DyadicInterval::new(j - depth, k * (1i64 << depth) + rng.gen_range(0..(1i64 << depth))).unwrap();
            (a, inner.interval(), outer.interval())
        })
        .collect();
    check_constancy(&cases, &setup.wavelet, &setup.grid, &cut, 1e-7)
}

fn combine(name: &str, checks: Vec<Check>) -> Check {
    let pass = checks.iter().all(|c| c.pass);
    let worst = checks.iter().map(|c| c.measured / c.bound).fold(0.0, f64::max);
    let cases = checks.iter().map(|c| c.cases).sum();
    let detail = checks.iter().map(|c| format!("[{}] {}", c.name, c.detail)).collect::<Vec<_>>().join("; ");
    Check::new(name, pass, worst, 1.0, cases, detail)
}

#[test]
fn acceptance() {
    let c = desk();
    let setup = Setup::new(&c).unwrap();
    let functions = corpus_functions(&c);
    let criteria: Vec<(u32, Check)> = vec![
        (1, scalar_identity(&c, &setup)),
        (2, khintchine(&c, &setup)),
        (3, eta_transform(&c)),
        (4, check_contraction(500, 14, &[1.5, 2.0, 4.0], c.seed)),
        (5, check_kahane(500, 14, &[1.5, 2.0, 4.0], constants::KAHANE, c.seed)),
        (6, holder(&c)),
        (7, oscillation(&c, &setup, &functions)),
        (8, theorem_a()),
        (9, theorem_b()),
        (10, constancy(&c, &setup)),
        (11, john_nirenberg(&c, &setup, &functions)),
        (12, check_kernel_plateau(&setup.wavelet, 200, &[c.seed, c.seed + 1, c.seed + 2], 4, 6, (-4.0, 4.0), 0.05, c.seed)),
        (13, check_mc_agreement(200, 14, 100_000, 4.0, 0.99, c.seed)),
    ];
    for (n, check) in &criteria {
        println!("criterion {n:>2}: {}", check.line());
    }
    let failed: Vec<u32> = criteria.iter().filter(|(_, c)| !c.pass).map(|(n, _)| *n).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
