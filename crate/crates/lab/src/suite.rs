//! The property suite behind `bmo-lab properties`.

use bmo_core::dyadic::dyadics_within;
use bmo_core::growth::log_probes;
use bmo_core::norms::dyadic_family;
use bmo_core::{CoefficientArray, GrowthModel, Interval, WeightModel};
use serde::{Deserialize, Serialize};

use crate::config::{CorpusSpec, ExperimentConfig};
use crate::constants;
use crate::corpus::{bmo_corpus, random_arrays};
use crate::error::LabResult;
use crate::experiments::*;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropertyReport {
    pub seed: u64,
    pub checks: Vec<Check>,
}

impl PropertyReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

/// Runs every check at the config's scale. A check that errors is
/// reported as failed with the error message; the others still run.
pub fn run_property_suite(config: &ExperimentConfig) -> PropertyReport {
    let mut checks = Vec::new();
    match Setup::new(config) {
        Ok(setup) => collect(config, &setup, &mut checks),
        Err(e) => checks.push(Check::failed("setup", e)),
    }
    PropertyReport { seed: config.seed, checks }
}

fn scalar_arrays(config: &ExperimentConfig, setup: &Setup, count: usize) -> LabResult<Vec<CoefficientArray>> {
    let spec = CorpusSpec { arrays: count, dim: 1, ..config.corpus };
    let region = Interval::symmetric_window(config.synthesis.region_m);
    let min = config.families.carleson_min_scale;
    Ok(random_arrays(&spec, &region, min, config.synthesis.region_m, &setup.weight, &setup.rho, config.seed)?
        .into_iter()
        .map(|a| a.array)
        .collect())
}

fn collect(config: &ExperimentConfig, setup: &Setup, checks: &mut Vec<Check>) {
    let region = Interval::symmetric_window(config.synthesis.region_m);
    let min = config.families.carleson_min_scale;
    let fam = dyadic_family(&region, min);
    match scalar_arrays(config, setup, 20) {
        Ok(arrays) => {
            checks.push(check_scalar_p2_identity(&arrays, &setup.weight, &setup.rho, &fam, min, 1e-10));
            for p in [1.5, 2.0, 3.0, 4.0] {
                checks.push(check_khintchine(&arrays, &setup.weight, &setup.rho, &fam, min, p, 1e-10));
            }
        }
        Err(e) => checks.push(Check::failed("coefficient arrays", e)),
    }

    let mut growths = vec![setup.rho.clone()];
    for alpha in [0.1, 0.25] {
        if alpha < 2.0 - config.q {
            growths.push(GrowthModel::power(alpha).expect("valid exponent"));
        }
    }
    checks.push(check_eta(&growths, config.q, &log_probes(1e-3, 1e3, 13), 1e-6));

    checks.push(check_contraction(200, 14, &[1.5, 2.0, 4.0], config.seed));
    checks.push(check_kahane(200, 14, &[1.5, 2.0, 4.0], constants::KAHANE, config.seed));

    let grid = setup.grid;
    let mut weights = vec![setup.weight.clone()];
    for (a, c) in [(0.5, 0.0), (-0.5, 0.0), (0.9, 0.3)] {
        weights.push(WeightModel::power(grid, a, c).expect("valid power weight"));
    }
    weights.push(WeightModel::step(grid, 0.25, 0.1, 4.0).expect("valid step weight"));
    let holder_intervals: Vec<Interval> =
        dyadics_within(&config.window(), -3).iter().map(|j| j.interval()).collect();
    checks.push(check_holder(&weights, &holder_intervals, &[1.2, 1.5, 2.0, 3.0, 6.0]));

    let spec = CorpusSpec { functions: config.corpus.functions.min(10), ..config.corpus };
    let functions: LabResult<Vec<_>> = bmo_corpus(&spec, &config.window(), config.wavelet, config.seed)
        .iter()
        .map(|c| c.profile.sample(grid, spec.space()?))
        .collect();
    match (functions, bmo_family(config, &config.window())) {
        (Ok(functions), Ok(bfam)) => {
            let inner = Interval::symmetric_window(config.window_m - 3);
            let intervals: Vec<Interval> = dyadic_family(&inner, -2);
            checks.push(check_oscillation(&functions, &setup.weight, &setup.rho, &bfam, &intervals, 3, constants::OSCILLATION));
            let q_dual = config.q / (config.q - 1.0);
            checks.push(check_jn(&functions, &setup.weight, &setup.rho, &bfam, &[1.5, 2.0, q_dual], constants::JOHN_NIRENBERG));
        }
        (Err(e), _) | (_, Err(e)) => checks.push(Check::failed("BMO corpus", e)),
    }

    match scalar_arrays(config, setup, 10) {
        Ok(arrays) => {
            let cut = synthesis_cutoffs(config);
            let pairs: Vec<_> = arrays
                .into_iter()
                .map(|a| (a, Interval::new(0.0, 0.5).unwrap(), Interval::new(-1.0, 1.0).unwrap()))
                .collect();
            checks.push(check_constancy(&pairs, &setup.wavelet, &grid, &cut, 1e-7));
        }
        Err(e) => checks.push(Check::failed("constancy arrays", e)),
    }

    checks.push(check_kernel_plateau(&setup.wavelet, 200, &[config.seed], 4, 6, (-4.0, 4.0), 0.05, config.seed));
    checks.push(check_mc_agreement(40, 14, config.mc_samples, 4.0, 0.95, config.seed));
}
