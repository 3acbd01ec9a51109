//! Theorem-level experiments and the property suite.

mod properties;
mod theorems;

pub use properties::*;
pub use theorems::*;

use bmo_core::norms::{dyadic_family, grid_family, interior_dyadic_family, merge_families};
use bmo_core::{EtaTransform, Grid, GrowthModel, Interval, MomentConfig, WaveletModel, WeightModel};
use serde::{Deserialize, Serialize};

use crate::config::ExperimentConfig;
use crate::error::LabResult;

/// Everything an experiment needs, built once from a config.
#[derive(Debug, Clone)]
pub struct Setup {
    pub grid: Grid,
    pub weight: WeightModel,
    pub rho: GrowthModel,
    pub eta: EtaTransform,
    pub wavelet: WaveletModel,
    pub moments: MomentConfig,
}

impl Setup {
    pub fn new(config: &ExperimentConfig) -> LabResult<Self> {
        let grid = config.grid()?;
        Ok(Setup {
            grid,
            weight: config.weight.build(grid)?,
            rho: config.growth.build()?,
            eta: config.eta()?,
            wavelet: config.wavelet.build()?,
            moments: config.moments(),
        })
    }
}

/// Dyadic intervals down to `bmo_min_scale` plus all intervals between
/// `2^grid_points_log2 + 1` equally spaced points of `within`.
pub fn bmo_family(config: &ExperimentConfig, within: &Interval) -> LabResult<Vec<Interval>> {
    let f = &config.families;
    Ok(merge_families(&dyadic_family(within, f.bmo_min_scale), &grid_family(within, f.grid_points_log2)?))
}

/// Dyadic intervals of the window whose wavelets stay inside it.
pub fn carleson_family(config: &ExperimentConfig, support: usize) -> Vec<Interval> {
    interior_dyadic_family(&config.window(), config.families.carleson_min_scale, support)
}

/// A measured quantity with its verdict.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub measured: f64,
    pub bound: f64,
    pub cases: usize,
    pub detail: String,
}

impl Check {
    pub fn new(name: &str, pass: bool, measured: f64, bound: f64, cases: usize, detail: String) -> Self {
        Check { name: name.to_string(), pass, measured, bound, cases, detail }
    }

    /// A check whose evaluation failed with an error.
    pub fn failed(name: &str, error: impl std::fmt::Display) -> Self {
        Check::new(name, false, f64::NAN, f64::NAN, 0, format!("error: {error}"))
    }

    pub fn line(&self) -> String {
        format!(
            "{} {}: measured {:.6e} vs bound {:.6e} over {} cases; {}",
            if self.pass { "PASS" } else { "FAIL" },
            self.name,
            self.measured,
            self.bound,
            self.cases,
            self.detail
        )
    }
}

/// `num/den`, with `0/0 = 0` up to the rounding floor `tiny`.
pub fn ratio(num: f64, den: f64, tiny: f64) -> f64 {
    if den <= tiny {
        if num <= tiny {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        num / den
    }
}

/// Largest relative change between two positive numbers.
pub fn relative_change(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs())
}
