//! Experiment configuration, read from JSON.

use std::path::{Path, PathBuf};

use bmo_core::growth::eta;
use bmo_core::{EtaTransform, Grid, GrowthModel, Interval, MomentConfig, VectorSpace, WaveletModel, WeightModel};
use serde::{Deserialize, Serialize};

use crate::error::{LabError, LabResult};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum WeightSpec {
    Constant { value: f64 },
    Power { a: f64, center: f64 },
    Step { breakpoint: f64, left: f64, right: f64 },
    /// Samples stored in the grid-function format (CSV or binary).
    Sampled { path: PathBuf },
}

impl WeightSpec {
    pub fn build(&self, grid: Grid) -> LabResult<WeightModel> {
        Ok(match self {
            WeightSpec::Constant { value } => WeightModel::constant(grid, *value)?,
            WeightSpec::Power { a, center } => WeightModel::power(grid, *a, *center)?,
            WeightSpec::Step { breakpoint, left, right } => WeightModel::step(grid, *breakpoint, *left, *right)?,
            WeightSpec::Sampled { path } => {
                let f = crate::io::read_grid_function(path)?;
                if *f.grid() != grid {
                    return Err(LabError::Config(format!(
                        "sampled weight {} does not match the experiment grid",
                        path.display()
                    )));
                }
                WeightModel::sampled(f)?
            }
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum GrowthSpec {
    Constant { value: f64 },
    Power {
        alpha: f64,
        #[serde(default = "one")]
        scale: f64,
    },
    LogPower { alpha: f64, beta: f64 },
    Sampled { knots: Vec<(f64, f64)>, upper_type: f64, upper_constant: f64 },
}

fn one() -> f64 {
    1.0
}

impl GrowthSpec {
    pub fn build(&self) -> LabResult<GrowthModel> {
        Ok(match self {
            GrowthSpec::Constant { value } => GrowthModel::constant(*value)?,
            GrowthSpec::Power { alpha, scale } => GrowthModel::scaled_power(*alpha, *scale)?,
            GrowthSpec::LogPower { alpha, beta } => GrowthModel::log_power(*alpha, *beta)?,
            GrowthSpec::Sampled { knots, upper_type, upper_constant } => {
                GrowthModel::sampled(knots.clone(), *upper_type, *upper_constant)?
            }
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum WaveletSpec {
    Haar,
    Daubechies { order: u8 },
}

impl WaveletSpec {
    pub fn build(&self) -> LabResult<WaveletModel> {
        Ok(match self {
            WaveletSpec::Haar => WaveletModel::haar(),
            WaveletSpec::Daubechies { order } => WaveletModel::daubechies(*order)?,
        })
    }
}

/// Interval families for the sup in the norms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FamilySpec {
    /// Smallest dyadic scale in the BMO family.
    pub bmo_min_scale: i32,
    /// Non-dyadic intervals with endpoints on `2^grid_points_log2` equally spaced points.
    pub grid_points_log2: u32,
    /// Smallest `|J| = 2^carleson_min_scale` entering Carleson sums.
    pub carleson_min_scale: i32,
}

impl Default for FamilySpec {
    fn default() -> Self {
        FamilySpec { bmo_min_scale: -5, grid_points_log2: 8, carleson_min_scale: -5 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CorpusSpec {
    pub functions: usize,
    pub arrays: usize,
    /// Value dimension `d` and exponent `r` of `ℓ^r_d`.
    pub dim: usize,
    pub r: f64,
    /// Fraction of candidate dyadic intervals carrying a coefficient.
    pub density: f64,
}

impl Default for CorpusSpec {
    fn default() -> Self {
        CorpusSpec { functions: 50, arrays: 30, dim: 1, r: 2.0, density: 0.3 }
    }
}

impl CorpusSpec {
    pub fn space(&self) -> LabResult<VectorSpace> {
        if self.dim == 1 {
            Ok(VectorSpace::scalar())
        } else {
            Ok(VectorSpace::new(self.dim, self.r)?)
        }
    }
}

/// Theorem B parameters: where `f_I` is reported and which coefficients enter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SynthesisSpec {
    pub report_left: f64,
    pub report_right: f64,
    pub min_scale: i32,
    pub max_scale: i32,
    /// Coefficients live on `[-2^region_m, 2^region_m)`.
    pub region_m: i32,
}

impl Default for SynthesisSpec {
    fn default() -> Self {
        SynthesisSpec { report_left: -1.0, report_right: 1.0, min_scale: -5, max_scale: 2, region_m: 2 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Window `[-2^window_m, 2^window_m)`.
    pub window_m: i32,
    /// Grid level `L`: `2^L` cells per unit length.
    pub level: i32,
    pub wavelet: WaveletSpec,
    pub weight: WeightSpec,
    pub growth: GrowthSpec,
    pub q: f64,
    pub p: f64,
    pub families: FamilySpec,
    pub corpus: CorpusSpec,
    pub synthesis: SynthesisSpec,
    pub seed: u64,
    pub exact_threshold: usize,
    pub mc_samples: usize,
    pub out: Option<PathBuf>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        let m = MomentConfig::default();
        ExperimentConfig {
            window_m: 3,
            level: 10,
            wavelet: WaveletSpec::Daubechies { order: 4 },
            weight: WeightSpec::Constant { value: 1.0 },
            growth: GrowthSpec::Constant { value: 1.0 },
            q: 1.5,
            p: 2.0,
            families: FamilySpec::default(),
            corpus: CorpusSpec::default(),
            synthesis: SynthesisSpec::default(),
            seed: 0,
            exact_threshold: m.exact_threshold,
            mc_samples: m.mc_samples,
            out: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    TheoremA,
    TheoremB,
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> LabResult<Self> {
        let text = std::fs::read_to_string(path)?;
        serde_json::from_str(&text).map_err(|e| LabError::Config(format!("{}: {e}", path.display())))
    }

    pub fn grid(&self) -> LabResult<Grid> {
        Ok(Grid::symmetric(self.window_m, self.level)?)
    }

    pub fn window(&self) -> Interval {
        Interval::symmetric_window(self.window_m)
    }

    pub fn moments(&self) -> MomentConfig {
        MomentConfig { exact_threshold: self.exact_threshold, mc_samples: self.mc_samples, seed: self.seed }
    }

    /// `η` tabulated at every dyadic length the window can produce.
    pub fn eta(&self) -> LabResult<EtaTransform> {
        let lo = -self.level - 1;
        Ok(EtaTransform::dyadic(self.growth.build()?, self.q, lo, self.window_m + 2)?)
    }

    pub fn report_interval(&self) -> LabResult<Interval> {
        Ok(Interval::new(self.synthesis.report_left, self.synthesis.report_right)?)
    }

    /// Checks the hypotheses of the chosen direction.
    pub fn validate(&self, direction: Direction) -> LabResult<()> {
        let bad = |msg: String| Err(LabError::Config(msg));
        if !(self.q > 1.0 && self.q < 2.0) {
            return bad(format!("q = {} must lie in (1, 2) for η to be defined", self.q));
        }
        let q_dual = self.q / (self.q - 1.0);
        match direction {
            Direction::TheoremA if !(self.p > 1.0 && self.p <= q_dual) => {
                return bad(format!("Theorem A needs p ∈ (1, q'] = (1, {q_dual}], got {}", self.p));
            }
            Direction::TheoremB if !(self.p > 1.0 && self.p.is_finite()) => {
                return bad(format!("Theorem B needs p ∈ (1, ∞), got {}", self.p));
            }
            _ => {}
        }
        if self.level < 2 || self.level > 16 {
            return bad(format!("grid level {} outside 2..=16", self.level));
        }
        if self.corpus.dim == 0 {
            return bad("corpus dimension must be positive".into());
        }
        eta(&self.growth.build()?, self.q, 1.0)?;
        Ok(())
    }
}
