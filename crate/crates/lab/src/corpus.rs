//! Deterministic test corpora.
//!
//! Functions are stored as resolution-independent profiles so the same
//! corpus can be sampled at several grid levels. Every case draws from its
//! own ChaCha stream `(seed, case index)`.

use bmo_core::dyadic::dyadics_within;
use bmo_core::wavelets::dilate_translate;
use bmo_core::{
    CoefficientArray, DyadicInterval, Grid, GridFunction, Growth, Interval, VectorSpace, WaveletModel, WeightModel,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::config::{CorpusSpec, WaveletSpec};
use crate::error::LabResult;
use crate::io::CoefficientEntry;

pub fn case_rng(seed: u64, case: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(case);
    rng
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Profile {
    Constant { value: Vec<f64> },
    /// `values[k]` on `[breakpoints[k-1], breakpoints[k])`, constant beyond the ends.
    Step { breakpoints: Vec<f64>, values: Vec<Vec<f64>> },
    /// Piecewise linear through the knots, constant beyond the ends.
    Spline { knots: Vec<f64>, values: Vec<Vec<f64>> },
    /// `amplitude · Σ_{k<depth} h_k(x − center)` with `h_k = 1_{[0,2^{-k-1})} − 1_{[2^{-k-1},2^{-k})}`:
    /// grows like `log₂(1/x)` towards the centre.
    LogHaar { center: f64, depth: u32, amplitude: Vec<f64> },
    /// `amplitude · log(max(|x − center|, floor))`.
    Log { center: f64, floor: f64, amplitude: Vec<f64> },
    /// `Σ a_J ψ_J`, with `ψ_J` realized on the grid.
    WaveletSum { wavelet: WaveletSpec, terms: Vec<CoefficientEntry> },
}

impl Profile {
    pub fn sample(&self, grid: Grid, space: VectorSpace) -> LabResult<GridFunction> {
        let d = space.dim();
        Ok(match self {
            Profile::Constant { value } => GridFunction::from_fn(grid, space, |_, v| v.copy_from_slice(&value[..d])),
            Profile::Step { breakpoints, values } => GridFunction::from_fn(grid, space, |x, v| {
                let k = breakpoints.partition_point(|b| *b <= x);
                v.copy_from_slice(&values[k][..d]);
            }),
            Profile::Spline { knots, values } => GridFunction::from_fn(grid, space, |x, v| {
                let k = knots.partition_point(|b| *b <= x);
                if k == 0 {
                    v.copy_from_slice(&values[0][..d]);
                } else if k == knots.len() {
                    v.copy_from_slice(&values[k - 1][..d]);
                } else {
                    let t = (x - knots[k - 1]) / (knots[k] - knots[k - 1]);
                    for (i, out) in v.iter_mut().enumerate() {
                        *out = (1.0 - t) * values[k - 1][i] + t * values[k][i];
                    }
                }
            }),
            Profile::LogHaar { center, depth, amplitude } => GridFunction::from_fn(grid, space, |x, v| {
                let y = x - center;
                let mut s = 0.0;
                for k in 0..*depth {
                    let len = (-(k as f64)).exp2();
                    if (0.0..len / 2.0).contains(&y) {
                        s += 1.0;
                    } else if (len / 2.0..len).contains(&y) {
                        s -= 1.0;
                    }
                }
                for (out, a) in v.iter_mut().zip(amplitude) {
                    *out = a * s;
                }
            }),
            Profile::Log { center, floor, amplitude } => GridFunction::from_fn(grid, space, |x, v| {
                let s = (x - center).abs().max(*floor).ln();
                for (out, a) in v.iter_mut().zip(amplitude) {
                    *out = a * s;
                }
            }),
            Profile::WaveletSum { wavelet, terms } => {
                let psi = wavelet.build()?;
                let mut out = GridFunction::zeros(grid, space);
                for t in terms {
                    let j = DyadicInterval::new(t.scale, t.position)?;
                    let g = dilate_translate(&psi, &j, &grid)?;
                    let s = out.samples_mut();
                    for (c, w) in g.samples().iter().enumerate() {
                        for k in 0..d {
                            s[c * d + k] += t.value[k] * w;
                        }
                    }
                }
                out
            }
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusFunction {
    pub name: String,
    pub profile: Profile,
}

fn vector(rng: &mut ChaCha8Rng, d: usize, scale: f64) -> Vec<f64> {
    (0..d).map(|_| scale * rng.gen_range(-1.0..1.0)).collect()
}

/// Uniform point of the lattice `2^{-k}ℤ` inside `[lo, hi)`.
fn lattice_point(rng: &mut ChaCha8Rng, lo: f64, hi: f64, k: i32) -> f64 {
    let n = ((hi - lo) * f64::from(k).exp2()) as i64;
    lo + rng.gen_range(0..n) as f64 * f64::from(-k).exp2()
}

/// The BMO corpus: cycles through dyadic steps, linear splines, log-like
/// profiles (cumulative Haar sums and truncated logarithms) and random
/// finite wavelet sums. Features stay in the middle half of the window.
pub fn bmo_corpus(spec: &CorpusSpec, window: &Interval, wavelet: WaveletSpec, seed: u64) -> Vec<CorpusFunction> {
    let d = spec.dim;
    let (lo, hi) = (window.left() / 2.0, window.right() / 2.0);
    (0..spec.functions)
        .map(|case| {
            let mut rng = case_rng(seed, case as u64);
            let (name, profile) = match case % 5 {
                0 => {
                    let n = rng.gen_range(2..12);
                    let mut b: Vec<f64> = (0..n).map(|_| lattice_point(&mut rng, lo, hi, 3)).collect();
                    b.sort_by(f64::total_cmp);
                    b.dedup();
                    let values = (0..=b.len()).map(|_| vector(&mut rng, d, 1.0)).collect();
                    ("step", Profile::Step { breakpoints: b, values })
                }
                1 => {
                    let n = rng.gen_range(3..10);
                    let mut k: Vec<f64> = (0..n).map(|_| lattice_point(&mut rng, lo, hi, 2)).collect();
                    k.sort_by(f64::total_cmp);
                    k.dedup();
                    let values = k.iter().map(|_| vector(&mut rng, d, 2.0)).collect();
                    ("spline", Profile::Spline { knots: k, values })
                }
                2 => {
                    let center = lattice_point(&mut rng, lo, hi, 2);
                    let depth = rng.gen_range(3..7);
                    ("log-haar", Profile::LogHaar { center, depth, amplitude: vector(&mut rng, d, 1.0) })
                }
                3 => {
                    let center = lattice_point(&mut rng, lo, hi, 2);
                    let floor = f64::from(-rng.gen_range(3..6)).exp2();
                    ("log", Profile::Log { center, floor, amplitude: vector(&mut rng, d, 1.0) })
                }
                _ => {
                    let region = Interval::new(lo, hi).expect("window halves are dyadic");
                    let pool = dyadics_within(&region, -3);
                    let n = rng.gen_range(1..8);
                    let terms = (0..n)
                        .map(|_| {
                            let j = pool[rng.gen_range(0..pool.len())];
                            CoefficientEntry {
                                scale: j.scale,
                                position: j.position,
                                value: vector(&mut rng, d, j.length().sqrt()),
                            }
                        })
                        .collect();
                    ("wavelet-sum", Profile::WaveletSum { wavelet, terms })
                }
            };
            CorpusFunction { name: format!("{name}-{case:03}"), profile }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct NamedArray {
    pub name: String,
    pub array: CoefficientArray,
}

/// Random arrays on the dyadic intervals of `region` with scales in
/// `min_scale..=max_scale`: each `J` is kept with probability `density` and
/// gets a uniform vector of size at most `ρ(|J|) w(J) |J|^{-1/2}`, the
/// largest an individual coefficient of a unit-norm array can be.
#[allow(clippy::too_many_arguments)]
pub fn random_arrays(
    spec: &CorpusSpec,
    region: &Interval,
    min_scale: i32,
    max_scale: i32,
    w: &WeightModel,
    rho: &impl Growth,
    seed: u64,
) -> LabResult<Vec<NamedArray>> {
    let space = spec.space()?;
    let pool: Vec<DyadicInterval> =
        dyadics_within(region, min_scale).into_iter().filter(|j| j.scale <= max_scale).collect();
    (0..spec.arrays)
        .map(|case| {
            let mut rng = case_rng(seed, 1 << 32 | case as u64);
            let mut a = CoefficientArray::new(space);
            for j in &pool {
                if rng.gen_bool(spec.density.clamp(0.0, 1.0)) {
                    let size = rho.rho(j.length()) * w.positive_mass(&j.interval())? / j.length().sqrt();
                    a.insert(*j, vector(&mut rng, space.dim(), size))?;
                }
            }
            Ok(NamedArray { name: format!("random-{case:03}"), array: a })
        })
        .collect()
}

/// One coefficient `value` at `J`.
pub fn single_array(space: VectorSpace, j: DyadicInterval, value: Vec<f64>) -> LabResult<CoefficientArray> {
    let mut a = CoefficientArray::new(space);
    a.insert(j, value)?;
    Ok(a)
}

/// `f = ψ_J` on the grid: its coefficient array is `δ_J` to rounding.
pub fn single_wavelet(psi: &WaveletModel, j: &DyadicInterval, grid: &Grid) -> LabResult<GridFunction> {
    Ok(dilate_translate(psi, j, grid)?)
}
