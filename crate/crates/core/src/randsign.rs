//! Moments of Rademacher series `(𝔼‖Σ ε_J ξ_J‖^p)^{1/p}`.
//!
//! Up to `exact_threshold` terms the expectation is an exact average over
//! all sign patterns; beyond that it is a Monte Carlo mean whose signs come
//! from a counter-based generator keyed by `(seed, stream, sample index)`,
//! so results do not depend on evaluation order or thread count.

use alloc::vec;
use alloc::vec::Vec;

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dyadic::{DyadicInterval, Interval};
use crate::error::{domain, precondition, Result};
use crate::grid::GridFunction;
use crate::space::VectorSpace;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MomentConfig {
    pub exact_threshold: usize,
    pub mc_samples: usize,
    pub seed: u64,
}

impl Default for MomentConfig {
    fn default() -> Self {
        MomentConfig { exact_threshold: 20, mc_samples: 100_000, seed: 0 }
    }
}

impl MomentConfig {
    /// Forces Monte Carlo for every series.
    pub fn monte_carlo(mc_samples: usize, seed: u64) -> Self {
        MomentConfig { exact_threshold: 0, mc_samples, seed }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "kind", rename_all = "kebab-case"))]
pub enum MomentMode {
    Exact,
    MonteCarlo { samples: usize, seed: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MomentEstimate {
    pub value: f64,
    pub mode: MomentMode,
    /// Standard error of `value`; zero in exact mode.
    pub std_error: f64,
}

/// Mean of `‖S‖^p` with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerMean {
    pub mean: f64,
    pub std_error: f64,
    pub exact: bool,
}

impl PowerMean {
    /// Converts `𝔼‖S‖^p` to `(𝔼‖S‖^p)^{1/p}` with a delta-method error.
    pub fn root(&self, p: f64, config: &MomentConfig) -> MomentEstimate {
        let value = libm::pow(self.mean, 1.0 / p);
        let std_error = if self.exact || self.mean <= 0.0 {
            0.0
        } else {
            self.std_error / (p * libm::pow(self.mean, (p - 1.0) / p))
        };
        let mode = if self.exact {
            MomentMode::Exact
        } else {
            MomentMode::MonteCarlo { samples: config.mc_samples, seed: config.seed }
        };
        MomentEstimate { value, mode, std_error }
    }
}

/// A finite family of vectors `ξ_J` to be multiplied by independent signs.
#[derive(Debug, Clone, PartialEq)]
pub struct SignSeries {
    space: VectorSpace,
    terms: Vec<f64>,
}

impl SignSeries {
    pub fn new(space: VectorSpace) -> Self {
        SignSeries { space, terms: Vec::new() }
    }

    pub fn from_vectors<V: AsRef<[f64]>>(space: VectorSpace, vectors: &[V]) -> Result<Self> {
        let mut s = Self::new(space);
        for v in vectors {
            s.push(v.as_ref())?;
        }
        Ok(s)
    }

    pub fn scalar(coefficients: &[f64]) -> Self {
        SignSeries { space: VectorSpace::scalar(), terms: coefficients.to_vec() }
    }

    pub fn push(&mut self, v: &[f64]) -> Result<()> {
        if v.len() != self.space.dim() {
            return Err(domain!("term of length {} in a {}-dimensional series", v.len(), self.space.dim()));
        }
        self.terms.extend_from_slice(v);
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.terms.len() / self.space.dim()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn space(&self) -> &VectorSpace {
        &self.space
    }

    pub fn term(&self, k: usize) -> &[f64] {
        let d = self.space.dim();
        &self.terms[k * d..(k + 1) * d]
    }

    pub fn flat_terms(&self) -> &[f64] {
        &self.terms
    }

    /// Multiplies term `k` by `lambda[k]`.
    pub fn scaled_terms(&self, lambda: &[f64]) -> SignSeries {
        let d = self.space.dim();
        let mut terms = self.terms.clone();
        for (k, chunk) in terms.chunks_exact_mut(d).enumerate() {
            chunk.iter_mut().for_each(|x| *x *= lambda[k]);
        }
        SignSeries { space: self.space, terms }
    }
}

const GRAY_BITS: usize = 10;

/// `𝔼‖Σ ε_k ξ_k‖^p` for the row-major `n × d` block `terms`.
///
/// `stream` separates independent Monte Carlo runs that share a seed.
pub fn power_mean(space: &VectorSpace, terms: &[f64], p: f64, config: &MomentConfig, stream: u64) -> PowerMean {
    let d = space.dim();
    let n = terms.len() / d;
    if n == 0 {
        return PowerMean { mean: 0.0, std_error: 0.0, exact: true };
    }
    if n <= config.exact_threshold {
        PowerMean { mean: exact_power_mean(space, terms, n, p), std_error: 0.0, exact: true }
    } else {
        monte_carlo_power_mean(space, terms, n, p, config, stream)
    }
}

fn exact_power_mean(space: &VectorSpace, terms: &[f64], n: usize, p: f64) -> f64 {
    let d = space.dim();
    // ‖-S‖ = ‖S‖, so the first sign stays +
    let free = n - 1;
    let inner = free.min(GRAY_BITS);
    let outer = free - inner;
    let term = |k: usize| &terms[k * d..(k + 1) * d];
    let mut sum = vec![0.0; d];
    let mut flipped = vec![false; inner];
    let mut total = 0.0;
    for hi in 0u64..(1u64 << outer) {
        sum.copy_from_slice(term(0));
        for k in 0..inner {
            add(&mut sum, term(1 + k), 1.0);
        }
        for k in 0..outer {
            let s = if hi >> k & 1 == 1 { -1.0 } else { 1.0 };
            add(&mut sum, term(1 + inner + k), s);
        }
        flipped.iter_mut().for_each(|f| *f = false);
        let mut block = space.norm_pow(&sum, p);
        for g in 1u64..(1u64 << inner) {
            let bit = g.trailing_zeros() as usize;
            let s = if flipped[bit] { 2.0 } else { -2.0 };
            flipped[bit] = !flipped[bit];
            add(&mut sum, term(1 + bit), s);
            block += space.norm_pow(&sum, p);
        }
        total += block;
    }
    total / libm::ldexp(1.0, free as i32)
}

#[inline]
fn add(acc: &mut [f64], v: &[f64], s: f64) {
    for (a, x) in acc.iter_mut().zip(v) {
        *a += s * x;
    }
}

fn sample_rng(seed: u64, stream: u64, index: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&stream.to_le_bytes());
    key[16..24].copy_from_slice(&index.to_le_bytes());
    ChaCha8Rng::from_seed(key)
}

fn monte_carlo_power_mean(
    space: &VectorSpace,
    terms: &[f64],
    n: usize,
    p: f64,
    config: &MomentConfig,
    stream: u64,
) -> PowerMean {
    let d = space.dim();
    let samples = config.mc_samples.max(2);
    let mut sum = vec![0.0; d];
    let (mut mean, mut m2) = (0.0, 0.0);
    for i in 0..samples {
        let mut rng = sample_rng(config.seed, stream, i as u64);
        sum.iter_mut().for_each(|x| *x = 0.0);
        let mut bits = 0u64;
        for k in 0..n {
            if k % 64 == 0 {
                bits = rng.next_u64();
            }
            let s = if bits >> (k % 64) & 1 == 1 { -1.0 } else { 1.0 };
            add(&mut sum, &terms[k * d..(k + 1) * d], s);
        }
        let x = space.norm_pow(&sum, p);
        let delta = x - mean;
        mean += delta / (i + 1) as f64;
        m2 += delta * (x - mean);
    }
    let var = m2 / (samples - 1) as f64;
    PowerMean { mean, std_error: libm::sqrt(var / samples as f64), exact: false }
}

fn check_p(p: f64) -> Result<()> {
    if !(p >= 1.0 && p.is_finite()) {
        return Err(domain!("moment exponent p = {p} must lie in [1, ∞)"));
    }
    Ok(())
}

/// `(𝔼‖Σ ε_J ξ_J‖^p)^{1/p}`.
pub fn moment(s: &SignSeries, p: f64, config: &MomentConfig) -> Result<MomentEstimate> {
    check_p(p)?;
    if s.is_empty() {
        return Err(domain!("moment of an empty sign series"));
    }
    Ok(power_mean(&s.space, &s.terms, p, config, 0).root(p, config))
}

/// Ratio of the scalar moment to the `ℓ²` norm of the coefficients.
pub fn khintchine_compare(lambda: &[f64], p: f64, config: &MomentConfig) -> Result<f64> {
    let l2 = libm::sqrt(lambda.iter().map(|x| x * x).sum());
    let m = moment(&SignSeries::scalar(lambda), p, config)?;
    Ok(m.value / l2)
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ComparisonCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub pass: bool,
}

/// Rounding allowance for inequalities that hold exactly in exact mode.
pub const EXACT_SLACK: f64 = 1e-12;

/// Contraction principle: `lhs` is the moment of `{λ_J ξ_J}`, `rhs` that of `{ξ_J}`.
pub fn contraction_check(s: &SignSeries, lambda: &[f64], p: f64, config: &MomentConfig) -> Result<ComparisonCheck> {
    if lambda.len() != s.len() {
        return Err(precondition!("{} multipliers for {} terms", lambda.len(), s.len()));
    }
    if let Some(l) = lambda.iter().find(|l| !(l.abs() <= 1.0)) {
        return Err(precondition!("multiplier {l} outside [-1, 1]"));
    }
    let lhs = moment(&s.scaled_terms(lambda), p, config)?;
    let rhs = moment(s, p, config)?;
    let pass = if lhs.mode == MomentMode::Exact && rhs.mode == MomentMode::Exact {
        lhs.value <= rhs.value * (1.0 + EXACT_SLACK)
    } else {
        let se = libm::sqrt(lhs.std_error * lhs.std_error + rhs.std_error * rhs.std_error);
        lhs.value <= rhs.value + 3.0 * se
    };
    Ok(ComparisonCheck { lhs: lhs.value, rhs: rhs.value, pass })
}

/// `(𝔼‖S‖^p)^{1/p} / (𝔼‖S‖^r)^{1/r}`.
pub fn kahane_ratio(s: &SignSeries, p: f64, r: f64, config: &MomentConfig) -> Result<f64> {
    Ok(moment(s, p, config)?.value / moment(s, r, config)?.value)
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SteinCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
}

/// Randomized averaging over a chain `J_1 ⊋ J_2 ⊋ …` inside `I`:
/// `lhs` uses `1_J ⟨f_J⟩_J`, `rhs` uses `1_J f_J`.
pub fn stein_averaging_check(
    functions: &[GridFunction],
    chain: &[DyadicInterval],
    i: &Interval,
    p: f64,
    config: &MomentConfig,
) -> Result<SteinCheck> {
    if !(p > 1.0 && p.is_finite()) {
        return Err(domain!("averaging inequality needs p in (1, ∞), got {p}"));
    }
    if functions.len() != chain.len() || chain.is_empty() {
        return Err(precondition!("need one function per interval"));
    }
    for (a, j) in chain.iter().enumerate() {
        if !i.contains(&j.interval()) {
            return Err(precondition!("{j} is not inside {i}"));
        }
        if chain[..a].iter().any(|k| k == j || !k.is_nested_with(j)) {
            return Err(precondition!("intervals must be distinct and nested"));
        }
    }
    let grid = *functions[0].grid();
    let space = *functions[0].space();
    if functions.iter().any(|f| *f.grid() != grid || *f.space() != space) {
        return Err(precondition!("functions must share grid and value space"));
    }
    let ranges = chain
        .iter()
        .map(|j| grid.cell_range(&j.interval()))
        .collect::<Result<Vec<_>>>()?;
    let means: Vec<Vec<f64>> = functions.iter().zip(&ranges).map(|(f, r)| f.average_cells(r)).collect();
    let d = space.dim();
    let (mut lhs, mut rhs) = (0.0, 0.0);
    let mut avg_terms = Vec::with_capacity(chain.len() * d);
    let mut raw_terms = Vec::with_capacity(chain.len() * d);
    for c in grid.cell_range(i)? {
        avg_terms.clear();
        raw_terms.clear();
        for (k, r) in ranges.iter().enumerate() {
            if r.contains(&c) {
                avg_terms.extend_from_slice(&means[k]);
                raw_terms.extend_from_slice(functions[k].value(c));
            }
        }
        lhs += power_mean(&space, &avg_terms, p, config, 2 * c as u64).mean;
        rhs += power_mean(&space, &raw_terms, p, config, 2 * c as u64 + 1).mean;
    }
    let step = grid.step();
    let lhs = libm::pow(lhs * step, 1.0 / p);
    let rhs = libm::pow(rhs * step, 1.0 / p);
    let ratio = if rhs > 0.0 { lhs / rhs } else if lhs == 0.0 { 0.0 } else { f64::INFINITY };
    Ok(SteinCheck { lhs, rhs, ratio })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Grid;
    use proptest::prelude::*;

    fn exact() -> MomentConfig {
        MomentConfig::default()
    }

    /// Independent oracle: sum over all `2^n` sign patterns.
    fn brute_power_mean(space: &VectorSpace, vectors: &[Vec<f64>], p: f64) -> f64 {
        let n = vectors.len();
        let d = space.dim();
        let mut total = 0.0;
        for pattern in 0u32..(1 << n) {
            let mut s = vec![0.0; d];
            for (k, v) in vectors.iter().enumerate() {
                let e = if pattern >> k & 1 == 1 { -1.0 } else { 1.0 };
                for (a, x) in s.iter_mut().zip(v) {
                    *a += e * x;
                }
            }
            total += libm::pow(space.norm(&s), p);
        }
        total / (1u64 << n) as f64
    }

    #[test]
    fn single_term_moment_is_its_norm() {
        let x = VectorSpace::new(3, 1.5).unwrap();
        let s = SignSeries::from_vectors(x, &[[1.0, -2.0, 0.5]]).unwrap();
        for p in [1.0, 2.0, 3.7] {
            let m = moment(&s, p, &exact()).unwrap();
            assert!((m.value - x.norm(&[1.0, -2.0, 0.5])).abs() < 1e-14);
            assert_eq!(m.mode, MomentMode::Exact);
        }
    }

    #[test]
    fn orthogonal_unit_vectors() {
        let x = VectorSpace::new(2, 2.0).unwrap();
        let s = SignSeries::from_vectors(x, &[[1.0, 0.0], [0.0, 1.0]]).unwrap();
        assert!((moment(&s, 2.0, &exact()).unwrap().value - libm::sqrt(2.0)).abs() < 1e-15);
    }

    #[test]
    fn three_ones_fourth_moment() {
        // oracle: over the 8 patterns the sum is ±3 twice and ±1 six times
        let oracle = brute_power_mean(&VectorSpace::scalar(), &[vec![1.0], vec![1.0], vec![1.0]], 4.0);
        assert_eq!(oracle, 21.0);
        let m = moment(&SignSeries::scalar(&[1.0, 1.0, 1.0]), 4.0, &exact()).unwrap();
        assert!((m.value - libm::pow(21.0, 0.25)).abs() < 1e-14);
    }

    #[test]
    fn gray_code_blocks_match_brute_force() {
        let x = VectorSpace::new(3, 3.0).unwrap();
        let vectors: Vec<Vec<f64>> = (0..13)
            .map(|k| (0..3).map(|i| libm::sin((k * 3 + i) as f64 * 1.7) * (1.0 + k as f64)).collect())
            .collect();
        let s = SignSeries::from_vectors(x, &vectors).unwrap();
        for p in [1.0, 2.5] {
            let want = brute_power_mean(&x, &vectors, p);
            let got = power_mean(&x, s.flat_terms(), p, &exact(), 0).mean;
            assert!((got - want).abs() < 1e-12 * want, "{got} vs {want}");
        }
    }

    #[test]
    fn empty_series_is_an_error() {
        assert!(moment(&SignSeries::new(VectorSpace::scalar()), 2.0, &exact()).is_err());
        assert!(moment(&SignSeries::scalar(&[1.0]), 0.5, &exact()).is_err());
    }

    #[test]
    fn khintchine_examples() {
        let lam = [0.3, -1.2, 2.0, 0.7];
        assert!((khintchine_compare(&lam, 2.0, &exact()).unwrap() - 1.0).abs() < 1e-14);
        assert!((khintchine_compare(&[3.0], 1.3, &exact()).unwrap() - 1.0).abs() < 1e-15);
        // oracle: E|S_10| = 10·C(10,5)/2^10
        let ones = [1.0; 10];
        let want = 10.0 * 252.0 / 1024.0 / libm::sqrt(10.0);
        let got = khintchine_compare(&ones, 1.0, &exact()).unwrap();
        assert!((got - want).abs() < 1e-14);
        assert!(got > 0.77 && got < 1.0);
    }

    #[test]
    fn contraction_examples() {
        let x = VectorSpace::new(5, 3.0).unwrap();
        let vectors: Vec<Vec<f64>> = (0..10)
            .map(|k| (0..5).map(|i| libm::cos((7 * k + i) as f64)).collect())
            .collect();
        let s = SignSeries::from_vectors(x, &vectors).unwrap();
        let same = contraction_check(&s, &[1.0; 10], 3.0, &exact()).unwrap();
        assert_eq!(same.lhs, same.rhs);
        let zero = contraction_check(&s, &[0.0; 10], 3.0, &exact()).unwrap();
        assert!(zero.lhs == 0.0 && zero.pass);
        let lam: Vec<f64> = (0..10).map(|k| libm::sin(k as f64 * 2.3)).collect();
        assert!(contraction_check(&s, &lam, 3.0, &exact()).unwrap().pass);
        assert!(contraction_check(&s, &[1.5; 10], 3.0, &exact()).is_err());
    }

    #[test]
    fn kahane_examples() {
        let s = SignSeries::scalar(&[2.5]);
        assert!((kahane_ratio(&s, 4.0, 1.0, &exact()).unwrap() - 1.0).abs() < 1e-15);
        let x = VectorSpace::new(4, 2.0).unwrap();
        let vectors: Vec<Vec<f64>> = (0..12)
            .map(|k| (0..4).map(|i| libm::sin((5 * k + 3 * i) as f64 + 0.1)).collect())
            .collect();
        let s = SignSeries::from_vectors(x, &vectors).unwrap();
        assert_eq!(kahane_ratio(&s, 3.0, 3.0, &exact()).unwrap(), 1.0);
        let r = kahane_ratio(&s, 4.0, 2.0, &exact()).unwrap();
        assert!(r >= 1.0 && r <= libm::sqrt(3.0));
    }

    #[test]
    fn monte_carlo_is_deterministic_and_close() {
        let vectors: Vec<f64> = (0..16).map(|k| 1.0 / (1.0 + k as f64)).collect();
        let s = SignSeries::scalar(&vectors);
        let cfg = MomentConfig::monte_carlo(20_000, 7);
        let a = moment(&s, 3.0, &cfg).unwrap();
        let b = moment(&s, 3.0, &cfg).unwrap();
        assert_eq!(a, b);
        let e = moment(&s, 3.0, &exact()).unwrap();
        assert!((a.value - e.value).abs() <= 4.0 * a.std_error);
        assert!(matches!(a.mode, MomentMode::MonteCarlo { samples: 20_000, seed: 7 }));
        let c = moment(&s, 3.0, &MomentConfig::monte_carlo(20_000, 8)).unwrap();
        assert_ne!(a.value, c.value);
    }

    fn haar_chain() -> Vec<DyadicInterval> {
        (0..4).map(|k| DyadicInterval { scale: -k, position: 0 }).collect()
    }

    #[test]
    fn stein_constant_functions_give_equality() {
        let grid = Grid::new(Interval::new(0.0, 1.0).unwrap(), 6).unwrap();
        let fs: Vec<GridFunction> = (0..4)
            .map(|k| GridFunction::scalar_from_fn(grid, move |_| 1.0 + k as f64))
            .collect();
        let r = stein_averaging_check(&fs, &haar_chain(), &grid.window(), 2.5, &exact()).unwrap();
        assert!((r.lhs - r.rhs).abs() < 1e-14 * r.rhs);
    }

    #[test]
    fn stein_mean_zero_single_interval() {
        let grid = Grid::new(Interval::new(0.0, 1.0).unwrap(), 6).unwrap();
        let f = GridFunction::scalar_from_fn(grid, |x| libm::cos(2.0 * core::f64::consts::PI * x));
        let j = DyadicInterval { scale: 0, position: 0 };
        let r = stein_averaging_check(&[f], &[j], &grid.window(), 3.0, &exact()).unwrap();
        assert!(r.lhs < 1e-12 && r.rhs > 0.1);
    }

    #[test]
    fn stein_scalar_p2_is_a_projection() {
        let grid = Grid::new(Interval::new(0.0, 1.0).unwrap(), 8).unwrap();
        for seed in 0..5u64 {
            let fs: Vec<GridFunction> = (0..4)
                .map(|k| {
                    GridFunction::scalar_from_fn(grid, move |x| {
                        libm::sin(x * (3.0 + k as f64 + seed as f64) * 7.1) + 0.3 * seed as f64
                    })
                })
                .collect();
            let r = stein_averaging_check(&fs, &haar_chain(), &grid.window(), 2.0, &exact()).unwrap();
            assert!(r.ratio <= 1.0 + 1e-9, "ratio {}", r.ratio);
        }
    }

    #[test]
    fn stein_rejects_non_nested() {
        let grid = Grid::new(Interval::new(0.0, 1.0).unwrap(), 4).unwrap();
        let f = GridFunction::scalar_from_fn(grid, |x| x);
        let chain = [DyadicInterval { scale: -1, position: 0 }, DyadicInterval { scale: -1, position: 1 }];
        let err = stein_averaging_check(&[f.clone(), f], &chain, &grid.window(), 2.0, &exact());
        assert!(matches!(err, Err(crate::Error::Precondition(_))));
    }

    proptest! {
        #[test]
        fn dominates_every_term_and_is_monotone(
            coeffs in proptest::collection::vec(-3.0f64..3.0, 1..9),
            p in 1.0f64..4.0,
        ) {
            let x = VectorSpace::new(1, 2.0).unwrap();
            let s = SignSeries::from_vectors(x, &coeffs.iter().map(|c| [*c]).collect::<Vec<_>>()).unwrap();
            let m = moment(&s, p, &exact()).unwrap().value;
            let biggest = coeffs.iter().fold(0.0f64, |a, c| a.max(c.abs()));
            prop_assert!(m >= biggest * (1.0 - 1e-12));
            let m2 = moment(&s, p + 0.5, &exact()).unwrap().value;
            prop_assert!(m2 >= m * (1.0 - 1e-12));
        }

        #[test]
        fn sign_flips_do_not_matter(
            coeffs in proptest::collection::vec(-3.0f64..3.0, 2..10),
            mask in 0u32..512,
        ) {
            let s = SignSeries::scalar(&coeffs);
            let flipped: Vec<f64> = coeffs.iter().enumerate()
                .map(|(k, c)| if mask >> k & 1 == 1 { -c } else { *c }).collect();
            let a = moment(&s, 3.0, &exact()).unwrap().value;
            let b = moment(&SignSeries::scalar(&flipped), 3.0, &exact()).unwrap().value;
            prop_assert!((a - b).abs() <= 1e-12 * a.max(1e-300));
        }

        #[test]
        fn hilbert_p2_identity(
            raw in proptest::collection::vec(-2.0f64..2.0, 3..24),
        ) {
            let x = VectorSpace::new(3, 2.0).unwrap();
            let vectors: Vec<&[f64]> = raw.chunks_exact(3).collect();
            let s = SignSeries::from_vectors(x, &vectors).unwrap();
            let m = moment(&s, 2.0, &exact()).unwrap().value;
            let sq: f64 = raw[..vectors.len() * 3].iter().map(|v| v * v).sum();
            prop_assert!((m * m - sq).abs() <= 1e-12 * sq.max(1e-300));
        }
    }
}
