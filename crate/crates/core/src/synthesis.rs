//! Annular decomposition of a function around an interval, and the
//! renormalized wavelet series `f_I = f_1 + f_2 + f_3` built from a
//! coefficient array.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::Range;

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dyadic::{DyadicInterval, Interval};
use crate::error::{precondition, Error, Result};
use crate::grid::{Grid, GridFunction};
use crate::growth::Growth;
use crate::norms::CoefficientArray;
use crate::randsign::ComparisonCheck;
use crate::space::VectorSpace;
use crate::wavelets::{check_resolvable, WaveletModel};
use crate::weights::WeightModel;

/// Exponent of the local `L^s` bound on `f_3`.
pub const F3_EXPONENT: f64 = 1.1;

#[derive(Debug, Clone, PartialEq)]
pub struct AnnularPiece {
    pub ell: u32,
    pub function: GridFunction,
}

fn feasible_dilation(i: &Interval, window: &Interval) -> u32 {
    let mut ell = 0;
    while let Ok(d) = i.dilate(ell + 1) {
        if !window.contains(&d) {
            break;
        }
        ell += 1;
    }
    ell
}

fn dilate_within(i: &Interval, ell: u32, window: &Interval) -> Result<Interval> {
    match i.dilate(ell) {
        Ok(d) if window.contains(&d) => Ok(d),
        _ => Err(Error::Truncation { requested: ell, feasible: feasible_dilation(i, window) }),
    }
}

/// `f_1 = (f − ⟨f⟩_I)1_{2I}` and `f_ℓ = (f − ⟨f⟩_I)1_{2^ℓI ∖ 2^{ℓ−1}I}`
/// for `ℓ = 1..=ell_max`.
pub fn annular_decompose(f: &GridFunction, i: &Interval, ell_max: u32) -> Result<Vec<AnnularPiece>> {
    let grid = f.grid();
    let window = grid.window();
    if ell_max == 0 {
        return Err(precondition!("annular decomposition needs ℓ_max ≥ 1"));
    }
    let mean = f.average(i)?;
    let d = f.dim();
    let mut out = Vec::with_capacity(ell_max as usize);
    let mut inner: Range<usize> = 0..0;
    for ell in 1..=ell_max {
        let cells = grid.cell_range(&dilate_within(i, ell, &window)?)?;
        let mut g = GridFunction::zeros(*grid, *f.space());
        let s = g.samples_mut();
        for c in cells.clone().filter(|c| !inner.contains(c)) {
            for k in 0..d {
                s[c * d + k] = f.value(c)[k] - mean[k];
            }
        }
        out.push(AnnularPiece { ell, function: g });
        inner = cells;
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct OscillationCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
}

/// `lhs = ∫_{2^ℓI} ‖f − ⟨f⟩_I‖`, `rhs = Σ_{k=1}^ℓ 2^{ℓ−k} w(2^kI) ρ(2^k|I|)`.
/// The caller normalizes `f` to BMO norm at most one.
pub fn oscillation_growth_check(
    f: &GridFunction,
    w: &WeightModel,
    rho: &impl Growth,
    i: &Interval,
    ell: u32,
) -> Result<OscillationCheck> {
    if ell == 0 {
        return Err(precondition!("oscillation growth needs ℓ ≥ 1"));
    }
    let window = f.grid().window();
    let big = dilate_within(i, ell, &window)?;
    let mean = f.average(i)?;
    let space = f.space();
    let mut diff = vec![0.0; f.dim()];
    let mut lhs = 0.0;
    for c in f.grid().cell_range(&big)? {
        for ((d, v), m) in diff.iter_mut().zip(f.value(c)).zip(&mean) {
            *d = v - m;
        }
        lhs += space.norm(&diff);
    }
    lhs *= f.grid().step();
    let mut rhs = 0.0;
    for k in 1..=ell {
        let ik = i.dilate(k)?;
        rhs += libm::ldexp(w.mass(&ik)? * rho.rho(ik.length()), (ell - k) as i32);
    }
    let ratio = if lhs == 0.0 { 0.0 } else { lhs / rhs };
    Ok(OscillationCheck { lhs, rhs, ratio })
}

/// Relative allowance for the Hölder weight inequality.
pub const HOLDER_TOLERANCE: f64 = 1e-9;

/// `(|J|/w(J))^{1/p'} ≤ |J|^{-1} ∫_J w^{-1/p'}`; exact, also for midpoint sums.
pub fn holder_weight_check(w: &WeightModel, j: &Interval, p: f64) -> Result<ComparisonCheck> {
    if !(p > 1.0 && p.is_finite()) {
        return Err(Error::Domain(alloc::format!("Hölder check needs p ∈ (1, ∞), got {p}")));
    }
    let e = 1.0 - 1.0 / p;
    let len = j.length();
    let rhs = w.integrate_power(j, -e)? / len;
    let lhs = libm::pow(len / w.positive_mass(j)?, e);
    Ok(ComparisonCheck { lhs, rhs, pass: lhs <= rhs * (1.0 + HOLDER_TOLERANCE) })
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct IntervalClassification {
    /// `2|J| > |I|`.
    pub large: Vec<DyadicInterval>,
    /// `2|J| ≤ |I|` and `2J ∩ 2I = ∅`.
    pub far: Vec<DyadicInterval>,
    /// `2|J| ≤ |I|` and `2J ∩ 2I ≠ ∅`.
    pub near: Vec<DyadicInterval>,
}

impl IntervalClassification {
    pub fn len(&self) -> usize {
        self.large.len() + self.far.len() + self.near.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Class {
    Large,
    Far,
    Near,
}

/// Exact in atom arithmetic. `2J` and `2I` are the concentric doubles.
fn class_of(i: &Interval, double_i: &Interval, j: &DyadicInterval) -> Class {
    let jv = j.interval();
    if 2 * jv.length_atoms() > i.length_atoms() {
        return Class::Large;
    }
    let lo = jv.lo_atoms() - jv.length_atoms() / 2;
    let hi = jv.hi_atoms() + jv.length_atoms() / 2;
    if hi <= double_i.lo_atoms() || lo >= double_i.hi_atoms() {
        Class::Far
    } else {
        Class::Near
    }
}

fn double(i: &Interval) -> Result<Interval> {
    // 2I may leave the grid but is still an exact atom interval
    let h = i.length_atoms() / 2;
    if i.length_atoms() % 2 != 0 {
        return Err(Error::Alignment(alloc::format!("2·{i} is not representable")));
    }
    Interval::from_atoms(i.lo_atoms() - h, i.hi_atoms() + h)
}

pub fn classify(i: &Interval, candidates: &[DyadicInterval]) -> Result<IntervalClassification> {
    let di = double(i)?;
    let mut out = IntervalClassification::default();
    for j in candidates {
        match class_of(i, &di, j) {
            Class::Large => out.large.push(*j),
            Class::Far => out.far.push(*j),
            Class::Near => out.near.push(*j),
        }
    }
    Ok(out)
}

/// Which part of a coefficient array enters the series: scales
/// `min_scale..=max_scale`, and only `J ⊆ region`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Cutoffs {
    pub min_scale: i32,
    pub max_scale: i32,
    pub region: Interval,
}

impl Cutoffs {
    pub fn candidates(&self, a: &CoefficientArray) -> Vec<DyadicInterval> {
        a.within(&self.region, self.min_scale)
            .into_iter()
            .map(|(j, _)| j)
            .filter(|j| j.scale <= self.max_scale)
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PieceNorms {
    pub f1_sup: f64,
    pub f2_sup: f64,
    /// `(∫_I ‖f_3‖^s)^{1/s}` with `s = F3_EXPONENT`.
    pub f3_ls: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SynthesisResult {
    pub interval: Interval,
    pub cutoffs: Cutoffs,
    pub classification: IntervalClassification,
    /// Pieces live on the full grid and vanish outside `interval`.
    pub f1: GridFunction,
    pub f2: GridFunction,
    pub f3: GridFunction,
    pub f_i: GridFunction,
    /// `c_J = ψ_J(x_I)` for the large intervals; all other `c_J` are zero.
    pub renormalization: Vec<(DyadicInterval, f64)>,
    /// `⟨f_I⟩_I`, the additive constant left free by the construction.
    pub mean: Vec<f64>,
    pub norms: PieceNorms,
    /// `(k, ‖Σ_{J ∈ near, scale < k} a_J ψ_J‖_{L^s(I)})`: fine-scale tails of `f_3`.
    pub f3_tails: Vec<(i32, f64)>,
    /// Entries of the array left out by the cutoffs.
    pub omitted: usize,
    pub hypotheses_met: bool,
}

impl SynthesisResult {
    /// Per-piece ratios `|I|‖f_1‖_∞/(w(I)η)`, `|I|‖f_2‖_∞/(w(I)ρ)` and
    /// `|I|^{1/s'}‖f_3‖_{L^s(I)}/(w(I)ρ)`.
    pub fn piece_ratios(&self, w: &WeightModel, rho: &impl Growth, eta: &impl Growth) -> Result<[f64; 3]> {
        let len = self.interval.length();
        let mass = w.positive_mass(&self.interval)?;
        let s_dual = F3_EXPONENT / (F3_EXPONENT - 1.0);
        Ok([
            len * self.norms.f1_sup / (mass * eta.rho(len)),
            len * self.norms.f2_sup / (mass * rho.rho(len)),
            libm::pow(len, 1.0 / s_dual) * self.norms.f3_ls / (mass * rho.rho(len)),
        ])
    }
}

/// Cell whose left endpoint is the centre of `i`.
fn center_cell(grid: &Grid, i: &Interval) -> Result<usize> {
    let c = (i.lo_atoms() + i.hi_atoms()) / 2;
    match grid.cell_of_atom(c) {
        Some(k) if grid.cell_interval(k).lo_atoms() == c => Ok(k),
        _ => Err(Error::Alignment(alloc::format!("centre of {i} is not a grid point"))),
    }
}

/// `ψ_J` sampled on the cells of `cells` that meet its support.
fn term_samples(psi: &WaveletModel, j: &DyadicInterval, grid: &Grid, cells: &Range<usize>) -> Result<(Range<usize>, Vec<f64>)> {
    let s = psi.support_cells(j, grid)?;
    let r = s.start.max(cells.start)..s.end.min(cells.end);
    if r.start >= r.end {
        return Ok((0..0, Vec::new()));
    }
    let v = psi.sample_psi_j(j, grid, r.clone())?;
    Ok((r, v))
}

fn accumulate(target: &mut [f64], d: usize, range: &Range<usize>, values: &[f64], a: &[f64]) {
    for (c, v) in range.clone().zip(values) {
        for k in 0..d {
            target[c * d + k] += a[k] * v;
        }
    }
}

fn ls_norm(space: &VectorSpace, samples: &[f64], cells: &Range<usize>, step: f64, s: f64) -> f64 {
    let d = space.dim();
    let acc: f64 = cells.clone().map(|c| space.norm_pow(&samples[c * d..(c + 1) * d], s)).sum();
    libm::pow(acc * step, 1.0 / s)
}

fn sup_norm(space: &VectorSpace, samples: &[f64], cells: &Range<usize>) -> f64 {
    let d = space.dim();
    cells.clone().map(|c| space.norm(&samples[c * d..(c + 1) * d])).fold(0.0, f64::max)
}

/// Evaluates the renormalized series of `a` on `i`:
/// `f_1 = Σ_large a_J[ψ_J − ψ_J(x_I)]`, `f_2 = Σ_far a_J ψ_J`, `f_3 = Σ_near a_J ψ_J`.
pub fn synthesize(
    a: &CoefficientArray,
    psi: &WaveletModel,
    grid: &Grid,
    i: &Interval,
    cutoffs: &Cutoffs,
) -> Result<SynthesisResult> {
    if cutoffs.min_scale > cutoffs.max_scale {
        return Err(precondition!("empty scale range {}..={}", cutoffs.min_scale, cutoffs.max_scale));
    }
    let cells = grid.cell_range(i)?;
    let x_cell = center_cell(grid, i)?;
    let candidates = cutoffs.candidates(a);
    for j in &candidates {
        check_resolvable(j, grid)?;
    }
    let classification = classify(i, &candidates)?;
    let space = *a.space();
    let d = space.dim();
    let n = grid.cell_count() * d;
    let (mut f1, mut f2, mut f3) = (vec![0.0; n], vec![0.0; n], vec![0.0; n]);

    let mut shift = vec![0.0; d];
    let mut renormalization = Vec::with_capacity(classification.large.len());
    for j in &classification.large {
        let aj = a.get(j).expect("candidate from the array");
        let (r, v) = term_samples(psi, j, grid, &cells)?;
        accumulate(&mut f1, d, &r, &v, aj);
        let c = psi.psi_j_at_cell(j, grid, x_cell)?;
        renormalization.push((*j, c));
        for k in 0..d {
            shift[k] += aj[k] * c;
        }
    }
    for c in cells.clone() {
        for k in 0..d {
            f1[c * d + k] -= shift[k];
        }
    }
    for j in &classification.far {
        let (r, v) = term_samples(psi, j, grid, &cells)?;
        accumulate(&mut f2, d, &r, &v, a.get(j).expect("candidate"));
    }

    // f_3 coarse to fine, recording the L^s norm of what remains below each scale
    let step = grid.step();
    let mut near = classification.near.clone();
    near.sort();
    let mut f3_tails = Vec::new();
    let mut tail = vec![0.0; n];
    for j in near.iter().rev() {
        let (r, v) = term_samples(psi, j, grid, &cells)?;
        let aj = a.get(j).expect("candidate");
        accumulate(&mut f3, d, &r, &v, aj);
        accumulate(&mut tail, d, &r, &v, aj);
    }
    let mut remaining = tail;
    let mut idx = 0;
    while idx < near.len() {
        let scale = near[idx].scale;
        f3_tails.push((scale + 1, ls_norm(&space, &remaining, &cells, step, F3_EXPONENT)));
        while idx < near.len() && near[idx].scale == scale {
            let j = near[idx];
            let (r, v) = term_samples(psi, &j, grid, &cells)?;
            let aj: Vec<f64> = a.get(&j).expect("candidate").iter().map(|x| -x).collect();
            accumulate(&mut remaining, d, &r, &v, &aj);
            idx += 1;
        }
    }

    let mut total = vec![0.0; n];
    for c in cells.clone() {
        for k in c * d..(c + 1) * d {
            total[k] = f1[k] + f2[k] + f3[k];
        }
    }
    let norms = PieceNorms {
        f1_sup: sup_norm(&space, &f1, &cells),
        f2_sup: sup_norm(&space, &f2, &cells),
        f3_ls: ls_norm(&space, &f3, &cells, step, F3_EXPONENT),
    };
    let f_i = GridFunction::new(*grid, space, total)?;
    let mean = f_i.average(i)?;
    Ok(SynthesisResult {
        interval: *i,
        cutoffs: *cutoffs,
        omitted: a.len() - candidates.len(),
        classification,
        f1: GridFunction::new(*grid, space, f1)?,
        f2: GridFunction::new(*grid, space, f2)?,
        f3: GridFunction::new(*grid, space, f3)?,
        f_i,
        renormalization,
        mean,
        norms,
        f3_tails,
        hypotheses_met: psi.satisfies_hypotheses(),
    })
}

/// `max_{x ∈ I} ‖(f_{I'} − f_I)(x) − ⟨f_{I'} − f_I⟩_I‖` for `I ⊆ I'`.
#[allow(clippy::too_many_arguments)]
pub fn constancy_check(
    a: &CoefficientArray,
    psi: &WaveletModel,
    grid: &Grid,
    i: &Interval,
    i_outer: &Interval,
    cutoffs: &Cutoffs,
    cutoffs_outer: &Cutoffs,
) -> Result<f64> {
    if cutoffs != cutoffs_outer {
        return Err(precondition!("the two series use different cutoffs"));
    }
    if !i_outer.contains(i) {
        return Err(precondition!("{i} is not contained in {i_outer}"));
    }
    let inner = synthesize(a, psi, grid, i, cutoffs)?;
    let outer = synthesize(a, psi, grid, i_outer, cutoffs)?;
    let cells = grid.cell_range(i)?;
    let d = a.space().dim();
    let m = cells.len() as f64;
    let diff = |c: usize, k: usize| outer.f_i.value(c)[k] - inner.f_i.value(c)[k];
    let mean: Vec<f64> = (0..d).map(|k| cells.clone().map(|c| diff(c, k)).sum::<f64>() / m).collect();
    let mut row = vec![0.0; d];
    let mut worst: f64 = 0.0;
    for c in cells {
        for k in 0..d {
            row[k] = diff(c, k) - mean[k];
        }
        worst = worst.max(a.space().norm(&row));
    }
    Ok(worst)
}

/// `‖a_J‖ ≤ ρ(|J|) w(J) |J|^{-1/2}` for the array rescaled to unit Carleson norm.
pub fn individual_bound_check(
    a: &CoefficientArray,
    w: &WeightModel,
    rho: &impl Growth,
    j: &DyadicInterval,
    carleson_value: f64,
    tolerance: f64,
) -> Result<ComparisonCheck> {
    let norm = a.get(j).map_or(0.0, |v| a.space().norm(v));
    let lhs = if norm == 0.0 { 0.0 } else { norm / carleson_value };
    let len = j.length();
    let rhs = rho.rho(len) * w.positive_mass(&j.interval())? / libm::sqrt(len);
    Ok(ComparisonCheck { lhs, rhs, pass: lhs <= rhs * (1.0 + tolerance) })
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct UnconditionalityProbe {
    /// `‖f_3‖_{L^s(I)}`.
    pub full: f64,
    /// Largest `L^s(I)` norm of a random sub-sum, its complement, or a
    /// partial sum in random order.
    pub worst: f64,
    pub trials: usize,
}

/// Re-sums `f_3` over random subsets (and their complements) and random
/// orderings; unconditional convergence keeps `worst / full` bounded.
pub fn unconditionality_probe(
    a: &CoefficientArray,
    psi: &WaveletModel,
    result: &SynthesisResult,
    trials: usize,
    seed: u64,
) -> Result<UnconditionalityProbe> {
    let grid = result.f3.grid();
    let cells = grid.cell_range(&result.interval)?;
    let space = *a.space();
    let d = space.dim();
    let step = grid.step();
    let terms: Vec<(Range<usize>, Vec<f64>, &[f64])> = result
        .classification
        .near
        .iter()
        .map(|j| term_samples(psi, j, grid, &cells).map(|(r, v)| (r, v, a.get(j).expect("classified term"))))
        .collect::<Result<_>>()?;
    let n = grid.cell_count() * d;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..trials {
        let (mut sub, mut rest) = (vec![0.0; n], vec![0.0; n]);
        for (r, v, aj) in &terms {
            let target = if rng.next_u32() & 1 == 0 { &mut sub } else { &mut rest };
            accumulate(target, d, r, v, aj);
        }
        worst = worst.max(ls_norm(&space, &sub, &cells, step, F3_EXPONENT));
        worst = worst.max(ls_norm(&space, &rest, &cells, step, F3_EXPONENT));

        let mut order: Vec<usize> = (0..terms.len()).collect();
        for k in (1..order.len()).rev() {
            order.swap(k, (rng.next_u64() % (k as u64 + 1)) as usize);
        }
        let mut partial = vec![0.0; n];
        let checkpoints = terms.len().min(8).max(1);
        for (count, &t) in order.iter().enumerate() {
            let (r, v, aj) = &terms[t];
            accumulate(&mut partial, d, r, v, aj);
            if (count + 1) % terms.len().div_ceil(checkpoints) == 0 {
                worst = worst.max(ls_norm(&space, &partial, &cells, step, F3_EXPONENT));
            }
        }
    }
    Ok(UnconditionalityProbe { full: result.norms.f3_ls, worst, trials })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dyadic::dyadics_within;
    use crate::growth::GrowthModel;
    use crate::norms::{carleson_norm, dyadic_family};
    use crate::randsign::MomentConfig;

    fn iv(a: f64, b: f64) -> Interval {
        Interval::new(a, b).unwrap()
    }

    fn dj(scale: i32, position: i64) -> DyadicInterval {
        DyadicInterval { scale, position }
    }

    fn haar_fn(g: Grid) -> GridFunction {
        GridFunction::scalar_from_fn(g, |x| {
            if (0.0..0.5).contains(&x) {
                1.0
            } else if (0.5..1.0).contains(&x) {
                -1.0
            } else {
                0.0
            }
        })
    }

    #[test]
    fn annular_pieces_of_constant_vanish() {
        let g = Grid::symmetric(3, 6).unwrap();
        let f = GridFunction::scalar_from_fn(g, |_| 2.0);
        for p in annular_decompose(&f, &iv(0.0, 1.0), 3).unwrap() {
            assert_eq!(p.function.max_norm(), 0.0);
        }
    }

    #[test]
    fn annular_haar_example_and_reconstruction() {
        let g = Grid::symmetric(3, 6).unwrap();
        let f = haar_fn(g);
        let i = iv(0.0, 0.25);
        let pieces = annular_decompose(&f, &i, 4).unwrap();
        let f1 = &pieces[0].function;
        for c in 0..g.cell_count() {
            let x = g.midpoint(c);
            let want = if (-0.125..0.375).contains(&x) { f.value(c)[0] - 1.0 } else { 0.0 };
            assert_eq!(f1.value(c)[0], want, "x = {x}");
        }
        // ⟨f⟩_I + Σ f_ℓ = f on 2^4 I
        let cover = g.cell_range(&i.dilate(4).unwrap()).unwrap();
        for c in cover {
            let s: f64 = 1.0 + pieces.iter().map(|p| p.function.value(c)[0]).sum::<f64>();
            assert_eq!(s, f.value(c)[0]);
        }
        // disjoint supports
        for c in 0..g.cell_count() {
            assert!(pieces.iter().filter(|p| p.function.value(c)[0] != 0.0).count() <= 1);
        }
    }

    #[test]
    fn annular_truncation_reports_feasible() {
        let g = Grid::symmetric(2, 6).unwrap();
        let f = haar_fn(g);
        match annular_decompose(&f, &iv(0.0, 1.0), 5) {
            Err(Error::Truncation { requested: 3, feasible: 2 }) => {}
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn oscillation_growth_haar() {
        let g = Grid::symmetric(3, 8).unwrap();
        let f = haar_fn(g);
        let w = WeightModel::constant(g, 1.0).unwrap();
        let one = GrowthModel::constant(1.0).unwrap();
        let r = oscillation_growth_check(&f, &w, &one, &iv(0.0, 1.0), 1).unwrap();
        // ⟨h⟩ = 0 on [0,1) and 2I = [−½, 3/2) sees |h| on [0, 1) only
        assert!((r.lhs - 1.0).abs() < 1e-14);
        assert_eq!(r.rhs, 2.0);
        let c = GridFunction::scalar_from_fn(g, |_| 3.0);
        assert_eq!(oscillation_growth_check(&c, &w, &one, &iv(0.0, 1.0), 2).unwrap().lhs, 0.0);
        assert!(matches!(
            oscillation_growth_check(&f, &w, &one, &iv(0.0, 1.0), 4),
            Err(Error::Truncation { .. })
        ));
    }

    #[test]
    fn holder_weight_examples() {
        let g = Grid::new(iv(0.0, 4.0), 12).unwrap();
        let one = WeightModel::constant(g, 1.0).unwrap();
        let r = holder_weight_check(&one, &iv(1.0, 2.0), 2.0).unwrap();
        assert!((r.lhs - 1.0).abs() < 1e-14 && (r.rhs - 1.0).abs() < 1e-14 && r.pass);
        let c = WeightModel::constant(g, 3.0).unwrap();
        let r = holder_weight_check(&c, &iv(1.0, 2.0), 3.0).unwrap();
        let want = libm::pow(3.0, -2.0 / 3.0);
        assert!((r.lhs - want).abs() < 1e-12 && (r.rhs - want).abs() < 1e-12 && r.pass);
        // w = x^{1/2} on [1,2), p = 2: lhs = (1/∫x^{1/2})^{1/2}, rhs = ∫x^{-1/4}
        let w = WeightModel::power(g, 0.5, 0.0).unwrap();
        let r = holder_weight_check(&w, &iv(1.0, 2.0), 2.0).unwrap();
        let lhs = libm::sqrt(1.0 / ((libm::pow(2.0, 1.5) - 1.0) / 1.5));
        let rhs = (libm::pow(2.0, 0.75) - 1.0) / 0.75;
        assert!((r.lhs - lhs).abs() < 1e-7 && (r.rhs - rhs).abs() < 1e-7);
        assert!(r.pass && r.lhs < r.rhs);
        let broken = WeightModel::sampled(GridFunction::scalar_from_fn(g, |x| if x < 1.5 { 0.0 } else { 1.0 })).unwrap();
        assert!(matches!(holder_weight_check(&broken, &iv(1.0, 2.0), 2.0), Err(Error::DegenerateWeight(_))));
    }

    #[test]
    fn classification_examples() {
        let i = iv(0.0, 1.0);
        let c = classify(&i, &[dj(0, 0), dj(-1, 8), dj(-1, 0), dj(2, -1), dj(-3, 20)]).unwrap();
        assert_eq!(c.large, vec![dj(0, 0), dj(2, -1)]);
        assert_eq!(c.far, vec![dj(-1, 8), dj(-3, 20)]);
        assert_eq!(c.near, vec![dj(-1, 0)]);
        assert_eq!(c.len(), 5);
    }

    fn cut(g: &Grid, min_scale: i32) -> Cutoffs {
        Cutoffs { min_scale, max_scale: 3, region: g.window() }
    }

    #[test]
    fn synthesis_special_cases() {
        let g = Grid::symmetric(3, 8).unwrap();
        let psi = WaveletModel::daubechies(4).unwrap();
        let i = iv(0.0, 1.0);
        let zero = CoefficientArray::scalar();
        let r = synthesize(&zero, &psi, &g, &i, &cut(&g, -5)).unwrap();
        assert_eq!(r.f_i.max_norm(), 0.0);

        let mut near = CoefficientArray::scalar();
        near.insert(dj(-2, 1), vec![0.7]).unwrap();
        let r = synthesize(&near, &psi, &g, &i, &cut(&g, -5)).unwrap();
        assert_eq!(r.classification.near, vec![dj(-2, 1)]);
        let direct = psi.sample_psi_j(&dj(-2, 1), &g, g.cell_range(&i).unwrap()).unwrap();
        for (c, v) in g.cell_range(&i).unwrap().zip(direct) {
            assert_eq!(r.f_i.value(c)[0], 0.7 * v);
        }

        let mut large = CoefficientArray::scalar();
        large.insert(dj(1, -1), vec![1.3]).unwrap();
        let r = synthesize(&large, &psi, &g, &i, &cut(&g, -5)).unwrap();
        let xc = g.cell_of(0.5 + 0.5 * g.step()).unwrap();
        assert_eq!(r.f_i.value(xc)[0], 0.0);
        assert_eq!(r.renormalization.len(), 1);
        assert!(r.f_i.max_norm() > 0.0);
    }

    #[test]
    fn synthesis_errors() {
        let g = Grid::symmetric(3, 4).unwrap();
        let psi = WaveletModel::haar();
        let mut a = CoefficientArray::scalar();
        a.insert(dj(-4, 3), vec![1.0]).unwrap();
        let r = synthesize(&a, &psi, &g, &iv(0.0, 1.0), &cut(&g, -6));
        assert!(matches!(r, Err(Error::Resolution { .. })));
        // odd number of cells: no grid point at the centre
        assert!(matches!(
            synthesize(&CoefficientArray::scalar(), &psi, &g, &iv(0.0, 0.1875), &cut(&g, -2)),
            Err(Error::Alignment(_))
        ));
    }

    fn random_array(seed: u64, region: &Interval, min_scale: i32, count: usize, d: usize) -> CoefficientArray {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pool = dyadics_within(region, min_scale);
        let mut a = CoefficientArray::new(VectorSpace::new(d, 2.0).unwrap());
        while a.len() < count.min(pool.len()) {
            let j = pool[(rng.next_u64() % pool.len() as u64) as usize];
            let v = (0..d).map(|_| (rng.next_u32() as f64 / u32::MAX as f64) * 2.0 - 1.0).collect();
            a.insert(j, v).unwrap();
        }
        a
    }

    #[test]
    fn constancy_lemma() {
        let g = Grid::symmetric(3, 8).unwrap();
        let cutoffs = cut(&g, -4);
        for psi in [WaveletModel::daubechies(4).unwrap(), WaveletModel::haar()] {
            for seed in 0..5 {
                let a = random_array(seed, &g.window(), -4, 30, 2);
                let dev = constancy_check(&a, &psi, &g, &iv(0.0, 0.5), &iv(-1.0, 1.0), &cutoffs, &cutoffs).unwrap();
                assert!(dev <= 1e-12, "{dev}");
            }
        }
        let zero = CoefficientArray::scalar();
        let psi = WaveletModel::haar();
        assert_eq!(constancy_check(&zero, &psi, &g, &iv(0.0, 1.0), &iv(0.0, 2.0), &cutoffs, &cutoffs).unwrap(), 0.0);
        let other = Cutoffs { min_scale: -3, ..cutoffs };
        assert!(matches!(
            constancy_check(&zero, &psi, &g, &iv(0.0, 1.0), &iv(0.0, 2.0), &cutoffs, &other),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn pieces_sum_to_total() {
        let g = Grid::symmetric(3, 8).unwrap();
        let psi = WaveletModel::daubechies(4).unwrap();
        let a = random_array(3, &g.window(), -4, 40, 1);
        let i = iv(-1.0, 1.0);
        let r = synthesize(&a, &psi, &g, &i, &cut(&g, -4)).unwrap();
        for c in g.cell_range(&i).unwrap() {
            let s = r.f1.value(c)[0] + r.f2.value(c)[0] + r.f3.value(c)[0];
            assert_eq!(s, r.f_i.value(c)[0]);
        }
        assert_eq!(r.classification.len() + r.omitted, a.len());
        let probe = unconditionality_probe(&a, &psi, &r, 20, 1).unwrap();
        assert!(probe.worst.is_finite() && probe.full > 0.0);
        if let Some((_, first)) = r.f3_tails.first() {
            assert!((first - r.norms.f3_ls).abs() <= 1e-12 * first);
        }
    }

    #[test]
    fn individual_bound_single_term_equality() {
        let g = Grid::symmetric(2, 6).unwrap();
        let w = WeightModel::constant(g, 1.0).unwrap();
        let one = GrowthModel::constant(1.0).unwrap();
        let j = dj(-1, 3);
        let mut a = CoefficientArray::scalar();
        a.insert(j, vec![2.0]).unwrap();
        let fam = dyadic_family(&g.window(), -3);
        let c = carleson_norm(&a, &w, &one, 2.0, &fam, -3, &MomentConfig::default()).unwrap().value;
        let r = individual_bound_check(&a, &w, &one, &j, c, 1e-12).unwrap();
        assert!((r.lhs - r.rhs).abs() <= 1e-12 * r.rhs && r.pass);
        assert!(individual_bound_check(&CoefficientArray::scalar(), &w, &one, &j, 1.0, 0.0).unwrap().pass);
    }

    #[test]
    fn individual_bound_random_arrays() {
        let g = Grid::symmetric(1, 6).unwrap();
        let w = WeightModel::power(g, 0.3, 0.1).unwrap();
        let rho = GrowthModel::power(0.2).unwrap();
        let fam = dyadic_family(&g.window(), -3);
        for seed in 0..5 {
            let a = random_array(seed, &g.window(), -3, 12, 1);
            let c = carleson_norm(&a, &w, &rho, 3.0, &fam, -3, &MomentConfig::default()).unwrap().value;
            for (j, _) in a.iter() {
                assert!(individual_bound_check(&a, &w, &rho, j, c, 1e-12).unwrap().pass);
            }
        }
    }
}
