//! Uniform dyadic grids and midpoint-rule calculus.
//!
//! A [`GridFunction`] holds one `d`-vector per cell of width `2^-level`,
//! interpreted as the value at the cell midpoint. Integrals over
//! grid-aligned intervals are plain midpoint sums, which are exact for the
//! piecewise-constant model.

use core::ops::Range;

use alloc::vec;
use alloc::vec::Vec;

use crate::dyadic::{atoms_to_f64, Interval, ATOM_BITS};
use crate::error::{domain, Error, Result};
use crate::space::VectorSpace;

/// A finite window sampled at resolution `2^-level`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Grid {
    window: Interval,
    level: i32,
}

impl Grid {
    pub fn new(window: Interval, level: i32) -> Result<Self> {
        if !(0..=30).contains(&level) {
            return Err(domain!("grid level {level} outside [0, 30]"));
        }
        if !window.is_aligned(level) {
            return Err(Error::Alignment(alloc::format!(
                "window {window} is not aligned to level {level}"
            )));
        }
        Ok(Grid { window, level })
    }

    /// `[-2^m, 2^m)` at resolution `2^-level`.
    pub fn symmetric(m: i32, level: i32) -> Result<Self> {
        Grid::new(Interval::symmetric_window(m), level)
    }

    pub fn window(&self) -> Interval {
        self.window
    }

    pub fn level(&self) -> i32 {
        self.level
    }

    pub fn step(&self) -> f64 {
        libm::ldexp(1.0, -self.level)
    }

    fn shift(&self) -> i32 {
        ATOM_BITS - self.level
    }

    pub fn cell_count(&self) -> usize {
        (self.window.length_atoms() >> self.shift()) as usize
    }

    pub fn midpoint(&self, i: usize) -> f64 {
        self.window.left() + (i as f64 + 0.5) * self.step()
    }

    /// Left endpoint of cell `i` in atoms.
    pub fn cell_atom(&self, i: usize) -> i64 {
        self.window.lo_atoms() + ((i as i64) << self.shift())
    }

    pub fn cell_interval(&self, i: usize) -> Interval {
        let lo = self.cell_atom(i);
        Interval::from_atoms(lo, lo + (1i64 << self.shift())).expect("nonempty cell")
    }

    /// Index of the cell containing the atom `a`, if inside the window.
    pub fn cell_of_atom(&self, a: i64) -> Option<usize> {
        if !self.window.contains_atom(a) {
            return None;
        }
        Some(((a - self.window.lo_atoms()) >> self.shift()) as usize)
    }

    pub fn cell_of(&self, x: f64) -> Option<usize> {
        if !(x >= self.window.left() && x < self.window.right()) {
            return None;
        }
        let i = libm::floor((x - self.window.left()) / self.step()) as usize;
        Some(i.min(self.cell_count() - 1))
    }

    /// Cells covering the grid-aligned interval `I ⊆ window`.
    pub fn cell_range(&self, i: &Interval) -> Result<Range<usize>> {
        if !self.window.contains(i) {
            return Err(domain!("interval {i} leaves the window {}", self.window));
        }
        if !i.is_aligned(self.level) {
            return Err(Error::Alignment(alloc::format!(
                "interval {i} is not aligned to grid level {}",
                self.level
            )));
        }
        let s = self.shift();
        let a = ((i.lo_atoms() - self.window.lo_atoms()) >> s) as usize;
        let b = ((i.hi_atoms() - self.window.lo_atoms()) >> s) as usize;
        Ok(a..b)
    }

    /// Same window at another resolution.
    pub fn with_level(&self, level: i32) -> Result<Grid> {
        Grid::new(self.window, level)
    }

    pub fn length_of(&self, cells: &Range<usize>) -> f64 {
        atoms_to_f64(((cells.end - cells.start) as i64) << self.shift())
    }
}

/// A `d`-vector-valued function sampled at cell midpoints.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GridFunction {
    grid: Grid,
    space: VectorSpace,
    samples: Vec<f64>,
}

impl GridFunction {
    /// Wraps row-major samples; `samples.len()` must equal `cells · d`.
    pub fn new(grid: Grid, space: VectorSpace, samples: Vec<f64>) -> Result<Self> {
        if samples.len() != grid.cell_count() * space.dim() {
            return Err(domain!(
                "expected {} samples, got {}",
                grid.cell_count() * space.dim(),
                samples.len()
            ));
        }
        Ok(GridFunction { grid, space, samples })
    }

    pub fn zeros(grid: Grid, space: VectorSpace) -> Self {
        GridFunction { grid, space, samples: vec![0.0; grid.cell_count() * space.dim()] }
    }

    pub fn from_fn(grid: Grid, space: VectorSpace, mut f: impl FnMut(f64, &mut [f64])) -> Self {
        let d = space.dim();
        let mut samples = vec![0.0; grid.cell_count() * d];
        for (i, row) in samples.chunks_exact_mut(d).enumerate() {
            f(grid.midpoint(i), row);
        }
        GridFunction { grid, space, samples }
    }

    pub fn scalar_from_fn(grid: Grid, mut f: impl FnMut(f64) -> f64) -> Self {
        Self::from_fn(grid, VectorSpace::scalar(), |x, out| out[0] = f(x))
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn space(&self) -> &VectorSpace {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn samples_mut(&mut self) -> &mut [f64] {
        &mut self.samples
    }

    pub fn into_samples(self) -> Vec<f64> {
        self.samples
    }

    #[inline]
    pub fn value(&self, i: usize) -> &[f64] {
        let d = self.space.dim();
        &self.samples[i * d..(i + 1) * d]
    }

    /// `⟨f⟩_I`.
    pub fn average(&self, i: &Interval) -> Result<Vec<f64>> {
        let cells = self.grid.cell_range(i)?;
        Ok(self.average_cells(&cells))
    }

    pub(crate) fn average_cells(&self, cells: &Range<usize>) -> Vec<f64> {
        let d = self.space.dim();
        let mut acc = vec![0.0; d];
        for c in cells.clone() {
            for (a, v) in acc.iter_mut().zip(self.value(c)) {
                *a += v;
            }
        }
        let n = (cells.end - cells.start) as f64;
        acc.iter_mut().for_each(|a| *a /= n);
        acc
    }

    /// `∫_I ‖f‖^p g dx` by the midpoint rule, with `g ≡ 1` when absent.
    pub fn integrate_norm(&self, i: &Interval, p: f64, density: Option<&GridFunction>) -> Result<f64> {
        if !(p >= 1.0) {
            return Err(domain!("integration power p = {p} must be at least 1"));
        }
        let cells = self.grid.cell_range(i)?;
        if let Some(g) = density {
            check_density(g, &self.grid)?;
            let mut acc = 0.0;
            for c in cells {
                let gv = g.samples[c];
                if gv < 0.0 {
                    return Err(domain!("negative density {gv} at x = {}", self.grid.midpoint(c)));
                }
                acc += self.space.norm_pow(self.value(c), p) * gv;
            }
            Ok(acc * self.grid.step())
        } else {
            let acc: f64 = cells.map(|c| self.space.norm_pow(self.value(c), p)).sum();
            Ok(acc * self.grid.step())
        }
    }

    /// The same samples viewed on the sub-window `I`.
    pub fn restrict(&self, i: &Interval) -> Result<GridFunction> {
        let cells = self.grid.cell_range(i)?;
        let d = self.space.dim();
        let grid = Grid::new(*i, self.grid.level)?;
        Ok(GridFunction {
            grid,
            space: self.space,
            samples: self.samples[cells.start * d..cells.end * d].to_vec(),
        })
    }

    pub fn scaled(&self, c: f64) -> GridFunction {
        GridFunction {
            grid: self.grid,
            space: self.space,
            samples: self.samples.iter().map(|v| v * c).collect(),
        }
    }

    /// Pointwise sum; both functions must share grid and space.
    pub fn add(&self, other: &GridFunction) -> Result<GridFunction> {
        if self.grid != other.grid || self.space != other.space {
            return Err(domain!("grid functions live on different grids or spaces"));
        }
        Ok(GridFunction {
            grid: self.grid,
            space: self.space,
            samples: self.samples.iter().zip(&other.samples).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn max_norm(&self) -> f64 {
        (0..self.grid.cell_count())
            .map(|c| self.space.norm(self.value(c)))
            .fold(0.0, f64::max)
    }
}

pub(crate) fn check_density(g: &GridFunction, grid: &Grid) -> Result<()> {
    if g.grid != *grid || g.dim() != 1 {
        return Err(domain!("density must be scalar and share the function's grid"));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dyadic::dyadics_within;

    fn unit_grid(level: i32) -> Grid {
        Grid::new(Interval::new(0.0, 1.0).unwrap(), level).unwrap()
    }

    fn haar(x: f64) -> f64 {
        if (0.0..0.5).contains(&x) {
            1.0
        } else if (0.5..1.0).contains(&x) {
            -1.0
        } else {
            0.0
        }
    }

    #[test]
    fn average_of_constant() {
        let g = Grid::symmetric(1, 5).unwrap();
        let x = VectorSpace::new(2, 3.0).unwrap();
        let f = GridFunction::from_fn(g, x, |_, v| {
            v[0] = 1.5;
            v[1] = -2.0;
        });
        let avg = f.average(&Interval::new(-0.5, 1.0).unwrap()).unwrap();
        assert_eq!(avg, [1.5, -2.0]);
    }

    #[test]
    fn average_of_haar_vanishes() {
        let f = GridFunction::scalar_from_fn(unit_grid(6), haar);
        assert_eq!(f.average(&Interval::new(0.0, 1.0).unwrap()).unwrap(), [0.0]);
    }

    #[test]
    fn average_of_identity_is_midpoint_exact() {
        let f = GridFunction::scalar_from_fn(unit_grid(8), |x| x);
        let avg = f.average(&Interval::new(0.0, 1.0).unwrap()).unwrap()[0];
        // midpoint rule integrates x exactly
        assert!((avg - 0.5).abs() < 1e-15);
    }

    #[test]
    fn integrate_norm_examples() {
        let i = Interval::new(0.0, 1.0).unwrap();
        let zero = GridFunction::zeros(unit_grid(4), VectorSpace::new(3, 1.5).unwrap());
        assert_eq!(zero.integrate_norm(&i, 2.5, None).unwrap(), 0.0);

        let e1 = GridFunction::from_fn(unit_grid(4), VectorSpace::new(3, 1.5).unwrap(), |_, v| {
            v[0] = 1.0;
        });
        let one = GridFunction::scalar_from_fn(unit_grid(4), |_| 1.0);
        assert_eq!(e1.integrate_norm(&i, 1.0, Some(&one)).unwrap(), 1.0);

        let h = GridFunction::scalar_from_fn(unit_grid(7), haar);
        let brute: f64 = (0..128).map(|c| haar((c as f64 + 0.5) / 128.0).powi(2) / 128.0).sum();
        assert_eq!(h.integrate_norm(&i, 2.0, None).unwrap(), brute);
        assert_eq!(brute, 1.0);
    }

    #[test]
    fn negative_density_is_a_domain_error() {
        let f = GridFunction::scalar_from_fn(unit_grid(3), |_| 1.0);
        let g = GridFunction::scalar_from_fn(unit_grid(3), |x| x - 0.5);
        let err = f.integrate_norm(&Interval::new(0.0, 1.0).unwrap(), 1.0, Some(&g));
        assert!(matches!(err, Err(Error::Domain(_))));
    }

    #[test]
    fn out_of_window_and_misaligned_are_rejected() {
        let f = GridFunction::scalar_from_fn(unit_grid(3), |x| x);
        assert!(matches!(f.average(&Interval::new(0.5, 2.0).unwrap()), Err(Error::Domain(_))));
        assert!(matches!(
            f.average(&Interval::new(0.0, 0.0625).unwrap()),
            Err(Error::Alignment(_))
        ));
    }

    #[test]
    fn additivity_over_adjacent_intervals() {
        let g = Grid::symmetric(2, 6).unwrap();
        let f = GridFunction::from_fn(g, VectorSpace::new(2, 2.5).unwrap(), |x, v| {
            v[0] = libm::sin(3.0 * x);
            v[1] = x * x - 1.0;
        });
        let a = Interval::new(-1.5, 0.25).unwrap();
        let b = Interval::new(0.25, 3.0).unwrap();
        let whole = f.integrate_norm(&a.hull(&b), 1.7, None).unwrap();
        let parts = f.integrate_norm(&a, 1.7, None).unwrap() + f.integrate_norm(&b, 1.7, None).unwrap();
        assert!((whole - parts).abs() <= 1e-13 * whole);
    }

    #[test]
    fn dyadic_cells_partition_window() {
        let g = Grid::symmetric(1, 3).unwrap();
        let total: usize = dyadics_within(&g.window(), -3)
            .iter()
            .filter(|j| j.scale == -3)
            .map(|j| g.cell_range(&j.interval()).unwrap().len())
            .sum();
        assert_eq!(total, g.cell_count());
    }
}
