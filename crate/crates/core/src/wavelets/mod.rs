//! Compactly supported orthonormal wavelets on the working grid.
//!
//! Pointwise, Haar is evaluated analytically and Daubechies wavelets are
//! tabulated at the dyadic points `k/2^refinement` of their support and
//! linearly interpolated in between.
//!
//! On a grid, `ψ_J` is realized by its discrete cascade vector at the grid's
//! own resolution, sample `i` of `J` standing for `ψ_J` near the left end of
//! that cell. These vectors are exactly orthonormal (they are the discrete
//! wavelet transform's basis), so Parseval, vanishing integrals and
//! orthogonality hold up to rounding rather than quadrature error.

mod daubechies;
mod kernel;

use core::ops::Range;

use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::dyadic::DyadicInterval;
use crate::error::{domain, precondition, Error, Result};
use crate::grid::{Grid, GridFunction};
use crate::growth::ProbeCheck;
use crate::space::VectorSpace;

pub use daubechies::{filter as daubechies_filter, MAX_ORDER as DAUBECHIES_MAX_ORDER};
pub use kernel::{kernel_size_check, KernelCoefficients, KernelSpec};

/// Table resolution used by [`WaveletModel::daubechies`].
pub const DEFAULT_REFINEMENT: u32 = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "kind", rename_all = "kebab-case"))]
pub enum WaveletKind {
    Haar,
    /// `order` vanishing moments, `2·order` filter taps.
    Daubechies { order: u8 },
    Sampled,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WaveletModel {
    kind: WaveletKind,
    refinement: u32,
    support: usize,
    phi: Arc<Vec<f64>>,
    psi: Arc<Vec<f64>>,
    /// `ψ^{(n)}` for `n = 1..=refinement`; empty for non-Daubechies kinds.
    cascade: Arc<Vec<Vec<f64>>>,
}

impl WaveletModel {
    pub fn haar() -> Self {
        Self::haar_with_refinement(DEFAULT_REFINEMENT)
    }

    /// Haar with tables at resolution `2^-refinement` (used only by the
    /// class diagnostics; evaluation stays analytic).
    pub fn haar_with_refinement(refinement: u32) -> Self {
        let n = 1usize << refinement;
        let phi = (0..=n).map(|k| if k < n { 1.0 } else { 0.0 }).collect();
        let psi = (0..=n)
            .map(|k| if k < n / 2 { 1.0 } else if k < n { -1.0 } else { 0.0 })
            .collect();
        WaveletModel {
            kind: WaveletKind::Haar,
            refinement,
            support: 1,
            phi: Arc::new(phi),
            psi: Arc::new(psi),
            cascade: Arc::default(),
        }
    }

    pub fn daubechies(order: u8) -> Result<Self> {
        Self::daubechies_with_refinement(order, DEFAULT_REFINEMENT)
    }

    pub fn daubechies_with_refinement(order: u8, refinement: u32) -> Result<Self> {
        if !(1..=20).contains(&refinement) {
            return Err(domain!("refinement {refinement} outside 1..=20"));
        }
        let h = daubechies::filter(order)?;
        let coarse = daubechies::scaling_values(&h, refinement - 1);
        let psi = daubechies::wavelet_values(&h, &coarse, refinement);
        let phi = daubechies::scaling_values(&h, refinement);
        Ok(WaveletModel {
            kind: WaveletKind::Daubechies { order },
            refinement,
            support: h.len() - 1,
            phi: Arc::new(phi),
            psi: Arc::new(psi),
            cascade: Arc::new(daubechies::cascade_wavelets(&h, refinement)),
        })
    }

    /// Wavelet given by its values at `k/2^refinement`, `k = 0..=support·2^refinement`.
    pub fn sampled(phi: Vec<f64>, psi: Vec<f64>, support: usize, refinement: u32) -> Result<Self> {
        let len = support.checked_shl(refinement).map(|n| n + 1);
        if support == 0 || len != Some(phi.len()) || len != Some(psi.len()) {
            return Err(domain!(
                "sampled wavelet tables must hold support·2^refinement + 1 values"
            ));
        }
        if phi.iter().chain(&psi).any(|v| !v.is_finite()) {
            return Err(domain!("sampled wavelet has non-finite values"));
        }
        Ok(WaveletModel {
            kind: WaveletKind::Sampled,
            refinement,
            support,
            phi: Arc::new(phi),
            psi: Arc::new(psi),
            cascade: Arc::default(),
        })
    }

    pub fn kind(&self) -> WaveletKind {
        self.kind
    }

    /// `φ` and `ψ` vanish outside `[0, support)`.
    pub fn support(&self) -> usize {
        self.support
    }

    pub fn refinement(&self) -> u32 {
        self.refinement
    }

    /// Whether the wavelet meets the smoothness and decay hypotheses of the
    /// synthesis theorems (continuously differentiable, compact support).
    pub fn satisfies_hypotheses(&self) -> bool {
        matches!(self.kind, WaveletKind::Daubechies { order } if order >= 3)
    }

    pub fn phi_table(&self) -> &[f64] {
        &self.phi
    }

    pub fn psi_table(&self) -> &[f64] {
        &self.psi
    }

    pub fn phi(&self, t: f64) -> f64 {
        match self.kind {
            WaveletKind::Haar => {
                if (0.0..1.0).contains(&t) {
                    1.0
                } else {
                    0.0
                }
            }
            _ => self.interpolate(&self.phi, t),
        }
    }

    pub fn psi(&self, t: f64) -> f64 {
        match self.kind {
            WaveletKind::Haar => {
                if (0.0..0.5).contains(&t) {
                    1.0
                } else if (0.5..1.0).contains(&t) {
                    -1.0
                } else {
                    0.0
                }
            }
            _ => self.interpolate(&self.psi, t),
        }
    }

    fn interpolate(&self, table: &[f64], t: f64) -> f64 {
        if !(t >= 0.0 && t < self.support as f64) {
            return 0.0;
        }
        let x = libm::ldexp(t, self.refinement as i32);
        let i = x as usize;
        let frac = x - i as f64;
        if frac == 0.0 {
            return table[i];
        }
        table[i] + frac * (table[i + 1] - table[i])
    }

    /// `ψ_J(x) = |J|^{-1/2} ψ((x − inf J)/|J|)`.
    pub fn psi_j(&self, j: &DyadicInterval, x: f64) -> f64 {
        let t = libm::ldexp(x - j.left(), -j.scale);
        libm::ldexp(self.psi(t), -j.scale.div_euclid(2)) * odd_scale_factor(j.scale)
    }

    /// Grid cells meeting the support of `ψ_J`, clipped to the window.
    pub fn support_cells(&self, j: &DyadicInterval, grid: &Grid) -> Result<Range<usize>> {
        check_resolvable(j, grid)?;
        let iv = j.interval();
        let lo = iv.lo_atoms();
        let hi = lo + iv.length_atoms() * self.support as i64;
        let window = grid.window();
        let lo = lo.max(window.lo_atoms());
        let hi = hi.min(window.hi_atoms());
        if lo >= hi {
            return Ok(0..0);
        }
        let shift = crate::dyadic::ATOM_BITS - grid.level();
        let a = ((lo - window.lo_atoms()) >> shift) as usize;
        let b = ((hi - window.lo_atoms() + (1i64 << shift) - 1) >> shift) as usize;
        Ok(a..b)
    }

    /// Grid realization of `ψ_J` on `cells` (see the module notes).
    pub fn sample_psi_j(&self, j: &DyadicInterval, grid: &Grid, cells: Range<usize>) -> Result<Vec<f64>> {
        check_resolvable(j, grid)?;
        let m = (grid.level() + j.scale) as u32;
        let first = first_cell(j, grid);
        let norm = libm::ldexp(odd_scale_factor(j.scale), -j.scale.div_euclid(2));
        match self.kind {
            WaveletKind::Daubechies { .. } => {
                let table = self.cascade.get(m as usize - 1).ok_or_else(|| {
                    domain!("{j} spans 2^{m} cells, beyond the cascade depth {}", self.refinement)
                })?;
                Ok(cells
                    .map(|c| {
                        let i = c as i64 - first;
                        if (0..table.len() as i64).contains(&i) {
                            norm * table[i as usize]
                        } else {
                            0.0
                        }
                    })
                    .collect())
            }
            _ => Ok(cells
                .map(|c| norm * self.psi(libm::ldexp((c as i64 - first) as f64, -(m as i32))))
                .collect()),
        }
    }

    /// The grid sample of `ψ_J` in cell `c`.
    pub fn psi_j_at_cell(&self, j: &DyadicInterval, grid: &Grid, c: usize) -> Result<f64> {
        Ok(self.sample_psi_j(j, grid, c..c + 1)?[0])
    }
}

/// Index, relative to the window, of the first grid cell of `J` (may be negative).
fn first_cell(j: &DyadicInterval, grid: &Grid) -> i64 {
    let shift = crate::dyadic::ATOM_BITS - grid.level();
    (j.interval().lo_atoms() - grid.window().lo_atoms()) >> shift
}

/// `2^{-scale/2}` split as a power of two times `1` or `√½`.
#[inline]
fn odd_scale_factor(scale: i32) -> f64 {
    if scale.rem_euclid(2) == 1 {
        core::f64::consts::FRAC_1_SQRT_2
    } else {
        1.0
    }
}

/// A dyadic interval is resolvable when it spans at least two grid cells.
pub fn check_resolvable(j: &DyadicInterval, grid: &Grid) -> Result<()> {
    if j.scale <= -grid.level() {
        return Err(Error::Resolution { scale: j.scale, level: grid.level() });
    }
    Ok(())
}

/// `ψ_J` sampled on the grid.
pub fn dilate_translate(psi: &WaveletModel, j: &DyadicInterval, grid: &Grid) -> Result<GridFunction> {
    let cells = psi.support_cells(j, grid)?;
    if cells.is_empty() {
        return Err(domain!("support of ψ_J for J = {j} misses the window {}", grid.window()));
    }
    let values = psi.sample_psi_j(j, grid, cells.clone())?;
    let mut out = GridFunction::zeros(*grid, VectorSpace::scalar());
    out.samples_mut()[cells].copy_from_slice(&values);
    Ok(out)
}

/// `⟨ψ_J, f⟩` by the midpoint rule over the window.
pub fn coefficient(psi: &WaveletModel, j: &DyadicInterval, f: &GridFunction) -> Result<Vec<f64>> {
    let grid = f.grid();
    let d = f.dim();
    let mut acc = alloc::vec![0.0; d];
    let cells = psi.support_cells(j, grid)?;
    let values = psi.sample_psi_j(j, grid, cells.clone())?;
    for (c, &w) in cells.zip(&values) {
        if w != 0.0 {
            for (a, v) in acc.iter_mut().zip(f.value(c)) {
                *a += w * v;
            }
        }
    }
    let step = grid.step();
    acc.iter_mut().for_each(|a| *a *= step);
    Ok(acc)
}

/// `max |ψ(x)|(1+|x|)^u` and `max |Δψ(x)/Δx|(1+|x|)^v` over the table,
/// with forward differences at the table resolution.
pub fn psi_class_check(psi: &WaveletModel, u: f64, v: f64, bound: f64) -> ProbeCheck {
    let table = psi.psi_table();
    let h = libm::ldexp(1.0, -(psi.refinement() as i32));
    let mut worst: f64 = 0.0;
    for (k, val) in table.iter().enumerate() {
        let x = k as f64 * h;
        worst = worst.max(val.abs() * libm::pow(1.0 + x, u));
        // the table ends at the right edge of the support, where ψ vanishes
        let next = table.get(k + 1).copied().unwrap_or(0.0);
        worst = worst.max(((next - val) / h).abs() * libm::pow(1.0 + x, v));
    }
    ProbeCheck { pass: worst.is_finite() && worst <= bound, worst }
}

/// `max |⟨ψ_J, ψ_J'⟩ − δ_{JJ'}|` over the family, by midpoint sums.
pub fn orthonormality_residual(psi: &WaveletModel, family: &[DyadicInterval], grid: &Grid) -> Result<f64> {
    if family.is_empty() {
        return Err(precondition!("empty wavelet family"));
    }
    let tables: Vec<(Range<usize>, Vec<f64>)> = family
        .iter()
        .map(|j| {
            let cells = psi.support_cells(j, grid)?;
            Ok((cells.clone(), psi.sample_psi_j(j, grid, cells)?))
        })
        .collect::<Result<_>>()?;
    let step = grid.step();
    let mut worst: f64 = 0.0;
    for (a, (ra, va)) in tables.iter().enumerate() {
        for (b, (rb, vb)) in tables.iter().enumerate().skip(a) {
            let lo = ra.start.max(rb.start);
            let hi = ra.end.min(rb.end);
            let mut dot = 0.0;
            for c in lo..hi.max(lo) {
                dot += va[c - ra.start] * vb[c - rb.start];
            }
            dot *= step;
            let want = if family[a] == family[b] { 1.0 } else { 0.0 };
            worst = worst.max((dot - want).abs());
        }
    }
    Ok(worst)
}
