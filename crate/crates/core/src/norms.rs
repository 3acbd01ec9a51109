//! Weighted BMO, John–Nirenberg and Carleson norms over finite interval
//! families.
//!
//! The Carleson norms only ever need, at a point `x`, the dyadic `J ∋ x`,
//! which form a chain. Each interval `I` is therefore cut at the endpoints
//! of its terms into segments with a fixed chain, and the sign expectation
//! is evaluated once per segment.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::dyadic::{dyadics_within, DyadicInterval, Interval, MAX_SCALE};
use crate::error::{precondition, Error, Result};
use crate::grid::GridFunction;
use crate::growth::Growth;
use crate::randsign::{power_mean, MomentConfig};
use crate::space::VectorSpace;
use crate::wavelets::{coefficient, WaveletKind, WaveletModel};
use crate::weights::WeightModel;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "kind", rename_all = "kebab-case"))]
pub enum Provenance {
    Synthetic,
    Wavelet { wavelet: WaveletKind },
}

/// A finitely supported array `{a_J}` of vectors indexed by dyadic intervals.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientArray {
    space: VectorSpace,
    entries: BTreeMap<DyadicInterval, Vec<f64>>,
    provenance: Provenance,
}

impl CoefficientArray {
    pub fn new(space: VectorSpace) -> Self {
        CoefficientArray { space, entries: BTreeMap::new(), provenance: Provenance::Synthetic }
    }

    pub fn scalar() -> Self {
        Self::new(VectorSpace::scalar())
    }

    /// `a_J = ⟨ψ_J, f⟩` for every dyadic `J ⊆ region` with `|J| ≥ 2^min_scale`.
    pub fn from_wavelet(psi: &WaveletModel, f: &GridFunction, region: &Interval, min_scale: i32) -> Result<Self> {
        let mut out = Self::new(*f.space());
        out.provenance = Provenance::Wavelet { wavelet: psi.kind() };
        for j in dyadics_within(region, min_scale) {
            out.entries.insert(j, coefficient(psi, &j, f)?);
        }
        Ok(out)
    }

    pub fn insert(&mut self, j: DyadicInterval, value: Vec<f64>) -> Result<()> {
        if value.len() != self.space.dim() {
            return Err(Error::Domain(alloc::format!(
                "coefficient of length {} in a {}-dimensional array",
                value.len(),
                self.space.dim()
            )));
        }
        self.entries.insert(j, value);
        Ok(())
    }

    pub fn remove(&mut self, j: &DyadicInterval) -> Option<Vec<f64>> {
        self.entries.remove(j)
    }

    pub fn get(&self, j: &DyadicInterval) -> Option<&[f64]> {
        self.entries.get(j).map(|v| v.as_slice())
    }

    pub fn space(&self) -> &VectorSpace {
        &self.space
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn set_provenance(&mut self, provenance: Provenance) {
        self.provenance = provenance;
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&DyadicInterval, &[f64])> {
        self.entries.iter().map(|(j, v)| (j, v.as_slice()))
    }

    pub fn scaled(&self, c: f64) -> Self {
        let mut out = self.clone();
        out.entries.values_mut().for_each(|v| v.iter_mut().for_each(|x| *x *= c));
        out
    }

    /// Entries with `J ⊆ i` and `|J| ≥ 2^min_scale`, by range queries per scale.
    pub fn within(&self, i: &Interval, min_scale: i32) -> Vec<(DyadicInterval, &[f64])> {
        let mut out = Vec::new();
        let Some((top, _)) = self.entries.first_key_value() else {
            return out;
        };
        let Some((bottom, _)) = self.entries.last_key_value() else {
            return out;
        };
        let hi_scale = top.scale.min(MAX_SCALE);
        let lo_scale = bottom.scale.max(min_scale);
        for scale in (lo_scale..=hi_scale).rev() {
            let u = i.length_atoms();
            let unit = 1i64 << (scale + crate::dyadic::ATOM_BITS);
            if unit > u {
                continue;
            }
            let first = i.lo_atoms().div_euclid(unit) + i64::from(i.lo_atoms().rem_euclid(unit) != 0);
            let end = i.hi_atoms().div_euclid(unit);
            if first >= end {
                continue;
            }
            let from = DyadicInterval { scale, position: first };
            let to = DyadicInterval { scale, position: end };
            out.extend(self.entries.range(from..to).map(|(j, v)| (*j, v.as_slice())));
        }
        out
    }

    pub fn max_norm(&self) -> f64 {
        self.entries.values().fold(0.0, |m, v| m.max(self.space.norm(v)))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "kind", rename_all = "kebab-case"))]
pub enum NormMode {
    /// No randomness involved.
    Deterministic,
    /// Every sign expectation was enumerated exactly.
    Exact,
    /// At least one expectation was estimated.
    MonteCarlo { samples: usize, seed: u64 },
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct NormReport {
    pub value: f64,
    pub interval: Interval,
    pub family_size: usize,
    pub mode: NormMode,
    /// Standard error of `value`; zero unless Monte Carlo was used at the maximizer.
    pub std_error: f64,
    pub breakdown: Vec<(Interval, f64)>,
}

/// Relative tolerance within which two interval values count as tied.
pub const TIE_TOLERANCE: f64 = 1e-12;

struct Reducer {
    best: Option<(f64, Interval, f64)>,
    breakdown: Vec<(Interval, f64)>,
}

impl Reducer {
    fn new(capacity: usize) -> Self {
        Reducer { best: None, breakdown: Vec::with_capacity(capacity) }
    }

    /// Keeps the maximum; ties go to the shorter, then the leftmost interval.
    fn push(&mut self, i: Interval, value: f64, se: f64) {
        self.breakdown.push((i, value));
        let replace = match &self.best {
            None => true,
            Some((v, j, _)) => {
                let tol = TIE_TOLERANCE * v.abs().max(value.abs());
                if value > v + tol {
                    true
                } else if value >= v - tol {
                    (i.length_atoms(), i.lo_atoms()) < (j.length_atoms(), j.lo_atoms())
                } else {
                    false
                }
            }
        };
        if replace {
            self.best = Some((value, i, se));
        }
    }

    fn finish(self, mode: NormMode) -> NormReport {
        let (value, interval, std_error) = self.best.expect("nonempty family");
        NormReport {
            value,
            interval,
            family_size: self.breakdown.len(),
            mode,
            std_error,
            breakdown: self.breakdown,
        }
    }
}

fn nonempty(family: &[Interval]) -> Result<()> {
    if family.is_empty() {
        return Err(precondition!("interval family is empty"));
    }
    Ok(())
}

fn check_family_grid(f: &GridFunction, w: &WeightModel) -> Result<()> {
    if f.grid() != w.grid() {
        return Err(precondition!("function and weight live on different grids"));
    }
    Ok(())
}

/// `sup_I (w(I)ρ(|I|))^{-1} ∫_I ‖f − ⟨f⟩_I‖`.
pub fn bmo_norm(f: &GridFunction, w: &WeightModel, rho: &impl Growth, family: &[Interval]) -> Result<NormReport> {
    jn_p_norm(f, w, rho, 1.0, family)
}

/// `sup_I ρ(|I|)^{-1} (w(I)^{-1} ∫_I ‖f − ⟨f⟩_I‖^p w^{1−p})^{1/p}`; equals
/// [`bmo_norm`] at `p = 1`.
pub fn jn_p_norm(
    f: &GridFunction,
    w: &WeightModel,
    rho: &impl Growth,
    p: f64,
    family: &[Interval],
) -> Result<NormReport> {
    nonempty(family)?;
    check_family_grid(f, w)?;
    if !(p >= 1.0 && p.is_finite()) {
        return Err(Error::Domain(alloc::format!("John–Nirenberg exponent p = {p} must be ≥ 1")));
    }
    let grid = f.grid();
    let space = f.space();
    let step = grid.step();
    let mut diff = alloc::vec![0.0; f.dim()];
    let mut red = Reducer::new(family.len());
    for i in family {
        let cells = grid.cell_range(i)?;
        let mass = w.positive_mass(i)?;
        let mean = f.average_cells(&cells);
        let mut acc = 0.0;
        for c in cells {
            for ((d, v), m) in diff.iter_mut().zip(f.value(c)).zip(&mean) {
                *d = v - m;
            }
            if p == 1.0 {
                acc += space.norm(&diff);
            } else {
                let wc = w.at_cell(c);
                if !(wc > 0.0) {
                    return Err(Error::DegenerateWeight(alloc::format!(
                        "w^(1-p) undefined where w = {wc}"
                    )));
                }
                acc += space.norm_pow(&diff, p) * libm::pow(wc, 1.0 - p);
            }
        }
        let value = libm::pow(acc * step / mass, 1.0 / p) / rho.rho(i.length());
        red.push(*i, value, 0.0);
    }
    Ok(red.finish(NormMode::Deterministic))
}

/// Every dyadic interval of the window down to `min_scale`, plus the window.
pub fn dyadic_family(window: &Interval, min_scale: i32) -> Vec<Interval> {
    let mut out: Vec<Interval> = dyadics_within(window, min_scale).iter().map(|j| j.interval()).collect();
    if !out.contains(window) {
        out.push(*window);
    }
    out
}

/// Dyadic intervals `I` whose wavelets `ψ_J`, `J ⊆ I`, stay inside the
/// window: `sup I + (support − 1)|I| ≤ sup window`.
pub fn interior_dyadic_family(window: &Interval, min_scale: i32, support: usize) -> Vec<Interval> {
    dyadics_within(window, min_scale)
        .iter()
        .map(|j| j.interval())
        .filter(|i| i.hi_atoms() + (support as i64 - 1) * i.length_atoms() <= window.hi_atoms())
        .collect()
}

/// All intervals whose endpoints lie on the `2^points_log2 + 1` equally
/// spaced points of the window.
pub fn grid_family(window: &Interval, points_log2: u32) -> Result<Vec<Interval>> {
    let n = 1i64 << points_log2;
    let len = window.length_atoms();
    if len % n != 0 {
        return Err(Error::Alignment(alloc::format!("window {window} cannot be cut into {n} pieces")));
    }
    let h = len / n;
    let mut out = Vec::with_capacity((n * (n + 1) / 2) as usize);
    for a in 0..n {
        for b in a + 1..=n {
            out.push(Interval::from_atoms(window.lo_atoms() + a * h, window.lo_atoms() + b * h)?);
        }
    }
    Ok(out)
}

/// Union of two families without duplicates, in first-seen order.
pub fn merge_families(a: &[Interval], b: &[Interval]) -> Vec<Interval> {
    let mut seen = alloc::collections::BTreeSet::new();
    a.iter().chain(b).filter(|i| seen.insert(**i)).copied().collect()
}

fn splitmix(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// A pure function of `(I, segment)`, so Monte Carlo streams do not depend
/// on evaluation order.
fn stream_key(i: &Interval, seg_lo: i64) -> u64 {
    splitmix(splitmix(splitmix(i.lo_atoms() as u64) ^ i.hi_atoms() as u64) ^ seg_lo as u64)
}

/// Calls `visit(segment length in atoms, active term indices)` for every
/// maximal piece of `i` on which the set of terms containing it is fixed.
fn for_each_segment(i: &Interval, terms: &[DyadicInterval], mut visit: impl FnMut(i64, i64, &[usize])) {
    let mut events: Vec<(i64, bool, usize)> = Vec::with_capacity(2 * terms.len());
    for (k, j) in terms.iter().enumerate() {
        let iv = j.interval();
        events.push((iv.lo_atoms(), true, k));
        events.push((iv.hi_atoms(), false, k));
    }
    // removals before additions at the same point
    events.sort_unstable_by_key(|e| (e.0, e.1, e.2));
    let mut active: Vec<usize> = Vec::new();
    let mut cursor = i.lo_atoms();
    let mut e = 0;
    while e < events.len() {
        let at = events[e].0;
        if at > cursor && !active.is_empty() {
            visit(cursor, at - cursor, &active);
        }
        cursor = cursor.max(at);
        while e < events.len() && events[e].0 == at {
            let (_, add, k) = events[e];
            if add {
                active.push(k);
            } else {
                active.retain(|x| *x != k);
            }
            e += 1;
        }
    }
}

struct CarlesonTerms<'a> {
    labels: Vec<DyadicInterval>,
    coefficients: Vec<&'a [f64]>,
    factors: Vec<f64>,
}

fn carleson_terms<'a>(
    a: &'a CoefficientArray,
    w: &WeightModel,
    i: &Interval,
    min_scale: i32,
    exponent: f64,
) -> Result<CarlesonTerms<'a>> {
    let entries = a.within(i, min_scale);
    let mut labels = Vec::with_capacity(entries.len());
    let mut coefficients = Vec::with_capacity(entries.len());
    let mut factors = Vec::with_capacity(entries.len());
    for (j, v) in entries {
        let len = j.length();
        let wj = w.positive_mass(&j.interval())?;
        labels.push(j);
        coefficients.push(v);
        // (|J|/w(J))^{exponent} / |J|^{1/2}
        factors.push(libm::pow(len / wj, exponent) / libm::sqrt(len));
    }
    Ok(CarlesonTerms { labels, coefficients, factors })
}

fn check_p(p: f64) -> Result<()> {
    if !(p > 1.0 && p.is_finite()) {
        return Err(Error::Domain(alloc::format!("Carleson exponent p = {p} must lie in (1, ∞)")));
    }
    Ok(())
}

/// The randomized Carleson norm `C_ρ^p(w; X)` of `a` over `family`,
/// keeping only terms with `|J| ≥ 2^min_scale`.
pub fn carleson_norm(
    a: &CoefficientArray,
    w: &WeightModel,
    rho: &impl Growth,
    p: f64,
    family: &[Interval],
    min_scale: i32,
    config: &MomentConfig,
) -> Result<NormReport> {
    nonempty(family)?;
    check_p(p)?;
    let space = *a.space();
    let d = space.dim();
    let p_dual = p / (p - 1.0);
    let mut red = Reducer::new(family.len());
    let mut any_mc = false;
    let mut flat: Vec<f64> = Vec::new();
    for i in family {
        let mass = w.positive_mass(i)?;
        let terms = carleson_terms(a, w, i, min_scale, 1.0 / p_dual)?;
        let (mut mean, mut var) = (0.0, 0.0);
        for_each_segment(i, &terms.labels, |lo, len, active| {
            flat.clear();
            for &k in active {
                let f = terms.factors[k];
                flat.extend(terms.coefficients[k].iter().map(|x| x * f));
            }
            debug_assert_eq!(flat.len(), active.len() * d);
            let pm = power_mean(&space, &flat, p, config, stream_key(i, lo));
            let len = crate::dyadic::atoms_to_f64(len);
            mean += len * pm.mean;
            var += (len * pm.std_error) * (len * pm.std_error);
            any_mc |= !pm.exact;
        });
        let rho_i = rho.rho(i.length());
        let value = libm::pow(mean / mass, 1.0 / p) / rho_i;
        let se = if mean > 0.0 { value * libm::sqrt(var) / (p * mean) } else { 0.0 };
        red.push(*i, value, se);
    }
    let mode = if any_mc {
        NormMode::MonteCarlo { samples: config.mc_samples, seed: config.seed }
    } else {
        NormMode::Exact
    };
    Ok(red.finish(mode))
}

fn require_scalar(a: &CoefficientArray) -> Result<()> {
    if a.space().dim() != 1 {
        return Err(precondition!("scalar form needs a one-dimensional array"));
    }
    Ok(())
}

/// `sup_I ρ(|I|)^{-1} (w(I)^{-1} Σ_{J⊆I} |a_J|² |J|/w(J))^{1/2}`.
pub fn carleson_scalar_p2(
    a: &CoefficientArray,
    w: &WeightModel,
    rho: &impl Growth,
    family: &[Interval],
    min_scale: i32,
) -> Result<NormReport> {
    nonempty(family)?;
    require_scalar(a)?;
    let mut red = Reducer::new(family.len());
    for i in family {
        let mass = w.positive_mass(i)?;
        let mut sum = 0.0;
        for (j, v) in a.within(i, min_scale) {
            sum += v[0] * v[0] * j.length() / w.positive_mass(&j.interval())?;
        }
        red.push(*i, libm::sqrt(sum / mass) / rho.rho(i.length()), 0.0);
    }
    Ok(red.finish(NormMode::Deterministic))
}

/// The square-function form
/// `sup_I ρ^{-1} (w(I)^{-1} ∫_I [Σ |c_J|² (|J|/w(J))^{2/p'} 1_J/|J|]^{p/2})^{1/p}`.
pub fn carleson_scalar_squarefn(
    a: &CoefficientArray,
    w: &WeightModel,
    rho: &impl Growth,
    p: f64,
    family: &[Interval],
    min_scale: i32,
) -> Result<NormReport> {
    nonempty(family)?;
    require_scalar(a)?;
    check_p(p)?;
    let p_dual = p / (p - 1.0);
    let mut red = Reducer::new(family.len());
    for i in family {
        let mass = w.positive_mass(i)?;
        let terms = carleson_terms(a, w, i, min_scale, 1.0 / p_dual)?;
        let mut acc = 0.0;
        for_each_segment(i, &terms.labels, |_, len, active| {
            let s: f64 = active
                .iter()
                .map(|&k| {
                    let x = terms.coefficients[k][0] * terms.factors[k];
                    x * x
                })
                .sum();
            acc += crate::dyadic::atoms_to_f64(len) * libm::pow(s, p / 2.0);
        });
        red.push(*i, libm::pow(acc / mass, 1.0 / p) / rho.rho(i.length()), 0.0);
    }
    Ok(red.finish(NormMode::Deterministic))
}
