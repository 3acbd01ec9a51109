//! Muckenhoupt weights.
//!
//! A [`WeightModel`] is a positive scalar function on a grid with eagerly
//! built prefix masses, so `w(I)` is an O(1) lookup for every grid-aligned
//! interval. `A_q` membership can only be certified over a finite interval
//! family; [`aq_constant`] records which family it used.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::dyadic::{dyadics_within, DyadicInterval, Interval};
use crate::error::{domain, Error, Result};
use crate::grid::{Grid, GridFunction};

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum WeightKind {
    Constant { value: f64 },
    /// `|x - center|^a`.
    Power { a: f64, center: f64 },
    /// `left` below `breakpoint`, `right` from it on.
    Step { breakpoint: f64, left: f64, right: f64 },
    Sampled,
}

#[derive(Debug, Clone)]
pub struct WeightModel {
    kind: WeightKind,
    samples: GridFunction,
    prefix: Vec<f64>,
}

impl WeightModel {
    pub fn constant(grid: Grid, value: f64) -> Result<Self> {
        if !(value > 0.0 && value.is_finite()) {
            return Err(domain!("constant weight must be positive, got {value}"));
        }
        Ok(Self::build(WeightKind::Constant { value }, GridFunction::scalar_from_fn(grid, |_| value)))
    }

    pub fn power(grid: Grid, a: f64, center: f64) -> Result<Self> {
        if !(a > -1.0) {
            return Err(domain!("power weight exponent a = {a} is not locally integrable"));
        }
        let samples = GridFunction::scalar_from_fn(grid, |x| libm::pow((x - center).abs(), a));
        if samples.samples().iter().any(|v| !(v.is_finite() && *v > 0.0)) {
            return Err(domain!("power weight sampled at its singular point {center}"));
        }
        Ok(Self::build(WeightKind::Power { a, center }, samples))
    }

    pub fn step(grid: Grid, breakpoint: f64, left: f64, right: f64) -> Result<Self> {
        if !(left > 0.0 && right > 0.0) {
            return Err(domain!("step weight levels must be positive"));
        }
        let samples = GridFunction::scalar_from_fn(grid, |x| if x < breakpoint { left } else { right });
        Ok(Self::build(WeightKind::Step { breakpoint, left, right }, samples))
    }

    /// Arbitrary nonnegative samples. Zeros are admitted here and reported
    /// as degenerate by the operations that divide by them.
    pub fn sampled(samples: GridFunction) -> Result<Self> {
        if samples.dim() != 1 {
            return Err(domain!("weights are scalar"));
        }
        if let Some(v) = samples.samples().iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
            return Err(domain!("weight sample {v} is negative or not finite"));
        }
        Ok(Self::build(WeightKind::Sampled, samples))
    }

    fn build(kind: WeightKind, samples: GridFunction) -> Self {
        let step = samples.grid().step();
        let mut prefix = Vec::with_capacity(samples.samples().len() + 1);
        let mut acc = 0.0;
        let mut comp = 0.0;
        prefix.push(0.0);
        // compensated so differences of prefixes match direct sums closely
        for v in samples.samples() {
            let y = v * step - comp;
            let t = acc + y;
            comp = (t - acc) - y;
            acc = t;
            prefix.push(acc);
        }
        WeightModel { kind, samples, prefix }
    }

    pub fn kind(&self) -> WeightKind {
        self.kind
    }

    pub fn grid(&self) -> &Grid {
        self.samples.grid()
    }

    pub fn samples(&self) -> &GridFunction {
        &self.samples
    }

    #[inline]
    pub fn at_cell(&self, c: usize) -> f64 {
        self.samples.samples()[c]
    }

    /// Scalar multiple `c·w`, keeping the kind's parameters meaningful.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        if !(c > 0.0) {
            return Err(domain!("weights scale by positive factors only"));
        }
        Ok(Self::build(WeightKind::Sampled, self.samples.scaled(c)))
    }

    /// `w(I)`.
    pub fn mass(&self, i: &Interval) -> Result<f64> {
        let cells = self.grid().cell_range(i)?;
        Ok(self.prefix[cells.end] - self.prefix[cells.start])
    }

    /// `w(I)`, failing when it vanishes.
    pub fn positive_mass(&self, i: &Interval) -> Result<f64> {
        let m = self.mass(i)?;
        if m > 0.0 {
            Ok(m)
        } else {
            Err(Error::DegenerateWeight(alloc::format!("w({i}) = {m}")))
        }
    }

    /// Direct midpoint sum of `w^power` over `I`.
    pub fn integrate_power(&self, i: &Interval, power: f64) -> Result<f64> {
        let cells = self.grid().cell_range(i)?;
        let step = self.grid().step();
        let mut acc = 0.0;
        for c in cells {
            let v = self.at_cell(c);
            if power < 0.0 && v <= 0.0 {
                return Err(Error::DegenerateWeight(alloc::format!(
                    "w vanishes at x = {} where w^{power} is needed",
                    self.grid().midpoint(c)
                )));
            }
            acc += libm::pow(v, power);
        }
        Ok(acc * step)
    }
}

/// Result of certifying the `A_q` condition over a finite interval family.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct AqCertificate {
    pub q: f64,
    /// Largest quotient over the family.
    pub constant: f64,
    pub attaining: Interval,
    pub family_size: usize,
    /// Largest `w(2I)/w(I)` over members whose double stays in the window.
    pub doubling: Option<f64>,
    /// Largest quotient among members of each length, by increasing length.
    pub scale_profile: Vec<(f64, f64)>,
    /// The per-length maxima keep increasing without a geometric slowdown,
    /// the finite-grid signature of a weight outside `A_q`.
    pub unbounded_growth_suspected: bool,
}

/// `⟨w⟩_I · ⟨w^{-1/(q-1)}⟩_I^{q-1}`.
pub fn aq_quotient(w: &WeightModel, q: f64, i: &Interval) -> Result<f64> {
    if !(q > 1.0 && q.is_finite()) {
        return Err(domain!("A_q exponent q = {q} must lie in (1, ∞)"));
    }
    let cells = w.grid().cell_range(i)?;
    let n = cells.len() as f64;
    let dual = -1.0 / (q - 1.0);
    let mut sum_w = 0.0;
    let mut sum_dual = 0.0;
    for c in cells {
        let v = w.at_cell(c);
        if !(v > 0.0) {
            return Err(domain!("weight is {v} at x = {} inside {i}", w.grid().midpoint(c)));
        }
        sum_w += v;
        sum_dual += libm::pow(v, dual);
    }
    Ok((sum_w / n) * libm::pow(sum_dual / n, q - 1.0))
}

/// All dyadic intervals of the window down to `min_scale`, plus the unions
/// of same-scale neighbours that straddle a parent boundary.
pub fn canonical_family(window: &Interval, min_scale: i32) -> Vec<Interval> {
    let dyadics = dyadics_within(window, min_scale);
    let mut out: Vec<Interval> = dyadics.iter().map(|j| j.interval()).collect();
    for j in &dyadics {
        if j.position.rem_euclid(2) == 1 {
            let next = DyadicInterval { scale: j.scale, position: j.position + 1 }.interval();
            if window.contains(&next) {
                out.push(j.interval().hull(&next));
            }
        }
    }
    out
}

pub fn aq_constant(w: &WeightModel, q: f64, family: &[Interval]) -> Result<AqCertificate> {
    if family.is_empty() {
        return Err(domain!("A_q certification needs a nonempty family"));
    }
    let window = w.grid().window();
    let mut best = (f64::NEG_INFINITY, family[0]);
    let mut doubling: Option<f64> = None;
    let mut profile: BTreeMap<i64, (f64, usize)> = BTreeMap::new();
    for i in family {
        let v = aq_quotient(w, q, i)?;
        if v > best.0 {
            best = (v, *i);
        }
        let slot = profile.entry(i.length_atoms()).or_insert((f64::NEG_INFINITY, 0));
        slot.0 = slot.0.max(v);
        slot.1 += 1;
        if let Ok(double) = i.dilate(1) {
            if window.contains(&double) && double.is_aligned(w.grid().level()) {
                let ratio = w.positive_mass(&double)? / w.positive_mass(i)?;
                doubling = Some(doubling.map_or(ratio, |d: f64| d.max(ratio)));
            }
        }
    }
    let scale_profile: Vec<(f64, f64)> = profile
        .iter()
        .map(|(len, v)| (crate::dyadic::atoms_to_f64(*len), v.0))
        .collect();
    // lengths with a single member (typically the window) carry no trend
    let trend: Vec<(f64, f64)> = profile
        .iter()
        .filter(|(_, v)| v.1 > 1)
        .map(|(len, v)| (crate::dyadic::atoms_to_f64(*len), v.0))
        .collect();
    Ok(AqCertificate {
        q,
        constant: best.0,
        attaining: best.1,
        family_size: family.len(),
        doubling,
        unbounded_growth_suspected: growth_suspected(&trend),
        scale_profile,
    })
}

fn growth_suspected(profile: &[(f64, f64)]) -> bool {
    if profile.len() < 4 {
        return false;
    }
    let vals: Vec<f64> = profile.iter().map(|p| p.1).collect();
    let n = vals.len();
    let d: Vec<f64> = (n - 4..n - 1).map(|k| vals[k + 1] - vals[k]).collect();
    let rising = d.iter().all(|x| *x > 1e-12 * vals[n - 1]);
    rising && d[2] >= 0.9 * d[1] && d[1] >= 0.9 * d[0]
}

/// `w(2^ℓ I) / (w(I) · 2^{qℓ})` for `ℓ = 0..=ell_max`.
pub fn dilation_growth(w: &WeightModel, i: &Interval, q: f64, ell_max: u32) -> Result<Vec<f64>> {
    let base = w.positive_mass(i)?;
    let window = w.grid().window();
    let mut out = Vec::with_capacity(ell_max as usize + 1);
    for ell in 0..=ell_max {
        let big = i.dilate(ell)?;
        if !window.contains(&big) {
            return Err(domain!("2^{ell}·{i} = {big} escapes the window {window}"));
        }
        out.push(w.mass(&big)? / (base * libm::pow(2.0, q * ell as f64)));
    }
    Ok(out)
}

/// `∫_I |x - c|^a dx` in closed form.
pub fn power_mass_exact(a: f64, center: f64, i: &Interval) -> f64 {
    let prim = |x: f64| {
        let t = x - center;
        let m = libm::pow(t.abs(), a + 1.0) / (a + 1.0);
        if t < 0.0 {
            -m
        } else {
            m
        }
    };
    prim(i.right()) - prim(i.left())
}
