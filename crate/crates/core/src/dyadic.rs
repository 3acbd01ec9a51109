//! Exact dyadic arithmetic.
//!
//! Interval endpoints are stored as integer multiples of the atom
//! `2^-ATOM_BITS`, so containment, alignment and concentric dilation are
//! decided with integer arithmetic only.

use core::cmp::Ordering;
use core::fmt;

use alloc::vec::Vec;

use crate::error::{domain, Error, Result};

/// Number of fractional bits of the atomic grid.
pub const ATOM_BITS: i32 = 40;
/// Coarsest scale a [`DyadicInterval`] may have.
pub const MAX_SCALE: i32 = 20;

const ATOMS_PER_UNIT: f64 = (1u64 << ATOM_BITS) as f64;

/// Converts a real number to atoms, failing unless it is exactly representable.
pub fn atoms_from_f64(x: f64) -> Result<i64> {
    let scaled = x * ATOMS_PER_UNIT;
    if !scaled.is_finite() || scaled.abs() >= 9.0e18 || libm::trunc(scaled) != scaled {
        return Err(Error::Alignment(alloc::format!(
            "{x} is not a dyadic rational with at most {ATOM_BITS} fractional bits"
        )));
    }
    Ok(scaled as i64)
}

#[inline]
pub fn atoms_to_f64(a: i64) -> f64 {
    a as f64 / ATOMS_PER_UNIT
}

#[inline]
fn unit_atoms(scale: i32) -> i64 {
    1i64 << (scale + ATOM_BITS)
}

/// The dyadic interval `2^scale · [position, position + 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DyadicInterval {
    pub scale: i32,
    pub position: i64,
}

impl DyadicInterval {
    pub fn new(scale: i32, position: i64) -> Result<Self> {
        if !(-ATOM_BITS..=MAX_SCALE).contains(&scale) {
            return Err(domain!("dyadic scale {scale} outside [-{ATOM_BITS}, {MAX_SCALE}]"));
        }
        Ok(DyadicInterval { scale, position })
    }

    /// The dyadic interval of the given scale containing the atom `a`.
    pub fn containing_atom(scale: i32, a: i64) -> Self {
        DyadicInterval { scale, position: a.div_euclid(unit_atoms(scale)) }
    }

    pub fn length(&self) -> f64 {
        libm::ldexp(1.0, self.scale)
    }

    pub fn left(&self) -> f64 {
        libm::ldexp(self.position as f64, self.scale)
    }

    pub fn interval(&self) -> Interval {
        let u = unit_atoms(self.scale);
        Interval { lo: self.position * u, hi: (self.position + 1) * u }
    }

    pub fn parent(&self) -> Self {
        DyadicInterval { scale: self.scale + 1, position: self.position.div_euclid(2) }
    }

    pub fn children(&self) -> [Self; 2] {
        let s = self.scale - 1;
        [
            DyadicInterval { scale: s, position: 2 * self.position },
            DyadicInterval { scale: s, position: 2 * self.position + 1 },
        ]
    }

    /// `self ⊆ other`.
    pub fn is_within(&self, other: &DyadicInterval) -> bool {
        self.scale <= other.scale
            && (self.position >> (other.scale - self.scale)) == other.position
    }

    pub fn is_nested_with(&self, other: &DyadicInterval) -> bool {
        self.is_within(other) || other.is_within(self)
    }
}

/// Ordered by scale descending, then position ascending.
impl Ord for DyadicInterval {
    fn cmp(&self, other: &Self) -> Ordering {
        other.scale.cmp(&self.scale).then(self.position.cmp(&other.position))
    }
}

impl PartialOrd for DyadicInterval {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for DyadicInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "2^{}[{}, {})", self.scale, self.position, self.position + 1)
    }
}

/// A half-open interval `[lo, hi)` with atom-exact endpoints.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Interval {
    lo: i64,
    hi: i64,
}

impl Interval {
    pub fn from_atoms(lo: i64, hi: i64) -> Result<Self> {
        if lo >= hi {
            return Err(domain!("empty interval [{lo}, {hi}) in atoms"));
        }
        Ok(Interval { lo, hi })
    }

    pub fn new(left: f64, right: f64) -> Result<Self> {
        Self::from_atoms(atoms_from_f64(left)?, atoms_from_f64(right)?)
    }

    /// `[lo · 2^-level, hi · 2^-level)`.
    pub fn from_cells(lo: i64, hi: i64, level: i32) -> Result<Self> {
        let shift = ATOM_BITS - level;
        if !(0..=62).contains(&shift) {
            return Err(domain!("grid level {level} not representable"));
        }
        Self::from_atoms(lo << shift, hi << shift)
    }

    /// The symmetric window `[-2^m, 2^m)`.
    pub fn symmetric_window(m: i32) -> Self {
        let u = unit_atoms(m);
        Interval { lo: -u, hi: u }
    }

    pub fn lo_atoms(&self) -> i64 {
        self.lo
    }

    pub fn hi_atoms(&self) -> i64 {
        self.hi
    }

    pub fn left(&self) -> f64 {
        atoms_to_f64(self.lo)
    }

    pub fn right(&self) -> f64 {
        atoms_to_f64(self.hi)
    }

    pub fn length(&self) -> f64 {
        atoms_to_f64(self.hi - self.lo)
    }

    pub fn length_atoms(&self) -> i64 {
        self.hi - self.lo
    }

    pub fn center(&self) -> f64 {
        (self.left() + self.right()) * 0.5
    }

    /// Whether both endpoints are multiples of `2^-level`.
    pub fn is_aligned(&self, level: i32) -> bool {
        let shift = ATOM_BITS - level;
        if shift <= 0 {
            return true;
        }
        if shift >= 63 {
            return false;
        }
        let mask = (1i64 << shift) - 1;
        self.lo & mask == 0 && self.hi & mask == 0
    }

    pub fn contains(&self, other: &Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn contains_atom(&self, a: i64) -> bool {
        self.lo <= a && a < self.hi
    }

    pub fn intersects(&self, other: &Interval) -> bool {
        self.lo < other.hi && other.lo < self.hi
    }

    /// Union of two intervals that touch or overlap.
    pub fn hull(&self, other: &Interval) -> Interval {
        Interval { lo: self.lo.min(other.lo), hi: self.hi.max(other.hi) }
    }

    /// The concentric interval `2^ell · I`.
    pub fn dilate(&self, ell: u32) -> Result<Interval> {
        if ell == 0 {
            return Ok(*self);
        }
        let len = self.hi - self.lo;
        let factor = 1i64.checked_shl(ell).filter(|f| *f > 0);
        let grown = factor.and_then(|f| f.checked_mul(len));
        let sum = self.lo + self.hi;
        match grown {
            Some(g) if (sum - g) % 2 == 0 => Interval::from_atoms((sum - g) / 2, (sum + g) / 2),
            _ => Err(Error::Alignment(alloc::format!("dilation 2^{ell} of {self} not representable"))),
        }
    }

    /// Distance between the closures of the two intervals.
    pub fn distance(&self, other: &Interval) -> f64 {
        if self.intersects(other) {
            0.0
        } else if self.hi <= other.lo {
            atoms_to_f64(other.lo - self.hi)
        } else {
            atoms_to_f64(self.lo - other.hi)
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {})", self.left(), self.right())
    }
}

impl From<DyadicInterval> for Interval {
    fn from(j: DyadicInterval) -> Self {
        j.interval()
    }
}

/// Every dyadic `J ⊆ I` with `|J| ≥ 2^min_scale`, ordered by scale
/// descending then position ascending.
pub fn dyadics_within(i: &Interval, min_scale: i32) -> Vec<DyadicInterval> {
    let mut out = Vec::new();
    let min_scale = min_scale.max(-ATOM_BITS);
    let mut top = MAX_SCALE;
    while top > min_scale && unit_atoms(top) > i.length_atoms() {
        top -= 1;
    }
    let mut scale = top;
    while scale >= min_scale {
        let u = unit_atoms(scale);
        let first = i.lo.div_euclid(u) + i64::from(i.lo.rem_euclid(u) != 0);
        let end = i.hi.div_euclid(u);
        for position in first..end {
            out.push(DyadicInterval { scale, position });
        }
        scale -= 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(a: f64, b: f64) -> Interval {
        Interval::new(a, b).unwrap()
    }

    #[test]
    fn unit_interval_two_levels() {
        let got = dyadics_within(&iv(0.0, 1.0), -1);
        let want = [
            DyadicInterval { scale: 0, position: 0 },
            DyadicInterval { scale: -1, position: 0 },
            DyadicInterval { scale: -1, position: 1 },
        ];
        assert_eq!(got, want);
    }

    #[test]
    fn straddling_interval_has_no_half() {
        let got = dyadics_within(&iv(0.25, 0.75), -2);
        let want = [
            DyadicInterval { scale: -2, position: 1 },
            DyadicInterval { scale: -2, position: 2 },
        ];
        assert_eq!(got, want);
    }

    #[test]
    fn full_count_matches_brute_enumeration() {
        let l = 4;
        let got = dyadics_within(&iv(0.0, 1.0), -l);
        let mut brute = 0;
        for scale in -l..=0 {
            for position in -40i64..40 {
                let j = DyadicInterval { scale, position };
                if iv(0.0, 1.0).contains(&j.interval()) {
                    brute += 1;
                }
            }
        }
        assert_eq!(got.len(), brute);
        assert_eq!(got.len(), (1 << (l + 1)) - 1);
    }

    #[test]
    fn nesting_recursion() {
        let j = DyadicInterval { scale: 0, position: 3 };
        let mut rec = alloc::vec![j];
        for c in j.children() {
            rec.extend(dyadics_within(&c.interval(), -3));
        }
        rec.sort();
        let mut direct = dyadics_within(&j.interval(), -3);
        direct.sort();
        assert_eq!(rec, direct);
    }

    #[test]
    fn containment_is_integer_exact() {
        let j = DyadicInterval { scale: -3, position: -5 };
        assert!(j.is_within(&DyadicInterval { scale: -1, position: -2 }));
        assert!(!j.is_within(&DyadicInterval { scale: -1, position: -1 }));
        assert!(j.is_within(&j));
        assert!(iv(-1.0, 0.0).contains(&j.interval()));
    }

    #[test]
    fn dilation_is_concentric() {
        let i = iv(0.0, 1.0);
        assert_eq!(i.dilate(1).unwrap(), iv(-0.5, 1.5));
        assert_eq!(i.dilate(3).unwrap(), iv(-3.5, 4.5));
        assert_eq!(iv(4.0, 4.5).dilate(1).unwrap(), iv(3.75, 4.75));
    }

    #[test]
    fn inexact_endpoints_are_rejected() {
        assert!(Interval::new(0.1, 1.0).is_err());
        assert!(Interval::new(1.0, 1.0).is_err());
    }

    #[test]
    fn alignment() {
        let i = iv(0.25, 0.75);
        assert!(i.is_aligned(2));
        assert!(!i.is_aligned(1));
        assert!(iv(-8.0, 8.0).is_aligned(-3));
    }
}
