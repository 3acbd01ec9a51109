//! Finite-dimensional `ℓ^r` value spaces.

use crate::error::{domain, Result};

/// The space `ℓ^r_d`, standing in for a UMD Banach space.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct VectorSpace {
    dim: usize,
    r: f64,
}

impl VectorSpace {
    pub fn new(dim: usize, r: f64) -> Result<Self> {
        if dim == 0 {
            return Err(domain!("vector dimension must be positive"));
        }
        if !(r > 1.0 && r.is_finite()) {
            return Err(domain!("exponent r = {r} must lie in (1, ∞)"));
        }
        Ok(VectorSpace { dim, r })
    }

    /// Scalars, with the Hilbert exponent recorded.
    pub fn scalar() -> Self {
        VectorSpace { dim: 1, r: 2.0 }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn exponent(&self) -> f64 {
        self.r
    }

    pub fn is_scalar(&self) -> bool {
        self.dim == 1
    }

    #[inline]
    pub fn norm(&self, v: &[f64]) -> f64 {
        debug_assert_eq!(v.len(), self.dim);
        if self.dim == 1 {
            return v[0].abs();
        }
        if self.r == 2.0 {
            return libm::sqrt(v.iter().map(|x| x * x).sum());
        }
        let s: f64 = v.iter().map(|x| libm::pow(x.abs(), self.r)).sum();
        libm::pow(s, 1.0 / self.r)
    }

    /// `‖v‖^p`, avoiding a root and a power when they cancel.
    #[inline]
    pub fn norm_pow(&self, v: &[f64], p: f64) -> f64 {
        if self.dim == 1 {
            return powi_or_powf(v[0].abs(), p);
        }
        if self.r == p {
            return v.iter().map(|x| powi_or_powf(x.abs(), p)).sum();
        }
        if self.r == 2.0 && p == 1.0 {
            return libm::sqrt(v.iter().map(|x| x * x).sum());
        }
        powi_or_powf(self.norm(v), p)
    }
}

#[inline]
pub(crate) fn powi_or_powf(x: f64, p: f64) -> f64 {
    if p == 1.0 {
        x
    } else if p == 2.0 {
        x * x
    } else if p == 4.0 {
        let y = x * x;
        y * y
    } else {
        libm::pow(x, p)
    }
}
