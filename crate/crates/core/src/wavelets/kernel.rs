//! Wavelet kernels `K(x,y) = Σ_{j,k} a_{jk} 2^j φ(2^j x − k) ψ(2^j y − k)`.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::WaveletModel;
use crate::error::{domain, Result};
use crate::growth::ProbeCheck;

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "kind", rename_all = "kebab-case"))]
pub enum KernelCoefficients {
    /// The same `a_{jk}` everywhere.
    Constant { value: f64 },
    /// A single nonzero `a_{jk}`.
    Single { scale: i32, translation: i64, value: f64 },
    /// Independent fair signs, a pure function of `(seed, j, k)`.
    RandomSigns { seed: u64 },
}

impl KernelCoefficients {
    pub fn at(&self, j: i32, k: i64) -> f64 {
        match *self {
            KernelCoefficients::Constant { value } => value,
            KernelCoefficients::Single { scale, translation, value } => {
                if scale == j && translation == k {
                    value
                } else {
                    0.0
                }
            }
            KernelCoefficients::RandomSigns { seed } => {
                let mut key = [0u8; 32];
                key[..8].copy_from_slice(&seed.to_le_bytes());
                key[8..12].copy_from_slice(&j.to_le_bytes());
                key[12..20].copy_from_slice(&k.to_le_bytes());
                if ChaCha8Rng::from_seed(key).next_u32() & 1 == 1 {
                    -1.0
                } else {
                    1.0
                }
            }
        }
    }

    fn bound(&self) -> f64 {
        match *self {
            KernelCoefficients::Constant { value } | KernelCoefficients::Single { value, .. } => value.abs(),
            KernelCoefficients::RandomSigns { .. } => 1.0,
        }
    }
}

/// A kernel truncated to scales `j_min..=j_max`; translations are
/// unrestricted since only finitely many `k` reach a given pair.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelSpec {
    wavelet: WaveletModel,
    j_min: i32,
    j_max: i32,
    coefficients: KernelCoefficients,
}

impl KernelSpec {
    pub fn new(wavelet: WaveletModel, j_min: i32, j_max: i32, coefficients: KernelCoefficients) -> Result<Self> {
        if j_min > j_max || j_min < -60 || j_max > 60 {
            return Err(domain!("scale range [{j_min}, {j_max}] is empty or too wide"));
        }
        if !(coefficients.bound() <= 1.0) {
            return Err(domain!("kernel coefficients must satisfy |a_jk| ≤ 1"));
        }
        Ok(KernelSpec { wavelet, j_min, j_max, coefficients })
    }

    pub fn with_scales(&self, j_min: i32, j_max: i32) -> Result<Self> {
        KernelSpec::new(self.wavelet.clone(), j_min, j_max, self.coefficients)
    }

    pub fn scales(&self) -> (i32, i32) {
        (self.j_min, self.j_max)
    }

    pub fn wavelet(&self) -> &WaveletModel {
        &self.wavelet
    }

    pub fn eval(&self, x: f64, y: f64) -> f64 {
        let s = self.wavelet.support() as f64;
        let mut total = 0.0;
        for j in self.j_min..=self.j_max {
            let (u, v) = (libm::ldexp(x, j), libm::ldexp(y, j));
            // φ(u − k) ψ(v − k) ≠ 0 needs u − k and v − k in [0, s)
            let k_lo = libm::floor(u.max(v) - s) as i64;
            let k_hi = libm::floor(u.min(v)) as i64;
            let mut level = 0.0;
            for k in k_lo..=k_hi {
                let a = self.coefficients.at(j, k);
                if a != 0.0 {
                    let kf = k as f64;
                    level += a * self.wavelet.phi(u - kf) * self.wavelet.psi(v - kf);
                }
            }
            total += libm::ldexp(level, j);
        }
        total
    }
}

/// `max |K(x,y)|·|x − y|` over the pairs.
pub fn kernel_size_check(ks: &KernelSpec, pairs: &[(f64, f64)], bound: f64) -> Result<ProbeCheck> {
    let mut worst: f64 = 0.0;
    for &(x, y) in pairs {
        if x == y || !x.is_finite() || !y.is_finite() {
            return Err(domain!("kernel size check needs distinct finite points, got ({x}, {y})"));
        }
        worst = worst.max(ks.eval(x, y).abs() * (x - y).abs());
    }
    Ok(ProbeCheck { pass: worst <= bound, worst })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec::Vec;

    fn db4() -> WaveletModel {
        WaveletModel::daubechies(4).unwrap()
    }

    #[test]
    fn zero_coefficients_give_zero() {
        let ks = KernelSpec::new(db4(), -3, 3, KernelCoefficients::Constant { value: 0.0 }).unwrap();
        let c = kernel_size_check(&ks, &[(0.1, 0.7), (-2.0, 3.0)], 1.0).unwrap();
        assert_eq!(c.worst, 0.0);
        assert!(kernel_size_check(&ks, &[(0.5, 0.5)], 1.0).is_err());
        assert!(KernelSpec::new(db4(), 0, 1, KernelCoefficients::Constant { value: 1.5 }).is_err());
    }

    #[test]
    fn single_term_matches_direct_evaluation() {
        let w = db4();
        let ks = KernelSpec::new(
            w.clone(),
            -2,
            2,
            KernelCoefficients::Single { scale: 0, translation: 0, value: 1.0 },
        )
        .unwrap();
        for (x, y) in [(0.3, 2.9), (1.1, 1.7), (6.5, 0.2)] {
            assert_eq!(ks.eval(x, y), w.phi(x) * w.psi(y));
        }
        // both factors live on [0, 7): far apart points see nothing
        let far = kernel_size_check(&ks, &[(0.5, 40.0)], 1.0).unwrap();
        assert_eq!(far.worst, 0.0);
    }

    #[test]
    fn random_signs_are_deterministic() {
        let a = KernelCoefficients::RandomSigns { seed: 11 };
        let signs: Vec<f64> = (0..64).map(|k| a.at(-2, k)).collect();
        assert!(signs.iter().all(|s| s.abs() == 1.0));
        assert!(signs.iter().any(|s| *s > 0.0) && signs.iter().any(|s| *s < 0.0));
        assert_eq!(signs, (0..64).map(|k| a.at(-2, k)).collect::<Vec<_>>());
    }
}
