//! Numerical laboratory for weighted, vector-valued BMO functions and the
//! randomized Carleson norms of their wavelet coefficients.
//!
//! Everything here is pure computation over finite, exactly representable
//! objects: functions sampled at the midpoints of a uniform dyadic grid,
//! dyadic intervals with integer coordinates, and finitely supported
//! coefficient arrays. The crate is `no_std` and only needs `alloc`.
//!
//! * [`dyadic`] and [`grid`]: exact interval arithmetic and midpoint calculus.
//! * [`weights`]: Muckenhoupt weights and their `A_q` certificates.
//! * [`growth`]: growth functions and the `η` transform.
//! * [`wavelets`]: Haar and Daubechies wavelets, coefficients and kernel checks.
//! * [`randsign`]: moments of Rademacher series, exact or Monte Carlo.
//! * [`norms`]: BMO, John–Nirenberg and Carleson norms.
//! * [`synthesis`]: annular decomposition and the renormalized wavelet series.
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

mod error;
pub mod dyadic;
pub mod grid;
pub mod growth;
pub mod norms;
pub mod quad;
pub mod randsign;
pub mod space;
pub mod synthesis;
pub mod wavelets;
pub mod weights;

pub use dyadic::{DyadicInterval, Interval};
pub use error::{Error, Result};
pub use grid::{Grid, GridFunction};
pub use growth::{EtaTransform, Growth, GrowthKind, GrowthModel};
pub use norms::{CoefficientArray, NormReport};
pub use randsign::{MomentConfig, MomentEstimate, SignSeries};
pub use space::VectorSpace;
pub use synthesis::{Cutoffs, SynthesisResult};
pub use wavelets::{KernelSpec, WaveletKind, WaveletModel};
pub use weights::{AqCertificate, WeightKind, WeightModel};
