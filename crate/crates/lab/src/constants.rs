//! Empirical constants, measured on the frozen corpus and stored with 25%
//! headroom. They are properties of this implementation at desk scale,
//! not sharp analytic values.

/// Headroom applied to every calibrated maximum.
pub const HEADROOM: f64 = 1.25;

/// Oscillation growth, `ℓ ≤ 3`: `lhs/rhs`. Observed 1.50.
pub const OSCILLATION: f64 = 1.875;

/// John–Nirenberg variant, `p ∈ (1, q']`: `jn_p / bmo`.
/// Observed 1.805.
pub const JOHN_NIRENBERG: f64 = 2.26;

/// Kahane comparison for `(p, r) ∈ {(1,2), (2,4), (1,4)}`. A fixed ceiling
/// rather than a calibrated value; observed 1.59.
pub const KAHANE: f64 = 3.0;

/// Theorem B per-piece constants for `f_1`, `f_2`, `f_3`, each normalized by
/// the Carleson norm. Observed 0.135, 1.19, 0.732.
pub const PIECES: [f64; 3] = [0.17, 1.50, 0.92];

/// Relative stability of headline ratios under `L → L+1` or cutoff refinement.
pub const STABILITY: f64 = 0.10;
