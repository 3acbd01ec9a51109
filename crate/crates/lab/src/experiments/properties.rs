use bmo_core::growth::{eta, eta_quadrature};
use bmo_core::norms::{bmo_norm, carleson_norm, carleson_scalar_p2, carleson_scalar_squarefn, jn_p_norm};
use bmo_core::randsign::{contraction_check, moment, MomentMode, EXACT_SLACK};
use bmo_core::synthesis::{constancy_check, holder_weight_check, oscillation_growth_check, Cutoffs};
use bmo_core::wavelets::{kernel_size_check, KernelCoefficients, KernelSpec};
use bmo_core::{
    CoefficientArray, Grid, GridFunction, Growth, GrowthKind, GrowthModel, Interval, MomentConfig, SignSeries,
    VectorSpace, WaveletModel, WeightModel,
};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{relative_change, Check};
use crate::corpus::case_rng;

/// Sharp Khintchine constant `K_p` with `K_p^{-1} ≤ ‖Σε_kλ_k‖_p / ‖λ‖_2 ≤ K_p`:
/// `2^{1/p − 1/2}` below 2 (valid up to p ≈ 1.85), `√2 (Γ((p+1)/2)/√π)^{1/p}` above.
pub fn khintchine_constant(p: f64) -> f64 {
    if p < 2.0 {
        (1.0 / p - 0.5).exp2()
    } else {
        std::f64::consts::SQRT_2 * (libm::lgamma((p + 1.0) / 2.0) - 0.5 * std::f64::consts::PI.ln()).exp().powf(1.0 / p)
    }
}

/// Criterion-style outcome that can fail with an error instead of a number.
fn or_failed(name: &str, r: crate::error::LabResult<Check>) -> Check {
    r.unwrap_or_else(|e| Check::failed(name, e))
}

/// Randomized Carleson norm at `p = 2` in exact mode against the closed
/// scalar form `Σ |a_J|² |J|/w(J)`.
pub fn check_scalar_p2_identity(
    arrays: &[CoefficientArray],
    w: &WeightModel,
    rho: &(impl Growth + Sync),
    family: &[Interval],
    min_scale: i32,
    tolerance: f64,
) -> Check {
    let name = "scalar p=2 identity";
    or_failed(name, (|| {
        let exact = MomentConfig { exact_threshold: usize::MAX, ..MomentConfig::default() };
        let mut worst: f64 = 0.0;
        for a in arrays {
            let r = carleson_norm(a, w, rho, 2.0, family, min_scale, &exact)?.value;
            let s = carleson_scalar_p2(a, w, rho, family, min_scale)?.value;
            worst = worst.max((r - s).abs() / s.max(f64::MIN_POSITIVE));
        }
        Ok(Check::new(name, worst <= tolerance, worst, tolerance, arrays.len(), "max relative difference".into()))
    })())
}

/// `carleson_scalar_squarefn / carleson_norm` stays in `[1/K_p, K_p]`, and is 1 at `p = 2`.
pub fn check_khintchine(
    arrays: &[CoefficientArray],
    w: &WeightModel,
    rho: &(impl Growth + Sync),
    family: &[Interval],
    min_scale: i32,
    p: f64,
    equality_tolerance: f64,
) -> Check {
    let name = format!("Khintchine equivalence p={p}");
    or_failed(&name, (|| {
        let exact = MomentConfig { exact_threshold: usize::MAX, ..MomentConfig::default() };
        let ratios: Vec<f64> = arrays
            .par_iter()
            .map(|a| -> crate::error::LabResult<f64> {
                let c = carleson_norm(a, w, rho, p, family, min_scale, &exact)?.value;
                let s = carleson_scalar_squarefn(a, w, rho, p, family, min_scale)?.value;
                Ok(s / c)
            })
            .collect::<Result<_, _>>()?;
        let lo = ratios.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = ratios.iter().copied().fold(0.0, f64::max);
        let (pass, measured, bound) = if p == 2.0 {
            let dev = (lo - 1.0).abs().max((hi - 1.0).abs());
            (dev <= equality_tolerance, dev, equality_tolerance)
        } else {
            let k = khintchine_constant(p);
            let spread = hi.max(1.0 / lo);
            (lo >= 1.0 / k && hi <= k, spread, k)
        };
        Ok(Check::new(&name, pass, measured, bound, arrays.len(), format!("ratio range [{lo:.6}, {hi:.6}]")))
    })())
}

/// `η ≥ ρ` on the probes; closed form against quadrature; `η/ρ = 1/(2−q−α)` for powers.
pub fn check_eta(growths: &[GrowthModel], q: f64, probes: &[f64], tolerance: f64) -> Check {
    let name = "eta transform";
    or_failed(name, (|| {
        let mut below = 0usize;
        let mut worst_quad: f64 = 0.0;
        let mut worst_power: f64 = 0.0;
        let mut cases = 0;
        for g in growths {
            for &t in probes {
                cases += 1;
                let e = eta(g, q, t)?;
                if e < g.rho(t) {
                    below += 1;
                }
                if let Some(closed) = g.eta_closed_form(q, t) {
                    let closed = closed?;
                    worst_quad = worst_quad.max(relative_change(closed, eta_quadrature(g, q, t)?));
                }
                if let GrowthKind::Power { alpha, .. } = *g.kind() {
                    let want = 1.0 / (2.0 - q - alpha);
                    worst_power = worst_power.max(((e / g.rho(t)) - want).abs() / want);
                }
            }
        }
        let measured = worst_quad.max(worst_power);
        Ok(Check::new(
            name,
            below == 0 && measured <= tolerance,
            measured,
            tolerance,
            cases,
            format!("{below} probes with η < ρ; quadrature {worst_quad:.2e}; power ratio {worst_power:.2e}"),
        ))
    })())
}

fn random_series(rng: &mut ChaCha8Rng, n_max: usize, exponents: &[f64], d_max: usize) -> SignSeries {
    let n = rng.gen_range(1..=n_max);
    let d = rng.gen_range(1..=d_max);
    let r = exponents[rng.gen_range(0..exponents.len())];
    let space = if d == 1 { VectorSpace::scalar() } else { VectorSpace::new(d, r).expect("valid exponent") };
    let mut s = SignSeries::new(space);
    for _ in 0..n {
        let scale = rng.gen_range(-3.0f64..1.0).exp2();
        let v: Vec<f64> = (0..d).map(|_| scale * rng.gen_range(-1.0..1.0)).collect();
        s.push(&v).expect("matching dimension");
    }
    s
}

const MOMENTS: [f64; 5] = [1.0, 1.5, 2.0, 3.0, 4.0];

/// Contraction principle in exact mode over random `(ξ, λ)`.
pub fn check_contraction(cases: usize, n_max: usize, exponents: &[f64], seed: u64) -> Check {
    let name = "contraction principle";
    or_failed(name, (|| {
        let exact = MomentConfig::default();
        let mut worst: f64 = 0.0;
        let mut failures = 0;
        for case in 0..cases {
            let mut rng = case_rng(seed, case as u64);
            let s = random_series(&mut rng, n_max, exponents, 5);
            let lambda: Vec<f64> = (0..s.len()).map(|_| rng.gen_range(-1.0..=1.0)).collect();
            let p = MOMENTS[rng.gen_range(0..MOMENTS.len())];
            let c = contraction_check(&s, &lambda, p, &exact)?;
            worst = worst.max(c.lhs / c.rhs);
            failures += usize::from(!c.pass);
        }
        Ok(Check::new(name, failures == 0, worst, 1.0, cases, format!("{failures} violations; max lhs/rhs")))
    })())
}

/// Kahane–Khintchine: `‖S‖_r / ‖S‖_p ∈ [1, K]` for `p < r`, exact mode.
pub fn check_kahane(cases: usize, n_max: usize, exponents: &[f64], k_bound: f64, seed: u64) -> Check {
    let name = "Kahane exponent comparison";
    or_failed(name, (|| {
        let exact = MomentConfig::default();
        let pairs = [(1.0, 2.0), (2.0, 4.0), (1.0, 4.0)];
        let mut worst: f64 = 1.0;
        let mut non_monotone = 0;
        for case in 0..cases {
            let mut rng = case_rng(seed, case as u64);
            let s = random_series(&mut rng, n_max, exponents, 5);
            for (p, r) in pairs {
                let mp = moment(&s, p, &exact)?.value;
                let mr = moment(&s, r, &exact)?.value;
                if mp > mr * (1.0 + EXACT_SLACK) {
                    non_monotone += 1;
                }
                worst = worst.max(mr / mp);
            }
        }
        Ok(Check::new(
            name,
            non_monotone == 0 && worst <= k_bound,
            worst,
            k_bound,
            cases * pairs.len(),
            format!("{non_monotone} monotonicity violations"),
        ))
    })())
}

/// Hölder's weight inequality, with no constant, for every combination.
pub fn check_holder(weights: &[WeightModel], intervals: &[Interval], exponents: &[f64]) -> Check {
    let name = "Hölder weight lemma";
    or_failed(name, (|| {
        let mut worst: f64 = 0.0;
        let mut failures = 0;
        let mut cases = 0;
        for w in weights {
            for j in intervals {
                for &p in exponents {
                    let c = holder_weight_check(w, j, p)?;
                    worst = worst.max(c.lhs / c.rhs);
                    failures += usize::from(!c.pass);
                    cases += 1;
                }
            }
        }
        Ok(Check::new(name, failures == 0, worst, 1.0 + 1e-9, cases, format!("{failures} violations; max lhs/rhs")))
    })())
}

/// Oscillation growth for `ℓ = 1..=ell_max` on BMO-normalized functions.
pub fn check_oscillation(
    functions: &[GridFunction],
    w: &WeightModel,
    rho: &(impl Growth + Sync),
    bmo_family: &[Interval],
    intervals: &[Interval],
    ell_max: u32,
    bound: f64,
) -> Check {
    let name = "oscillation growth lemma";
    or_failed(name, (|| {
        let worst = functions
            .par_iter()
            .map(|f| -> crate::error::LabResult<f64> {
                let norm = bmo_norm(f, w, rho, bmo_family)?.value;
                if norm == 0.0 {
                    return Ok(0.0);
                }
                let g = f.scaled(1.0 / norm);
                let mut worst: f64 = 0.0;
                for i in intervals {
                    for ell in 1..=ell_max {
                        worst = worst.max(oscillation_growth_check(&g, w, rho, i, ell)?.ratio);
                    }
                }
                Ok(worst)
            })
            .collect::<Result<Vec<_>, _>>()?
            .into_iter()
            .fold(0.0, f64::max);
        Ok(Check::new(
            name,
            worst <= bound,
            worst,
            bound,
            functions.len() * intervals.len() * ell_max as usize,
            "max lhs/rhs".into(),
        ))
    })())
}

/// `f_{I'} − f_I` is constant on `I` for matched cutoffs.
pub fn check_constancy(
    cases: &[(CoefficientArray, Interval, Interval)],
    wavelet: &WaveletModel,
    grid: &Grid,
    cutoffs: &Cutoffs,
    tolerance: f64,
) -> Check {
    let name = format!("constancy lemma ({:?})", wavelet.kind());
    or_failed(&name, (|| {
        let worst = cases
            .par_iter()
            .map(|(a, i, outer)| constancy_check(a, wavelet, grid, i, outer, cutoffs, cutoffs))
            .collect::<Result<Vec<_>, _>>()?
            .into_iter()
            .fold(0.0, f64::max);
        Ok(Check::new(&name, worst <= tolerance, worst, tolerance, cases.len(), "max deviation from a constant".into()))
    })())
}

/// `jn_p / bmo` under one constant for the given `p`, and `jn_1 = bmo` exactly.
pub fn check_jn(
    functions: &[GridFunction],
    w: &WeightModel,
    rho: &(impl Growth + Sync),
    family: &[Interval],
    exponents: &[f64],
    bound: f64,
) -> Check {
    let name = "John–Nirenberg p-variant";
    or_failed(name, (|| {
        let rows = functions
            .par_iter()
            .map(|f| -> crate::error::LabResult<(f64, bool)> {
                let b = bmo_norm(f, w, rho, family)?;
                let same = jn_p_norm(f, w, rho, 1.0, family)? == b;
                let mut worst: f64 = 0.0;
                for &p in exponents {
                    let j = jn_p_norm(f, w, rho, p, family)?.value;
                    worst = worst.max(super::ratio(j, b.value, super::ZERO_FLOOR));
                }
                Ok((worst, same))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let worst = rows.iter().map(|r| r.0).fold(0.0, f64::max);
        let mismatches = rows.iter().filter(|r| !r.1).count();
        Ok(Check::new(
            name,
            worst <= bound && mismatches == 0,
            worst,
            bound,
            functions.len() * exponents.len(),
            format!("{mismatches} cases with jn_1 ≠ bmo"),
        ))
    })())
}

/// `sup |K(x,y)|·|x−y|` over random pairs barely moves when the scale range
/// grows from `±inner` to `±outer`.
pub fn check_kernel_plateau(
    wavelet: &WaveletModel,
    pairs: usize,
    signs: &[u64],
    inner: i32,
    outer: i32,
    span: (f64, f64),
    tolerance: f64,
    seed: u64,
) -> Check {
    let name = "kernel size plateau";
    or_failed(name, (|| {
        let mut rng = case_rng(seed, 0);
        let mut pts = Vec::with_capacity(pairs);
        while pts.len() < pairs {
            let (x, y) = (rng.gen_range(span.0..span.1), rng.gen_range(span.0..span.1));
            if x != y {
                pts.push((x, y));
            }
        }
        let mut worst: f64 = 0.0;
        let mut sizes = Vec::new();
        for &s in signs {
            let coeffs = KernelCoefficients::RandomSigns { seed: s };
            let a = kernel_size_check(&KernelSpec::new(wavelet.clone(), -inner, inner, coeffs)?, &pts, f64::INFINITY)?;
            let b = kernel_size_check(&KernelSpec::new(wavelet.clone(), -outer, outer, coeffs)?, &pts, f64::INFINITY)?;
            worst = worst.max(relative_change(a.worst, b.worst));
            sizes.push(format!("{:.4}→{:.4}", a.worst, b.worst));
        }
        Ok(Check::new(
            name,
            worst < tolerance,
            worst,
            tolerance,
            pairs * signs.len(),
            format!("sup |K||x−y| per sign pattern: {}", sizes.join(", ")),
        ))
    })())
}

/// Exact moments against Monte Carlo estimates: the fraction of cases
/// within `sigmas` standard errors must reach `min_fraction`.
pub fn check_mc_agreement(cases: usize, n_max: usize, samples: usize, sigmas: f64, min_fraction: f64, seed: u64) -> Check {
    let name = "Monte Carlo vs exact moments";
    or_failed(name, (|| {
        let exact = MomentConfig::default();
        let hits = (0..cases)
            .into_par_iter()
            .map(|case| -> crate::error::LabResult<bool> {
                let mut rng = case_rng(seed, case as u64);
                let s = random_series(&mut rng, n_max, &[1.5, 2.0, 4.0], 5);
                let p = MOMENTS[rng.gen_range(0..MOMENTS.len())];
                let e = moment(&s, p, &exact)?;
                let mc = moment(&s, p, &MomentConfig::monte_carlo(samples, seed ^ case as u64))?;
                debug_assert!(e.mode == MomentMode::Exact && mc.mode != MomentMode::Exact);
                Ok((mc.value - e.value).abs() <= sigmas * mc.std_error)
            })
            .collect::<Result<Vec<_>, _>>()?;
        let frac = hits.iter().filter(|h| **h).count() as f64 / cases as f64;
        Ok(Check::new(
            name,
            frac >= min_fraction,
            frac,
            min_fraction,
            cases,
            format!("fraction within {sigmas} standard errors"),
        ))
    })())
}
