//! Growth functions `ρ` and the transform
//! `η(t) = t^{2-q} ∫_t^∞ ρ(s) s^{q-3} ds = ∫_1^∞ ρ(tu) u^{q-3} du`.

use alloc::vec::Vec;

use crate::error::{domain, Error, Result};
use crate::quad::{simpson, simpson_geometric};

/// Anything that can normalize oscillations by scale.
pub trait Growth {
    fn rho(&self, t: f64) -> f64;
}

#[derive(Debug, Clone)]
pub enum GrowthKind {
    Constant { value: f64 },
    /// `scale · t^alpha`.
    Power { alpha: f64, scale: f64 },
    /// `t^alpha · ln(e + t)^beta`.
    LogPower { alpha: f64, beta: f64 },
    /// Log-log linear interpolation through `(t, ρ(t))` knots, flat outside.
    Sampled { knots: Vec<(f64, f64)> },
    Custom { rule: fn(f64) -> f64 },
}

/// A growth function together with a caller-declared upper type
/// `ρ(ut) ≤ C u^α ρ(t)`.
#[derive(Debug, Clone)]
pub struct GrowthModel {
    kind: GrowthKind,
    upper_type: f64,
    upper_constant: f64,
}

/// Outcome of a probe-based diagnostic.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ProbeCheck {
    pub pass: bool,
    pub worst: f64,
}

const LOG_POWER_SLACK: f64 = 0.1;

impl GrowthModel {
    pub fn constant(value: f64) -> Result<Self> {
        Self::declared(GrowthKind::Constant { value }, 0.0, 1.0)
    }

    pub fn power(alpha: f64) -> Result<Self> {
        Self::scaled_power(alpha, 1.0)
    }

    pub fn scaled_power(alpha: f64, scale: f64) -> Result<Self> {
        if alpha < 0.0 {
            return Err(domain!("power growth needs alpha ≥ 0, got {alpha}"));
        }
        Self::declared(GrowthKind::Power { alpha, scale }, alpha, 1.0)
    }

    /// `t^α ln(e+t)^β`; since `1 + ln u ≤ u^ε / (ε e^{1-ε})`, it has upper
    /// type `α + εβ` with constant `(ε e^{1-ε})^{-β}` for `ε = 0.1`.
    pub fn log_power(alpha: f64, beta: f64) -> Result<Self> {
        if alpha < 0.0 || beta < 0.0 {
            return Err(domain!("log-power growth needs alpha, beta ≥ 0"));
        }
        let eps = LOG_POWER_SLACK;
        let c = libm::pow(eps * libm::exp(1.0 - eps), -beta);
        Self::declared(GrowthKind::LogPower { alpha, beta }, alpha + eps * beta, c)
    }

    pub fn sampled(knots: Vec<(f64, f64)>, upper_type: f64, upper_constant: f64) -> Result<Self> {
        if knots.len() < 2 || knots.windows(2).any(|w| !(w[0].0 < w[1].0)) || knots[0].0 <= 0.0 {
            return Err(domain!("sampled growth needs ≥ 2 knots at increasing positive t"));
        }
        Self::declared(GrowthKind::Sampled { knots }, upper_type, upper_constant)
    }

    pub fn custom(rule: fn(f64) -> f64, upper_type: f64, upper_constant: f64) -> Result<Self> {
        Self::declared(GrowthKind::Custom { rule }, upper_type, upper_constant)
    }

    fn declared(kind: GrowthKind, upper_type: f64, upper_constant: f64) -> Result<Self> {
        let gm = GrowthModel { kind, upper_type, upper_constant };
        let probes = log_probes(1e-6, 1e6, 121);
        let mut prev = 0.0;
        for t in probes {
            let v = gm.rho(t);
            if !(v > 0.0 && v.is_finite()) {
                return Err(domain!("growth function is {v} at t = {t}"));
            }
            if v < prev * (1.0 - 1e-14) {
                return Err(domain!("growth function decreases near t = {t}"));
            }
            prev = v;
        }
        Ok(gm)
    }

    pub fn kind(&self) -> &GrowthKind {
        &self.kind
    }

    pub fn upper_type(&self) -> f64 {
        self.upper_type
    }

    pub fn upper_constant(&self) -> f64 {
        self.upper_constant
    }

    /// `η` in closed form, when the family has one.
    pub fn eta_closed_form(&self, q: f64, t: f64) -> Option<Result<f64>> {
        let gap = 2.0 - q;
        match self.kind {
            GrowthKind::Constant { value } => Some(Ok(value / gap)),
            GrowthKind::Power { alpha, scale } => Some(if alpha < gap {
                Ok(scale * libm::pow(t, alpha) / (gap - alpha))
            } else {
                Err(Error::Divergence(alloc::format!(
                    "∫ s^(alpha+q-3) diverges for alpha = {alpha} ≥ 2 - q = {gap}"
                )))
            }),
            _ => None,
        }
    }
}

impl Growth for GrowthModel {
    fn rho(&self, t: f64) -> f64 {
        match &self.kind {
            GrowthKind::Constant { value } => *value,
            GrowthKind::Power { alpha, scale } => scale * libm::pow(t, *alpha),
            GrowthKind::LogPower { alpha, beta } => {
                libm::pow(t, *alpha) * libm::pow(libm::log(core::f64::consts::E + t), *beta)
            }
            GrowthKind::Sampled { knots } => interpolate_loglog(knots, t),
            GrowthKind::Custom { rule } => rule(t),
        }
    }
}

impl<G: Growth + ?Sized> Growth for &G {
    fn rho(&self, t: f64) -> f64 {
        (**self).rho(t)
    }
}

fn interpolate_loglog(knots: &[(f64, f64)], t: f64) -> f64 {
    if t <= knots[0].0 {
        return knots[0].1;
    }
    let last = knots[knots.len() - 1];
    if t >= last.0 {
        return last.1;
    }
    let k = knots.partition_point(|(s, _)| *s <= t);
    let (t0, r0) = knots[k - 1];
    let (t1, r1) = knots[k];
    let lam = libm::log(t / t0) / libm::log(t1 / t0);
    libm::exp(libm::log(r0) * (1.0 - lam) + libm::log(r1) * lam)
}

/// `n` points spaced evenly in `log t` over `[lo, hi]`.
pub fn log_probes(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (a, b) = (libm::log(lo), libm::log(hi));
    (0..n)
        .map(|k| libm::exp(a + (b - a) * k as f64 / (n.max(2) - 1) as f64))
        .collect()
}

fn check_eta_args(q: f64, t: f64) -> Result<()> {
    if !(q > 1.0 && q < 2.0) {
        return Err(domain!("η needs q in (1, 2), got {q}"));
    }
    if !(t > 0.0 && t.is_finite()) {
        return Err(domain!("η needs t > 0, got {t}"));
    }
    Ok(())
}

/// `η(t)`: closed form when available, otherwise [`eta_quadrature`].
pub fn eta(gm: &GrowthModel, q: f64, t: f64) -> Result<f64> {
    check_eta_args(q, t)?;
    match gm.eta_closed_form(q, t) {
        Some(v) => v,
        None => eta_quadrature(gm, q, t),
    }
}

const TAIL_TOLERANCE: f64 = 1e-10;
const PANELS_PER_UNIT: f64 = 256.0;

/// `∫_0^Y ρ(t e^y) e^{(q-2)y} dy` by composite Simpson, with `Y` grown until
/// the declared-upper-type tail bound
/// `C ρ(t e^Y) e^{(q-2)Y} / (2 - q - α)` is below `1e-10` of the partial integral.
pub fn eta_quadrature(gm: &GrowthModel, q: f64, t: f64) -> Result<f64> {
    check_eta_args(q, t)?;
    let gap = 2.0 - q - gm.upper_type;
    if !(gap > 0.0) {
        return Err(Error::Divergence(alloc::format!(
            "declared upper type {} is not below 2 - q = {}",
            gm.upper_type,
            2.0 - q
        )));
    }
    let integrand = |y: f64| gm.rho(t * libm::exp(y)) * libm::exp((q - 2.0) * y);
    let mut y_max: f64 = 8.0;
    let mut acc = 0.0;
    let mut done = 0.0;
    loop {
        let panels = ((y_max - done) * PANELS_PER_UNIT) as usize;
        acc += simpson(integrand, done, y_max, panels);
        done = y_max;
        let tail = gm.upper_constant * integrand(y_max) / gap;
        if tail <= TAIL_TOLERANCE * acc {
            return Ok(acc);
        }
        if y_max > 4096.0 {
            return Err(Error::Divergence(alloc::format!("tail bound {tail} not reached at Y = {y_max}")));
        }
        y_max *= 2.0;
    }
}

/// `t^{2-q} ∫_t^S ρ(s) s^{q-3} ds`, integrated directly in `s`.
pub fn eta_truncated_direct(gm: &GrowthModel, q: f64, t: f64, s_max: f64) -> f64 {
    libm::pow(t, 2.0 - q) * simpson_geometric(|s| gm.rho(s) * libm::pow(s, q - 3.0), t, s_max, 512)
}

/// `∫_1^{S/t} ρ(tu) u^{q-3} du`, integrated in `y = ln u`.
pub fn eta_truncated_substituted(gm: &GrowthModel, q: f64, t: f64, s_max: f64) -> f64 {
    let y_max = libm::log(s_max / t);
    let panels = ((y_max * 1024.0) as usize).max(16);
    simpson(|y| gm.rho(t * libm::exp(y)) * libm::exp((q - 2.0) * y), 0.0, y_max, panels)
}

/// Largest `ρ(ut) / (u^α ρ(t))` over the probes; passes iff finite and at most `bound`.
pub fn upper_type_check(gm: &impl Growth, alpha: f64, probes: &[(f64, f64)], bound: f64) -> ProbeCheck {
    let worst = probes
        .iter()
        .map(|&(t, u)| gm.rho(u * t) / (libm::pow(u, alpha) * gm.rho(t)))
        .fold(0.0, f64::max);
    ProbeCheck { pass: worst.is_finite() && worst <= bound, worst }
}

/// Largest `ρ(2t)/ρ(t)` over the probes.
pub fn doubling_check(gm: &impl Growth, probes: &[f64], bound: f64) -> ProbeCheck {
    let pairs: Vec<(f64, f64)> = probes.iter().map(|t| (*t, 2.0)).collect();
    upper_type_check(gm, 0.0, &pairs, bound)
}

/// `η` for a fixed growth model and `q`, tabulated eagerly on a probe grid.
#[derive(Debug, Clone)]
pub struct EtaTransform {
    source: GrowthModel,
    q: f64,
    probes: Vec<f64>,
    table: Vec<f64>,
}

impl EtaTransform {
    pub fn new(source: GrowthModel, q: f64, mut probes: Vec<f64>) -> Result<Self> {
        // fails fast on divergence, so later evaluations cannot
        eta(&source, q, 1.0)?;
        probes.sort_by(f64::total_cmp);
        probes.dedup();
        let table = probes.iter().map(|t| eta(&source, q, *t)).collect::<Result<Vec<_>>>()?;
        Ok(EtaTransform { source, q, probes, table })
    }

    /// Tabulated at the dyadic lengths `2^k`, `k ∈ [lo, hi]`.
    pub fn dyadic(source: GrowthModel, q: f64, lo: i32, hi: i32) -> Result<Self> {
        let probes = (lo..=hi).map(|k| libm::ldexp(1.0, k)).collect();
        Self::new(source, q, probes)
    }

    pub fn source(&self) -> &GrowthModel {
        &self.source
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn table(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.probes.iter().copied().zip(self.table.iter().copied())
    }
}

impl Growth for EtaTransform {
    fn rho(&self, t: f64) -> f64 {
        match self.probes.binary_search_by(|p| p.total_cmp(&t)) {
            Ok(k) => self.table[k],
            Err(_) => eta(&self.source, self.q, t).expect("convergence checked at construction"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn constant_growth_eta_is_two_at_q_three_halves() {
        let gm = GrowthModel::constant(1.0).unwrap();
        for t in log_probes(1e-3, 1e3, 13) {
            assert_eq!(eta(&gm, 1.5, t).unwrap(), 2.0);
            assert!(rel(eta_quadrature(&gm, 1.5, t).unwrap(), 2.0) < 1e-6);
        }
    }

    #[test]
    fn power_growth_eta_closed_form() {
        let gm = GrowthModel::power(0.25).unwrap();
        for t in log_probes(1e-3, 1e3, 13) {
            let want = 4.0 * libm::pow(t, 0.25);
            assert!(rel(eta(&gm, 1.5, t).unwrap(), want) < 1e-14);
            assert!(rel(eta_quadrature(&gm, 1.5, t).unwrap(), want) < 1e-6);
        }
    }

    #[test]
    fn eta_dominates_rho() {
        let models = [
            GrowthModel::constant(0.5).unwrap(),
            GrowthModel::power(0.1).unwrap(),
            GrowthModel::log_power(0.05, 1.0).unwrap(),
            GrowthModel::sampled(alloc::vec![(0.1, 1.0), (1.0, 1.5), (10.0, 2.0)], 0.2, 1.0).unwrap(),
        ];
        for gm in &models {
            for t in log_probes(1e-2, 1e2, 9) {
                assert!(eta(gm, 1.6, t).unwrap() >= gm.rho(t));
            }
        }
    }

    #[test]
    fn divergent_tail_is_reported() {
        let gm = GrowthModel::power(0.6).unwrap();
        assert!(matches!(eta(&gm, 1.5, 1.0), Err(Error::Divergence(_))));
        assert!(matches!(eta_quadrature(&gm, 1.5, 1.0), Err(Error::Divergence(_))));
        assert!(EtaTransform::dyadic(gm, 1.5, -3, 3).is_err());
    }

    #[test]
    fn change_of_variables_identity() {
        let models = [
            GrowthModel::power(0.3).unwrap(),
            GrowthModel::log_power(0.1, 2.0).unwrap(),
            GrowthModel::constant(1.0).unwrap(),
        ];
        for gm in &models {
            for t in [0.01, 0.7, 5.0] {
                let a = eta_truncated_direct(gm, 1.4, t, 1e4 * t);
                let b = eta_truncated_substituted(gm, 1.4, t, 1e4 * t);
                assert!(rel(a, b) < 1e-8, "{a} vs {b}");
            }
        }
    }

    #[test]
    fn eta_is_comparable_to_rho_below_critical_type() {
        let gm = GrowthModel::log_power(0.1, 1.0).unwrap();
        let q = 1.5;
        let bound = gm.upper_constant() / (2.0 - q - gm.upper_type());
        for t in log_probes(1e-3, 1e3, 25) {
            assert!(eta(&gm, q, t).unwrap() / gm.rho(t) <= bound);
        }
    }

    #[test]
    fn upper_type_examples() {
        let probes: Vec<(f64, f64)> = log_probes(1e-2, 1e2, 9)
            .into_iter()
            .flat_map(|t| [1.5, 4.0, 100.0].map(|u| (t, u)))
            .collect();
        let p = GrowthModel::power(0.7).unwrap();
        let c = upper_type_check(&p, 0.7, &probes, 1.0 + 1e-12);
        assert!(c.pass && (c.worst - 1.0).abs() < 1e-12);
        let one = GrowthModel::constant(1.0).unwrap();
        let flat = upper_type_check(&one, 0.3, &probes, 1.0);
        assert!(flat.pass && flat.worst <= 1.0);
        assert_eq!(upper_type_check(&one, 0.0, &probes, 1.0).worst, 1.0);
        let bad = upper_type_check(&p, 0.2, &probes, 5.0);
        assert!(!bad.pass);
        assert!(rel(bad.worst, libm::pow(100.0, 0.5)) < 1e-12);
    }

    #[test]
    fn doubling_examples() {
        let probes = log_probes(1e-2, 1e2, 9);
        let p = GrowthModel::power(0.4).unwrap();
        assert!(rel(doubling_check(&p, &probes, 2.0).worst, libm::pow(2.0, 0.4)) < 1e-13);
        let one = GrowthModel::constant(3.0).unwrap();
        assert_eq!(doubling_check(&one, &probes, 1.0).worst, 1.0);
        let e = GrowthModel::custom(|t| libm::exp(t.min(700.0)), 1.0, 1.0).unwrap();
        let wide = log_probes(1e-1, 30.0, 12);
        let c = doubling_check(&e, &wide, 100.0);
        assert!(!c.pass && rel(c.worst, libm::exp(30.0)) < 1e-12);
    }

    #[test]
    fn decreasing_rho_is_rejected() {
        assert!(GrowthModel::custom(|t| 1.0 / (1.0 + t), 0.0, 1.0).is_err());
    }

    #[test]
    fn eta_transform_memo_matches_direct() {
        let gm = GrowthModel::log_power(0.0, 1.0).unwrap();
        let tr = EtaTransform::dyadic(gm.clone(), 1.5, -4, 4).unwrap();
        for (t, v) in tr.table() {
            assert_eq!(v, eta(&gm, 1.5, t).unwrap());
            assert_eq!(tr.rho(t), v);
        }
        assert!(rel(tr.rho(0.3), eta(&gm, 1.5, 0.3).unwrap()) < 1e-15);
    }
}
