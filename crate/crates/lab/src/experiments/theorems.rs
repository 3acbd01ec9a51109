use bmo_core::norms::{bmo_norm, carleson_norm, dyadic_family, NormMode};
use bmo_core::synthesis::{synthesize, Cutoffs};
use bmo_core::{CoefficientArray, Interval};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{bmo_family, carleson_family, ratio, Setup};
use crate::config::{Direction, ExperimentConfig};
use crate::corpus::{CorpusFunction, NamedArray};
use crate::error::LabResult;
use crate::io::Span;

/// Below this both norms count as zero.
pub const ZERO_FLOOR: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseA {
    pub name: String,
    pub bmo: f64,
    pub carleson: f64,
    pub ratio: f64,
    pub carleson_mode: Option<NormMode>,
    pub bmo_at: Option<Span>,
    pub carleson_at: Option<Span>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TheoremAReport {
    pub level: i32,
    pub p: f64,
    pub q: f64,
    pub cases: Vec<CaseA>,
    pub max_ratio: f64,
    pub argmax: Option<String>,
    pub errors: usize,
}

fn case_a(config: &ExperimentConfig, setup: &Setup, f: &CorpusFunction, bmo_fam: &[Interval], car_fam: &[Interval]) -> LabResult<CaseA> {
    let g = f.profile.sample(setup.grid, config.corpus.space()?)?;
    let bmo = bmo_norm(&g, &setup.weight, &setup.rho, bmo_fam)?;
    let min_scale = config.families.carleson_min_scale;
    let a = CoefficientArray::from_wavelet(&setup.wavelet, &g, &config.window(), min_scale)?;
    let car = carleson_norm(&a, &setup.weight, &setup.eta, config.p, car_fam, min_scale, &setup.moments)?;
    Ok(CaseA {
        name: f.name.clone(),
        bmo: bmo.value,
        carleson: car.value,
        ratio: ratio(car.value, bmo.value, ZERO_FLOOR),
        carleson_mode: Some(car.mode),
        bmo_at: Some(bmo.interval.into()),
        carleson_at: Some(car.interval.into()),
        error: None,
    })
}

/// `‖{⟨ψ_J, f⟩}‖_{C_η^p(w)} / ‖f‖_{BMO_ρ(w)}` for every corpus function.
pub fn run_theorem_a(config: &ExperimentConfig, corpus: &[CorpusFunction]) -> LabResult<TheoremAReport> {
    config.validate(Direction::TheoremA)?;
    let setup = Setup::new(config)?;
    let bmo_fam = bmo_family(config, &config.window())?;
    let car_fam = carleson_family(config, setup.wavelet.support());
    let cases: Vec<CaseA> = corpus
        .par_iter()
        .map(|f| {
            case_a(config, &setup, f, &bmo_fam, &car_fam).unwrap_or_else(|e| CaseA {
                name: f.name.clone(),
                bmo: f64::NAN,
                carleson: f64::NAN,
                ratio: f64::NAN,
                carleson_mode: None,
                bmo_at: None,
                carleson_at: None,
                error: Some(e.to_string()),
            })
        })
        .collect();
    let (max_ratio, argmax) = headline(cases.iter().map(|c| (c.ratio, &c.name)));
    Ok(TheoremAReport {
        level: config.level,
        p: config.p,
        q: config.q,
        errors: cases.iter().filter(|c| c.error.is_some()).count(),
        cases,
        max_ratio,
        argmax,
    })
}

fn headline<'a>(values: impl Iterator<Item = (f64, &'a String)>) -> (f64, Option<String>) {
    let mut best: (f64, Option<String>) = (0.0, None);
    for (r, name) in values {
        if !r.is_nan() && (best.1.is_none() || r > best.0) {
            best = (r, Some(name.clone()));
        }
    }
    best
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseB {
    pub name: String,
    pub carleson: f64,
    pub bmo_eta: f64,
    pub ratio: f64,
    /// Per-piece ratios of the unit-norm array: `f_1` against `η`, `f_2` and `f_3` against `ρ`.
    pub pieces: [f64; 3],
    pub carleson_mode: Option<NormMode>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TheoremBReport {
    pub level: i32,
    pub p: f64,
    pub q: f64,
    pub min_scale: i32,
    pub cases: Vec<CaseB>,
    pub max_ratio: f64,
    pub argmax: Option<String>,
    pub max_pieces: [f64; 3],
    pub errors: usize,
}

/// Cutoffs of a Theorem B run.
pub fn synthesis_cutoffs(config: &ExperimentConfig) -> Cutoffs {
    Cutoffs {
        min_scale: config.synthesis.min_scale,
        max_scale: config.synthesis.max_scale,
        region: Interval::symmetric_window(config.synthesis.region_m),
    }
}

fn case_b(config: &ExperimentConfig, setup: &Setup, a: &NamedArray, car_fam: &[Interval], bmo_fam: &[Interval]) -> LabResult<CaseB> {
    let cut = synthesis_cutoffs(config);
    let car = carleson_norm(&a.array, &setup.weight, &setup.rho, config.p, car_fam, cut.min_scale, &setup.moments)?;
    let i = config.report_interval()?;
    let s = synthesize(&a.array, &setup.wavelet, &setup.grid, &i, &cut)?;
    let bmo = bmo_norm(&s.f_i, &setup.weight, &setup.eta, bmo_fam)?;
    let mut pieces = s.piece_ratios(&setup.weight, &setup.rho, &setup.eta)?;
    for p in &mut pieces {
        *p = ratio(*p, car.value, ZERO_FLOOR);
    }
    Ok(CaseB {
        name: a.name.clone(),
        carleson: car.value,
        bmo_eta: bmo.value,
        ratio: ratio(bmo.value, car.value, ZERO_FLOOR),
        pieces,
        carleson_mode: Some(car.mode),
        error: None,
    })
}

/// `‖f_I‖_{BMO_η(w)} / ‖a‖_{C_ρ^p(w)}` over the subintervals of the
/// reporting interval, for every array.
pub fn run_theorem_b(config: &ExperimentConfig, arrays: &[NamedArray]) -> LabResult<TheoremBReport> {
    config.validate(Direction::TheoremB)?;
    let setup = Setup::new(config)?;
    let cut = synthesis_cutoffs(config);
    let car_fam = dyadic_family(&cut.region, cut.min_scale);
    let bmo_fam = bmo_family(config, &config.report_interval()?)?;
    let cases: Vec<CaseB> = arrays
        .par_iter()
        .map(|a| {
            case_b(config, &setup, a, &car_fam, &bmo_fam).unwrap_or_else(|e| CaseB {
                name: a.name.clone(),
                carleson: f64::NAN,
                bmo_eta: f64::NAN,
                ratio: f64::NAN,
                pieces: [f64::NAN; 3],
                carleson_mode: None,
                error: Some(e.to_string()),
            })
        })
        .collect();
    let (max_ratio, argmax) = headline(cases.iter().map(|c| (c.ratio, &c.name)));
    let mut max_pieces = [0.0f64; 3];
    for c in cases.iter().filter(|c| c.error.is_none()) {
        for k in 0..3 {
            max_pieces[k] = max_pieces[k].max(c.pieces[k]);
        }
    }
    Ok(TheoremBReport {
        level: config.level,
        p: config.p,
        q: config.q,
        min_scale: cut.min_scale,
        errors: cases.iter().filter(|c| c.error.is_some()).count(),
        cases,
        max_ratio,
        argmax,
        max_pieces,
    })
}
