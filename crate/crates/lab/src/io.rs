//! File formats.
//!
//! Grid functions are stored either as a little-endian binary blob or as
//! CSV. Both carry the header `(window, L, d, r)` followed by the samples in
//! row-major order, and both round-trip bit for bit (CSV uses the shortest
//! decimal that parses back to the same `f64`).

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use bmo_core::norms::{NormMode, Provenance};
use bmo_core::synthesis::{IntervalClassification, PieceNorms};
use bmo_core::{CoefficientArray, DyadicInterval, Grid, GridFunction, Interval, NormReport, SynthesisResult, VectorSpace};
use serde::{Deserialize, Serialize};

use crate::error::{LabError, LabResult};

const MAGIC: &[u8; 8] = b"BMOGRID1";

fn space_of(d: usize, r: f64) -> LabResult<VectorSpace> {
    if d == 1 && r == 2.0 {
        Ok(VectorSpace::scalar())
    } else {
        Ok(VectorSpace::new(d, r)?)
    }
}

pub fn write_binary<W: Write>(f: &GridFunction, mut out: W) -> LabResult<()> {
    let g = f.grid();
    out.write_all(MAGIC)?;
    out.write_all(&g.window().lo_atoms().to_le_bytes())?;
    out.write_all(&g.window().hi_atoms().to_le_bytes())?;
    out.write_all(&g.level().to_le_bytes())?;
    out.write_all(&(f.dim() as u32).to_le_bytes())?;
    out.write_all(&f.space().exponent().to_le_bytes())?;
    for v in f.samples() {
        out.write_all(&v.to_le_bytes())?;
    }
    Ok(())
}

pub fn read_binary<R: Read>(mut input: R) -> LabResult<GridFunction> {
    let mut magic = [0u8; 8];
    input.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(LabError::Format("not a grid-function file".into()));
    }
    let mut b8 = [0u8; 8];
    let mut b4 = [0u8; 4];
    input.read_exact(&mut b8)?;
    let lo = i64::from_le_bytes(b8);
    input.read_exact(&mut b8)?;
    let hi = i64::from_le_bytes(b8);
    input.read_exact(&mut b4)?;
    let level = i32::from_le_bytes(b4);
    input.read_exact(&mut b4)?;
    let d = u32::from_le_bytes(b4) as usize;
    input.read_exact(&mut b8)?;
    let r = f64::from_le_bytes(b8);
    let grid = Grid::new(Interval::from_atoms(lo, hi)?, level)?;
    let n = grid.cell_count() * d;
    let mut raw = vec![0u8; n * 8];
    input.read_exact(&mut raw)?;
    let samples = raw.chunks_exact(8).map(|c| f64::from_le_bytes(c.try_into().unwrap())).collect();
    Ok(GridFunction::new(grid, space_of(d, r)?, samples)?)
}

/// Header row `window_lo,window_hi,level,d,r`, its values, then one row per
/// cell: `x,v_1,…,v_d` with `x` the cell midpoint (informational).
pub fn write_csv<W: Write>(f: &GridFunction, out: W) -> LabResult<()> {
    let g = f.grid();
    let mut w = csv::WriterBuilder::new().flexible(true).from_writer(out);
    w.write_record(["window_lo", "window_hi", "level", "d", "r"])?;
    w.write_record([
        g.window().left().to_string(),
        g.window().right().to_string(),
        g.level().to_string(),
        f.dim().to_string(),
        f.space().exponent().to_string(),
    ])?;
    let mut row = Vec::with_capacity(f.dim() + 1);
    for c in 0..g.cell_count() {
        row.clear();
        row.push(g.midpoint(c).to_string());
        row.extend(f.value(c).iter().map(|v| v.to_string()));
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

fn field<T: std::str::FromStr>(rec: &csv::StringRecord, k: usize) -> LabResult<T> {
    rec.get(k)
        .and_then(|s| s.trim().parse().ok())
        .ok_or_else(|| LabError::Format(format!("bad or missing field {k} in {rec:?}")))
}

pub fn read_csv<R: Read>(input: R) -> LabResult<GridFunction> {
    let mut rd = csv::ReaderBuilder::new().flexible(true).has_headers(true).from_reader(input);
    let mut records = rd.records();
    let head = records.next().ok_or_else(|| LabError::Format("missing header values".into()))??;
    let (lo, hi): (f64, f64) = (field(&head, 0)?, field(&head, 1)?);
    let level: i32 = field(&head, 2)?;
    let d: usize = field(&head, 3)?;
    let r: f64 = field(&head, 4)?;
    let grid = Grid::new(Interval::new(lo, hi)?, level)?;
    let mut samples = Vec::with_capacity(grid.cell_count() * d);
    for rec in records {
        let rec = rec?;
        if rec.len() != d + 1 {
            return Err(LabError::Format(format!("expected {} fields per row, got {}", d + 1, rec.len())));
        }
        for k in 1..=d {
            samples.push(field(&rec, k)?);
        }
    }
    Ok(GridFunction::new(grid, space_of(d, r)?, samples)?)
}

/// Writes by extension: `.csv` as CSV, anything else as binary.
pub fn write_grid_function(f: &GridFunction, path: &Path) -> LabResult<()> {
    let out = BufWriter::new(File::create(path)?);
    if is_csv(path) {
        write_csv(f, out)
    } else {
        let mut out = out;
        write_binary(f, &mut out)?;
        out.flush()?;
        Ok(())
    }
}

pub fn read_grid_function(path: &Path) -> LabResult<GridFunction> {
    let input = BufReader::new(File::open(path)?);
    if is_csv(path) {
        read_csv(input)
    } else {
        read_binary(input)
    }
}

fn is_csv(path: &Path) -> bool {
    path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv"))
}

pub fn write_json<T: Serialize>(value: &T, path: &Path) -> LabResult<()> {
    let mut out = BufWriter::new(File::create(path)?);
    serde_json::to_writer_pretty(&mut out, value)?;
    out.write_all(b"\n")?;
    out.flush()?;
    Ok(())
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> LabResult<T> {
    Ok(serde_json::from_reader(BufReader::new(File::open(path)?))?)
}

/// `[left, right)` as a pair of numbers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Span(pub f64, pub f64);

impl From<Interval> for Span {
    fn from(i: Interval) -> Self {
        Span(i.left(), i.right())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormReportJson {
    pub value: f64,
    pub interval: Span,
    pub family_size: usize,
    pub mode: NormMode,
    #[serde(skip_serializing_if = "is_zero", default)]
    pub std_error: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub breakdown: Option<Vec<(Span, f64)>>,
}

fn is_zero(x: &f64) -> bool {
    *x == 0.0
}

impl NormReportJson {
    pub fn new(r: &NormReport, with_breakdown: bool) -> Self {
        NormReportJson {
            value: r.value,
            interval: r.interval.into(),
            family_size: r.family_size,
            mode: r.mode,
            std_error: r.std_error,
            breakdown: with_breakdown.then(|| r.breakdown.iter().map(|(i, v)| ((*i).into(), *v)).collect()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoefficientEntry {
    pub scale: i32,
    pub position: i64,
    pub value: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoefficientArrayJson {
    pub dim: usize,
    pub r: f64,
    pub provenance: Provenance,
    pub entries: Vec<CoefficientEntry>,
}

impl CoefficientArrayJson {
    pub fn new(a: &CoefficientArray) -> Self {
        CoefficientArrayJson {
            dim: a.space().dim(),
            r: a.space().exponent(),
            provenance: a.provenance(),
            entries: a
                .iter()
                .map(|(j, v)| CoefficientEntry { scale: j.scale, position: j.position, value: v.to_vec() })
                .collect(),
        }
    }

    pub fn to_array(&self) -> LabResult<CoefficientArray> {
        let mut a = CoefficientArray::new(space_of(self.dim, self.r)?);
        a.set_provenance(self.provenance);
        for e in &self.entries {
            a.insert(DyadicInterval::new(e.scale, e.position)?, e.value.clone())?;
        }
        Ok(a)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassificationCounts {
    pub large: usize,
    pub far: usize,
    pub near: usize,
}

impl From<&IntervalClassification> for ClassificationCounts {
    fn from(c: &IntervalClassification) -> Self {
        ClassificationCounts { large: c.large.len(), far: c.far.len(), near: c.near.len() }
    }
}

/// JSON sidecar written next to the four piece grids of a synthesis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthesisSidecar {
    pub interval: Span,
    pub min_scale: i32,
    pub max_scale: i32,
    pub region: Span,
    pub classification: ClassificationCounts,
    /// `(scale, position, c_J)`.
    pub renormalization: Vec<(i32, i64, f64)>,
    pub mean: Vec<f64>,
    pub norms: PieceNorms,
    pub f3_tails: Vec<(i32, f64)>,
    pub omitted: usize,
    pub hypotheses_met: bool,
    pub files: [String; 4],
}

/// Writes `stem_f1.bin`, `stem_f2.bin`, `stem_f3.bin`, `stem_fI.bin` and `stem.json` into `dir`.
pub fn write_synthesis(r: &SynthesisResult, dir: &Path, stem: &str) -> LabResult<SynthesisSidecar> {
    let names = ["f1", "f2", "f3", "fI"].map(|s| format!("{stem}_{s}.bin"));
    for (f, name) in [&r.f1, &r.f2, &r.f3, &r.f_i].into_iter().zip(&names) {
        write_grid_function(f, &dir.join(name))?;
    }
    let sidecar = SynthesisSidecar {
        interval: r.interval.into(),
        min_scale: r.cutoffs.min_scale,
        max_scale: r.cutoffs.max_scale,
        region: r.cutoffs.region.into(),
        classification: (&r.classification).into(),
        renormalization: r.renormalization.iter().map(|(j, c)| (j.scale, j.position, *c)).collect(),
        mean: r.mean.clone(),
        norms: r.norms,
        f3_tails: r.f3_tails.clone(),
        omitted: r.omitted,
        hypotheses_met: r.hypotheses_met,
        files: names,
    };
    write_json(&sidecar, &dir.join(format!("{stem}.json")))?;
    Ok(sidecar)
}
