//! Per-case CSV tables, JSON summaries and gnuplot data files.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::LabResult;
use crate::experiments::{Check, TheoremAReport, TheoremBReport};
use crate::suite::PropertyReport;

fn num(x: f64) -> String {
    x.to_string()
}

pub fn write_theorem_a_csv(r: &TheoremAReport, path: &Path) -> LabResult<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["name", "bmo", "carleson", "ratio", "error"])?;
    for c in &r.cases {
        w.write_record([c.name.clone(), num(c.bmo), num(c.carleson), num(c.ratio), c.error.clone().unwrap_or_default()])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_theorem_b_csv(r: &TheoremBReport, path: &Path) -> LabResult<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["name", "carleson", "bmo_eta", "ratio", "f1", "f2", "f3", "error"])?;
    for c in &r.cases {
        w.write_record([
            c.name.clone(),
            num(c.carleson),
            num(c.bmo_eta),
            num(c.ratio),
            num(c.pieces[0]),
            num(c.pieces[1]),
            num(c.pieces[2]),
            c.error.clone().unwrap_or_default(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_checks_csv(checks: &[Check], path: &Path) -> LabResult<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["name", "pass", "measured", "bound", "cases", "detail"])?;
    for c in checks {
        w.write_record([
            c.name.clone(),
            c.pass.to_string(),
            num(c.measured),
            num(c.bound),
            c.cases.to_string(),
            c.detail.clone(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Whitespace-separated columns with a `#` header, readable by gnuplot.
pub fn write_dat(path: &Path, columns: &[&str], rows: &[Vec<f64>]) -> LabResult<()> {
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(w, "# {}", columns.join(" "))?;
    for row in rows {
        let line: Vec<String> = row.iter().map(|x| num(*x)).collect();
        writeln!(w, "{}", line.join(" "))?;
    }
    w.flush()?;
    Ok(())
}

/// Collected headline numbers of whatever results a directory holds.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub theorem_a: Option<Headline>,
    pub theorem_b: Option<Headline>,
    pub properties: Option<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Headline {
    pub level: i32,
    pub p: f64,
    pub max_ratio: f64,
    pub argmax: Option<String>,
    pub cases: usize,
    pub errors: usize,
}

impl Summary {
    pub fn from_dir(dir: &Path) -> LabResult<Self> {
        let mut s = Summary::default();
        let a = dir.join("theorem_a.json");
        if a.exists() {
            let r: TheoremAReport = crate::io::read_json(&a)?;
            s.theorem_a = Some(Headline {
                level: r.level,
                p: r.p,
                max_ratio: r.max_ratio,
                argmax: r.argmax,
                cases: r.cases.len(),
                errors: r.errors,
            });
        }
        let b = dir.join("theorem_b.json");
        if b.exists() {
            let r: TheoremBReport = crate::io::read_json(&b)?;
            s.theorem_b = Some(Headline {
                level: r.level,
                p: r.p,
                max_ratio: r.max_ratio,
                argmax: r.argmax,
                cases: r.cases.len(),
                errors: r.errors,
            });
        }
        let p = dir.join("properties.json");
        if p.exists() {
            let r: PropertyReport = crate::io::read_json(&p)?;
            s.properties = Some((r.checks.iter().filter(|c| c.pass).count(), r.checks.len()));
        }
        Ok(s)
    }

    pub fn lines(&self) -> Vec<String> {
        let mut out = Vec::new();
        for (label, h) in [("theorem A", &self.theorem_a), ("theorem B", &self.theorem_b)] {
            if let Some(h) = h {
                out.push(format!(
                    "{label}: L={} p={} max ratio {:.6} ({}) over {} cases, {} errors",
                    h.level,
                    h.p,
                    h.max_ratio,
                    h.argmax.as_deref().unwrap_or("-"),
                    h.cases,
                    h.errors
                ));
            }
        }
        if let Some((pass, total)) = self.properties {
            out.push(format!("properties: {pass}/{total} pass"));
        }
        out
    }
}
