use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use bmo_core::norms::{bmo_norm, carleson_norm, jn_p_norm};
use bmo_core::CoefficientArray;
use bmo_lab::config::Direction;
use bmo_lab::corpus::{bmo_corpus, random_arrays, CorpusFunction, NamedArray};
use bmo_lab::experiments::{bmo_family, carleson_family, run_theorem_a, run_theorem_b, Setup};
use bmo_lab::io::{self, CoefficientArrayJson, NormReportJson};
use bmo_lab::report::{self, Summary};
use bmo_lab::suite::run_property_suite;
use bmo_lab::ExperimentConfig;
use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "bmo-lab", version, about = "Weighted BMO and Carleson norm experiments")]
struct Cli {
    /// Experiment configuration (JSON); defaults apply to missing fields.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Largest number of signs enumerated exactly.
    #[arg(long, global = true)]
    exact_threshold: Option<usize>,
    #[arg(long, global = true)]
    mc_samples: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write the function and coefficient corpora.
    GenCorpus,
    /// Carleson norm of wavelet coefficients against the BMO norm.
    TheoremA {
        /// Fail when the headline ratio exceeds this.
        #[arg(long)]
        max_ratio: Option<f64>,
    },
    /// BMO norm of the synthesized series against the Carleson norm.
    TheoremB {
        #[arg(long)]
        max_ratio: Option<f64>,
    },
    /// Run the property suite.
    Properties,
    /// One norm of one input file.
    Norms {
        #[arg(long, value_enum)]
        kind: NormKind,
        /// A grid function (.csv or binary) for bmo/jn, a coefficient array (.json) for carleson.
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        p: Option<f64>,
        /// Include the per-interval values.
        #[arg(long)]
        breakdown: bool,
    },
    /// Summarize the results found in the output directory.
    Report,
}

#[derive(Clone, Copy, ValueEnum)]
enum NormKind {
    Bmo,
    Jn,
    Carleson,
}

fn load_config(cli: &Cli) -> Result<ExperimentConfig> {
    let mut c = match &cli.config {
        Some(path) => ExperimentConfig::load(path)?,
        None => ExperimentConfig::default(),
    };
    if let Some(s) = cli.seed {
        c.seed = s;
    }
    if let Some(n) = cli.exact_threshold {
        c.exact_threshold = n;
    }
    if let Some(n) = cli.mc_samples {
        c.mc_samples = n;
    }
    if let Some(o) = &cli.out {
        c.out = Some(o.clone());
    }
    Ok(c)
}

fn out_dir(c: &ExperimentConfig) -> Result<PathBuf> {
    let dir = c.out.clone().unwrap_or_else(|| PathBuf::from("."));
    std::fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
    Ok(dir)
}

/// The corpora of a config: read from `corpus.json`/`arrays.json` in the
/// output directory when present, generated otherwise.
fn corpus(c: &ExperimentConfig, dir: &Path) -> Result<Vec<CorpusFunction>> {
    let path = dir.join("corpus.json");
    if path.exists() {
        return Ok(io::read_json(&path)?);
    }
    Ok(bmo_corpus(&c.corpus, &c.window(), c.wavelet, c.seed))
}

fn arrays(c: &ExperimentConfig, dir: &Path) -> Result<Vec<NamedArray>> {
    let path = dir.join("arrays.json");
    if path.exists() {
        let stored: Vec<(String, CoefficientArrayJson)> = io::read_json(&path)?;
        return stored
            .into_iter()
            .map(|(name, a)| Ok(NamedArray { name, array: a.to_array()? }))
            .collect();
    }
    let setup = Setup::new(c)?;
    let region = bmo_core::Interval::symmetric_window(c.synthesis.region_m);
    Ok(random_arrays(&c.corpus, &region, c.synthesis.min_scale, c.synthesis.max_scale, &setup.weight, &setup.rho, c.seed)?)
}

fn run(cli: &Cli) -> Result<bool> {
    let c = load_config(cli)?;
    let dir = out_dir(&c)?;
    match &cli.command {
        Command::GenCorpus => {
            let fs = bmo_corpus(&c.corpus, &c.window(), c.wavelet, c.seed);
            io::write_json(&fs, &dir.join("corpus.json"))?;
            let grid = c.grid()?;
            let space = c.corpus.space()?;
            let grids = dir.join("grids");
            std::fs::create_dir_all(&grids)?;
            for f in &fs {
                io::write_grid_function(&f.profile.sample(grid, space)?, &grids.join(format!("{}.bin", f.name)))?;
            }
            let setup = Setup::new(&c)?;
            let region = bmo_core::Interval::symmetric_window(c.synthesis.region_m);
            let arrays =
                random_arrays(&c.corpus, &region, c.synthesis.min_scale, c.synthesis.max_scale, &setup.weight, &setup.rho, c.seed)?;
            let stored: Vec<(String, CoefficientArrayJson)> =
                arrays.iter().map(|a| (a.name.clone(), CoefficientArrayJson::new(&a.array))).collect();
            io::write_json(&stored, &dir.join("arrays.json"))?;
            println!("{} functions, {} arrays written to {}", fs.len(), stored.len(), dir.display());
            Ok(true)
        }
        Command::TheoremA { max_ratio } => {
            let r = run_theorem_a(&c, &corpus(&c, &dir)?)?;
            report::write_theorem_a_csv(&r, &dir.join("theorem_a.csv"))?;
            io::write_json(&r, &dir.join("theorem_a.json"))?;
            println!("theorem A: max ratio {:.6} ({}), {} errors", r.max_ratio, r.argmax.as_deref().unwrap_or("-"), r.errors);
            Ok(r.errors == 0 && r.max_ratio.is_finite() && max_ratio.is_none_or(|m| r.max_ratio <= m))
        }
        Command::TheoremB { max_ratio } => {
            let r = run_theorem_b(&c, &arrays(&c, &dir)?)?;
            report::write_theorem_b_csv(&r, &dir.join("theorem_b.csv"))?;
            io::write_json(&r, &dir.join("theorem_b.json"))?;
            let rows: Vec<Vec<f64>> =
                r.cases.iter().enumerate().map(|(k, case)| vec![k as f64, case.ratio, case.pieces[0], case.pieces[1], case.pieces[2]]).collect();
            report::write_dat(&dir.join("theorem_b.dat"), &["case", "ratio", "f1", "f2", "f3"], &rows)?;
            println!("theorem B: max ratio {:.6} ({}), {} errors", r.max_ratio, r.argmax.as_deref().unwrap_or("-"), r.errors);
            Ok(r.errors == 0 && r.max_ratio.is_finite() && max_ratio.is_none_or(|m| r.max_ratio <= m))
        }
        Command::Properties => {
            let r = run_property_suite(&c);
            report::write_checks_csv(&r.checks, &dir.join("properties.csv"))?;
            io::write_json(&r, &dir.join("properties.json"))?;
            for check in &r.checks {
                println!("{}", check.line());
            }
            Ok(r.all_pass())
        }
        Command::Norms { kind, input, p, breakdown } => {
            let setup = Setup::new(&c)?;
            let report = match kind {
                NormKind::Bmo | NormKind::Jn => {
                    let f = io::read_grid_function(input)?;
                    if *f.grid() != setup.grid {
                        bail!("{} is not on the configured grid", input.display());
                    }
                    let fam = bmo_family(&c, &c.window())?;
                    match kind {
                        NormKind::Bmo => bmo_norm(&f, &setup.weight, &setup.rho, &fam)?,
                        _ => jn_p_norm(&f, &setup.weight, &setup.rho, p.unwrap_or(c.p), &fam)?,
                    }
                }
                NormKind::Carleson => {
                    c.validate(Direction::TheoremB)?;
                    let stored: CoefficientArrayJson = io::read_json(input)?;
                    let a: CoefficientArray = stored.to_array()?;
                    let fam = carleson_family(&c, setup.wavelet.support());
                    carleson_norm(&a, &setup.weight, &setup.rho, p.unwrap_or(c.p), &fam, c.families.carleson_min_scale, &setup.moments)?
                }
            };
            println!("{}", serde_json::to_string_pretty(&NormReportJson::new(&report, *breakdown))?);
            Ok(true)
        }
        Command::Report => {
            let s = Summary::from_dir(&dir)?;
            io::write_json(&s, &dir.join("summary.json"))?;
            for line in s.lines() {
                println!("{line}");
            }
            let ok = s.theorem_a.as_ref().is_none_or(|h| h.errors == 0)
                && s.theorem_b.as_ref().is_none_or(|h| h.errors == 0)
                && s.properties.is_none_or(|(pass, total)| pass == total);
            Ok(ok)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
