//! Command-line surface of the `diffeo` binary.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use diffeo_core::fibrancy::{
    abelian_horn_filler, circle_horn, dopen_retraction, halfline_obstruction, lift_horn_through_bundle, loop_psi,
    loop_retract_h, plane_projection_candidate, random_polynomial, rank_obstruction, verify_circle_retract,
    verify_dopen, verify_filler, SectionVariant,
};
use diffeo_core::pairs::verify_pair_equivalence;
use diffeo_core::realize::{check_gluing, realize, surjectivity_probe, unit_law_check};
use diffeo_core::sampling::substream;
use diffeo_core::{Expr, GeneratedDiffeology, HornData, SimplicialSet, SmoothMap, VerificationReport};

use crate::config::{ConfigFile, Fault, SuiteConfig};
use crate::plot::{emit_plot, Curve};
use crate::suite::{apply_tolerance, run_suite};

#[derive(Debug, Parser)]
#[command(
    name = "diffeo",
    version,
    about = "Verification workbench for smooth homotopy theory of diffeological spaces"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Seed for every random sample.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Sample budget for sampled checks.
    #[arg(long, global = true)]
    pub budget: Option<usize>,
    /// Tolerance replacing the default 1e-9 for exact identities.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Worker threads.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Output directory for reports and plots.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// TOML file with defaults; flags win.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a named verification.
    #[command(subcommand)]
    Verify(VerifyCmd),
    /// Fill a horn.
    #[command(subcommand)]
    Fill(FillCmd),
    /// Non-fibrancy obstructions.
    #[command(subcommand)]
    Obstruction(ObstructionCmd),
    /// Realize a simplicial set given as JSON.
    Realize {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value = "cells")]
        report: RealizeReport,
    },
    /// Lift horn data through a bundle.
    #[command(subcommand)]
    Lift(LiftCmd),
    /// Build and check a retraction.
    #[command(subcommand)]
    Retract(RetractCmd),
    /// Write a curve as CSV and SVG into the output directory.
    Plot {
        #[arg(value_parser = ["cutoff", "r-theta", "section", "obstruction"])]
        curve: String,
        #[arg(long, default_value_t = 0.2)]
        eps: f64,
        #[arg(long, default_value_t = 1001)]
        samples: usize,
    },
    /// Run a suite: simplicial, equidef, realization, fibrancy or all.
    Suite {
        name: Option<String>,
        /// Inject a deliberate fault.
        #[arg(long)]
        fault: Option<Fault>,
    },
    /// Write sample input files.
    #[command(subcommand)]
    Example(ExampleCmd),
}

#[derive(Debug, Subcommand)]
pub enum VerifyCmd {
    /// Both composites of a pair equivalence are homotopic to identities.
    Equidef {
        /// Case numbers, e.g. `5,6`.
        #[arg(long, value_delimiter = ',', required = true)]
        pair: Vec<u8>,
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, default_value_t = 0.2)]
        eps: f64,
    },
    /// The circle section is a smooth right inverse of the realization map.
    CircleRetract {
        #[arg(long, default_value_t = 0.2)]
        eps: f64,
        /// Use the kinked `1 − |θ|` profile.
        #[arg(long)]
        unblended: bool,
    },
    /// Simplicial identities of a set given as JSON, or of the built-in shapes.
    Identities {
        #[arg(long)]
        input: Option<PathBuf>,
    },
    /// Gradients and Hessians against finite differences over the expression corpus.
    AdCorpus,
}

#[derive(Debug, Subcommand)]
pub enum FillCmd {
    /// Inclusion–exclusion filler for horn data in a vector space.
    Abelian {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        input: PathBuf,
        /// Write the filler map as JSON.
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
pub enum ObstructionCmd {
    /// Forced second derivative of the diagonal on the half-line.
    Halfline,
    /// Jacobian rank against a factorization through coordinate planes.
    Rank {
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        m: usize,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum RealizeReport {
    Cells,
    Seams,
    Gluing,
    ProductProbe,
}

#[derive(Debug, Subcommand)]
pub enum LiftCmd {
    /// Circle-valued horn data lifted through `ℝ → S¹`.
    S1Horn {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
pub enum RetractCmd {
    /// Retraction of `ℝⁿ` onto its coordinate hyperplanes near the origin.
    Dopen {
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, default_value_t = 0.5)]
        delta: f64,
        #[arg(long, default_value_t = 0.2)]
        eps: f64,
    },
    /// Reparametrized loop retraction.
    Loops {
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long, default_value_t = 0.25)]
        eps: f64,
    },
}

#[derive(Debug, Subcommand)]
pub enum ExampleCmd {
    /// Horn data restricted from a random cubic polynomial.
    Horn {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        output: PathBuf,
    },
    /// Circle-valued horn data with affine phases.
    S1Horn {
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long)]
        output: PathBuf,
    },
    /// A built-in simplicial set: delta<n>, boundary<n>, horn<n>_<k> or square.
    Sset {
        shape: String,
        #[arg(long)]
        output: PathBuf,
    },
}

impl GlobalArgs {
    pub fn resolve(&self, suite: Option<String>, fault: Option<Fault>) -> Result<SuiteConfig> {
        let file = match &self.config {
            Some(p) => ConfigFile::load(p)?,
            None => ConfigFile::default(),
        };
        let flags = ConfigFile {
            suite,
            seed: self.seed,
            budget: self.budget,
            tol: self.tol,
            out: self.out.clone(),
            jobs: self.jobs,
            fault,
            budgets: None,
        };
        file.overlay(flags).resolve()
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn write_json(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    fs::write(path, format!("{text}\n")).with_context(|| format!("writing {}", path.display()))
}

fn print_json<T: Serialize>(v: &T) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(v)?);
    Ok(())
}

fn finish(report: VerificationReport, cfg: &SuiteConfig) -> Result<i32> {
    let r = apply_tolerance(report, cfg.tol);
    print_json(&r)?;
    Ok(i32::from(!r.pass))
}

fn load_horn(path: &Path, n: Option<usize>) -> Result<HornData> {
    let h = HornData::from_json(&read(path)?).with_context(|| format!("parsing horn data {}", path.display()))?;
    if let Some(n) = n {
        if h.n != n {
            bail!("horn data has n = {}, expected {n}", h.n);
        }
    }
    Ok(h)
}

pub fn builtin_sset(shape: &str) -> Result<SimplicialSet> {
    let num = |s: &str| s.parse::<usize>().with_context(|| format!("bad shape `{shape}`"));
    let set = if shape == "square" {
        let d1 = SimplicialSet::delta(1)?;
        SimplicialSet::product(&d1, &d1)?
    } else if let Some(n) = shape.strip_prefix("delta") {
        SimplicialSet::delta(num(n)?)?
    } else if let Some(n) = shape.strip_prefix("boundary") {
        SimplicialSet::boundary_delta(num(n)?)?
    } else if let Some(rest) = shape.strip_prefix("horn") {
        let (n, k) = rest.split_once('_').with_context(|| format!("bad shape `{shape}`"))?;
        SimplicialSet::horn(num(n)?, num(k)?)?
    } else {
        bail!("unknown shape `{shape}`");
    };
    Ok(set)
}

fn affine(d: usize, c: f64, slope: &[f64]) -> SmoothMap {
    SmoothMap::from_fn(d, |y| vec![Expr::sum(y.iter().zip(slope).map(|(v, s)| *s * v.clone())) + c])
}

/// Runs a parsed command and returns the process exit code.
pub fn dispatch(cli: Cli) -> Result<i32> {
    let (suite, fault) = match &cli.command {
        Command::Suite { name, fault } => (Some(name.clone().unwrap_or_else(|| "all".into())), *fault),
        _ => (None, None),
    };
    let cfg = cli.global.resolve(suite, fault)?;
    if let Some(j) = cfg.jobs {
        // a pool installed earlier in the process is kept
        let _ = rayon::ThreadPoolBuilder::new().num_threads(j).build_global();
    }
    let budget = cfg.budgets.samples;
    match cli.command {
        Command::Verify(v) => match v {
            VerifyCmd::Equidef { pair, n, eps } => {
                let &[a, b] = pair.as_slice() else { bail!("--pair takes two case numbers") };
                finish(verify_pair_equivalence((a, b), n, eps, budget, cfg.seed)?, &cfg)
            }
            VerifyCmd::CircleRetract { eps, unblended } => {
                let variant = if unblended { SectionVariant::Unblended } else { SectionVariant::Blended };
                finish(verify_circle_retract(eps, budget, cfg.seed, variant), &cfg)
            }
            VerifyCmd::Identities { input } => {
                let r = match input {
                    Some(p) => SimplicialSet::from_json(&read(&p)?)?.check_identities(),
                    None => crate::checks::checks_for("simplicial").remove(0).run(&cfg),
                };
                finish(r, &cfg)
            }
            VerifyCmd::AdCorpus => finish(diffeo_core::corpus::verify_ad_corpus(cfg.budgets.ad_points, cfg.seed), &cfg),
        },
        Command::Fill(FillCmd::Abelian { n, input, output }) => {
            let horn = load_horn(&input, Some(n))?;
            let filler = abelian_horn_filler(&horn)?;
            if let Some(p) = output {
                write_json(&p, &filler.to_json())?;
            }
            finish(verify_filler(&horn, &filler, budget, cfg.seed), &cfg)
        }
        Command::Obstruction(ObstructionCmd::Halfline) => {
            let r = halfline_obstruction();
            print_json(&r)?;
            Ok(i32::from(!(r.h2_exact == (-6, 1) && r.no_nonnegative_extension)))
        }
        Command::Obstruction(ObstructionCmd::Rank { n, m }) => {
            if m >= n || n == 0 {
                bail!("need 0 <= m < n");
            }
            let plots = GeneratedDiffeology::coordinate_planes(n, m);
            let r = rank_obstruction(&plane_projection_candidate(n, m), Some(&plots), n, cfg.seed);
            print_json(&r)?;
            Ok(i32::from(!r.contradiction))
        }
        Command::Realize { input, report } => {
            let set = SimplicialSet::from_json(&read(&input)?)?;
            match report {
                RealizeReport::Cells => {
                    println!("{}", realize(&set).to_json());
                    Ok(0)
                }
                RealizeReport::Seams => {
                    print_json(&realize(&set).seam_set())?;
                    Ok(0)
                }
                RealizeReport::Gluing => finish(check_gluing(&set, cfg.seed), &cfg),
                RealizeReport::ProductProbe => {
                    let d1 = SimplicialSet::delta(1)?;
                    let prod = realize(&SimplicialSet::product(&set, &d1)?);
                    let mut r = VerificationReport::new("realize.product_probe", diffeo_core::EXACT_TOL);
                    r.absorb(&surjectivity_probe(&prod, cfg.budgets.grid));
                    r.absorb(&unit_law_check(&set, budget.min(2000), cfg.seed));
                    finish(r.finish(), &cfg)
                }
            }
        }
        Command::Lift(LiftCmd::S1Horn { input, output }) => {
            let horn = load_horn(&input, None)?;
            let gamma = lift_horn_through_bundle(&horn)?;
            if let Some(p) = output {
                write_json(&p, &gamma.to_json())?;
            }
            finish(verify_filler(&horn, &gamma, budget, cfg.seed), &cfg)
        }
        Command::Retract(RetractCmd::Dopen { n, delta, eps }) => {
            finish(verify_dopen(&dopen_retraction(n, delta, eps)?, budget, cfg.seed), &cfg)
        }
        Command::Retract(RetractCmd::Loops { n, eps }) => {
            finish(loop_retract_h(n, &loop_psi(eps), budget, cfg.seed)?, &cfg)
        }
        Command::Plot { curve, eps, samples } => {
            let (csv, svg) = emit_plot(Curve::parse(&curve, eps)?, samples, &cfg.out)?;
            println!("{}\n{}", csv.display(), svg.display());
            Ok(0)
        }
        Command::Suite { .. } => {
            let outcome = run_suite(&cfg)?;
            for r in &outcome.reports {
                println!("{r}");
            }
            let failing = outcome.failing();
            if failing.is_empty() {
                println!(
                    "suite {}: all {} checks passed ({})",
                    cfg.suite,
                    outcome.reports.len(),
                    outcome.summary_path.display()
                );
            } else {
                println!("suite {}: {} failing: {}", cfg.suite, failing.len(), failing.join(", "));
            }
            Ok(outcome.exit_code())
        }
        Command::Example(e) => {
            let (path, text) = match e {
                ExampleCmd::Horn { n, output } => {
                    let g = random_polynomial(n, 1, 3, &mut substream(cfg.seed, "example_horn"));
                    (output, HornData::restrict_from(&g, n).to_json())
                }
                ExampleCmd::S1Horn { n, output } => {
                    let phases: Vec<SmoothMap> = (0..n)
                        .map(|i| {
                            let slope: Vec<f64> = (0..n - 1).map(|j| 0.3 + 0.2 * (i + j) as f64).collect();
                            affine(n - 1, 0.25 + i as f64, &slope)
                        })
                        .collect();
                    (output, circle_horn(n, &phases).to_json())
                }
                ExampleCmd::Sset { shape, output } => (output, builtin_sset(&shape)?.to_json()),
            };
            write_json(&path, &text)?;
            println!("{}", path.display());
            Ok(0)
        }
    }
}
