//! `caliblab`: runs the verification sweeps and writes their reports.
//!
//! Exit status is 0 when every asserted row holds, 1 when some row fails
//! and 2 on usage or input errors. Inputs are parsed before any sweep runs,
//! so an input error never leaves a partial report behind.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use caliblab::experiments::grid_setup;
use caliblab::io::{read_chain, read_competitor, read_complex, read_manifest, write_competitor};
use caliblab::report::{self, Format, Report, SuiteConfig};
use caliblab::{build_scene, Tolerances, TwoVector};

#[derive(Parser, Debug)]
#[command(
    name = "caliblab",
    version,
    about = "Calibration and minimality checks for Y x Y in R^4"
)]
struct Cli {
    /// Seed for every randomized check; required by stochastic subcommands.
    #[arg(long, global = true, env = "CALIBLAB_SEED")]
    seed: Option<u64>,
    /// Grid refinement n.
    #[arg(long, global = true, default_value_t = 2, value_parser = clap::value_parser!(u64).range(1..))]
    refine: u64,
    /// Output directory; without it the report goes to stdout and
    /// attachments are skipped.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Csv)]
    format: FormatArg,
    #[command(subcommand)]
    command: Command,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Comass of one 2-vector, or the closed form against the optimizer on
    /// 1000 random 2-vectors.
    Comass {
        /// Six coordinates in the basis e12, e13, e14, e23, e24, e34.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        alpha: Option<Vec<f64>>,
    },
    /// Unit comass of x1^x2 +- x3^x4 over random orthonormal bases.
    Lemma41,
    /// Exhaustive sign-sum bounds over blocks and permutation complements.
    Lemma324 {
        /// Also compare the numerical plane supremum with the enumeration.
        #[arg(long)]
        pointwise: bool,
    },
    /// Jacobian identity and scene measures, or the certificate of a
    /// competitor file.
    Calibrate {
        #[arg(long)]
        competitor: Option<PathBuf>,
    },
    #[command(subcommand)]
    Homology(HomologyCommand),
    /// Federer-Fleming projection of a tent surface on the aligned grid.
    Ffproject,
    /// Seeded minimizations and their calibration certificates.
    Minimize {
        #[arg(long)]
        manifest: Option<PathBuf>,
        /// Write the minimized competitor of the first seed to this file.
        #[arg(long)]
        export: Option<PathBuf>,
    },
    /// Product measure identity for a branch deformation of Y1.
    DemoProduct,
    /// Spherical net, junction coplanarity and the frame equation.
    Cones,
    /// Every sweep in one report.
    ReportAll,
}

#[derive(Subcommand, Debug)]
enum HomologyCommand {
    /// Fill existence, exactly-two on re-fills and mod-2 degrees; or, with
    /// files, whether a chain is a cycle and bounds.
    Check(ChainFiles),
    /// Fill a cycle read from a file.
    Solve {
        #[command(flatten)]
        files: ChainFiles,
    },
    /// Nine-piece decomposition of a competitor file.
    Decompose {
        #[arg(long)]
        competitor: PathBuf,
    },
    /// Write the triangulated Y x Y, its cycles and canonical fills.
    Export,
}

#[derive(Args, Debug)]
struct ChainFiles {
    #[arg(long, requires = "chain")]
    complex: Option<PathBuf>,
    #[arg(long, requires = "complex")]
    chain: Option<PathBuf>,
}

/// Splits `--tol.<name>=<v>` and `--tol.<name> <v>` out of the arguments.
fn take_tolerances(args: Vec<String>) -> Result<(Vec<String>, Tolerances)> {
    let mut tol = Tolerances::default();
    let mut rest = Vec::with_capacity(args.len());
    let mut it = args.into_iter();
    while let Some(a) = it.next() {
        let Some(opt) = a.strip_prefix("--tol.") else {
            rest.push(a);
            continue;
        };
        let (name, value) = match opt.split_once('=') {
            Some((n, v)) => (n.to_string(), v.to_string()),
            None => {
                let v = it
                    .next()
                    .with_context(|| format!("--tol.{opt} needs a value"))?;
                (opt.to_string(), v)
            }
        };
        let v: f64 = value
            .parse()
            .with_context(|| format!("--tol.{name}: `{value}` is not a number"))?;
        tol.set(&name, v)?;
    }
    Ok((rest, tol))
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn need_seed(seed: Option<u64>, what: &str) -> Result<u64> {
    seed.with_context(|| format!("`{what}` is randomized: pass --seed or set CALIBLAB_SEED"))
}

/// Parses inputs and runs the sweep. Any error here happens before output.
fn build(cli: &Cli, tol: Tolerances) -> Result<(Report, Vec<(PathBuf, String)>)> {
    let refine = usize::try_from(cli.refine)?;
    let cfg = |seed: u64| SuiteConfig { seed, tol, refine };
    let mut extra = Vec::new();
    let report = match &cli.command {
        Command::Comass { alpha } => {
            let c = cfg(need_seed(cli.seed, "comass")?);
            match alpha {
                Some(a) => {
                    let a: [f64; 6] = a
                        .as_slice()
                        .try_into()
                        .context("--alpha needs six values")?;
                    if a.iter().any(|x| !x.is_finite()) {
                        bail!("--alpha entries must be finite");
                    }
                    report::comass_eval(&c, &TwoVector(a))
                }
                None => report::comass_oracle_suite(&c),
            }
        }
        Command::Lemma41 => report::unit_comass_suite(&cfg(need_seed(cli.seed, "lemma41")?)),
        Command::Lemma324 { pointwise } => {
            if *pointwise {
                let c = cfg(need_seed(cli.seed, "lemma324 --pointwise")?);
                let mut r = report::sign_bound_suite(&c);
                r.extend(report::pointwise_suite(&c));
                r
            } else {
                report::sign_bound_suite(&cfg(cli.seed.unwrap_or(0)))
            }
        }
        Command::Calibrate { competitor } => match competitor {
            Some(p) => {
                let file = read_competitor(&read(p)?)
                    .with_context(|| format!("parsing {}", p.display()))?;
                report::competitor_suite(&cfg(cli.seed.unwrap_or(0)), &file)
            }
            None => report::measure_suite(&cfg(need_seed(cli.seed, "calibrate")?)),
        },
        Command::Homology(h) => match h {
            HomologyCommand::Check(ChainFiles {
                complex: Some(k),
                chain: Some(c),
            }) => {
                let (k, c) = read_pair(k, c)?;
                report::chain_check_suite(&cfg(cli.seed.unwrap_or(0)), &k, &c)
            }
            HomologyCommand::Check(_) => {
                let c = cfg(need_seed(cli.seed, "homology check")?);
                let mut r = report::homology_suite(&c);
                r.extend(report::linking_suite(&c));
                r
            }
            HomologyCommand::Solve { files } => {
                let (Some(k), Some(c)) = (&files.complex, &files.chain) else {
                    bail!("homology solve needs --complex and --chain");
                };
                let (k, c) = read_pair(k, c)?;
                report::chain_solve_suite(&cfg(cli.seed.unwrap_or(0)), &k, &c)
            }
            HomologyCommand::Decompose { competitor } => {
                let file = read_competitor(&read(competitor)?)
                    .with_context(|| format!("parsing {}", competitor.display()))?;
                report::decompose_suite(&cfg(cli.seed.unwrap_or(0)), &file)
            }
            HomologyCommand::Export => report::export_suite(&cfg(cli.seed.unwrap_or(0))),
        },
        Command::Ffproject => report::ffproject_suite(&cfg(need_seed(cli.seed, "ffproject")?)),
        Command::Minimize { manifest, export } => {
            let manifest = match manifest {
                Some(p) => Some(
                    read_manifest(&read(p)?).with_context(|| format!("parsing {}", p.display()))?,
                ),
                None => None,
            };
            let seed = match (&manifest, cli.seed) {
                (Some(m), s) => s.unwrap_or(m.seeds[0]),
                (None, s) => need_seed(s, "minimize")?,
            };
            let c = cfg(seed);
            if let Some(path) = export {
                let (refine, budget, first) = match &manifest {
                    Some(m) => (m.refine, m.budget, m.seeds[0]),
                    None => (refine, 50_000, seed),
                };
                let setup = grid_setup(&build_scene(0.0, 0.0), refine)?;
                let m = setup.minimized_fills(budget, first)?;
                let text = write_competitor(
                    refine,
                    setup.complex(),
                    [
                        [&m[0][0].chain, &m[0][1].chain],
                        [&m[1][0].chain, &m[1][1].chain],
                    ],
                );
                extra.push((path.clone(), text));
            }
            report::minimize_suite(&c, manifest.as_ref())
        }
        Command::DemoProduct => report::product_suite(&cfg(cli.seed.unwrap_or(0))),
        Command::Cones => report::cones_suite(&cfg(need_seed(cli.seed, "cones")?)),
        Command::ReportAll => report::report_all(&cfg(need_seed(cli.seed, "report-all")?)),
    };
    Ok((report, extra))
}

fn read_pair(
    complex: &Path,
    chain: &Path,
) -> Result<(caliblab::SimplicialComplex, caliblab::ChainZ2)> {
    let k =
        read_complex(&read(complex)?).with_context(|| format!("parsing {}", complex.display()))?;
    let c =
        read_chain(&read(chain)?, &k).with_context(|| format!("parsing {}", chain.display()))?;
    Ok((k, c))
}

fn emit(cli: &Cli, report: &Report, extra: &[(PathBuf, String)]) -> Result<()> {
    let format = match cli.format {
        FormatArg::Csv => Format::Csv,
        FormatArg::Json => Format::Json,
    };
    let text = report.render(format);
    match &cli.out {
        Some(dir) => {
            std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
            let name = format!("{}.{}", report.command, format.extension());
            std::fs::write(dir.join(name), text)?;
            for (name, body) in &report.attachments {
                std::fs::write(dir.join(name), body)?;
            }
        }
        None => print!("{text}"),
    }
    for (path, body) in extra {
        std::fs::write(path, body).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let (args, tol) = match take_tolerances(std::env::args().collect()) {
        Ok(v) => v,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    let cli = Cli::parse_from(args);
    let (report, extra) = match build(&cli, tol) {
        Ok(v) => v,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    if let Err(e) = emit(&cli, &report, &extra) {
        eprintln!("error: {e:#}");
        return ExitCode::from(2);
    }
    let s = report.summary();
    eprintln!("{}: {} rows, {} failed", report.command, s.rows, s.failures);
    if s.pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
