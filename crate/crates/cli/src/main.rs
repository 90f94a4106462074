mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qserre::scalar::parse_rational;
use qserre::suites::{RunConfig, Suite};
use qserre::Error;

use output::{render, Document, Format};

#[derive(Parser)]
#[command(name = "qserre", version, about = "Quantum Serre duality computations on projective spaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// End-to-end reproduction for the anticanonical twist of P^4.
    QuinticReport(Common),
    /// Runs the selected verification suites.
    Verify(Common),
    /// Mirror maps, the composed map F and the invariants N_d.
    MirrorMaps(MirrorArgs),
    /// Picard-Fuchs operators and their factorizations.
    Operators(Common),
    /// Hodge filtrations on the second structure connections.
    Hodge(Common),
    /// Connection matrices and the second metric.
    Matrices(MatrixArgs),
}

#[derive(Args, Clone)]
struct Common {
    #[arg(long, default_value_t = 4)]
    n: usize,
    /// Series order D.
    #[arg(long, default_value_t = 10)]
    order: usize,
    /// Weighted order W for solution checks.
    #[arg(long, default_value_t = 8)]
    worder: u32,
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    /// Comma-separated subset of flatness,laplace,weyl,hrr,hodge,mirror,pairing.
    #[arg(long, value_delimiter = ',')]
    suites: Vec<String>,
    #[arg(long, value_enum, default_value_t = Format::Markdown)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Clone)]
struct MirrorArgs {
    #[command(flatten)]
    common: Common,
    /// Algebra presentation JSON for a user-supplied target.
    #[arg(long, requires = "descendants")]
    algebra: Option<PathBuf>,
    /// Descendant data JSON matching --algebra.
    #[arg(long, requires = "algebra")]
    descendants: Option<PathBuf>,
}

#[derive(Args, Clone)]
struct MatrixArgs {
    #[command(flatten)]
    common: Common,
    /// Connection parameter as p/q; defaults to (n+1)/2.
    #[arg(long, allow_hyphen_values = true)]
    sigma: Option<String>,
}

enum Failure {
    Usage(String),
    Compute(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Input(_) | Error::Inadmissible(_) | Error::InvalidAlgebra(_) | Error::RankMismatch { .. } => {
                Failure::Usage(e.to_string())
            }
            _ => Failure::Compute(e.to_string()),
        }
    }
}

fn config(c: &Common) -> Result<RunConfig, Failure> {
    let suites = if c.suites.is_empty() {
        Suite::ALL.to_vec()
    } else {
        c.suites
            .iter()
            .map(|s| s.trim().parse::<Suite>())
            .collect::<Result<Vec<_>, _>>()?
    };
    let cfg = RunConfig {
        n: c.n,
        order: c.order,
        worder: c.worder,
        tol: c.tol,
        suites,
    };
    cfg.validate()?;
    Ok(cfg)
}

fn read(path: &PathBuf) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn execute(cli: Cli) -> Result<(Document, Common), Failure> {
    let (name, common) = match &cli.command {
        Command::QuinticReport(c) => ("quintic-report", c.clone()),
        Command::Verify(c) => ("verify", c.clone()),
        Command::MirrorMaps(m) => ("mirror-maps", m.common.clone()),
        Command::Operators(c) => ("operators", c.clone()),
        Command::Hodge(c) => ("hodge", c.clone()),
        Command::Matrices(m) => ("matrices", m.common.clone()),
    };
    let cfg = config(&common)?;
    let mut doc = Document::new(name, cfg);
    match cli.command {
        Command::QuinticReport(_) => commands::quintic_report(&mut doc)?,
        Command::Verify(_) => commands::verify(&mut doc)?,
        Command::MirrorMaps(m) => {
            let imported = match (&m.algebra, &m.descendants) {
                (Some(a), Some(d)) => Some(commands::load_imported(&read(a)?, &read(d)?)?),
                _ => None,
            };
            commands::mirror_maps(&mut doc, imported)?
        }
        Command::Operators(_) => commands::operators(&mut doc),
        Command::Hodge(_) => commands::hodge(&mut doc)?,
        Command::Matrices(m) => {
            let sigma = match m.sigma {
                Some(s) => Some(
                    parse_rational(&s).ok_or_else(|| Failure::Usage(format!("bad rational '{s}'")))?,
                ),
                None => None,
            };
            commands::matrices(&mut doc, sigma)?
        }
    }
    Ok((doc, common))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok((doc, common)) => {
            let text = match render(&doc, common.format) {
                Ok(t) => t,
                Err(e) => {
                    eprintln!("error: {e}");
                    return ExitCode::from(1);
                }
            };
            match &common.out {
                Some(path) => {
                    if let Err(e) = std::fs::write(path, &text) {
                        eprintln!("error: {}: {e}", path.display());
                        return ExitCode::from(2);
                    }
                }
                None => print!("{text}"),
            }
            if doc.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Compute(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
    }
}
