//! Command-line front end for `eqcohom`.

pub mod expr;
pub mod space;
pub mod verify;

use std::ffi::OsString;
use std::io::Write;

use clap::{Parser, Subcommand, ValueEnum};
use eqcohom::forgetful::standard_window;
use eqcohom::projective::rp_basis;
use eqcohom::stiefel::stiefel_basis;
use eqcohom::{
    check_presentation, BettiTable, FreeAlgebra, FreeModule, RotationGroup, RpDim, Window,
};
use thiserror::Error;

use crate::expr::ParseError;
use crate::space::{parse_rp_dim, so_element, Algebra, Space};
use crate::verify::{effective_max_p, render, run_suites, Status, Suite};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CliError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Math(#[from] eqcohom::Error),
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Math(eqcohom::Error::Consistency(_)) => 1,
            _ => 2,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Ascii,
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(
    name = "eqcohom",
    version,
    about = "RO(Z/2)-graded Bredon cohomology with Z/2 coefficients"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// The cohomology of a point.
    Point {
        #[command(subcommand)]
        command: PointCommand,
    },
    /// Twisted projective space RP^n_tw, n a number or `inf`.
    Rp {
        n: String,
        #[command(subcommand)]
        command: RpCommand,
    },
    /// The rotation group SO(p, floor(p/2)).
    So {
        p: u32,
        /// Weight; only floor(p/2) is supported.
        #[arg(long)]
        q: Option<u32>,
        #[command(subcommand)]
        command: SoCommand,
    },
    /// The Stiefel manifold V_q(R^{p,q}), q = floor(p/2).
    Stiefel {
        p: u32,
        #[command(subcommand)]
        command: StiefelCommand,
    },
    /// Apply the forgetful map to an expression in a space such as `so:4`.
    Psi { space: String, expr: String },
    /// Run the verification suites.
    Verify {
        #[arg(long)]
        max_p: Option<u32>,
        #[arg(long, default_value = "all")]
        suite: String,
    },
}

#[derive(Debug, Subcommand)]
enum PointCommand {
    /// Dimensions of H^{p,q}(pt) over a window.
    Chart {
        /// `p0:p1,q0:q1`, bounds inclusive.
        #[arg(long, allow_hyphen_values = true, default_value = "-4:4,-5:5")]
        window: String,
        #[arg(long, value_enum, default_value = "ascii")]
        format: Format,
    },
}

#[derive(Debug, Subcommand)]
enum RpCommand {
    Basis,
    Present,
    Mul { expr: String },
}

#[derive(Debug, Subcommand)]
enum SoCommand {
    Basis,
    Betti {
        #[arg(long, allow_hyphen_values = true)]
        window: Option<String>,
        #[arg(long, value_enum, default_value = "ascii")]
        format: Format,
    },
    Mul {
        expr: String,
    },
    CheckPresentation {
        #[arg(long, value_enum, default_value = "ascii")]
        format: Format,
    },
    Omega {
        expr: String,
    },
}

#[derive(Debug, Subcommand)]
enum StiefelCommand {
    Basis,
    Mul { expr: String },
}

pub fn parse_window(s: &str) -> Result<Window, CliError> {
    let bad = || CliError::Usage(format!("window must look like p0:p1,q0:q1, got '{s}'"));
    let (ps, qs) = s.split_once(',').ok_or_else(bad)?;
    let range = |r: &str| -> Result<(i64, i64), CliError> {
        let (a, b) = r.split_once(':').ok_or_else(bad)?;
        Ok((
            a.trim().parse().map_err(|_| bad())?,
            b.trim().parse().map_err(|_| bad())?,
        ))
    };
    let ((p0, p1), (q0, q1)) = (range(ps)?, range(qs)?);
    Window::new(p0, p1, q0, q1).map_err(|e| CliError::Usage(e.to_string()))
}

fn table(t: &BettiTable, format: Format) -> String {
    match format {
        Format::Ascii => t.to_ascii(),
        Format::Csv => t.to_csv(),
        Format::Json => format!("{}\n", t.to_json()),
    }
}

/// `H[a,b]/(relations)` for `RP^n_tw`.
pub fn rp_presentation(n: RpDim) -> String {
    match n {
        RpDim::Finite(1) => "H[a]/(a^2 = r*a)".into(),
        RpDim::Finite(n) if n % 2 == 1 => {
            format!("H[a,b]/(a^2 = r*a + t*b, b^{} = 0)", n.div_ceil(2))
        }
        RpDim::Finite(n) => format!(
            "H[a,b]/(a^2 = r*a + t*b, b^{} = 0, a*b^{} = 0)",
            n / 2 + 1,
            n / 2
        ),
        RpDim::Infinite => "H[a,b]/(a^2 = r*a + t*b)".into(),
    }
}

fn basis_lines<A: FreeAlgebra>(a: &A, limit: i64) -> String {
    a.basis_through(limit)
        .iter()
        .map(|b| format!("{b} {}\n", a.degree(b)))
        .collect()
}

fn execute(cli: Cli, env_max_p: Option<&str>, out: &mut dyn Write) -> Result<i32, CliError> {
    let mut emit = |s: String| {
        let _ = out.write_all(s.as_bytes());
    };
    match cli.command {
        Command::Point {
            command: PointCommand::Chart { window, format },
        } => {
            let t = BettiTable::compute("pt", &FreeModule::point(), parse_window(&window)?);
            emit(table(&t, format));
        }
        Command::Rp { n, command } => {
            let dim = parse_rp_dim(&n)?;
            let space = Space::Rp(dim);
            match command {
                RpCommand::Basis => match dim {
                    RpDim::Finite(_) => {
                        emit(basis_lines(&eqcohom::ProjectiveSpace::new(dim)?, i64::MAX))
                    }
                    RpDim::Infinite => {
                        let lines: String = rp_basis(dim)?
                            .take(11)
                            .map(|m| format!("{m} {}\n", m.degree()))
                            .collect();
                        emit(lines + "...\n");
                    }
                },
                RpCommand::Present => emit(format!("{}\n", rp_presentation(dim))),
                RpCommand::Mul { expr } => {
                    emit(format!("{}\n", Algebra::new(&space)?.evaluate(&expr)?))
                }
            }
        }
        Command::So { p, q, command } => {
            let group = match q {
                Some(q) => RotationGroup::with_weight(p, q)?,
                None => RotationGroup::new(p)?,
            };
            match command {
                SoCommand::Basis => emit(basis_lines(&group, i64::MAX)),
                SoCommand::Betti { window, format } => {
                    let top = group.top_dim().expect("finite");
                    let w = match window {
                        Some(w) => parse_window(&w)?,
                        None => standard_window(top),
                    };
                    emit(table(
                        &BettiTable::compute(group.name(), &group.module()?, w),
                        format,
                    ));
                }
                SoCommand::Mul { expr } => emit(format!("{}\n", so_element(&group, &expr)?)),
                SoCommand::CheckPresentation { format } => {
                    let report = check_presentation(&group)?;
                    match format {
                        Format::Json => emit(format!(
                            "{}\n",
                            serde_json::to_string_pretty(&report).expect("serializes")
                        )),
                        _ => emit(report.to_string()),
                    }
                }
                SoCommand::Omega { expr } => {
                    let x = so_element(&group, &expr)?;
                    emit(format!("{}\n", group.omega_star(&x)?));
                }
            }
        }
        Command::Stiefel { p, command } => match command {
            StiefelCommand::Basis => {
                let lines: String = stiefel_basis(p)?
                    .iter()
                    .map(|(s, d)| format!("{s} {d}\n"))
                    .collect();
                emit(lines);
            }
            StiefelCommand::Mul { expr } => emit(format!(
                "{}\n",
                Algebra::new(&Space::Stiefel(p))?.evaluate(&expr)?
            )),
        },
        Command::Psi { space, expr } => {
            let space: Space = space.parse()?;
            emit(format!("{}\n", Algebra::new(&space)?.psi(&expr)?));
        }
        Command::Verify { max_p, suite } => {
            let suite: Suite = suite.parse()?;
            let max_p = effective_max_p(max_p, env_max_p)?;
            let outcomes = run_suites(suite, max_p);
            emit(render(&outcomes));
            if outcomes.iter().any(|o| o.status == Status::Fail) {
                return Ok(1);
            }
        }
    }
    Ok(0)
}

/// Runs the command line `args` (program name first) and returns the exit
/// code: 0 on success, 1 on a verification failure, 2 on a usage or parse
/// error.
pub fn run<I, T>(args: I, env_max_p: Option<&str>, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    match execute(cli, env_max_p, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
