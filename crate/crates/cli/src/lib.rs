//! The `central-curve` command line: argument parsing, instance loading and
//! the individual commands.

mod commands;
mod plot;
mod verify;

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use central_curve::arrangement::DEFAULT_LIMIT_N;
use central_curve::catalog::{builtin, InstanceFile, BUILTIN_NAMES};
use central_curve::centralpath::TraceOptions;
use central_curve::LpInstance;
use clap::{Args, Parser, Subcommand, ValueEnum};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_UNSUPPORTED: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "central-curve", version, about = "Invariants, equations and traced central paths of linear programs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Matroid invariants of the primal and dual central curves, as JSON
    Invariants(Common),
    /// Trace one central path and write it as CSV
    Trace {
        #[command(flatten)]
        common: Common,
        /// follow the path of max c^T x (lambda > 0) or of min c^T x
        #[arg(long, value_enum, default_value_t = Direction::Max)]
        direction: Direction,
    },
    /// Measured curvature of every bounded region against the bounds, as JSON
    Curvature(Common),
    /// Analytic centers of all regions, as CSV
    Centers(Common),
    /// SVG picture of a planar arrangement and its central curve
    Plot(Common),
    /// Write a built-in instance file; without --name, list the names
    Example {
        #[arg(long)]
        name: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Cross-check exact predictions against traced paths
    Verify(Common),
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// instance JSON file, or the name of a built-in example
    #[arg(long)]
    pub instance: String,
    /// output file; standard output when absent
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub side: Option<SideArg>,
    /// sign vector such as ++-+
    #[arg(long)]
    pub region: Option<String>,
    #[arg(long)]
    pub lambda_max: Option<f64>,
    #[arg(long)]
    pub lambda_min: Option<f64>,
    /// relative distance for matching trace endpoints to vertices and centers
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
    /// refuse region enumeration above this many variables
    #[arg(long, default_value_t = DEFAULT_LIMIT_N)]
    pub limit_n: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SideArg {
    Primal,
    Dual,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Direction {
    Max,
    Min,
}

impl Direction {
    pub fn lambda_sign(self) -> i8 {
        match self {
            Direction::Max => 1,
            Direction::Min => -1,
        }
    }
}

/// An error together with the process exit code it maps to.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    pub fn new(code: i32, message: impl Into<String>) -> Self {
        Failure { code, message: message.into() }
    }

    pub fn parse(message: impl Into<String>) -> Self {
        Failure::new(EXIT_PARSE, message)
    }

    pub fn unsupported(message: impl Into<String>) -> Self {
        Failure::new(EXIT_UNSUPPORTED, message)
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<central_curve::Error> for Failure {
    fn from(e: central_curve::Error) -> Self {
        use central_curve::Error as E;
        let code = match e {
            E::InvalidInstance(_) | E::ParseRational(_) | E::Inconsistent | E::ZeroMatrix | E::MismatchedShape { .. } => EXIT_PARSE,
            E::LimitExceeded { .. } | E::AmbientNot2D(_) => EXIT_UNSUPPORTED,
            _ => EXIT_VERIFY,
        };
        Failure::new(code, e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::new(EXIT_VERIFY, e.to_string())
    }
}

pub type CliResult<T> = Result<T, Failure>;

/// Reads an instance from a file, falling back to the built-in examples by name.
pub fn load_instance(spec: &str) -> CliResult<(InstanceFile, LpInstance)> {
    let path = Path::new(spec);
    let file = if path.exists() {
        let text = fs::read_to_string(path).map_err(|e| Failure::parse(format!("{spec}: {e}")))?;
        InstanceFile::from_json(&text)
            .map_err(|e| Failure::parse(format!("{spec}:{}:{}: {e}", e.line(), e.column())))?
    } else if let Some(f) = builtin(spec) {
        f
    } else {
        return Err(Failure::parse(format!(
            "{spec}: no such file and no built-in example of that name (known: {})",
            BUILTIN_NAMES.join(", ")
        )));
    };
    let inst = file.to_instance().map_err(|e| Failure::parse(format!("{spec}: {e}")))?;
    Ok((file, inst))
}

pub fn write_output(out: Option<&Path>, text: &str) -> CliResult<()> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| Failure::new(EXIT_VERIFY, format!("{}: {e}", p.display()))),
        None => {
            use std::io::Write;
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
            Ok(())
        }
    }
}

impl Common {
    pub fn trace_options(&self) -> TraceOptions {
        TraceOptions {
            lambda_max: self.lambda_max,
            lambda_min: self.lambda_min,
            endpoint_tol: self.tol,
            ..TraceOptions::default()
        }
    }

    pub fn check_limit(&self, inst: &LpInstance) -> CliResult<()> {
        if inst.n() > self.limit_n {
            return Err(Failure::unsupported(format!("n = {} exceeds --limit-n {}", inst.n(), self.limit_n)));
        }
        Ok(())
    }

    /// The instance whose primal variables live in the requested space.
    pub fn sided(&self, inst: &LpInstance) -> CliResult<LpInstance> {
        match self.side.unwrap_or(SideArg::Primal) {
            SideArg::Primal => Ok(inst.clone()),
            SideArg::Dual => inst.dual().map_err(|e| Failure::unsupported(e.to_string())),
        }
    }
}

/// Runs a parsed command; the returned code is the process exit status.
pub fn run(cli: Cli) -> CliResult<i32> {
    match cli.command {
        Command::Invariants(c) => commands::invariants(&c),
        Command::Trace { common, direction } => commands::trace(&common, direction),
        Command::Curvature(c) => commands::curvature(&c),
        Command::Centers(c) => commands::centers(&c),
        Command::Plot(c) => plot::plot(&c),
        Command::Example { name, out } => commands::example(name.as_deref(), out.as_deref()),
        Command::Verify(c) => verify::verify(&c),
    }
}
