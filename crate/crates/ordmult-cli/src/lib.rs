//! Command-line front end: argument definitions, command execution and reports.
//!
//! Every command returns an [`Outcome`] holding the rendered text, an exit code and a
//! [`Summary`] that the manifest checker compares against expected values.

use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use ordmult::Error;

pub mod commands;
pub mod format;
pub mod manifest;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INEXACT: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

#[derive(Parser, Debug, Clone)]
#[command(name = "ordmult", version, about = "Newton-diagram multiplicity bounds and ordered intersection multiplicities")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Print Newton diagrams: vertices, compact faces and facet normals.
    Nd(NdArgs),
    /// Multiplicity at the origin, or along V(x_1..x_k) with --project.
    Mult0(Mult0Args),
    /// Order of a target polynomial on the curve cut out by the others.
    CurveOrd(CurveOrdArgs),
    /// Ledger of a scene: distinguished components, ordered multiplicities, isolated count.
    Ordered(OrderedArgs),
    /// The sphere-tangent count with every genericity check.
    Spheres(SpheresArgs),
    /// Run the jobs of a manifest and compare against expected values.
    Verify(VerifyArgs),
}

#[derive(Args, Debug, Clone)]
pub struct NdArgs {
    /// System file (TOML). Omit when using --expr.
    pub input: Option<PathBuf>,
    /// Polynomial given inline; repeatable.
    #[arg(long = "expr")]
    pub exprs: Vec<String>,
    /// Variables for --expr, comma separated.
    #[arg(long)]
    pub vars: Option<String>,
    /// Only these named polynomials of the system file; repeatable.
    #[arg(long = "poly")]
    pub polys: Vec<String>,
    /// Project supports onto these variables (1-based, comma separated).
    #[arg(long)]
    pub project: Option<String>,
    /// Print the Minkowski sum of the selected diagrams.
    #[arg(long)]
    pub sum: bool,
    #[arg(long)]
    pub field: Option<String>,
    #[arg(long)]
    pub json: bool,
}

#[derive(Args, Debug, Clone)]
pub struct Mult0Args {
    pub input: PathBuf,
    /// Use these named polynomials in this order; repeatable. Defaults to file order.
    #[arg(long = "poly")]
    pub polys: Vec<String>,
    /// Compute along Z = V(x_1..x_k); the index set must be 1..k.
    #[arg(long)]
    pub project: Option<String>,
    /// Point of Z used to certify exactness, comma separated; repeatable.
    #[arg(long = "sample")]
    pub samples: Vec<String>,
    /// Ignore a [projection] section of the system file.
    #[arg(long)]
    pub at_origin: bool,
    #[arg(long)]
    pub field: Option<String>,
    /// Exit with status 1 when the value is not certified exact.
    #[arg(long)]
    pub exact: bool,
    #[arg(long)]
    pub json: bool,
}

#[derive(Args, Debug, Clone)]
pub struct CurveOrdArgs {
    pub input: PathBuf,
    /// Target polynomial; defaults to [curve].target.
    #[arg(long)]
    pub target: Option<String>,
    /// Family of variable index sets, e.g. "3" or "1,2;3" (1-based). Defaults to
    /// [curve].family; an empty string gives the empty family.
    #[arg(long)]
    pub family: Option<String>,
    /// Move this point to the origin first, comma separated.
    #[arg(long)]
    pub shift: Option<String>,
    /// Integer substitution matrix applied after the shift, rows separated by ';'.
    #[arg(long)]
    pub substitution: Option<String>,
    #[arg(long)]
    pub field: Option<String>,
    #[arg(long)]
    pub exact: bool,
    #[arg(long)]
    pub json: bool,
}

#[derive(Args, Debug, Clone)]
pub struct OrderedArgs {
    /// Scene file (JSON).
    pub scene: PathBuf,
    #[arg(long)]
    pub exact: bool,
    #[arg(long)]
    pub json: bool,
}

#[derive(Args, Debug, Clone)]
pub struct SpheresArgs {
    /// Take parameters from this scene file instead of the bundled ones.
    #[arg(long)]
    pub scene: Option<PathBuf>,
    /// Override one parameter, e.g. r2=5/2; repeatable.
    #[arg(long = "param")]
    pub params: Vec<String>,
    /// Also print the local diagrams and the Newton estimate at the points with w = 0.
    #[arg(long)]
    pub local_diagrams: bool,
    /// Write the local expansions at the point u1 = i, w = 0 as a system file.
    #[arg(long)]
    pub emit_local_system: Option<PathBuf>,
    #[arg(long)]
    pub exact: bool,
    #[arg(long)]
    pub json: bool,
}

#[derive(Args, Debug, Clone)]
pub struct VerifyArgs {
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub manifest: Option<PathBuf>,
    #[arg(long)]
    pub json: bool,
}

/// Values a manifest can check.
#[derive(Clone, Debug, Default, Serialize, PartialEq)]
pub struct Summary {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact: Option<bool>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub parts: BTreeMap<String, u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness_nu: Option<Vec<i64>>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub vertices: Vec<Vec<i64>>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub normals: Vec<Vec<i64>>,
}

#[derive(Clone, Debug)]
pub struct Outcome {
    pub code: i32,
    /// Text for standard output.
    pub stdout: String,
    /// Text for standard error.
    pub stderr: String,
    pub summary: Summary,
}

impl Outcome {
    pub fn ok(stdout: String, summary: Summary) -> Self {
        Outcome { code: EXIT_OK, stdout, stderr: String::new(), summary }
    }

    pub fn from_error(e: &Error) -> Self {
        let code = match e {
            Error::Input(_) | Error::Domain(_) => EXIT_INPUT,
            Error::Hypothesis(_) => EXIT_INEXACT,
            Error::Internal(_) => EXIT_INTERNAL,
        };
        Outcome { code, stdout: String::new(), stderr: format!("error: {e}\n"), summary: Summary::default() }
    }

    /// Sets exit status 1 when exactness was demanded and not certified.
    pub fn demand_exact(mut self, demanded: bool) -> Self {
        if demanded && self.code == EXIT_OK && self.summary.exact == Some(false) {
            self.code = EXIT_INEXACT;
            self.stderr.push_str("error: the result is not certified exact\n");
        }
        self
    }
}

/// Runs a parsed command line.
pub fn execute(cli: &Cli) -> Outcome {
    let r = match &cli.command {
        Command::Nd(a) => commands::nd(a),
        Command::Mult0(a) => commands::mult0(a).map(|o| o.demand_exact(a.exact)),
        Command::CurveOrd(a) => commands::curve_ord(a).map(|o| o.demand_exact(a.exact)),
        Command::Ordered(a) => commands::ordered(a).map(|o| o.demand_exact(a.exact)),
        Command::Spheres(a) => commands::spheres(a).map(|o| o.demand_exact(a.exact)),
        Command::Verify(a) => manifest::verify(a),
    };
    r.unwrap_or_else(|e| Outcome::from_error(&e))
}

/// Parses and runs an argument vector (first element is the program name). A panic
/// becomes exit status 3.
pub fn run_args<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            return if code == EXIT_OK {
                Outcome::ok(text, Summary::default())
            } else {
                Outcome { code, stdout: String::new(), stderr: text, summary: Summary::default() }
            };
        }
    };
    match std::panic::catch_unwind(|| execute(&cli)) {
        Ok(o) => o,
        Err(p) => {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "unknown panic".into());
            Outcome { code: EXIT_INTERNAL, stdout: String::new(), stderr: format!("error: internal failure: {msg}\n"), summary: Summary::default() }
        }
    }
}
