//! `mproj`: JSON front end for mproj-core.
//!
//! Every invocation prints exactly one JSON document. Exit status 0 means
//! success, 1 a domain error (precondition, non-convergence, no applicable
//! witness), 2 a usage error.

mod commands;
mod input;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use mproj_core::chebyshev::{DEFAULT_GRID, DEFAULT_REMEZ_TOL, MAX_ITERATIONS};
use mproj_core::coderivative::DEFAULT_BATTERY;
use mproj_core::DEFAULT_TOL;
use serde_json::{json, Value};

use input::json_value;

#[derive(Parser, Debug)]
#[command(name = "mproj", version, about = "Metric projections, duality maps, minimax polynomials and coderivative probes")]
#[command(args_override_self = true)]
struct Cli {
    /// JSON object whose keys stand in for flags (`{"r": 1, "x": [2, 1]}`);
    /// flags given on the command line take precedence
    #[arg(long, global = true, value_name = "FILE")]
    json: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Projection of x onto the l1 ball of radius r
    ProjectL1(ProjectL1),
    /// Projection of x in c onto c0
    ProjectC0(ProjectC0),
    /// Best uniform polynomial approximation on [0,1]
    Remez(Remez),
    /// Normalized duality mapping membership
    Duality(Duality),
    /// Coderivative exclusion certificates and consistency batteries
    Coderiv(Coderiv),
    /// Brute-force lattice search for the l1 ball projection
    Oracle(Oracle),
}

#[derive(Args, Debug)]
#[command(allow_negative_numbers = true)]
struct ProjectL1 {
    /// Sequence: a JSON array of entries or a {"kind": "finite" | "geotail", ...} object
    #[arg(long, value_parser = json_value)]
    x: Value,
    #[arg(long)]
    r: f64,
    /// Number of projection-set members to sample
    #[arg(long, default_value_t = 0)]
    sample: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
}

#[derive(Args, Debug)]
#[command(allow_negative_numbers = true)]
struct ProjectC0 {
    /// Sequence: a JSON array (limit 0) or a {"kind": "evconst", "head": [...], "tail": L} object
    #[arg(long, value_parser = json_value)]
    x: Value,
    #[arg(long, default_value_t = 0)]
    sample: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Init {
    Chebyshev,
    Equispaced,
}

#[derive(Args, Debug)]
#[command(allow_negative_numbers = true)]
struct Remez {
    /// `poly c0 c1 ...` (ascending powers), `sin k` for sin(k·pi·t), `abs c` for |t - c|, or `exp`
    #[arg(long, num_args = 1.., allow_negative_numbers = true, action = clap::ArgAction::Set, required = true)]
    function: Vec<String>,
    #[arg(long)]
    degree: usize,
    /// Relative tolerance on the levelled error
    #[arg(long, default_value_t = DEFAULT_REMEZ_TOL)]
    tol: f64,
    /// Uniform grid size used to locate extrema
    #[arg(long, default_value_t = DEFAULT_GRID)]
    grid: usize,
    #[arg(long, value_enum, default_value_t = Init::Chebyshev)]
    init: Init,
    #[arg(long, default_value_t = MAX_ITERATIONS)]
    max_iterations: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum DualSpace {
    L1,
    C,
    C01,
}

#[derive(Args, Debug)]
#[command(allow_negative_numbers = true)]
struct Duality {
    #[arg(long, value_enum)]
    space: DualSpace,
    /// Point x (l1 or c)
    #[arg(long, value_parser = json_value)]
    x: Option<Value>,
    /// Candidate functional: l-infinity sequence for l1, `[q0, q1, ...]` or a cstar object for c
    #[arg(long, value_parser = json_value)]
    phi: Option<Value>,
    /// Function for the C[0,1] case, same catalog as `remez`
    #[arg(long, num_args = 1.., allow_negative_numbers = true, action = clap::ArgAction::Set)]
    function: Vec<String>,
    /// With --degree and no --mu, the residual measure of the best approximation is tested against f - p
    #[arg(long)]
    degree: Option<usize>,
    /// Atomic measure: {"atoms": [{"t": .., "w": ..}]} or the bare atom list
    #[arg(long, value_parser = json_value)]
    mu: Option<Value>,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
    #[arg(long, default_value_t = DEFAULT_GRID)]
    grid: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum CoderivSpace {
    L1Ball,
    CToC0,
    C01ToPn,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Case {
    /// l1 ball, x strictly inside: y* = x* = psi
    Interior,
    /// l1 ball, x in the positive cone outside the ball, y* = 0
    ThetaTarget,
    /// l1 ball, y* the constant sequence d
    BetaTarget,
    /// l1 ball, y* the constant sequence ‖x‖₁, the dual of x
    DualTarget,
    /// c to c0, y* = (q0; 0, 0, ...)
    LimitFunctional,
    /// c to c0, y* = phi with entries beyond the limit term
    GeneralFunctional,
    /// C[0,1], candidate gamma against target mu
    MassGap,
    /// C[0,1], candidate 0 against target mu
    ZeroTarget,
    /// C[0,1], candidate gamma with <gamma, f - p> < 0
    NegativePairing,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    /// Battery for admitted candidates, witnesses otherwise
    Auto,
    Exclusion,
    Consistency,
}

#[derive(Args, Debug)]
#[command(allow_negative_numbers = true)]
struct Coderiv {
    #[arg(long, value_enum)]
    space: CoderivSpace,
    #[arg(long, value_enum)]
    case: Case,
    #[arg(long, value_enum, default_value_t = Mode::Auto)]
    mode: Mode,
    /// Base point; defaults to (3/2, 3/4, ...) for the ball, [0.3, -0.2] inside it, and (1, -2, 1/2, 1/2, ...) in c
    #[arg(long, value_parser = json_value)]
    x: Option<Value>,
    #[arg(long, default_value_t = 1.0)]
    r: f64,
    /// Candidate x* (defaults to zero; to the constant 1 for `interior`)
    #[arg(long, value_parser = json_value)]
    psi: Option<Value>,
    #[arg(long, default_value_t = 1.0)]
    d: f64,
    #[arg(long, default_value_t = 0.0)]
    q0: f64,
    /// Target functional for `general-functional`, defaults to [0, 0, 0, 2]
    #[arg(long, value_parser = json_value)]
    phi: Option<Value>,
    /// Defaults to `poly 0 -1 0 1`
    #[arg(long, num_args = 1.., allow_negative_numbers = true, action = clap::ArgAction::Set)]
    function: Vec<String>,
    #[arg(long, default_value_t = 2)]
    degree: usize,
    #[arg(long, value_parser = json_value)]
    gamma: Option<Value>,
    #[arg(long, value_parser = json_value)]
    mu: Option<Value>,
    #[arg(long, default_value_t = DEFAULT_BATTERY)]
    battery: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
    #[arg(long, default_value_t = DEFAULT_GRID)]
    grid: usize,
}

#[derive(Args, Debug)]
#[command(allow_negative_numbers = true)]
struct Oracle {
    /// Finitely supported point, at most four coordinates
    #[arg(long, value_parser = json_value)]
    x: Value,
    #[arg(long)]
    r: f64,
    #[arg(long, default_value_t = 1e-2)]
    resolution: f64,
    /// Search dimension; defaults to the support length of x (at least 2)
    #[arg(long)]
    dim: Option<usize>,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Domain(mproj_core::Error),
}

impl From<mproj_core::Error> for CliError {
    fn from(e: mproj_core::Error) -> Self {
        CliError::Domain(e)
    }
}

fn domain_kind(e: &mproj_core::Error) -> &'static str {
    use mproj_core::Error::*;
    match e {
        Precondition(_) => "precondition",
        EmptySelection(_) => "empty-selection",
        Unsupported(_) => "unsupported",
        Singleton(_) => "singleton",
        NonConvergence { .. } => "non-convergence",
        ZeroDenominator => "zero-denominator",
        InvalidSelection { .. } => "invalid-selection",
        CaseSelection(_) => "case-selection",
        InvalidInput(_) => "invalid-input",
    }
}

fn error_json(e: &CliError) -> Value {
    match e {
        CliError::Usage(msg) => json!({ "error": { "kind": "usage", "message": msg } }),
        CliError::Domain(err) => {
            let mut body = json!({ "kind": domain_kind(err), "message": err.to_string() });
            if let mproj_core::Error::NonConvergence { best, .. } = err {
                body["best"] = serde_json::to_value(best).unwrap_or(Value::Null);
            }
            json!({ "error": body })
        }
    }
}

/// Flags from the `--json` payload, spliced in right after the subcommand so
/// that explicit flags, which come later, override them.
fn expand_payload(argv: Vec<OsString>) -> Result<Vec<OsString>, CliError> {
    let strs: Vec<String> = argv.iter().map(|a| a.to_string_lossy().into_owned()).collect();
    let path = strs.iter().enumerate().find_map(|(i, a)| {
        if a == "--json" {
            strs.get(i + 1).cloned()
        } else {
            a.strip_prefix("--json=").map(str::to_owned)
        }
    });
    let Some(path) = path else { return Ok(argv) };
    let text = std::fs::read_to_string(&path).map_err(|e| CliError::Usage(format!("--json {path}: {e}")))?;
    let payload: Value = serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("--json {path}: {e}")))?;
    let obj = payload.as_object().ok_or_else(|| CliError::Usage(format!("--json {path}: expected a JSON object")))?;
    let mut extra = Vec::new();
    for (key, value) in obj {
        let flag = format!("--{}", key.replace('_', "-"));
        match value {
            Value::Bool(true) => extra.push(flag),
            Value::Bool(false) | Value::Null => {}
            Value::String(s) if key == "function" => {
                extra.push(flag);
                extra.extend(s.split_whitespace().map(str::to_owned));
            }
            Value::String(s) => extra.extend([flag, s.clone()]),
            Value::Array(items) if key == "function" => {
                extra.push(flag);
                extra.extend(items.iter().map(|v| v.as_str().map(str::to_owned).unwrap_or_else(|| v.to_string())));
            }
            other => extra.extend([flag, other.to_string()]),
        }
    }
    let sub = ["project-l1", "project-c0", "remez", "duality", "coderiv", "oracle"];
    let at = strs.iter().position(|a| sub.contains(&a.as_str())).map(|i| i + 1).unwrap_or(argv.len());
    let mut out = argv;
    out.splice(at..at, extra.into_iter().map(OsString::from));
    Ok(out)
}

fn run(argv: Vec<OsString>) -> Result<Value, CliError> {
    let argv = expand_payload(argv)?;
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            return Ok(json!({ "help": e.render().to_string() }));
        }
        Err(e) => return Err(CliError::Usage(e.render().to_string().trim_end().to_owned())),
    };
    match cli.command {
        Command::ProjectL1(a) => commands::project_l1(&a.x, a.r, a.sample, a.seed, a.tol),
        Command::ProjectC0(a) => commands::project_c0(&a.x, a.sample, a.seed),
        Command::Remez(a) => {
            let init = match a.init {
                Init::Chebyshev => mproj_core::chebyshev::InitialReference::Chebyshev,
                Init::Equispaced => mproj_core::chebyshev::InitialReference::Equispaced,
            };
            let opts = mproj_core::chebyshev::RemezOptions { tol: a.tol, grid: a.grid, max_iterations: a.max_iterations, init };
            commands::remez(&a.function, a.degree, &opts)
        }
        Command::Duality(a) => commands::duality(&commands::DualityArgs {
            space: match a.space {
                DualSpace::L1 => "l1",
                DualSpace::C => "c",
                DualSpace::C01 => "c01",
            },
            x: a.x,
            phi: a.phi,
            function: a.function,
            degree: a.degree,
            mu: a.mu,
            tol: a.tol,
            grid: a.grid,
        }),
        Command::Coderiv(a) => commands::coderiv(&commands::CoderivArgs {
            space: match a.space {
                CoderivSpace::L1Ball => mproj_core::coderivative::Space::L1Ball,
                CoderivSpace::CToC0 => mproj_core::coderivative::Space::CToC0,
                CoderivSpace::C01ToPn => mproj_core::coderivative::Space::C01ToPn,
            },
            case: a.case,
            mode: a.mode,
            x: a.x,
            r: a.r,
            psi: a.psi,
            d: a.d,
            q0: a.q0,
            phi: a.phi,
            function: a.function,
            degree: a.degree,
            gamma: a.gamma,
            mu: a.mu,
            battery: a.battery,
            seed: a.seed,
            tol: a.tol,
            grid: a.grid,
        }),
        Command::Oracle(a) => commands::oracle(&a.x, a.r, a.resolution, a.dim),
    }
}

fn main() -> ExitCode {
    let (doc, code) = match run(std::env::args_os().collect()) {
        Ok(v) => (v, 0),
        Err(e) => {
            let code = if matches!(e, CliError::Usage(_)) { 2 } else { 1 };
            (error_json(&e), code)
        }
    };
    let text = serde_json::to_string_pretty(&doc).expect("JSON values always serialize");
    // a closed pipe is not worth a panic
    let _ = writeln!(std::io::stdout(), "{text}");
    ExitCode::from(code)
}
