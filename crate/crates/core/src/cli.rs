//! The `tailspec` command line.
//!
//! Exit codes: 0 on success, 2 for invalid input (bad flags, malformed JSON,
//! missing anchor, bad κ), 1 for numerical failures.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::families::{family_spectrum, FamilyError};
use crate::graph::{Family, FamilySpec, Graph, GraphError};
use crate::numerics::NumericsError;
use crate::oracle::{convergence_study, resolvent_check, schur_identity_check, OracleError};
use crate::poly::{charpoly, PolyError};
use crate::tail::{full_spectrum_report_with, SolverOptions, TailError};

#[derive(Debug, Parser)]
#[command(name = "tailspec", version, about = "Spectra of finite graphs with an infinite path attached")]
pub struct Cli {
    /// Root-refinement and bisection tolerance
    #[arg(long, global = true, default_value_t = 1e-12)]
    pub tol: f64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the report here instead of standard output
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Characteristic polynomial det(λI − A) of a graph
    Charpoly(GraphArg),
    /// Essential band and discrete eigenvalues of graph + infinite path
    Spectrum(GraphArg),
    /// Closed-form solver for a multiple star or a flower
    Family(FamilyArgs),
    /// Compare the solver against finite truncations of the tail
    Verify(VerifyArgs),
    /// Green's function of the infinite path against a finite resolvent
    Green(GreenArgs),
    /// Check the block factorizations on a random symmetric matrix
    SchurDemo(SchurArgs),
}

#[derive(Debug, Args)]
pub struct GraphArg {
    /// Path to a graph JSON file, or the JSON itself
    pub graph: String,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("kind").required(true).args(["star", "flower"])))]
pub struct FamilyArgs {
    #[arg(long)]
    pub star: bool,
    #[arg(long)]
    pub flower: bool,
    /// Comma-separated κ, e.g. 1,1,1
    #[arg(long, value_delimiter = ',', required = true)]
    pub k: Vec<u32>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    pub graph: String,
    #[arg(long, value_delimiter = ',', default_values_t = vec![50usize, 100, 200, 400])]
    pub lengths: Vec<usize>,
    #[arg(long, default_value_t = 0.02)]
    pub margin: f64,
}

#[derive(Debug, Args)]
pub struct GreenArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub z: f64,
    #[arg(long, default_value_t = 1)]
    pub i: usize,
    #[arg(long, default_value_t = 1)]
    pub j: usize,
    #[arg(long = "L", default_value_t = 60)]
    pub length: usize,
}

#[derive(Debug, Args)]
pub struct SchurArgs {
    #[arg(long, default_value_t = 3)]
    pub dim1: usize,
    #[arg(long, default_value_t = 4)]
    pub dim2: usize,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
}

#[derive(Debug)]
enum Failure {
    Input(String),
    Numeric(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Input(_) => 2,
            Failure::Numeric(_) => 1,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Input(m) | Failure::Numeric(m) => m,
        }
    }
}

impl From<GraphError> for Failure {
    fn from(e: GraphError) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<NumericsError> for Failure {
    fn from(e: NumericsError) -> Self {
        Failure::Numeric(e.to_string())
    }
}

impl From<PolyError> for Failure {
    fn from(e: PolyError) -> Self {
        match e {
            PolyError::Graph(g) => g.into(),
            PolyError::TooLarge { .. } => Failure::Input(e.to_string()),
            PolyError::DegreeMismatch { .. } => Failure::Numeric(e.to_string()),
        }
    }
}

impl From<TailError> for Failure {
    fn from(e: TailError) -> Self {
        match e {
            TailError::Graph(g) => g.into(),
            TailError::Poly(p) => p.into(),
            TailError::Numerics(n) => n.into(),
            TailError::InvalidZ(_) | TailError::InvalidIndex(..) | TailError::InsideBand(_) => {
                Failure::Input(e.to_string())
            }
        }
    }
}

impl From<FamilyError> for Failure {
    fn from(e: FamilyError) -> Self {
        match e {
            FamilyError::Numerics(n) => n.into(),
            FamilyError::Graph(_) | FamilyError::InvalidUniform { .. } | FamilyError::WrongFamily { .. } => {
                Failure::Input(e.to_string())
            }
        }
    }
}

impl From<OracleError> for Failure {
    fn from(e: OracleError) -> Self {
        match e {
            OracleError::Graph(g) => g.into(),
            OracleError::Numerics(n) => n.into(),
            OracleError::Tail(t) => t.into(),
            OracleError::IllConditioned(_) => Failure::Numeric(e.to_string()),
            OracleError::ZeroLength
            | OracleError::UnsortedLengths
            | OracleError::IndexOutOfRange { .. } => Failure::Input(e.to_string()),
        }
    }
}

/// Parses `argv` (including the program name), runs the command and writes
/// the report to `out` (or `--output`). Returns the process exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            let _ = if code == 0 {
                out.write_all(rendered.as_bytes())
            } else {
                err.write_all(rendered.as_bytes())
            };
            return code;
        }
    };
    match execute(&cli) {
        Ok(text) => {
            let written = match &cli.output {
                Some(path) => std::fs::write(path, &text),
                None => out.write_all(text.as_bytes()),
            };
            match written {
                Ok(()) => 0,
                Err(e) => {
                    let _ = writeln!(err, "error: cannot write report: {e}");
                    1
                }
            }
        }
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message());
            f.code()
        }
    }
}

fn execute(cli: &Cli) -> Result<String, Failure> {
    let opts = SolverOptions { root_tol: cli.tol };
    if !(cli.tol > 0.0 && cli.tol.is_finite()) {
        return Err(Failure::Input(format!("--tol must be positive, got {}", cli.tol)));
    }
    match &cli.command {
        Command::Charpoly(arg) => {
            let g = load_graph(&arg.graph)?;
            let p = charpoly(&g);
            match cli.format {
                Format::Json => Ok(render_json(&json!({
                    "n": g.n(),
                    "coefficients": p,
                    "polynomial": p.to_string(),
                }))),
                Format::Csv => {
                    let mut s = String::from("power,coefficient\n");
                    for (k, c) in p.coeffs().iter().enumerate() {
                        let _ = writeln!(s, "{k},{c}");
                    }
                    Ok(s)
                }
            }
        }
        Command::Spectrum(arg) => {
            let g = load_graph(&arg.graph)?;
            let report = full_spectrum_report_with(&g, &opts)?;
            match cli.format {
                Format::Json => Ok(render_json(&to_value(&report))),
                Format::Csv => Ok(eigenvalue_csv(&report.eigenvalues)),
            }
        }
        Command::Family(args) => {
            let family = if args.star { Family::Star } else { Family::Flower };
            let spec = FamilySpec::new(family, args.k.clone())?;
            let report = family_spectrum(&spec, cli.tol)?;
            match cli.format {
                Format::Json => Ok(render_json(&to_value(&report))),
                Format::Csv => Ok(eigenvalue_csv(&report.eigenvalues)),
            }
        }
        Command::Verify(args) => {
            let g = load_graph(&args.graph)?;
            let spectrum = full_spectrum_report_with(&g, &opts)?;
            let reports = convergence_study(&g, &args.lengths, args.margin)?;
            match cli.format {
                Format::Json => Ok(render_json(&json!({
                    "margin": args.margin,
                    "predicted": spectrum.lambdas(),
                    "truncations": reports,
                }))),
                Format::Csv => {
                    let mut s = String::from("L,predicted,computed,abs_error\n");
                    for r in &reports {
                        if !r.counts_match() {
                            let _ = writeln!(s, "{},,,", r.length);
                            continue;
                        }
                        for (p, c) in r.predicted.iter().zip(&r.outliers) {
                            let _ = writeln!(s, "{},{},{},{}", r.length, fmt17(*p), fmt17(*c), fmt17((p - c).abs()));
                        }
                    }
                    Ok(s)
                }
            }
        }
        Command::Green(args) => {
            let check = resolvent_check(args.z, args.i, args.j, args.length)?;
            match cli.format {
                Format::Json => Ok(render_json(&to_value(&check))),
                Format::Csv => Ok(format!(
                    "z,i,j,L,lambda,closed_form,numeric,residual\n{},{},{},{},{},{},{},{}\n",
                    fmt17(check.z),
                    check.i,
                    check.j,
                    check.length,
                    fmt17(check.lambda),
                    fmt17(check.exact),
                    fmt17(check.numeric),
                    fmt17(check.residual)
                )),
            }
        }
        Command::SchurDemo(args) => {
            let r = schur_identity_check(args.dim1, args.dim2, args.seed)?;
            match cli.format {
                Format::Json => Ok(render_json(&json!({
                    "dim1": args.dim1,
                    "dim2": args.dim2,
                    "seed": args.seed,
                    "residuals": r,
                }))),
                Format::Csv => {
                    let mut s = String::from("check,residual\n");
                    if let Value::Object(map) = to_value(&r) {
                        for (k, v) in map {
                            let _ = writeln!(s, "{k},{}", fmt17(v.as_f64().unwrap_or(f64::NAN)));
                        }
                    }
                    Ok(s)
                }
            }
        }
    }
}

fn load_graph(arg: &str) -> Result<Graph, Failure> {
    let text = if arg.trim_start().starts_with('{') {
        arg.to_owned()
    } else {
        std::fs::read_to_string(arg).map_err(|e| Failure::Input(format!("cannot read {arg}: {e}")))?
    };
    serde_json::from_str(&text).map_err(|e| Failure::Input(format!("malformed graph JSON: {e}")))
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports serialize to JSON")
}

fn eigenvalue_csv(eigs: &[crate::tail::DiscreteEigenvalue]) -> String {
    let mut s = String::from("lambda,x,side,residual\n");
    for e in eigs {
        let side = match e.side {
            crate::tail::Side::AboveBand => "above-band",
            crate::tail::Side::BelowBand => "below-band",
        };
        let _ = writeln!(s, "{},{},{side},{}", fmt17(e.lambda), fmt17(e.x), fmt17(e.residual));
    }
    s
}

/// Formats a float with 17 significant digits, positional when the decimal
/// exponent is in [−5, 16], scientific otherwise.
pub fn fmt17(v: f64) -> String {
    if !v.is_finite() {
        return "null".into();
    }
    if v == 0.0 {
        return "0.0".into();
    }
    let sci = format!("{:.16e}", v);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("integer exponent");
    let negative = mantissa.starts_with('-');
    let digits: String = mantissa.chars().filter(char::is_ascii_digit).collect();
    let sign = if negative { "-" } else { "" };
    if !(-5..=16).contains(&exp) {
        return format!("{mantissa}e{exp}");
    }
    if exp >= 0 {
        let split = exp as usize + 1;
        let (int, frac) = digits.split_at(split);
        let frac = if frac.is_empty() { "0" } else { frac };
        format!("{sign}{int}.{frac}")
    } else {
        format!("{sign}0.{}{digits}", "0".repeat((-exp - 1) as usize))
    }
}

/// Pretty JSON with every float printed by [`fmt17`].
pub fn render_json(v: &Value) -> String {
    let mut s = String::new();
    write_value(&mut s, v, 0);
    s.push('\n');
    s
}

fn write_value(s: &mut String, v: &Value, depth: usize) {
    let pad = |s: &mut String, d: usize| s.push_str(&"  ".repeat(d));
    match v {
        Value::Null => s.push_str("null"),
        Value::Bool(b) => s.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => {
            if n.is_f64() {
                s.push_str(&fmt17(n.as_f64().expect("f64 number")));
            } else {
                s.push_str(&n.to_string());
            }
        }
        Value::String(text) => s.push_str(&Value::String(text.clone()).to_string()),
        Value::Array(items) => {
            if items.is_empty() {
                s.push_str("[]");
                return;
            }
            // short scalar arrays stay on one line
            if items.len() <= 8 && items.iter().all(|i| !i.is_array() && !i.is_object()) {
                s.push('[');
                for (k, item) in items.iter().enumerate() {
                    if k > 0 {
                        s.push_str(", ");
                    }
                    write_value(s, item, depth + 1);
                }
                s.push(']');
                return;
            }
            s.push_str("[\n");
            for (k, item) in items.iter().enumerate() {
                pad(s, depth + 1);
                write_value(s, item, depth + 1);
                s.push_str(if k + 1 < items.len() { ",\n" } else { "\n" });
            }
            pad(s, depth);
            s.push(']');
        }
        Value::Object(map) => {
            if map.is_empty() {
                s.push_str("{}");
                return;
            }
            s.push_str("{\n");
            for (k, (key, item)) in map.iter().enumerate() {
                pad(s, depth + 1);
                s.push_str(&Value::String(key.clone()).to_string());
                s.push_str(": ");
                write_value(s, item, depth + 1);
                s.push_str(if k + 1 < map.len() { ",\n" } else { "\n" });
            }
            pad(s, depth);
            s.push('}');
        }
    }
}
