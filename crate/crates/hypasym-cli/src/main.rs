//! `hypasym` command-line front end.
//!
//! Exit status: 0 on success, 1 for usage and parse errors, 2 for domain or
//! numerical failures.
//!
//! `classify` prints a rewrite tree as JSON:
//!
//! ```text
//! {"root":[e1,e2,e3],"case":"A",
//!  "nodes":[{"id":0,"dir":[..]},..],
//!  "steps":[{"rule":"conn-1mz","node":0,"children":[1,2],"derivation":[..]}],
//!  "leaves":[{"node":1,"case":"A"},..],
//!  "residual":1e-15}            // only with --certify
//! ```

mod compare;

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hypasym::f32lab;
use hypasym::jacobi::{self, Curve, Figure};
use hypasym::reducer::{certify_chain, classify};
use hypasym::reference::{eval_2f1, eval_2f1_with, Method, Params};
use hypasym::scalar::{parse_complex, parse_rational, Rational, C64};
use serde_json::json;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Domain(String),
}

impl From<hypasym::Error> for CliError {
    fn from(e: hypasym::Error) -> Self {
        match e {
            hypasym::Error::Parse(m) => CliError::Usage(m),
            other => CliError::Domain(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Domain(e.to_string())
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Parser)]
#[command(name = "hypasym", version, about = "Gauss hypergeometric functions with large parameters")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate 2F1(a, b; c; z)
    Eval(EvalArgs),
    /// Reduce a large-parameter direction to its canonical case
    Classify(ClassifyArgs),
    /// Tabulate an asymptotic expansion against the reference evaluator
    Compare(compare::CompareArgs),
    /// Zeros of a Jacobi polynomial
    Jacobi(JacobiArgs),
    /// 3F2 studies
    F32 {
        #[command(subcommand)]
        study: F32Study,
    },
}

#[derive(Args)]
struct EvalArgs {
    #[arg(long, allow_hyphen_values = true)]
    a: String,
    #[arg(long, allow_hyphen_values = true)]
    b: String,
    #[arg(long, allow_hyphen_values = true)]
    c: String,
    #[arg(long, allow_hyphen_values = true)]
    z: String,
    /// Force one evaluation route (direct-series, pfaff, euler, connection-1mz, ...)
    #[arg(long)]
    method: Option<String>,
}

#[derive(Args)]
struct ClassifyArgs {
    /// Direction e1,e2,e3 with entries in {-1, 0, 1}
    #[arg(long, allow_hyphen_values = true)]
    dir: String,
    /// Check the tree numerically at a + lambda e1, b + lambda e2, c + lambda e3
    #[arg(long)]
    certify: bool,
    #[arg(long, allow_hyphen_values = true, default_value = "0.21+0.1i")]
    a: String,
    #[arg(long, allow_hyphen_values = true, default_value = "0.37")]
    b: String,
    #[arg(long, allow_hyphen_values = true, default_value = "1.63+0.05i")]
    c: String,
    #[arg(long, allow_hyphen_values = true, default_value = "0.3+0.4i")]
    z: String,
    #[arg(long, default_value_t = 5.0)]
    lambda: f64,
}

#[derive(Args)]
struct JacobiArgs {
    /// Preset configuration 1, 2 or 4
    #[arg(long, conflicts_with_all = ["alpha", "beta"])]
    figure: Option<u32>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, allow_hyphen_values = true, requires = "beta")]
    alpha: Option<String>,
    #[arg(long, allow_hyphen_values = true, requires = "alpha")]
    beta: Option<String>,
    /// Reference curve for the distance column (fig2-curve, fig4-curve, imaginary-axis, none)
    #[arg(long)]
    curve: Option<String>,
    #[arg(long, default_value_t = jacobi::DEFAULT_SEED)]
    seed: u64,
    /// Output directory
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

#[derive(Subcommand)]
enum F32Study {
    /// Exact f(n) and the coefficients c_n
    Larcombe {
        #[arg(long)]
        n_max: usize,
        /// Output file; standard output when absent
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// P(n), Q(n) and the identity residual over a grid
    Vidunas {
        /// Comma-separated integers
        #[arg(long, allow_hyphen_values = true)]
        n: String,
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        b: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// Splits a comma-separated grid, rejecting an empty one.
pub fn grid<T>(name: &str, s: &str, parse: impl Fn(&str) -> CliResult<T>) -> CliResult<Vec<T>> {
    let items: Vec<&str> = s.split(',').map(str::trim).filter(|t| !t.is_empty()).collect();
    if items.is_empty() {
        return Err(CliError::Usage(format!("grid --{name} is empty")));
    }
    items.into_iter().map(parse).collect()
}

pub fn complex_arg(s: &str) -> CliResult<C64> {
    Ok(parse_complex(s)?)
}

fn rational_arg(s: &str) -> CliResult<Rational> {
    Ok(parse_rational(s)?)
}

pub fn emit(out: Option<&PathBuf>, text: &str) -> CliResult<()> {
    match out {
        Some(path) => fs::write(path, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn cmd_eval(args: &EvalArgs) -> CliResult<()> {
    let p = Params::new(complex_arg(&args.a)?, complex_arg(&args.b)?, complex_arg(&args.c)?);
    let z = complex_arg(&args.z)?;
    let r = match &args.method {
        None => eval_2f1(&p, z)?,
        Some(tag) => {
            let m = Method::from_tag(tag).ok_or_else(|| CliError::Usage(format!("unknown method '{tag}'")))?;
            eval_2f1_with(&p, z, m)?
        }
    };
    let mut out = json!({
        "value": {"re": r.value.re, "im": r.value.im},
        "abs_error_estimate": r.abs_error_estimate,
        "terms_used": r.terms_used,
        "method": r.method.tag(),
    });
    if let Some(w) = r.warning {
        out["warning"] = json!(w);
    }
    println!("{out}");
    Ok(())
}

fn parse_direction(s: &str) -> CliResult<[i32; 3]> {
    let parts: Vec<i32> = s
        .split(',')
        .map(|t| t.trim().parse::<i32>().map_err(|_| CliError::Usage(format!("bad direction entry '{t}'"))))
        .collect::<CliResult<_>>()?;
    let d: [i32; 3] = parts.try_into().map_err(|_| CliError::Usage("direction needs three entries".into()))?;
    if d.iter().any(|e| e.abs() > 1) {
        return Err(CliError::Usage("direction entries must be -1, 0 or 1".into()));
    }
    if d == [0, 0, 0] {
        return Err(CliError::Usage("direction (0,0,0) has no large parameter".into()));
    }
    Ok(d)
}

fn cmd_classify(args: &ClassifyArgs) -> CliResult<()> {
    let d = parse_direction(&args.dir)?;
    let (case, chain) = classify(d)?;
    let mut out = json!({
        "root": chain.root,
        "case": case,
        "nodes": chain.nodes,
        "steps": chain.steps,
        "leaves": chain.leaves,
    });
    if args.certify {
        let p = Params::new(complex_arg(&args.a)?, complex_arg(&args.b)?, complex_arg(&args.c)?);
        let z = complex_arg(&args.z)?;
        out["residual"] = json!(certify_chain(&chain, &p, z, args.lambda)?);
        let shifted_b = p.b + args.lambda * d[1] as f64;
        let shifted_c = p.c + args.lambda * d[2] as f64;
        if (shifted_c - 2.0 * shifted_b).norm() < 1e-12 {
            out["advisory"] = json!("quadratic: c = 2b, a quadratic transformation also applies");
        }
    }
    println!("{out}");
    Ok(())
}

fn cmd_jacobi(args: &JacobiArgs) -> CliResult<()> {
    let (n, alpha, beta, default_curve) = match (args.figure, &args.alpha, &args.beta) {
        (Some(k), _, _) => {
            let fig = Figure::from_number(k)?;
            let n = args.n.unwrap_or(fig.default_degree());
            let (a, b) = fig.parameters(n);
            (n, a, b, fig.curve())
        }
        (None, Some(a), Some(b)) => {
            let n = args.n.ok_or_else(|| CliError::Usage("--n is required with --alpha/--beta".into()))?;
            let (a, b) = (rational_arg(a)?, rational_arg(b)?);
            let curve = [Figure::Two, Figure::Four]
                .into_iter()
                .find(|f| f.parameters(n) == (a.clone(), b.clone()))
                .map_or(Curve::None, Figure::curve);
            (n, a, b, curve)
        }
        _ => return Err(CliError::Usage("give --figure or --n, --alpha and --beta".into())),
    };
    let curve = match &args.curve {
        Some(tag) => Curve::from_tag(tag)?,
        None => default_curve,
    };
    let zeros = jacobi::jacobi_zeros(n, &alpha, &beta, curve, args.seed)?;
    fs::create_dir_all(&args.out)?;
    let path = args.out.join(jacobi::dataset_file_name(n, &alpha, &beta));
    fs::write(&path, jacobi::dataset_csv(&zeros))?;
    let max_distance = zeros.curve_distances.as_ref().map(|d| d.iter().copied().fold(0.0, f64::max));
    let max_residual = zeros.residuals.iter().copied().fold(0.0, f64::max);
    println!(
        "{}",
        json!({
            "file": path.display().to_string(),
            "roots": zeros.roots.len(),
            "converged": zeros.converged,
            "iterations": zeros.iterations,
            "curve": curve.tag(),
            "max_curve_distance": max_distance,
            "max_residual": max_residual,
        })
    );
    if !zeros.converged {
        return Err(CliError::Domain("root finder did not converge".into()));
    }
    Ok(())
}

fn cmd_f32(study: &F32Study) -> CliResult<()> {
    match study {
        F32Study::Larcombe { n_max, out } => {
            let records = f32lab::larcombe_records(*n_max);
            emit(out.as_ref(), &f32lab::larcombe_csv(&records))
        }
        F32Study::Vidunas { n, a, b, out } => {
            let ns = grid("n", n, |t| t.parse::<i64>().map_err(|_| CliError::Usage(format!("bad integer '{t}'"))))?;
            let a_s = grid("a", a, complex_arg)?;
            let b_s = grid("b", b, complex_arg)?;
            let mut records = Vec::new();
            for &a in &a_s {
                for &b in &b_s {
                    for &n in &ns {
                        records.push(f32lab::vidunas_record(n, a, b)?);
                    }
                }
            }
            emit(out.as_ref(), &f32lab::vidunas_csv(&records))
        }
    }
}

fn run(cli: Cli) -> CliResult<()> {
    match &cli.command {
        Command::Eval(a) => cmd_eval(a),
        Command::Classify(a) => cmd_classify(a),
        Command::Compare(a) => compare::cmd_compare(a),
        Command::Jacobi(a) => cmd_jacobi(a),
        Command::F32 { study } => cmd_f32(study),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(CliError::Domain(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
    }
}
