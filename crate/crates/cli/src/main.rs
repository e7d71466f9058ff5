//! `linkop`: evaluate linking operators and their kernels on grids, run the
//! verification suites and emit CSV or JSON.
//!
//! Exit status is 0 on success, 1 when a verification check fails and 2 on
//! usage or parameter errors.

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use linkop_core::kernels::{bspline_n, KernelK};
use linkop_core::operators::{
    genuine_durrmeyer, kantorovich_limit, kantorovich_oracle, kantorovich_rep, linking_op, lookup, LimitForm,
};
use linkop_core::verify::{conjecture_sweep, verify_all, Suite, VerifyProfile};
use linkop_core::{Error, Grid, OpConfig, ShapeParams};

mod config;
mod output;

use output::{emit, Cell, Format, Table};

#[derive(Debug, Parser)]
#[command(name = "linkop", version, about = "Linking operators B_{n,rho} and their Kantorovich modifications")]
pub struct Cli {
    /// Flat key=value file of flag defaults; flags on the command line win
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<String>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate an operator on a grid of x values: columns x, value
    Eval(EvalArgs),
    /// Scaled kernel K/rho^(k-1) next to the B-spline N: columns t, K_scaled, N_spline
    Kernel(KernelArgs),
    /// Evaluate the B-spline N_{n,k,j}: columns t, N
    Bspline(BsplineArgs),
    /// Kernel-to-spline distances for a list of rho: columns rho, sup_dist, l1_dist
    Sweep(SweepArgs),
    /// Run the verification suites
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
struct ShapeArgs {
    /// Shape parameter c >= 0 (0: Szasz-Mirakjan type, 1: Baskakov)
    #[arg(long)]
    c: f64,
    /// Degree parameter n > c
    #[arg(long)]
    n: f64,
}

#[derive(Debug, Args)]
struct OutputArgs {
    /// Output path, `-` for standard output
    #[arg(long, default_value = "-")]
    out: String,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Operator {
    /// B_{n,rho} and its Kantorovich modifications
    Linking,
    /// The genuine Durrmeyer operator B_{n,1}
    Durrmeyer,
    /// The classical operator B_{n,inf} and its Kantorovich modifications
    #[value(alias = "classic")]
    Limit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormArg {
    Difference,
    Bspline,
}

#[derive(Debug, Args)]
#[command(args_override_self = true)]
struct EvalArgs {
    #[command(flatten)]
    shape: ShapeArgs,
    /// Link parameter rho > 0; natural for k >= 1 unless --oracle
    #[arg(long)]
    rho: Option<f64>,
    /// Kantorovich order
    #[arg(long, default_value_t = 0)]
    k: usize,
    /// Catalog function, e.g. e2, bounded_smooth, indicator:0.5:1.5
    #[arg(long)]
    f: String,
    /// Grid a:b:step
    #[arg(long, value_parser = parse_grid)]
    grid: Grid,
    /// Evaluate D^k B I_k by quadrature and finite differences (k <= 4)
    #[arg(long)]
    oracle: bool,
    #[arg(long, value_enum, default_value = "linking")]
    operator: Operator,
    /// Form of the limit operator
    #[arg(long, value_enum, default_value = "difference")]
    form: FormArg,
    /// Quadrature tolerance (absolute and relative)
    #[arg(long)]
    tol: Option<f64>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
#[command(args_override_self = true)]
struct KernelArgs {
    #[command(flatten)]
    shape: ShapeArgs,
    /// Link parameter, a natural number
    #[arg(long)]
    rho: f64,
    #[arg(long, default_value_t = 1)]
    k: usize,
    #[arg(long)]
    j: u64,
    #[arg(long, value_parser = parse_grid)]
    grid: Grid,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
#[command(args_override_self = true)]
struct BsplineArgs {
    #[arg(long)]
    n: f64,
    #[arg(long, default_value_t = 1)]
    k: usize,
    #[arg(long)]
    j: i64,
    #[arg(long, value_parser = parse_grid)]
    grid: Grid,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
#[command(args_override_self = true)]
struct SweepArgs {
    #[command(flatten)]
    shape: ShapeArgs,
    /// Ascending comma-separated natural numbers
    #[arg(long, value_delimiter = ',', required = true)]
    rho: Vec<u32>,
    #[arg(long, default_value_t = 1)]
    k: usize,
    #[arg(long)]
    j: u64,
    #[arg(long, value_parser = parse_grid, default_value = "0:1:0.001953125")]
    grid: Grid,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
#[command(args_override_self = true)]
struct VerifyArgs {
    /// Comma-separated suites to run (default: all)
    #[arg(long, value_delimiter = ',', value_parser = parse_suite)]
    suite: Vec<Suite>,
    /// Replace every check's threshold
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long, default_value = "-")]
    out: String,
    /// Machine-readable report table instead of the text summary
    #[arg(long, value_enum)]
    format: Option<Format>,
}

fn parse_grid(s: &str) -> Result<Grid, Error> {
    s.parse()
}

fn parse_suite(s: &str) -> Result<Suite, Error> {
    s.parse()
}

#[derive(Debug)]
enum Failure {
    /// Exit status 2.
    Usage(String),
    /// Exit status 1.
    Verification,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Usage(format!("output: {e}"))
    }
}

fn shape(a: &ShapeArgs) -> Result<ShapeParams, Error> {
    let sp = ShapeParams::new(a.c, a.n)?;
    if sp.non_integer_n() {
        log::warn!("n = {} is outside the stated hypotheses (non-integer); evaluating anyway", sp.n());
    }
    Ok(sp)
}

fn write_table(table: &Table, out: &OutputArgs) -> Result<(), Failure> {
    emit(&out.out, &table.render(out.format)?)?;
    Ok(())
}

fn cmd_eval(a: &EvalArgs) -> Result<(), Failure> {
    let sp = shape(&a.shape)?;
    let f = lookup(&a.f)?;
    let rho = match (a.operator, a.rho) {
        (Operator::Linking, None) => return Err(Error::Parameter { constraint: "--rho for the linking operator".into() }.into()),
        (_, rho) => rho.unwrap_or(1.0),
    };
    let mut cfg = OpConfig::new(rho, a.k)?;
    if let Some(tol) = a.tol {
        cfg.quad = cfg.quad.with_tol(tol);
        cfg.validate()?;
    }
    if a.operator == Operator::Durrmeyer && a.k != 0 {
        return Err(Error::Parameter {
            constraint: "k = 0 for the genuine Durrmeyer operator".into(),
        }
        .into());
    }
    let form = match a.form {
        FormArg::Difference => LimitForm::Difference,
        FormArg::Bspline => LimitForm::BSpline,
    };
    let eval = |x: f64| match a.operator {
        Operator::Linking if a.oracle => kantorovich_oracle(&sp, &cfg, &f, x),
        Operator::Linking if a.k == 0 => linking_op(&sp, &f, x, &cfg),
        Operator::Linking => kantorovich_rep(&sp, &cfg, &f, x),
        Operator::Durrmeyer => genuine_durrmeyer(&sp, &f, x, &cfg),
        Operator::Limit => kantorovich_limit(&sp, a.k, &f, x, &cfg.series, &cfg.quad, form),
    };
    let xs: Vec<f64> = a.grid.points().collect();
    // Fail fast on parameter errors before fanning out.
    eval(xs[0])?;
    let values = xs.par_iter().map(|&x| eval(x)).collect::<Result<Vec<f64>, Error>>()?;
    let mut table = Table::new(vec!["x", "value"]);
    for (x, v) in xs.into_iter().zip(values) {
        table.push(vec![Cell::Float(x), Cell::Float(v)]);
    }
    write_table(&table, &a.output)
}

fn cmd_kernel(a: &KernelArgs) -> Result<(), Failure> {
    let sp = shape(&a.shape)?;
    let cfg = OpConfig::new(a.rho, a.k)?;
    let kernel = KernelK::new(&sp, cfg.rho_natural()?, a.k)?;
    let mut table = Table::new(vec!["t", "K_scaled", "N_spline"]);
    for t in a.grid.points() {
        table.push(vec![
            Cell::Float(t),
            Cell::Float(kernel.eval_scaled(a.j, t)),
            Cell::Float(bspline_n(sp.n(), a.k, a.j as i64, t)),
        ]);
    }
    write_table(&table, &a.output)
}

fn cmd_bspline(a: &BsplineArgs) -> Result<(), Failure> {
    if !(a.n > 0.0) || a.k == 0 {
        return Err(Error::Parameter {
            constraint: "n > 0 and k >= 1 for the B-spline".into(),
        }
        .into());
    }
    let mut table = Table::new(vec!["t", "N"]);
    for t in a.grid.points() {
        table.push(vec![Cell::Float(t), Cell::Float(bspline_n(a.n, a.k, a.j, t))]);
    }
    write_table(&table, &a.output)
}

fn cmd_sweep(a: &SweepArgs) -> Result<(), Failure> {
    let sp = shape(&a.shape)?;
    let rows = conjecture_sweep(&sp, a.k, a.j, &a.rho, &a.grid)?;
    let mut table = Table::new(vec!["rho", "sup_dist", "l1_dist"]);
    for r in rows {
        table.push(vec![Cell::Int(r.rho as u64), Cell::Float(r.sup_dist), Cell::Float(r.l1_dist)]);
    }
    write_table(&table, &a.output)
}

fn cmd_verify(a: &VerifyArgs) -> Result<(), Failure> {
    if let Some(tol) = a.tol {
        if !(tol >= 0.0) {
            return Err(Failure::Usage(format!("parameter error: requires tol >= 0 (got {tol})")));
        }
    }
    let profile = VerifyProfile {
        tol: a.tol,
        suites: a.suite.clone(),
        ..VerifyProfile::default()
    };
    let summary = verify_all(&profile);
    let bytes = match a.format {
        None => format!("{summary}\n").into_bytes(),
        Some(format) => {
            let mut table = Table::new(vec!["check_name", "params", "grid", "max_abs_err", "threshold", "passed", "notes"]);
            for r in &summary.reports {
                table.push(vec![
                    Cell::Text(r.check_name.clone()),
                    Cell::Text(r.params.clone()),
                    Cell::Text(r.grid.clone()),
                    Cell::Float(r.max_abs_err),
                    Cell::Float(r.threshold),
                    Cell::Bool(r.passed),
                    Cell::Text(r.notes.clone()),
                ]);
            }
            table.render(format)?
        }
    };
    emit(&a.out, &bytes)?;
    for w in &summary.warnings {
        log::warn!("{w}");
    }
    if summary.passed() {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let args = match config::expand(std::env::args().collect()) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let result = match &cli.command {
        Command::Eval(a) => cmd_eval(a),
        Command::Kernel(a) => cmd_kernel(a),
        Command::Bspline(a) => cmd_bspline(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Verify(a) => cmd_verify(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
