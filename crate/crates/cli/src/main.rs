//! `slalom` — constrained composite optimization from the command line.

use std::io::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use slalom::alm::AlmTraceRow;
use slalom::problems::{gen_portfolio, portfolio_to_string};
use slalom_cli::emit::{fmt_float, to_csv, CsvRecord, OutputFormat};
use slalom_cli::runners::{
    bench_matrix, bench_portfolio, bench_rosenbrock, MatrixBenchConfig, PortfolioBenchConfig,
    RosenbrockBenchConfig,
};
use slalom_cli::solve::{
    exit_code_for, solve_registered, MatrixRegChoice, PortfolioRegChoice, RegisteredProblem,
};
use slalom_cli::SolverSettings;

const EXIT_USAGE: i32 = 64;

#[derive(Parser)]
#[command(
    name = "slalom",
    version,
    about = "Matrix-free augmented Lagrangian solver for constrained composite optimization",
    disable_help_subcommand = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one registered problem and emit a report.
    Solve(SolveArgs),
    /// Grid sweep on the nonsmooth Rosenbrock problem with either-or constraints.
    BenchRosenbrock(BenchRosenbrockArgs),
    /// Sparse portfolio continuation sweep over seeded instances.
    BenchPortfolio(BenchPortfolioArgs),
    /// Low-rank matrix completion sweep over seeded instances.
    BenchMatrix(BenchMatrixArgs),
    /// Generate a portfolio instance file.
    GenInstance(GenInstanceArgs),
}

#[derive(Args, Clone)]
struct CommonOpts {
    /// Primal feasibility tolerance.
    #[arg(long = "tol-prim", default_value_t = 1e-6)]
    tol_prim: f64,
    /// Dual (inner stationarity) tolerance.
    #[arg(long = "tol-dual", default_value_t = 1e-6)]
    tol_dual: f64,
    /// Outer iteration cap.
    #[arg(long = "max-outer", default_value_t = 100)]
    max_outer: usize,
    /// Disable L-BFGS acceleration in the inner solver.
    #[arg(long = "no-accel", default_value_t = false)]
    no_accel: bool,
    /// L-BFGS memory.
    #[arg(long = "lbfgs-mem", default_value_t = 5)]
    lbfgs_mem: usize,
    /// Inner iteration cap per subproblem.
    #[arg(long = "inner-cap")]
    inner_cap: Option<usize>,
    /// Output path (stdout when omitted).
    #[arg(long = "out")]
    out: Option<PathBuf>,
    /// Output format: csv or json.
    #[arg(long = "format")]
    format: Option<OutputFormat>,
    /// Worker threads for sweeps (defaults to the available parallelism, capped at 8).
    #[arg(long = "threads")]
    threads: Option<usize>,
}

impl CommonOpts {
    fn settings(&self, default_inner_cap: usize) -> SolverSettings {
        SolverSettings {
            tol_prim: self.tol_prim,
            tol_dual: self.tol_dual,
            max_outer: self.max_outer,
            no_accel: self.no_accel,
            lbfgs_mem: self.lbfgs_mem,
            inner_cap: self.inner_cap.unwrap_or(default_inner_cap),
        }
    }

    fn threads(&self) -> usize {
        self.threads.unwrap_or_else(slalom_cli::default_threads)
    }
}

#[derive(Args)]
struct SolveArgs {
    /// Problem name: rosenbrock | portfolio | matrix.
    problem: String,
    /// Starting point for rosenbrock, e.g. `--x0 -5,5`.
    #[arg(long = "x0", allow_hyphen_values = true)]
    x0: Option<String>,
    /// Portfolio instance file.
    #[arg(long = "file")]
    file: Option<PathBuf>,
    /// Regularizer: l0 | l1 | lp (portfolio), rank | nuclear | schatten (matrix).
    #[arg(long = "reg")]
    reg: Option<String>,
    /// Instance seed (matrix).
    #[arg(long = "seed", default_value_t = 1)]
    seed: u64,
    /// Matrix dimension N.
    #[arg(long = "N", default_value_t = 10)]
    n_points: usize,
    /// Latent dimension for matrix instances.
    #[arg(long = "ell", default_value_t = 5)]
    ell: usize,
    /// Exponent for lp/schatten regularizers.
    #[arg(long = "p", default_value_t = 0.5)]
    p: f64,
    /// Write per-inner-iteration trace rows (CSV) to this path.
    #[arg(long = "trace-inner")]
    trace_inner: Option<PathBuf>,
    #[command(flatten)]
    common: CommonOpts,
}

#[derive(Args)]
struct BenchRosenbrockArgs {
    /// Run the unaccelerated mode on the full 11×11 grid.
    #[arg(long = "full-noaccel", default_value_t = false)]
    full_noaccel: bool,
    #[command(flatten)]
    common: CommonOpts,
}

#[derive(Args)]
struct BenchPortfolioArgs {
    /// Single seed.
    #[arg(long = "seed")]
    seed: Option<u64>,
    /// Comma-separated seed list (overrides --seed).
    #[arg(long = "seeds")]
    seeds: Option<String>,
    /// Assets per instance.
    #[arg(long = "n", default_value_t = 50)]
    n: usize,
    /// Sparsity weight α.
    #[arg(long = "alpha", default_value_t = 1e-3)]
    alpha: f64,
    /// Exponent of the ℓp continuation stage.
    #[arg(long = "p", default_value_t = 0.5)]
    p: f64,
    #[command(flatten)]
    common: CommonOpts,
}

#[derive(Args)]
struct BenchMatrixArgs {
    #[arg(long = "seed")]
    seed: Option<u64>,
    #[arg(long = "seeds")]
    seeds: Option<String>,
    /// Matrix dimension N.
    #[arg(long = "N", default_value_t = 10)]
    n_points: usize,
    /// Latent dimension of the generating points.
    #[arg(long = "ell", default_value_t = 5)]
    ell: usize,
    /// Schatten exponent.
    #[arg(long = "p", default_value_t = 0.5)]
    p: f64,
    #[command(flatten)]
    common: CommonOpts,
}

#[derive(Args)]
struct GenInstanceArgs {
    #[arg(long = "seed", default_value_t = 1)]
    seed: u64,
    #[arg(long = "n", default_value_t = 50)]
    n: usize,
    #[arg(long = "alpha", default_value_t = 1e-3)]
    alpha: f64,
    #[arg(long = "out")]
    out: Option<PathBuf>,
}

struct TraceCsv(AlmTraceRow);

impl CsvRecord for TraceCsv {
    fn csv_header() -> &'static str {
        "k,infeas,eps_k,mu_min,inner_iterations,q"
    }
    fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{}",
            self.0.k,
            fmt_float(self.0.infeas),
            fmt_float(self.0.eps_k),
            fmt_float(self.0.mu_min),
            self.0.inner_iterations,
            fmt_float(self.0.q)
        )
    }
}

fn parse_seed_list(seed: Option<u64>, seeds: &Option<String>) -> Result<Option<Vec<u64>>, String> {
    if let Some(list) = seeds {
        let parsed: Result<Vec<u64>, _> = list.split(',').map(|t| t.trim().parse()).collect();
        return parsed
            .map(Some)
            .map_err(|e| format!("invalid --seeds list: {e}"));
    }
    Ok(seed.map(|s| vec![s]))
}

fn write_output(out: &Option<PathBuf>, content: &str) -> Result<(), String> {
    match out {
        Some(path) => std::fs::write(path, content).map_err(|e| format!("{}: {e}", path.display())),
        None => std::io::stdout()
            .write_all(content.as_bytes())
            .map_err(|e| e.to_string()),
    }
}

fn run_solve(args: &SolveArgs) -> Result<i32, String> {
    let problem = match args.problem.as_str() {
        "rosenbrock" => {
            let x0 = match &args.x0 {
                Some(text) => {
                    let parts: Result<Vec<f64>, _> =
                        text.split(',').map(|t| t.trim().parse()).collect();
                    let parts = parts.map_err(|e| format!("invalid --x0: {e}"))?;
                    if parts.len() != 2 {
                        return Err("--x0 expects two comma-separated numbers".into());
                    }
                    [parts[0], parts[1]]
                }
                None => [0.0, 0.0],
            };
            RegisteredProblem::Rosenbrock { x0 }
        }
        "portfolio" => {
            let file = args
                .file
                .clone()
                .ok_or("portfolio needs --file <instance>")?;
            let reg = match args.reg.as_deref().unwrap_or("l0") {
                "l0" => PortfolioRegChoice::L0,
                "l1" => PortfolioRegChoice::L1,
                "lp" => PortfolioRegChoice::Lp,
                other => return Err(format!("unknown portfolio regularizer `{other}`")),
            };
            RegisteredProblem::Portfolio {
                file,
                reg,
                p: args.p,
            }
        }
        "matrix" => {
            let reg = match args.reg.as_deref().unwrap_or("nuclear") {
                "rank" => MatrixRegChoice::Rank,
                "nuclear" => MatrixRegChoice::Nuclear,
                "schatten" => MatrixRegChoice::Schatten,
                other => return Err(format!("unknown matrix regularizer `{other}`")),
            };
            RegisteredProblem::Matrix {
                seed: args.seed,
                n_points: args.n_points,
                ell: args.ell,
                reg,
                p: args.p,
            }
        }
        other => {
            return Err(format!(
                "unknown problem `{other}` (registry: rosenbrock, portfolio, matrix)"
            ))
        }
    };

    let settings = args.common.settings(match problem {
        RegisteredProblem::Matrix { .. } => 200_000,
        _ => SolverSettings::default().inner_cap,
    });
    let mut inner_rows: Vec<(usize, slalom::panoc::PanocTraceRow)> = Vec::new();
    let output = if args.trace_inner.is_some() {
        let mut sink = |outer: usize, row: &slalom::panoc::PanocTraceRow| {
            inner_rows.push((outer, *row));
        };
        solve_registered(&problem, &settings, Some(&mut sink))?
    } else {
        solve_registered(&problem, &settings, None)?
    };
    if let Some(path) = &args.trace_inner {
        let mut csv = String::from("outer_k,k,gamma,tau,fbe,residual\n");
        for (outer, row) in &inner_rows {
            csv.push_str(&format!(
                "{},{},{},{},{},{}\n",
                outer,
                row.k,
                fmt_float(row.gamma),
                fmt_float(row.tau),
                fmt_float(row.fbe),
                fmt_float(row.residual)
            ));
        }
        std::fs::write(path, csv).map_err(|e| format!("{}: {e}", path.display()))?;
    }
    let format = args.common.format.unwrap_or(OutputFormat::Json);
    let rendered = match format {
        OutputFormat::Json => {
            let mut s = serde_json::to_string_pretty(&output).map_err(|e| e.to_string())?;
            s.push('\n');
            s
        }
        OutputFormat::Csv => {
            let rows: Vec<TraceCsv> = output.report.trace.iter().map(|r| TraceCsv(*r)).collect();
            to_csv(&rows)
        }
    };
    write_output(&args.common.out, &rendered)?;
    Ok(exit_code_for(output.report.status))
}

fn run_bench_rosenbrock(args: &BenchRosenbrockArgs) -> Result<i32, String> {
    let cfg = RosenbrockBenchConfig {
        settings: args.common.settings(SolverSettings::default().inner_cap),
        full_noaccel: args.full_noaccel,
        noaccel_grid: 3,
        threads: args.common.threads(),
    };
    let rows = bench_rosenbrock(&cfg);
    emit_rows(&rows, &args.common)
}

fn run_bench_portfolio(args: &BenchPortfolioArgs) -> Result<i32, String> {
    let mut cfg = PortfolioBenchConfig {
        settings: args.common.settings(SolverSettings::default().inner_cap),
        n: args.n,
        alpha: args.alpha,
        p: args.p,
        threads: args.common.threads(),
        ..Default::default()
    };
    if let Some(seeds) = parse_seed_list(args.seed, &args.seeds)? {
        cfg.seeds = seeds;
    }
    let rows = bench_portfolio(&cfg);
    emit_rows(&rows, &args.common)
}

fn run_bench_matrix(args: &BenchMatrixArgs) -> Result<i32, String> {
    let mut cfg = MatrixBenchConfig {
        n_points: args.n_points,
        ell: args.ell,
        p: args.p,
        threads: args.common.threads(),
        ..Default::default()
    };
    cfg.settings = args.common.settings(cfg.settings.inner_cap);
    if let Some(seeds) = parse_seed_list(args.seed, &args.seeds)? {
        cfg.seeds = seeds;
    }
    let rows = bench_matrix(&cfg);
    emit_rows(&rows, &args.common)
}

fn emit_rows<R: CsvRecord + serde::Serialize>(
    rows: &[R],
    common: &CommonOpts,
) -> Result<i32, String> {
    let format = common.format.unwrap_or(OutputFormat::Csv);
    let rendered = match format {
        OutputFormat::Csv => to_csv(rows),
        OutputFormat::Json => {
            let mut s = serde_json::to_string_pretty(rows).map_err(|e| e.to_string())?;
            s.push('\n');
            s
        }
    };
    write_output(&common.out, &rendered)?;
    Ok(0)
}

fn run_gen_instance(args: &GenInstanceArgs) -> Result<i32, String> {
    if args.n < 2 {
        return Err("--n must be at least 2".into());
    }
    let inst = gen_portfolio(args.seed, args.n, args.alpha);
    write_output(&args.out, &portfolio_to_string(&inst))?;
    Ok(0)
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // help/version requests are not usage errors
            use clap::error::ErrorKind;
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => EXIT_USAGE,
            };
            let _ = err.print();
            std::process::exit(code);
        }
    };
    let outcome = match &cli.command {
        Command::Solve(args) => run_solve(args),
        Command::BenchRosenbrock(args) => run_bench_rosenbrock(args),
        Command::BenchPortfolio(args) => run_bench_portfolio(args),
        Command::BenchMatrix(args) => run_bench_matrix(args),
        Command::GenInstance(args) => run_gen_instance(args),
    };
    match outcome {
        Ok(code) => std::process::exit(code),
        Err(message) => {
            eprintln!("error: {message}");
            std::process::exit(EXIT_USAGE);
        }
    }
}
