//! Benchmark sweep runners.

use serde::Serialize;

use slalom::alm::{alm_solve, AlmReport, AlmStatus};
use slalom::mat::Mat;
use slalom::panoc::Acceleration;
use slalom::problems::{
    gen_matrix_completion, gen_portfolio, matrix_completion_problem, portfolio_problem,
    rosenbrock_problem, MatrixReg, PortfolioReg,
};
use slalom::rng::SplitMix64;
use slalom::smallalg::{numerical_rank, svd_dense};
use slalom::vecmath::norm;

use crate::emit::{fmt_float, CsvRecord};
use crate::{parallel_map, SolverSettings};

fn status_str(status: AlmStatus) -> &'static str {
    match status {
        AlmStatus::Solved => "solved",
        AlmStatus::MaxOuter => "max_outer",
        AlmStatus::InfeasibleSuspect => "infeasible_suspect",
        AlmStatus::InnerFailure => "inner_failure",
    }
}

// ---------------------------------------------------------------------------
// Rosenbrock sweep
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct RosenbrockBenchConfig {
    pub settings: SolverSettings,
    /// Run the unaccelerated mode on the full 11×11 grid instead of the
    /// default sub-grid.
    pub full_noaccel: bool,
    /// Side length of the unaccelerated sub-grid (points drawn evenly from
    /// the 11-point axis).
    pub noaccel_grid: usize,
    pub threads: usize,
}

impl Default for RosenbrockBenchConfig {
    fn default() -> Self {
        RosenbrockBenchConfig {
            settings: SolverSettings::default(),
            full_noaccel: false,
            noaccel_grid: 3,
            threads: crate::default_threads(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RosenbrockRow {
    pub ix: usize,
    pub iy: usize,
    pub x0: [f64; 2],
    /// `lbfgs` or `none`.
    pub mode: &'static str,
    pub status: &'static str,
    pub x: [f64; 2],
    /// Euclidean distance to the global minimizer (0, 0).
    pub dist_to_origin: f64,
    pub outer_iterations: usize,
    pub inner_iterations: usize,
}

impl CsvRecord for RosenbrockRow {
    fn csv_header() -> &'static str {
        "ix,iy,x0_1,x0_2,mode,status,x1,x2,dist_to_origin,outer_iterations,inner_iterations"
    }
    fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{}",
            self.ix,
            self.iy,
            fmt_float(self.x0[0]),
            fmt_float(self.x0[1]),
            self.mode,
            self.status,
            fmt_float(self.x[0]),
            fmt_float(self.x[1]),
            fmt_float(self.dist_to_origin),
            self.outer_iterations,
            self.inner_iterations
        )
    }
}

/// Uniform 11×11 grid sweep on `[−5, 5]²` with LBFGS acceleration, plus the
/// unaccelerated mode on a sub-grid (the full grid behind `full_noaccel`).
/// Solver failures are recorded per row, never aborting the sweep.
pub fn bench_rosenbrock(cfg: &RosenbrockBenchConfig) -> Vec<RosenbrockRow> {
    let axis: Vec<usize> = (0..11).collect();
    let sub_axis: Vec<usize> = if cfg.full_noaccel {
        axis.clone()
    } else if cfg.noaccel_grid == 0 {
        Vec::new()
    } else {
        let k = cfg.noaccel_grid.min(11);
        (0..k).map(|t| (t * 10) / (k - 1).max(1)).collect()
    };

    let mut runs: Vec<(usize, usize, bool)> = Vec::new();
    for &ix in &axis {
        for &iy in &axis {
            runs.push((ix, iy, false)); // lbfgs
        }
    }
    for &ix in &sub_axis {
        for &iy in &sub_axis {
            runs.push((ix, iy, true)); // no acceleration
        }
    }

    let problem = rosenbrock_problem();
    parallel_map(runs.len(), cfg.threads, |i| {
        let (ix, iy, no_accel) = runs[i];
        let x0 = [-5.0 + ix as f64, -5.0 + iy as f64];
        let mut opts = cfg.settings.to_alm_options();
        opts.inner.acceleration = if no_accel {
            Acceleration::None
        } else {
            Acceleration::Lbfgs {
                memory: cfg.settings.lbfgs_mem,
            }
        };
        if no_accel {
            // unaccelerated runs need millions of cheap iterations
            opts.inner.max_iter = opts.inner.max_iter.max(50_000_000);
        }
        let report = alm_solve(&problem, &x0, &[0.0, 0.0], &opts, None)
            .expect("rosenbrock oracles are NaN-free");
        RosenbrockRow {
            ix,
            iy,
            x0,
            mode: if no_accel { "none" } else { "lbfgs" },
            status: status_str(report.status),
            x: [report.x[0], report.x[1]],
            dist_to_origin: norm(&report.x),
            outer_iterations: report.outer_iterations,
            inner_iterations: report.inner_iterations,
        }
    })
}

// ---------------------------------------------------------------------------
// Portfolio sweep
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct PortfolioBenchConfig {
    pub settings: SolverSettings,
    pub seeds: Vec<u64>,
    pub n: usize,
    /// Sparsity weight α.
    pub alpha: f64,
    /// Exponent for the ℓp continuation stage.
    pub p: f64,
    pub threads: usize,
}

impl Default for PortfolioBenchConfig {
    fn default() -> Self {
        PortfolioBenchConfig {
            settings: SolverSettings::default(),
            seeds: (1..=20).collect(),
            n: 50,
            alpha: 1e-3,
            p: 0.5,
            threads: crate::default_threads(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PortfolioRow {
    pub seed: u64,
    /// `l0`, `l1_then_l0`, or `lp_then_l0`.
    pub method: &'static str,
    pub status: &'static str,
    /// Nonzero entries of the final solution (|xᵢ| > 1e−8).
    pub nnz: usize,
    /// Quadratic risk `½xᵀQx`.
    pub quad_cost: f64,
    /// Cardinality objective `½xᵀQx + α·nnz`.
    pub l0_objective: f64,
    pub primal_residual: f64,
    pub outer_iterations: usize,
    pub inner_iterations: usize,
    /// Warm-start stage sparsity (equals `nnz` for the direct run).
    pub warm_nnz: usize,
    pub warm_status: &'static str,
    pub warm_inner_iterations: usize,
    /// Final solution, excluded from CSV.
    #[serde(skip)]
    pub x: Vec<f64>,
}

impl CsvRecord for PortfolioRow {
    fn csv_header() -> &'static str {
        "seed,method,status,nnz,quad_cost,l0_objective,primal_residual,\
         outer_iterations,inner_iterations,warm_nnz,warm_status,warm_inner_iterations"
    }
    fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            self.seed,
            self.method,
            self.status,
            self.nnz,
            fmt_float(self.quad_cost),
            fmt_float(self.l0_objective),
            fmt_float(self.primal_residual),
            self.outer_iterations,
            self.inner_iterations,
            self.warm_nnz,
            self.warm_status,
            self.warm_inner_iterations
        )
    }
}

pub fn count_nonzeros(x: &[f64]) -> usize {
    x.iter().filter(|v| v.abs() > 1e-8).count()
}

/// Per seed: direct ℓ0, ℓ1-then-ℓ0, and ℓp-then-ℓ0 continuation runs.
pub fn bench_portfolio(cfg: &PortfolioBenchConfig) -> Vec<PortfolioRow> {
    let seeds = cfg.seeds.clone();
    let rows = parallel_map(seeds.len(), cfg.threads, |i| {
        let seed = seeds[i];
        let inst = gen_portfolio(seed, cfg.n, cfg.alpha);
        let alpha = cfg.alpha;
        let opts = cfg.settings.to_alm_options();
        let x0 = vec![1.0 / cfg.n as f64; cfg.n];
        let y0 = vec![0.0, 0.0];
        let solve = |reg: PortfolioReg, x: &[f64], y: &[f64]| -> AlmReport {
            let problem = portfolio_problem(&inst, reg);
            alm_solve(&problem, x, y, &opts, None).expect("portfolio oracles are NaN-free")
        };
        let quad = |x: &[f64]| 0.5 * slalom::vecmath::dot(x, &inst.q.matvec(x));

        let mut rows = Vec::with_capacity(3);

        let direct = solve(PortfolioReg::L0 { alpha }, &x0, &y0);
        rows.push(PortfolioRow {
            seed,
            method: "l0",
            status: status_str(direct.status),
            nnz: count_nonzeros(&direct.x),
            quad_cost: quad(&direct.x),
            l0_objective: quad(&direct.x) + alpha * count_nonzeros(&direct.x) as f64,
            primal_residual: direct.residuals.primal,
            outer_iterations: direct.outer_iterations,
            inner_iterations: direct.inner_iterations,
            warm_nnz: count_nonzeros(&direct.x),
            warm_status: status_str(direct.status),
            warm_inner_iterations: 0,
            x: direct.x,
        });

        for (method, warm_reg) in [
            ("l1_then_l0", PortfolioReg::L1 { alpha }),
            ("lp_then_l0", PortfolioReg::LpP { alpha, p: cfg.p }),
        ] {
            let warm = solve(warm_reg, &x0, &y0);
            let fin = solve(PortfolioReg::L0 { alpha }, &warm.x, &warm.y);
            rows.push(PortfolioRow {
                seed,
                method,
                status: status_str(fin.status),
                nnz: count_nonzeros(&fin.x),
                quad_cost: quad(&fin.x),
                l0_objective: quad(&fin.x) + alpha * count_nonzeros(&fin.x) as f64,
                primal_residual: fin.residuals.primal,
                outer_iterations: warm.outer_iterations + fin.outer_iterations,
                inner_iterations: warm.inner_iterations + fin.inner_iterations,
                warm_nnz: count_nonzeros(&warm.x),
                warm_status: status_str(warm.status),
                warm_inner_iterations: warm.inner_iterations,
                x: fin.x,
            });
        }
        rows
    });
    rows.into_iter().flatten().collect()
}

// ---------------------------------------------------------------------------
// Matrix-completion sweep
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct MatrixBenchConfig {
    pub settings: SolverSettings,
    pub seeds: Vec<u64>,
    /// Number of latent points N (the matrix is N×N).
    pub n_points: usize,
    /// Latent dimension of the generating points.
    pub ell: usize,
    /// Schatten exponent.
    pub p: f64,
    pub threads: usize,
}

impl Default for MatrixBenchConfig {
    fn default() -> Self {
        // Spectral subproblems occasionally grind near threshold
        // boundaries; a generous inner cap keeps sweeps bounded without
        // affecting the returned iterate's feasibility.
        let settings = SolverSettings {
            inner_cap: 200_000,
            ..Default::default()
        };
        MatrixBenchConfig {
            settings,
            seeds: (1..=10).collect(),
            n_points: 10,
            ell: 5,
            p: 0.5,
            threads: crate::default_threads(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct MatrixRow {
    pub seed: u64,
    /// `rank`, `nuclear`, `schatten`, `rank_warm_nuclear`, `rank_warm_schatten`.
    pub method: &'static str,
    pub status: &'static str,
    pub primal_residual: f64,
    /// Numerical rank of the returned matrix.
    pub rank: usize,
    /// Rank of the warm-start source solution (equals `rank` for direct runs).
    pub warm_source_rank: usize,
    pub outer_iterations: usize,
    pub inner_iterations: usize,
    #[serde(skip)]
    pub x: Vec<f64>,
}

impl CsvRecord for MatrixRow {
    fn csv_header() -> &'static str {
        "seed,method,status,primal_residual,rank,warm_source_rank,\
         outer_iterations,inner_iterations"
    }
    fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{}",
            self.seed,
            self.method,
            self.status,
            fmt_float(self.primal_residual),
            self.rank,
            self.warm_source_rank,
            self.outer_iterations,
            self.inner_iterations
        )
    }
}

fn solution_rank(x: &[f64], n_points: usize) -> usize {
    let svd =
        svd_dense(&Mat::from_vec(n_points, n_points, x.to_vec())).expect("solution SVD converges");
    numerical_rank(&svd.sigma, (n_points, n_points))
}

/// Per seed: direct rank / nuclear / Schatten minimization from a random
/// Gaussian start, plus rank minimization warm-started at the nuclear and
/// Schatten solutions.
pub fn bench_matrix(cfg: &MatrixBenchConfig) -> Vec<MatrixRow> {
    let seeds = cfg.seeds.clone();
    let rows = parallel_map(seeds.len(), cfg.threads, |i| {
        let seed = seeds[i];
        let inst = gen_matrix_completion(seed, cfg.n_points, cfg.ell);
        let opts = cfg.settings.to_alm_options();
        let mut rng = SplitMix64::new(seed ^ 0xB0);
        let b0: Vec<f64> = (0..cfg.n_points * cfg.n_points)
            .map(|_| rng.next_gaussian())
            .collect();
        let y0 = vec![0.0; inst.m_total()];
        let solve = |reg: MatrixReg, x: &[f64], y: &[f64]| -> AlmReport {
            let problem = matrix_completion_problem(&inst, reg);
            alm_solve(&problem, x, y, &opts, None).expect("spectral oracles are NaN-free")
        };
        let row = |method: &'static str, rep: &AlmReport, warm_source_rank: usize| MatrixRow {
            seed,
            method,
            status: status_str(rep.status),
            primal_residual: rep.residuals.primal,
            rank: solution_rank(&rep.x, cfg.n_points),
            warm_source_rank,
            outer_iterations: rep.outer_iterations,
            inner_iterations: rep.inner_iterations,
            x: rep.x.clone(),
        };

        let rank = solve(MatrixReg::Rank, &b0, &y0);
        let nuclear = solve(MatrixReg::Nuclear, &b0, &y0);
        let schatten = solve(MatrixReg::Schatten { p: cfg.p }, &b0, &y0);
        let warm_nuc = solve(MatrixReg::Rank, &nuclear.x, &nuclear.y);
        let warm_sch = solve(MatrixReg::Rank, &schatten.x, &schatten.y);

        let rank_row = row("rank", &rank, 0);
        let nuclear_row = row("nuclear", &nuclear, 0);
        let schatten_row = row("schatten", &schatten, 0);
        let warm_nuc_row = row("rank_warm_nuclear", &warm_nuc, nuclear_row.rank);
        let warm_sch_row = row("rank_warm_schatten", &warm_sch, schatten_row.rank);
        let rank0 = rank_row.rank;
        let nuc0 = nuclear_row.rank;
        let sch0 = schatten_row.rank;
        let mut out = vec![
            rank_row,
            nuclear_row,
            schatten_row,
            warm_nuc_row,
            warm_sch_row,
        ];
        for r in &mut out[..3] {
            r.warm_source_rank = match r.method {
                "rank" => rank0,
                "nuclear" => nuc0,
                _ => sch0,
            };
        }
        out
    });
    rows.into_iter().flatten().collect()
}
