//! Library backing the `slalom` binary: benchmark sweep runners, the
//! problem registry, and deterministic result emission.
//!
//! Sweeps dispatch independent solves to a scoped worker pool; result rows
//! are keyed by grid index or seed and sorted before emission, so thread
//! scheduling never changes output bytes. CSV output uses `.` decimals,
//! 17 significant digits and LF line endings.

pub mod emit;
pub mod runners;
pub mod solve;

pub use emit::{fmt_float, to_csv, CsvRecord, OutputFormat};
pub use runners::{
    bench_matrix, bench_portfolio, bench_rosenbrock, MatrixBenchConfig, MatrixRow,
    PortfolioBenchConfig, PortfolioRow, RosenbrockBenchConfig, RosenbrockRow,
};
pub use solve::{exit_code_for, solve_registered, RegisteredProblem, SolveOutput};

use slalom::alm::AlmOptions;
use slalom::panoc::Acceleration;

/// Solver-option overrides shared by every subcommand.
#[derive(Debug, Clone)]
pub struct SolverSettings {
    pub tol_prim: f64,
    pub tol_dual: f64,
    pub max_outer: usize,
    pub no_accel: bool,
    pub lbfgs_mem: usize,
    /// Inner-iteration cap per subproblem.
    pub inner_cap: usize,
}

impl Default for SolverSettings {
    fn default() -> Self {
        SolverSettings {
            tol_prim: 1e-6,
            tol_dual: 1e-6,
            max_outer: 100,
            no_accel: false,
            lbfgs_mem: 5,
            inner_cap: 10_000_000,
        }
    }
}

impl SolverSettings {
    pub fn to_alm_options(&self) -> AlmOptions {
        let mut opts = AlmOptions {
            eps_prim: self.tol_prim,
            eps_dual: self.tol_dual,
            max_outer: self.max_outer,
            ..Default::default()
        };
        opts.inner.max_iter = self.inner_cap;
        opts.inner.acceleration = if self.no_accel {
            Acceleration::None
        } else {
            Acceleration::Lbfgs {
                memory: self.lbfgs_mem,
            }
        };
        opts
    }
}

/// Worker-pool map: applies `f` to `0..count` on up to `threads` workers and
/// returns results in index order regardless of scheduling.
pub fn parallel_map<T: Send>(
    count: usize,
    threads: usize,
    f: impl Fn(usize) -> T + Sync,
) -> Vec<T> {
    let threads = threads.max(1).min(count.max(1));
    if threads <= 1 {
        return (0..count).map(f).collect();
    }
    let next = std::sync::atomic::AtomicUsize::new(0);
    let results = std::sync::Mutex::new(Vec::with_capacity(count));
    std::thread::scope(|scope| {
        for _ in 0..threads {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
                if i >= count {
                    break;
                }
                let value = f(i);
                results.lock().unwrap().push((i, value));
            });
        }
    });
    let mut rows = results.into_inner().unwrap();
    rows.sort_by_key(|(i, _)| *i);
    rows.into_iter().map(|(_, v)| v).collect()
}

/// Default worker count for sweeps.
pub fn default_threads() -> usize {
    std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1)
        .min(8)
}
