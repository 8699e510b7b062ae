//! Problem registry for the `solve` subcommand.

use serde::Serialize;
use std::path::PathBuf;

use slalom::alm::{alm_solve, AlmReport, AlmStatus, InnerTraceSink};
use slalom::problems::{
    gen_matrix_completion, matrix_completion_problem, portfolio_problem, read_portfolio_file,
    rosenbrock_problem, MatrixReg, PortfolioReg,
};
use slalom::rng::SplitMix64;

use crate::SolverSettings;

/// A problem the CLI knows how to construct.
#[derive(Debug, Clone)]
pub enum RegisteredProblem {
    Rosenbrock {
        x0: [f64; 2],
    },
    Portfolio {
        file: PathBuf,
        reg: PortfolioRegChoice,
        p: f64,
    },
    Matrix {
        seed: u64,
        n_points: usize,
        ell: usize,
        reg: MatrixRegChoice,
        p: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PortfolioRegChoice {
    L0,
    L1,
    Lp,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatrixRegChoice {
    Rank,
    Nuclear,
    Schatten,
}

/// JSON-serializable solve result: the solver report plus identification.
#[derive(Debug, Serialize)]
pub struct SolveOutput {
    pub problem: String,
    #[serde(flatten)]
    pub report: AlmReport,
}

/// Exit-code mapping, total over solver statuses.
pub fn exit_code_for(status: AlmStatus) -> i32 {
    match status {
        AlmStatus::Solved => 0,
        AlmStatus::MaxOuter => 2,
        AlmStatus::InfeasibleSuspect => 3,
        AlmStatus::InnerFailure => 4,
    }
}

/// Builds and solves a registered problem. `inner_trace`, when given,
/// receives every accepted inner iteration keyed by outer index.
pub fn solve_registered(
    problem: &RegisteredProblem,
    settings: &SolverSettings,
    inner_trace: Option<InnerTraceSink>,
) -> Result<SolveOutput, String> {
    let opts = settings.to_alm_options();
    let (name, report) = match problem {
        RegisteredProblem::Rosenbrock { x0 } => {
            let p = rosenbrock_problem();
            let report =
                alm_solve(&p, x0, &[0.0, 0.0], &opts, inner_trace).map_err(|e| e.to_string())?;
            ("rosenbrock".to_string(), report)
        }
        RegisteredProblem::Portfolio { file, reg, p } => {
            let inst = read_portfolio_file(file).map_err(|e| e.to_string())?;
            let alpha = inst.alpha;
            let reg = match reg {
                PortfolioRegChoice::L0 => PortfolioReg::L0 { alpha },
                PortfolioRegChoice::L1 => PortfolioReg::L1 { alpha },
                PortfolioRegChoice::Lp => PortfolioReg::LpP { alpha, p: *p },
            };
            let problem = portfolio_problem(&inst, reg);
            let x0 = vec![1.0 / inst.n as f64; inst.n];
            let report = alm_solve(&problem, &x0, &[0.0, 0.0], &opts, inner_trace)
                .map_err(|e| e.to_string())?;
            (format!("portfolio:{}", file.display()), report)
        }
        RegisteredProblem::Matrix {
            seed,
            n_points,
            ell,
            reg,
            p,
        } => {
            let inst = gen_matrix_completion(*seed, *n_points, *ell);
            let reg = match reg {
                MatrixRegChoice::Rank => MatrixReg::Rank,
                MatrixRegChoice::Nuclear => MatrixReg::Nuclear,
                MatrixRegChoice::Schatten => MatrixReg::Schatten { p: *p },
            };
            let problem = matrix_completion_problem(&inst, reg);
            let mut rng = SplitMix64::new(seed ^ 0xB0);
            let b0: Vec<f64> = (0..n_points * n_points)
                .map(|_| rng.next_gaussian())
                .collect();
            let y0 = vec![0.0; inst.m_total()];
            let report =
                alm_solve(&problem, &b0, &y0, &opts, inner_trace).map_err(|e| e.to_string())?;
            (format!("matrix:seed={seed},N={n_points}"), report)
        }
    };
    Ok(SolveOutput {
        problem: name,
        report,
    })
}
