//! Runner-level checks that are cheaper than the full acceptance sweeps.

use slalom_cli::runners::{
    bench_portfolio, bench_rosenbrock, PortfolioBenchConfig, RosenbrockBenchConfig,
};
use slalom_cli::to_csv;

#[test]
fn alpha_zero_degenerates_to_one_quadratic_program() {
    // With the sparsity weight off, the cardinality and ℓ1 pipelines solve
    // the same convex QP and must agree in objective.
    let cfg = PortfolioBenchConfig {
        seeds: vec![4],
        n: 20,
        alpha: 0.0,
        ..Default::default()
    };
    let rows = bench_portfolio(&cfg);
    let l0 = rows.iter().find(|r| r.method == "l0").unwrap();
    let l1 = rows.iter().find(|r| r.method == "l1_then_l0").unwrap();
    assert_eq!(l0.status, "solved");
    assert_eq!(l1.status, "solved");
    assert!(
        (l0.quad_cost - l1.quad_cost).abs() <= 1e-6,
        "objectives diverge: {} vs {}",
        l0.quad_cost,
        l1.quad_cost
    );
}

#[test]
fn rosenbrock_row_counts_per_mode() {
    let cfg = RosenbrockBenchConfig {
        noaccel_grid: 2,
        ..Default::default()
    };
    let rows = bench_rosenbrock(&cfg);
    assert_eq!(rows.iter().filter(|r| r.mode == "lbfgs").count(), 121);
    assert_eq!(rows.iter().filter(|r| r.mode == "none").count(), 4);
    let csv = to_csv(&rows);
    assert_eq!(csv.lines().count(), 126);
    assert!(csv.ends_with('\n') && !csv.contains('\r'));
}

#[test]
fn full_noaccel_expands_the_grid() {
    // Only checks the run list shape, not the solves: a tiny tolerance
    // budget keeps each unaccelerated run short.
    let mut cfg = RosenbrockBenchConfig {
        full_noaccel: true,
        ..Default::default()
    };
    cfg.settings.max_outer = 1;
    cfg.settings.tol_prim = 1e3;
    cfg.settings.tol_dual = 1e3;
    let rows = bench_rosenbrock(&cfg);
    assert_eq!(rows.iter().filter(|r| r.mode == "none").count(), 121);
}
