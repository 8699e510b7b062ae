//! Sparse portfolio selection:
//!
//! ```text
//!   minimize  ½ xᵀQx + α·reg(x)
//!   s.t.      meanᵀx ≥ ϱ,   1ᵀx = 1,   0 ≤ x ≤ u
//! ```
//!
//! cast as a constrained composite problem with `f(x) = ½xᵀQx`, `g` the
//! regularizer plus the bound indicator, `c(x) = (meanᵀx, 1ᵀx)` and
//! `D = [ϱ, ∞) × {1}`. The regularizer is the cardinality count, the ℓ1
//! norm, or the p-th power of the ℓp quasi-norm; each has an exact
//! bound-constrained prox.

use crate::error::SolverError;
use crate::mat::Mat;
use crate::problem::Problem;
use crate::prox::sets::ConstraintSet;
use crate::prox::{CoordRule, SeparableProx};
use crate::rng::SplitMix64;

/// One portfolio instance: covariance, means, return floor, bounds, and the
/// sparsity weight used by the benchmark runners.
#[derive(Debug, Clone, PartialEq)]
pub struct PortfolioInstance {
    pub n: usize,
    /// Symmetric positive-semidefinite covariance (n×n).
    pub q: Mat,
    pub mean: Vec<f64>,
    /// Minimal expected return ϱ.
    pub rho: f64,
    /// Per-asset upper bounds, all positive.
    pub u: Vec<f64>,
    /// Sparsity weight α.
    pub alpha: f64,
}

impl PortfolioInstance {
    /// Validates symmetry, bound positivity, and feasibility (via the probe).
    pub fn validate(&self) -> Result<(), SolverError> {
        if self.q.rows() != self.n || self.q.cols() != self.n {
            return Err(SolverError::InvalidArgument("Q dimension mismatch".into()));
        }
        for i in 0..self.n {
            for j in 0..i {
                if (self.q.get(i, j) - self.q.get(j, i)).abs() > 1e-12 {
                    return Err(SolverError::InvalidArgument(format!(
                        "Q not symmetric at ({i}, {j})"
                    )));
                }
            }
        }
        if self.mean.len() != self.n || self.u.len() != self.n {
            return Err(SolverError::InvalidArgument(
                "mean/u dimension mismatch".into(),
            ));
        }
        if self.u.iter().any(|&ui| ui <= 0.0) {
            return Err(SolverError::InvalidArgument("u must be positive".into()));
        }
        match self.feasible_point() {
            Some(_) => Ok(()),
            None => Err(SolverError::InvalidArgument(
                "instance has an empty feasible set".into(),
            )),
        }
    }

    /// Feasibility probe: greedily fills the budget on the highest-mean
    /// assets (which maximizes the expected return over the budget+box
    /// polytope) and checks the return constraint. Returns a feasible point
    /// or `None`.
    pub fn feasible_point(&self) -> Option<Vec<f64>> {
        let mut order: Vec<usize> = (0..self.n).collect();
        order.sort_by(|&i, &j| self.mean[j].partial_cmp(&self.mean[i]).unwrap());
        let mut x = vec![0.0; self.n];
        let mut budget: f64 = 1.0;
        for &i in &order {
            let take = budget.min(self.u[i]);
            x[i] = take;
            budget -= take;
            if budget <= 0.0 {
                break;
            }
        }
        if budget > 1e-12 {
            return None; // Σu < 1: the budget cannot be filled
        }
        let ret: f64 = self.mean.iter().zip(&x).map(|(m, xi)| m * xi).sum();
        (ret >= self.rho).then_some(x)
    }
}

/// Seeded random instance of `n ≥ 2` assets.
///
/// `Q = FᵀF/n + 0.01·I` with `F` a ⌈n/2⌉×n standard Gaussian, so the
/// spectrum is bounded below by 0.01. Means are uniform on `[0, 0.1]`, the
/// return floor is half the best mean, and bounds default to 0.3 (raised to
/// `1.2/n` for tiny n so the budget constraint stays feasible with margin;
/// the return floor is likewise capped at 90% of the best achievable
/// return). Deterministic per seed.
pub fn gen_portfolio(seed: u64, n: usize, alpha: f64) -> PortfolioInstance {
    assert!(n >= 2, "portfolio needs at least two assets");
    let mut rng = SplitMix64::new(seed);
    let k = n.div_ceil(2);
    let f = Mat::from_fn(k, n, |_, _| rng.next_gaussian());
    let mut q = Mat::zeros(n, n);
    for i in 0..n {
        for j in 0..=i {
            let mut acc = 0.0;
            for r in 0..k {
                acc += f.get(r, i) * f.get(r, j);
            }
            let v = acc / n as f64 + if i == j { 0.01 } else { 0.0 };
            q.set(i, j, v);
            q.set(j, i, v);
        }
    }
    let mean: Vec<f64> = (0..n).map(|_| rng.uniform(0.0, 0.1)).collect();
    let bound = (0.3f64).max(1.2 / n as f64);
    let u = vec![bound; n];

    let mut inst = PortfolioInstance {
        n,
        q,
        mean: mean.clone(),
        rho: 0.0,
        u,
        alpha,
    };
    let best = inst
        .feasible_point()
        .expect("budget-feasible by construction");
    let best_return: f64 = mean.iter().zip(&best).map(|(m, x)| m * x).sum();
    let max_mean = mean.iter().cloned().fold(0.0, f64::max);
    inst.rho = (0.5 * max_mean).min(0.9 * best_return);
    debug_assert!(inst.feasible_point().is_some());
    inst
}

/// Regularizer choice for [`portfolio_problem`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PortfolioReg {
    /// `α·‖x‖₀`.
    L0 { alpha: f64 },
    /// `α·‖x‖₁`.
    L1 { alpha: f64 },
    /// `α·‖x‖ₚᵖ`, `p ∈ (0, 1)`.
    LpP { alpha: f64, p: f64 },
}

/// Builds the constrained composite problem for an instance and regularizer.
pub fn portfolio_problem(inst: &PortfolioInstance, reg: PortfolioReg) -> Problem {
    let n = inst.n;
    let rule = |i: usize| -> CoordRule {
        let (lo, hi) = (0.0, inst.u[i]);
        match reg {
            PortfolioReg::L0 { alpha } => CoordRule::CardBox {
                weight: alpha,
                lo,
                hi,
            },
            PortfolioReg::L1 { alpha } => CoordRule::AbsBox {
                weight: alpha,
                lo,
                hi,
            },
            PortfolioReg::LpP { alpha, p } => CoordRule::PowerBox {
                weight: alpha,
                p,
                lo,
                hi,
            },
        }
    };
    let g = SeparableProx::new((0..n).map(rule).collect());
    let q = inst.q.clone();
    let q2 = inst.q.clone();
    let mean = inst.mean.clone();
    let mean2 = inst.mean.clone();
    Problem::builder(n, 2)
        .smooth(
            move |x| 0.5 * crate::vecmath::dot(x, &q.matvec(x)),
            move |x| q2.matvec(x),
        )
        .nonsmooth_separable(g)
        .constraints(
            move |x| vec![crate::vecmath::dot(&mean, x), x.iter().sum::<f64>()],
            move |_, v| mean2.iter().map(|mi| mi * v[0] + v[1]).collect(),
        )
        .set(ConstraintSet::Box {
            lo: vec![inst.rho, 1.0],
            hi: vec![f64::INFINITY, 1.0],
        })
        .build()
}
