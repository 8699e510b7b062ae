//! Safeguarded augmented Lagrangian outer loop.
//!
//! The constraint `c(x) ∈ D` is lifted with a slack variable `s ∈ D` to
//! `c(x) − s = 0`, and each outer iteration minimizes the augmented
//! Lagrangian
//!
//! ```text
//!   L(x, s) = f(x) + g(x) + ι_D(s)
//!           + Σᵢ (cᵢ(x) + μᵢ·ŷᵢ − sᵢ)² / (2μᵢ)  −  Σᵢ μᵢ·ŷᵢ²/2
//! ```
//!
//! over `(x, s)` with the inner solver, to an inner tolerance `ε_k` that
//! decreases geometrically down to the dual tolerance. The smooth/nonsmooth
//! split is exactly the penalty part versus `g(x) + ι_D(s)`, whose prox is
//! the pair `(prox_{γg}(x), proj_D(s))`, so the subproblem needs no oracles
//! beyond the original problem's.
//!
//! Multiplier estimates are safeguarded by clamping into `[−y_max, y_max]^m`
//! before each subproblem; penalties start from a per-constraint scaling of
//! the initial violation against the initial cost, and shrink in unison
//! whenever the primal infeasibility fails its sufficient-decrease test.
//! When penalties fall through a floor while the infeasibility stagnates
//! above tolerance, the run is reported as a suspected (locally) infeasible
//! instance rather than as a success.

use serde::Serialize;

use crate::error::SolverError;
use crate::panoc::{
    estimate_gamma0, panoc_solve, CompositeProblem, PanocExit, PanocOptions, PanocTraceRow,
};
use crate::problem::{Problem, Residuals};
use crate::vecmath::{dist, has_nan};

/// Outer-loop options. Defaults match the solver's standard configuration:
/// tolerances 1e−6, θ = 0.8, κ_μ = 0.5, κ_ε = 0.1, y_max = 1e20.
#[derive(Debug, Clone)]
pub struct AlmOptions {
    pub eps_prim: f64,
    pub eps_dual: f64,
    /// Sufficient-decrease factor for `‖c − s‖` in (0, 1).
    pub theta: f64,
    /// Penalty shrink factor in (0, 1).
    pub kappa_mu: f64,
    /// Inner-tolerance shrink factor in (0, 1).
    pub kappa_eps: f64,
    /// Safeguard box `Y = [−y_max, y_max]^m`.
    pub y_max: f64,
    pub max_outer: usize,
    /// Clamp range for the *initial* penalty vector.
    pub mu_bounds: (f64, f64),
    /// Penalty floor of the infeasibility heuristic.
    pub mu_floor: f64,
    /// Template for the inner solver; `eps` is overwritten by the tolerance
    /// schedule and `gamma0`, when unset, is re-estimated every outer
    /// iteration (the penalty changes the curvature of the smooth part).
    pub inner: PanocOptions,
}

impl Default for AlmOptions {
    fn default() -> Self {
        AlmOptions {
            eps_prim: 1e-6,
            eps_dual: 1e-6,
            theta: 0.8,
            kappa_mu: 0.5,
            kappa_eps: 0.1,
            y_max: 1e20,
            max_outer: 100,
            mu_bounds: (1e-8, 1e8),
            mu_floor: 1e-12,
            inner: PanocOptions::default(),
        }
    }
}

impl AlmOptions {
    pub fn validate(&self) -> Result<(), SolverError> {
        let ok = self.eps_prim > 0.0
            && self.eps_dual > 0.0
            && self.theta > 0.0
            && self.theta < 1.0
            && self.kappa_mu > 0.0
            && self.kappa_mu < 1.0
            && self.kappa_eps > 0.0
            && self.kappa_eps < 1.0
            && self.y_max > 0.0
            && self.max_outer > 0
            && self.mu_bounds.0 > 0.0
            && self.mu_bounds.0 <= self.mu_bounds.1
            && self.mu_floor > 0.0;
        if ok {
            self.inner.validate()
        } else {
            Err(SolverError::InvalidArgument(
                "AlmOptions out of range".into(),
            ))
        }
    }
}

/// Final status of an outer solve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AlmStatus {
    /// Both termination tolerances certified.
    Solved,
    /// Outer-iteration cap reached.
    MaxOuter,
    /// Penalties collapsed while the infeasibility stagnated: the instance
    /// is likely (locally) infeasible. Never reported as success.
    InfeasibleSuspect,
    /// The inner solver failed (e.g. stepsize collapse).
    InnerFailure,
}

/// One row of the per-outer-iteration trace.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct AlmTraceRow {
    pub k: usize,
    /// `‖c(x^k) − s^k‖`.
    pub infeas: f64,
    /// Inner tolerance used for this subproblem.
    pub eps_k: f64,
    pub mu_min: f64,
    /// Inner iterations spent in this subproblem.
    pub inner_iterations: usize,
    /// Composite cost `q(x^k)`.
    pub q: f64,
}

/// Outcome of [`alm_solve`].
#[derive(Debug, Clone, Serialize)]
pub struct AlmReport {
    pub status: AlmStatus,
    pub x: Vec<f64>,
    pub s: Vec<f64>,
    pub y: Vec<f64>,
    pub residuals: Residuals,
    /// `q(x) = f(x) + g(x)` at the returned point.
    pub q_value: f64,
    pub outer_iterations: usize,
    /// Inner iterations accumulated over all subproblems.
    pub inner_iterations: usize,
    pub trace: Vec<AlmTraceRow>,
}

/// Builds the slack-lifted subproblem for penalties `mu` and safeguarded
/// multipliers `y_hat`: an unconstrained composite problem over `(x, s)`.
///
/// Smooth part and gradient (matrix-free: one Jacobian-transpose product):
///
/// ```text
///   φ(x, s) = f(x) + Σᵢ (cᵢ(x) + μᵢŷᵢ − sᵢ)²/(2μᵢ) − Σᵢ μᵢŷᵢ²/2
///   ∇φ(x, s) = (∇f(x) + ∇c(x)ᵀw, −w),   wᵢ = (cᵢ(x) + μᵢŷᵢ − sᵢ)/μᵢ
/// ```
///
/// Nonsmooth part `g(x) + ι_D(s)`, prox `(prox_{γg}(x), proj_D(s))`.
pub fn lift_subproblem<'a>(
    problem: &'a Problem,
    mu: &[f64],
    y_hat: &[f64],
) -> CompositeProblem<'a> {
    debug_assert!(mu.iter().all(|&m| m > 0.0));
    let n = problem.n();
    let m = problem.m();
    let mu_phi = mu.to_vec();
    let mu_grad = mu.to_vec();
    let yh_phi = y_hat.to_vec();
    let yh_grad = y_hat.to_vec();

    let offset: f64 = mu
        .iter()
        .zip(y_hat)
        .map(|(mi, yi)| 0.5 * mi * yi * yi)
        .sum();

    let phi_eval = move |z: &[f64]| -> f64 {
        let (x, s) = z.split_at(n);
        let c = problem.c(x);
        let penalty: f64 = (0..m)
            .map(|i| {
                let t = c[i] + mu_phi[i] * yh_phi[i] - s[i];
                t * t / (2.0 * mu_phi[i])
            })
            .sum();
        problem.f(x) + penalty - offset
    };
    let phi_grad = move |z: &[f64]| -> Vec<f64> {
        let (x, s) = z.split_at(n);
        let c = problem.c(x);
        let w: Vec<f64> = (0..m)
            .map(|i| (c[i] + mu_grad[i] * yh_grad[i] - s[i]) / mu_grad[i])
            .collect();
        let mut grad = problem.grad_f(x);
        let jtw = problem.jtv(x, &w);
        for (gi, ji) in grad.iter_mut().zip(&jtw) {
            *gi += ji;
        }
        grad.extend(w.iter().map(|wi| -wi));
        grad
    };
    let psi_prox = move |z: &[f64], gamma: f64| -> Result<(Vec<f64>, f64), SolverError> {
        let (x, s) = z.split_at(n);
        let (mut px, gval) = problem.prox_g(x, gamma)?;
        px.extend(problem.proj_d(s));
        Ok((px, gval))
    };
    let psi_eval = move |z: &[f64]| -> f64 {
        let (x, s) = z.split_at(n);
        let proj = problem.proj_d(s);
        let member = proj.iter().zip(s).all(|(a, b)| a == b);
        problem.g(x) + if member { 0.0 } else { f64::INFINITY }
    };

    CompositeProblem::new(n + m, phi_eval, phi_grad, psi_prox, psi_eval)
        .with_prox_bound(problem.prox_bound())
}

/// Initial penalty vector: per constraint,
/// `μᵢ = clamp( max(1, Δᵢ²/2) / (10·max(1, q(x))), bounds )` with
/// `Δ = c(x) − proj_D(c(x))`.
pub fn init_penalty(
    problem: &Problem,
    x_init: &[f64],
    opts: &AlmOptions,
) -> Result<Vec<f64>, SolverError> {
    let q = problem.eval_q(x_init);
    if q.is_nan() {
        let oracle = if problem.f(x_init).is_nan() { "f" } else { "g" };
        return Err(SolverError::OracleNan { oracle });
    }
    if q.is_infinite() {
        return Err(SolverError::InvalidArgument(
            "init_penalty requires a starting point in the domain of q".into(),
        ));
    }
    let c = problem.c(x_init);
    let s = problem.proj_d(&c);
    let denom = q.max(1.0);
    Ok(c.iter()
        .zip(&s)
        .map(|(ci, si)| {
            let delta = ci - si;
            let raw = 0.1 * (delta * delta / 2.0).max(1.0) / denom;
            raw.clamp(opts.mu_bounds.0, opts.mu_bounds.1)
        })
        .collect())
}

/// Moves an arbitrary starting point into `dom q` by a machine-epsilon prox
/// step, then warm-starts the slack at the projected constraint values.
pub fn init_primal(problem: &Problem, x_raw: &[f64]) -> Result<(Vec<f64>, Vec<f64>), SolverError> {
    let (x_init, _) = problem.prox_g(x_raw, f64::EPSILON)?;
    let s_init = problem.proj_d(&problem.c(&x_init));
    Ok((x_init, s_init))
}

/// Componentwise clamp of a multiplier estimate into `[−y_max, y_max]^m`.
pub fn safeguard(y: &[f64], y_max: f64) -> Vec<f64> {
    y.iter().map(|&v| v.clamp(-y_max, y_max)).collect()
}

/// First-order multiplier update `yᵢ = ŷᵢ + (cᵢ − sᵢ)/μᵢ`.
pub fn dual_update(y_hat: &[f64], c_val: &[f64], s: &[f64], mu: &[f64]) -> Vec<f64> {
    y_hat
        .iter()
        .zip(c_val.iter().zip(s.iter().zip(mu)))
        .map(|(yh, (c, (si, mi)))| yh + (c - si) / mi)
        .collect()
}

/// Penalty schedule: keep `μ` on the first iteration, on sufficient decrease
/// of the infeasibility, or once the infeasibility is already within the
/// primal tolerance; otherwise shrink in unison by `κ_μ`.
pub fn penalty_update(
    mu: &[f64],
    infeas: f64,
    prev_infeas: f64,
    k: usize,
    opts: &AlmOptions,
) -> Vec<f64> {
    if k == 0 || infeas <= opts.theta * prev_infeas || infeas <= opts.eps_prim {
        mu.to_vec()
    } else {
        mu.iter().map(|&m| m * opts.kappa_mu).collect()
    }
}

/// Inner-tolerance schedule `ε ← max(κ_ε·ε, ε_dual)`.
pub fn tolerance_update(eps_k: f64, opts: &AlmOptions) -> f64 {
    (opts.kappa_eps * eps_k).max(opts.eps_dual)
}

/// Number of consecutive stagnating outer iterations (with collapsed
/// penalties) before declaring suspected infeasibility.
const STAGNATION_LIMIT: usize = 3;

/// Per-inner-iteration observer: receives the outer index and the inner
/// solver's trace row.
pub type InnerTraceSink<'s> = &'s mut dyn FnMut(usize, &PanocTraceRow);

/// Runs the safeguarded augmented Lagrangian method from `x_raw` with
/// multiplier guess `y_init`.
///
/// A NaN from any oracle aborts with a hard error naming the oracle; other
/// inner-solver failures surface as [`AlmStatus::InnerFailure`] in the
/// report.
pub fn alm_solve(
    problem: &Problem,
    x_raw: &[f64],
    y_init: &[f64],
    opts: &AlmOptions,
    mut inner_trace: Option<InnerTraceSink>,
) -> Result<AlmReport, SolverError> {
    opts.validate()?;
    assert_eq!(x_raw.len(), problem.n(), "x_raw dimension mismatch");
    assert_eq!(y_init.len(), problem.m(), "y_init dimension mismatch");
    if has_nan(x_raw) || has_nan(y_init) {
        return Err(SolverError::InvalidArgument(
            "starting point contains NaN".into(),
        ));
    }

    let (mut x, mut s) = init_primal(problem, x_raw)?;
    let mut mu = init_penalty(problem, &x, opts)?;
    let mut y = y_init.to_vec();
    let mut eps_k = opts.eps_dual.cbrt().max(opts.eps_dual);
    let mut prev_infeas = f64::INFINITY;
    let mut stagnation = 0usize;
    let mut trace: Vec<AlmTraceRow> = Vec::new();
    let mut total_inner = 0usize;
    let mut last_inner_residual = f64::INFINITY;

    for k in 0..opts.max_outer {
        let y_hat = safeguard(&y, opts.y_max);
        let sub = lift_subproblem(problem, &mu, &y_hat);

        let mut inner_opts = opts.inner.clone();
        inner_opts.eps = eps_k;
        let mut z0 = x.clone();
        z0.extend_from_slice(&s);
        if inner_opts.gamma0.is_none() {
            inner_opts.gamma0 = Some(estimate_gamma0(&sub, &z0, inner_opts.alpha));
        }

        let mut sink = inner_trace
            .as_deref_mut()
            .map(|cb| move |row: &PanocTraceRow, _z: &[f64]| cb(k, row));
        let outcome = match panoc_solve(
            &sub,
            &z0,
            &inner_opts,
            sink.as_mut()
                .map(|f| f as &mut dyn FnMut(&PanocTraceRow, &[f64])),
        ) {
            Ok(out) => out,
            Err(SolverError::OracleNan { oracle }) => {
                return Err(
                    diagnose_nan(problem, &x, &s).unwrap_or(SolverError::OracleNan { oracle })
                )
            }
            Err(_other) => {
                let c_val = problem.c(&x);
                let infeas = dist(&c_val, &s);
                return Ok(AlmReport {
                    status: AlmStatus::InnerFailure,
                    q_value: problem.eval_q(&x),
                    residuals: Residuals {
                        primal: infeas,
                        // residual of the last completed subproblem, if any
                        dual: last_inner_residual,
                    },
                    x,
                    s,
                    y,
                    outer_iterations: k,
                    inner_iterations: total_inner,
                    trace,
                });
            }
        };
        total_inner += outcome.counters.iterations;
        last_inner_residual = outcome.residual;

        let certified = outcome.exit == PanocExit::Converged && outcome.residual <= eps_k;
        let (x_new, s_new) = outcome.z.split_at(problem.n());
        x = x_new.to_vec();
        s = s_new.to_vec();

        let c_val = problem.c(&x);
        if has_nan(&c_val) {
            return Err(SolverError::OracleNan { oracle: "c" });
        }
        let infeas = dist(&c_val, &s);
        y = dual_update(&y_hat, &c_val, &s, &mu);

        trace.push(AlmTraceRow {
            k,
            infeas,
            eps_k,
            mu_min: mu.iter().cloned().fold(f64::INFINITY, f64::min),
            inner_iterations: outcome.counters.iterations,
            q: problem.eval_q(&x),
        });

        if certified && eps_k <= opts.eps_dual && infeas <= opts.eps_prim {
            return Ok(AlmReport {
                status: AlmStatus::Solved,
                q_value: problem.eval_q(&x),
                residuals: Residuals {
                    primal: infeas,
                    dual: outcome.residual,
                },
                x,
                s,
                y,
                outer_iterations: k + 1,
                inner_iterations: total_inner,
                trace,
            });
        }

        // Infeasibility heuristic: collapsed penalties plus stagnating
        // infeasibility over several consecutive iterations.
        if k > 0 && infeas > opts.eps_prim && infeas >= opts.theta * prev_infeas {
            stagnation += 1;
        } else {
            stagnation = 0;
        }
        let mu_min = mu.iter().cloned().fold(f64::INFINITY, f64::min);
        if mu_min < opts.mu_floor && infeas > opts.eps_prim && stagnation >= STAGNATION_LIMIT {
            return Ok(AlmReport {
                status: AlmStatus::InfeasibleSuspect,
                q_value: problem.eval_q(&x),
                residuals: Residuals {
                    primal: infeas,
                    dual: outcome.residual,
                },
                x,
                s,
                y,
                outer_iterations: k + 1,
                inner_iterations: total_inner,
                trace,
            });
        }

        mu = penalty_update(&mu, infeas, prev_infeas, k, opts);
        eps_k = tolerance_update(eps_k, opts);
        prev_infeas = infeas;
    }

    let c_val = problem.c(&x);
    let infeas = dist(&c_val, &s);
    Ok(AlmReport {
        status: AlmStatus::MaxOuter,
        q_value: problem.eval_q(&x),
        residuals: Residuals {
            primal: infeas,
            dual: last_inner_residual,
        },
        x,
        s,
        y,
        outer_iterations: opts.max_outer,
        inner_iterations: total_inner,
        trace,
    })
}

/// Pinpoints which problem oracle produced NaN at the current iterate.
fn diagnose_nan(problem: &Problem, x: &[f64], s: &[f64]) -> Option<SolverError> {
    if problem.f(x).is_nan() {
        return Some(SolverError::OracleNan { oracle: "f" });
    }
    if has_nan(&problem.grad_f(x)) {
        return Some(SolverError::OracleNan { oracle: "grad_f" });
    }
    let c = problem.c(x);
    if has_nan(&c) {
        return Some(SolverError::OracleNan { oracle: "c" });
    }
    if has_nan(&problem.jtv(x, &vec![1.0; problem.m()])) {
        return Some(SolverError::OracleNan { oracle: "c_jtv" });
    }
    if has_nan(&problem.proj_d(s)) {
        return Some(SolverError::OracleNan { oracle: "d_proj" });
    }
    match problem.prox_g(x, 0.5 * problem.prox_bound().min(2.0)) {
        Ok((p, v)) if has_nan(&p) || v.is_nan() => {
            Some(SolverError::OracleNan { oracle: "g_prox" })
        }
        _ => None,
    }
}
