//! Adaptive proximal-gradient inner solver with quasi-Newton acceleration.
//!
//! Solves the unconstrained composite problem `min φ(z) + ψ(z)` where `φ` is
//! smooth with a *locally* Lipschitz gradient and `ψ` is proper, lsc and
//! prox-bounded. No global Lipschitz constant is needed: the proximal
//! stepsize `γ` and the direction stepsize `τ` are adapted by two entangled
//! backtracking linesearches driven by the forward-backward envelope (FBE).
//!
//! One iteration:
//!
//! 1. pick a candidate `z^k = (1−τ)·z̄^{k−1} + τ·(z^{k−1} + d^k)` where the
//!    direction `d^k` comes from L-BFGS on the fixed-point residual
//!    `r = z − z̄` (capped at `Δ·‖z̄^{k−1} − z^{k−1}‖`);
//! 2. take a forward-backward step `z̄^k = prox_{γψ}(z^k − γ∇φ(z^k))`;
//! 3. if the quadratic upper bound `φ(z̄) ≤ φ(z) + ⟨∇φ(z), z̄−z⟩ +
//!    α/(2γ)‖z̄−z‖²` fails, halve `γ`, reset the L-BFGS memory, rebuild the
//!    direction and retry;
//! 4. stop once `‖(1/γ)(z̄−z) − ∇φ(z̄) + ∇φ(z)‖ ≤ ε` (this vector is a
//!    subgradient of the objective at `z̄`);
//! 5. if the FBE did not decrease enough below the previous accepted value,
//!    halve `τ` and go back to 1.
//!
//! With acceleration disabled the candidate is exactly `z̄^{k−1}` and the
//! method reduces to plain adaptive proximal gradient, iterate for iterate.

use serde::Serialize;

use crate::error::SolverError;
use crate::smallalg::LbfgsMemory;
use crate::vecmath::{add_scaled, dot, has_nan, norm, norm_sq, sub};

type ValueFn<'a> = Box<dyn Fn(&[f64]) -> f64 + Send + Sync + 'a>;
type VectorFn<'a> = Box<dyn Fn(&[f64]) -> Vec<f64> + Send + Sync + 'a>;
type ProxFn<'a> =
    Box<dyn Fn(&[f64], f64) -> Result<(Vec<f64>, f64), SolverError> + Send + Sync + 'a>;

/// Oracle bundle for the unconstrained composite problem.
///
/// The lifetime allows subproblem oracles to borrow an outer problem; owned
/// problems simply use `'static`.
pub struct CompositeProblem<'a> {
    p: usize,
    phi_eval: ValueFn<'a>,
    phi_grad: VectorFn<'a>,
    psi_prox: ProxFn<'a>,
    psi_eval: ValueFn<'a>,
    prox_bound: f64,
}

impl<'a> CompositeProblem<'a> {
    pub fn new(
        p: usize,
        phi_eval: impl Fn(&[f64]) -> f64 + Send + Sync + 'a,
        phi_grad: impl Fn(&[f64]) -> Vec<f64> + Send + Sync + 'a,
        psi_prox: impl Fn(&[f64], f64) -> Result<(Vec<f64>, f64), SolverError> + Send + Sync + 'a,
        psi_eval: impl Fn(&[f64]) -> f64 + Send + Sync + 'a,
    ) -> Self {
        CompositeProblem {
            p,
            phi_eval: Box::new(phi_eval),
            phi_grad: Box::new(phi_grad),
            psi_prox: Box::new(psi_prox),
            psi_eval: Box::new(psi_eval),
            prox_bound: f64::INFINITY,
        }
    }

    pub fn with_prox_bound(mut self, gamma_psi: f64) -> Self {
        assert!(gamma_psi > 0.0);
        self.prox_bound = gamma_psi;
        self
    }

    pub fn dim(&self) -> usize {
        self.p
    }

    pub fn phi(&self, z: &[f64]) -> f64 {
        (self.phi_eval)(z)
    }

    pub fn grad_phi(&self, z: &[f64]) -> Vec<f64> {
        (self.phi_grad)(z)
    }

    pub fn prox_psi(&self, z: &[f64], gamma: f64) -> Result<(Vec<f64>, f64), SolverError> {
        (self.psi_prox)(z, gamma)
    }

    pub fn psi(&self, z: &[f64]) -> f64 {
        (self.psi_eval)(z)
    }

    pub fn prox_bound(&self) -> f64 {
        self.prox_bound
    }
}

/// Direction strategy for the candidate step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Acceleration {
    /// `d = z̄ − z`: plain adaptive proximal gradient.
    None,
    /// L-BFGS on the fixed-point residual with the given memory.
    Lbfgs { memory: usize },
}

/// Tuning knobs. Defaults follow the solver's standard configuration.
#[derive(Debug, Clone)]
pub struct PanocOptions {
    /// Quadratic-bound slack in (0, 1).
    pub alpha: f64,
    /// FBE sufficient-decrease factor in (0, 1).
    pub beta: f64,
    /// Direction-norm cap `Δ` relative to `‖z̄ − z‖`; oversized directions
    /// are rescaled, not rejected.
    pub delta_cap: f64,
    /// Initial stepsize; estimated from a gradient difference when absent.
    pub gamma0: Option<f64>,
    /// Target residual.
    pub eps: f64,
    /// Accepted-iteration cap.
    pub max_iter: usize,
    /// Floor below which γ halvings abort with a stepsize-collapse error.
    pub gamma_min: f64,
    pub acceleration: Acceleration,
}

impl Default for PanocOptions {
    fn default() -> Self {
        PanocOptions {
            alpha: 0.95,
            beta: 0.5,
            delta_cap: 1e3,
            gamma0: None,
            eps: 1e-6,
            max_iter: 10_000_000,
            gamma_min: 1e-15,
            acceleration: Acceleration::Lbfgs { memory: 5 },
        }
    }
}

impl PanocOptions {
    pub fn validate(&self) -> Result<(), SolverError> {
        let ok = self.alpha > 0.0
            && self.alpha < 1.0
            && self.beta > 0.0
            && self.beta < 1.0
            && self.delta_cap >= 0.0
            && self.eps > 0.0
            && self.max_iter > 0
            && self.gamma_min > 0.0
            && self.gamma0.is_none_or(|g| g > 0.0);
        if ok {
            Ok(())
        } else {
            Err(SolverError::InvalidArgument(
                "PanocOptions out of range".into(),
            ))
        }
    }
}

/// Evaluation counters accumulated over one solve.
#[derive(Debug, Clone, Copy, Default, Serialize)]
pub struct PanocCounters {
    pub iterations: usize,
    pub phi_evals: usize,
    pub prox_evals: usize,
    pub gamma_halvings: usize,
    pub tau_halvings: usize,
}

/// How the solve ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PanocExit {
    /// Residual fell below the target.
    Converged,
    /// Iteration cap; the best (smallest-residual) iterate is returned.
    MaxIter,
}

/// Result of a solve: the forward-backward point, its residual, and state.
#[derive(Debug, Clone)]
pub struct PanocOutcome {
    pub z: Vec<f64>,
    pub residual: f64,
    pub exit: PanocExit,
    pub gamma: f64,
    /// `ψ` at the returned point, taken from the prox oracle's paired value.
    pub psi_value: f64,
    pub counters: PanocCounters,
}

/// Per-accepted-iteration diagnostics.
///
/// `fbe` is the forward-backward envelope `Φ_k`; `fb_dist_sq` is
/// `‖z̄^k − z^k‖²`; `phi_z`, `phi_fb` and `lin_term` are the pieces of the
/// quadratic upper bound, stored so invariants can be re-checked offline.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct PanocTraceRow {
    pub k: usize,
    pub gamma: f64,
    pub tau: f64,
    pub fbe: f64,
    pub residual: f64,
    pub fb_dist_sq: f64,
    pub phi_z: f64,
    pub phi_fb: f64,
    pub lin_term: f64,
}

/// Per-accepted-iteration observer: receives the trace row and the
/// forward-backward point.
pub type TraceSink<'s> = &'s mut dyn FnMut(&PanocTraceRow, &[f64]);

/// Forward-backward step `z̄ ∈ prox_{γψ}(z − γ∇φ(z))` with its ψ-value.
pub fn forward_backward(
    problem: &CompositeProblem,
    z: &[f64],
    gamma: f64,
) -> Result<(Vec<f64>, f64), SolverError> {
    let grad = problem.grad_phi(z);
    problem.prox_psi(&add_scaled(z, -gamma, &grad), gamma)
}

/// Forward-backward envelope at `z` given its forward-backward point.
pub fn fbe(problem: &CompositeProblem, z: &[f64], z_fb: &[f64], gamma: f64, psi_fb: f64) -> f64 {
    let grad = problem.grad_phi(z);
    let step = sub(z_fb, z);
    problem.phi(z) + dot(&grad, &step) + psi_fb + norm_sq(&step) / (2.0 * gamma)
}

/// Stepsize bootstrap: `γ0 = 0.95·α / L̂` with `L̂` a forward gradient
/// difference along a deterministic direction; falls back to 1 when the
/// curvature estimate vanishes, and is capped below the prox bound.
pub fn estimate_gamma0(problem: &CompositeProblem, z0: &[f64], alpha: f64) -> f64 {
    let p = z0.len();
    let t = 1e-6 * norm(z0).max(1.0) / (p as f64).sqrt();
    let zp: Vec<f64> = z0.iter().map(|v| v + t).collect();
    let g0 = problem.grad_phi(z0);
    let gp = problem.grad_phi(&zp);
    let l_hat = norm(&sub(&gp, &g0)) / (t * (p as f64).sqrt());
    let gamma = if l_hat > 1e-12 {
        alpha * 0.95 / l_hat
    } else {
        1.0
    };
    if problem.prox_bound().is_finite() {
        gamma.min(0.5 * problem.prox_bound())
    } else {
        gamma
    }
}

/// τ values below this are snapped to zero (pure forward-backward step),
/// which always satisfies the FBE decrease test in exact arithmetic.
const TAU_FLOOR: f64 = 1e-12;

/// Floating-point slack for the two linesearch comparisons. Near a solution
/// both sides differ by less than one ulp of the objective, and a strict
/// comparison would backtrack on rounding noise until the stepsize
/// collapses; the slack is invisible at any meaningful scale.
#[inline]
fn ls_tol(value: f64) -> f64 {
    10.0 * f64::EPSILON * (1.0 + value.abs())
}

struct Accepted {
    z: Vec<f64>,
    z_fb: Vec<f64>,
    residual_vec: Vec<f64>, // r = z − z̄
    fbe: f64,
    gamma: f64,
    fb_dist_sq: f64,
}

/// Runs the inner solver from `z0`.
///
/// Returns the forward-backward point with residual ≤ `opts.eps` on success,
/// or the best iterate seen when the iteration cap is reached. Errors on
/// stepsize collapse (γ under `gamma_min`), NaN from an oracle, or prox
/// failures.
pub fn panoc_solve(
    problem: &CompositeProblem,
    z0: &[f64],
    opts: &PanocOptions,
    mut trace: Option<TraceSink<'_>>,
) -> Result<PanocOutcome, SolverError> {
    opts.validate()?;
    assert_eq!(z0.len(), problem.dim(), "initial point dimension mismatch");

    let mut counters = PanocCounters::default();
    let mut lbfgs = match opts.acceleration {
        Acceleration::Lbfgs { memory } => Some(LbfgsMemory::new(memory)),
        Acceleration::None => None,
    };

    let mut gamma = opts
        .gamma0
        .unwrap_or_else(|| estimate_gamma0(problem, z0, opts.alpha));
    if gamma >= problem.prox_bound() {
        gamma = 0.5 * problem.prox_bound();
    }

    let eval_phi = |z: &[f64], counters: &mut PanocCounters| -> Result<f64, SolverError> {
        counters.phi_evals += 1;
        let v = problem.phi(z);
        if v.is_nan() {
            return Err(SolverError::OracleNan { oracle: "phi" });
        }
        Ok(v)
    };
    let eval_grad = |z: &[f64]| -> Result<Vec<f64>, SolverError> {
        let g = problem.grad_phi(z);
        if has_nan(&g) {
            return Err(SolverError::OracleNan { oracle: "grad_phi" });
        }
        Ok(g)
    };
    let eval_prox = |z: &[f64],
                     gamma: f64,
                     counters: &mut PanocCounters|
     -> Result<(Vec<f64>, f64), SolverError> {
        counters.prox_evals += 1;
        let (p, v) = problem.prox_psi(z, gamma)?;
        if has_nan(&p) || v.is_nan() {
            return Err(SolverError::OracleNan { oracle: "prox_psi" });
        }
        Ok((p, v))
    };

    // Iteration 0: forward-backward from z0, adapting γ in place.
    let mut z = z0.to_vec();
    let mut phi_z = eval_phi(&z, &mut counters)?;
    let mut grad_z = eval_grad(&z)?;
    let (mut z_fb, mut psi_fb, mut phi_fb, mut fb_dist_sq, mut lin_term);
    loop {
        let (fb, psi) = eval_prox(&add_scaled(&z, -gamma, &grad_z), gamma, &mut counters)?;
        let step = sub(&fb, &z);
        let dist_sq = norm_sq(&step);
        let lin = dot(&grad_z, &step);
        let phi_at_fb = eval_phi(&fb, &mut counters)?;
        if phi_at_fb > phi_z + lin + opts.alpha / (2.0 * gamma) * dist_sq + ls_tol(phi_at_fb) {
            gamma *= 0.5;
            counters.gamma_halvings += 1;
            if gamma < opts.gamma_min {
                return Err(SolverError::StepsizeCollapse {
                    gamma,
                    floor: opts.gamma_min,
                });
            }
            continue;
        }
        (z_fb, psi_fb, phi_fb, fb_dist_sq, lin_term) = (fb, psi, phi_at_fb, dist_sq, lin);
        break;
    }
    let mut fbe_val = phi_z + lin_term + psi_fb + fb_dist_sq / (2.0 * gamma);
    let mut grad_fb = eval_grad(&z_fb)?;
    let mut residual = residual_norm(&z_fb, &z, gamma, &grad_fb, &grad_z);
    if residual.is_nan() {
        return Err(SolverError::OracleNan { oracle: "residual" });
    }
    if residual <= opts.eps {
        return Ok(PanocOutcome {
            z: z_fb,
            residual,
            exit: PanocExit::Converged,
            gamma,
            psi_value: psi_fb,
            counters,
        });
    }
    if let Some(cb) = trace.as_deref_mut() {
        cb(
            &PanocTraceRow {
                k: 0,
                gamma,
                tau: 1.0,
                fbe: fbe_val,
                residual,
                fb_dist_sq,
                phi_z,
                phi_fb,
                lin_term,
            },
            &z_fb,
        );
    }

    let mut prev = Accepted {
        residual_vec: sub(&z, &z_fb),
        z,
        z_fb,
        fbe: fbe_val,
        gamma,
        fb_dist_sq,
    };
    let mut best_z = prev.z_fb.clone();
    let mut best_residual = residual;
    let mut best_psi = psi_fb;

    let mut k = 1usize;
    while k < opts.max_iter {
        // Direction from the latest fixed-point residual; the cap Δ‖z̄−z‖
        // rescales rather than rejects.
        let fb_norm_prev = prev.fb_dist_sq.sqrt();
        let mut dir = match &lbfgs {
            Some(mem) => mem.direction(&prev.residual_vec),
            None => sub(&prev.z_fb, &prev.z),
        };
        let dir_norm = norm(&dir);
        let cap = opts.delta_cap * fb_norm_prev;
        if dir_norm > cap && dir_norm > 0.0 {
            let scalef = cap / dir_norm;
            for d in &mut dir {
                *d *= scalef;
            }
        }

        let mut tau = 1.0f64;
        let mut tau_zeroed = false;
        let accepted;
        loop {
            // Candidate point. With acceleration off this is exactly the
            // previous forward-backward point.
            z = if lbfgs.is_none() || tau == 0.0 {
                prev.z_fb.clone()
            } else {
                prev.z_fb
                    .iter()
                    .zip(prev.z.iter().zip(&dir))
                    .map(|(zfb, (zp, d))| (1.0 - tau) * zfb + tau * (zp + d))
                    .collect()
            };
            phi_z = eval_phi(&z, &mut counters)?;
            grad_z = eval_grad(&z)?;
            let (fb, psi) = eval_prox(&add_scaled(&z, -gamma, &grad_z), gamma, &mut counters)?;
            let step = sub(&fb, &z);
            fb_dist_sq = norm_sq(&step);
            lin_term = dot(&grad_z, &step);
            phi_fb = eval_phi(&fb, &mut counters)?;

            // Quadratic upper bound (stepsize linesearch).
            if phi_fb > phi_z + lin_term + opts.alpha / (2.0 * gamma) * fb_dist_sq + ls_tol(phi_fb)
            {
                gamma *= 0.5;
                counters.gamma_halvings += 1;
                if gamma < opts.gamma_min {
                    return Err(SolverError::StepsizeCollapse {
                        gamma,
                        floor: opts.gamma_min,
                    });
                }
                // The L-BFGS model is tied to γ: reset and rebuild the
                // direction (now the plain forward-backward step).
                if let Some(mem) = &mut lbfgs {
                    mem.reset();
                    dir = mem.direction(&prev.residual_vec);
                    let dn = norm(&dir);
                    if dn > cap && dn > 0.0 {
                        let scalef = cap / dn;
                        for d in &mut dir {
                            *d *= scalef;
                        }
                    }
                }
                tau = 1.0;
                tau_zeroed = false;
                continue;
            }

            z_fb = fb;
            psi_fb = psi;
            fbe_val = phi_z + lin_term + psi_fb + fb_dist_sq / (2.0 * gamma);
            grad_fb = eval_grad(&z_fb)?;
            residual = residual_norm(&z_fb, &z, gamma, &grad_fb, &grad_z);
            if residual.is_nan() {
                return Err(SolverError::OracleNan { oracle: "residual" });
            }
            if residual <= opts.eps {
                counters.iterations = k;
                return Ok(PanocOutcome {
                    z: z_fb,
                    residual,
                    exit: PanocExit::Converged,
                    gamma,
                    psi_value: psi_fb,
                    counters,
                });
            }

            // FBE sufficient decrease (direction linesearch). Skipped for
            // plain proximal gradient, where the candidate already is the
            // forward-backward point and the test holds by construction.
            if lbfgs.is_some() {
                let bound = prev.fbe
                    - opts.beta * (1.0 - opts.alpha) / (2.0 * prev.gamma) * prev.fb_dist_sq;
                if fbe_val > bound + ls_tol(fbe_val) {
                    if tau_zeroed {
                        // Exact arithmetic guarantees the test at τ = 0;
                        // accept the forward-backward step regardless of
                        // rounding noise rather than loop forever.
                        accepted = true;
                        break;
                    }
                    tau *= 0.5;
                    counters.tau_halvings += 1;
                    if tau < TAU_FLOOR {
                        tau = 0.0;
                        tau_zeroed = true;
                    }
                    continue;
                }
            }
            accepted = true;
            break;
        }
        debug_assert!(accepted);

        if let Some(cb) = trace.as_deref_mut() {
            cb(
                &PanocTraceRow {
                    k,
                    gamma,
                    tau,
                    fbe: fbe_val,
                    residual,
                    fb_dist_sq,
                    phi_z,
                    phi_fb,
                    lin_term,
                },
                &z_fb,
            );
        }

        let residual_vec = sub(&z, &z_fb);
        if let Some(mem) = &mut lbfgs {
            mem.push(sub(&z, &prev.z), sub(&residual_vec, &prev.residual_vec));
        }
        if residual < best_residual {
            best_residual = residual;
            best_z = z_fb.clone();
            best_psi = psi_fb;
        }
        prev = Accepted {
            z: std::mem::take(&mut z),
            z_fb: std::mem::take(&mut z_fb),
            residual_vec,
            fbe: fbe_val,
            gamma,
            fb_dist_sq,
        };
        k += 1;
    }

    counters.iterations = k;
    Ok(PanocOutcome {
        z: best_z,
        residual: best_residual,
        exit: PanocExit::MaxIter,
        gamma,
        psi_value: best_psi,
        counters,
    })
}

fn residual_norm(z_fb: &[f64], z: &[f64], gamma: f64, grad_fb: &[f64], grad_z: &[f64]) -> f64 {
    let mut acc = 0.0;
    for i in 0..z.len() {
        let r = (z_fb[i] - z[i]) / gamma - grad_fb[i] + grad_z[i];
        acc += r * r;
    }
    acc.sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prox::{CoordRule, SeparableProx};

    fn quadratic(p: usize) -> CompositeProblem<'static> {
        CompositeProblem::new(
            p,
            |z| 0.5 * norm_sq(z),
            |z| z.to_vec(),
            |z, _| Ok((z.to_vec(), 0.0)),
            |_| 0.0,
        )
    }

    #[test]
    fn forward_backward_examples() {
        // gradient step to the origin
        let (fb, _) = forward_backward(&quadratic(1), &[2.0], 1.0).unwrap();
        assert_eq!(fb, vec![0.0]);

        // pure projection
        let box01 = CompositeProblem::new(
            1,
            |_| 0.0,
            |_| vec![0.0],
            |z, _| Ok((vec![z[0].clamp(0.0, 1.0)], 0.0)),
            |z| {
                if (0.0..=1.0).contains(&z[0]) {
                    0.0
                } else {
                    f64::INFINITY
                }
            },
        );
        let (fb, _) = forward_backward(&box01, &[2.0], 0.5).unwrap();
        assert_eq!(fb, vec![1.0]);

        // gradient step then soft threshold
        let l1 = SeparableProx::uniform(CoordRule::Abs { weight: 1.0 }, 1);
        let l1c = l1.clone();
        let comp = CompositeProblem::new(
            1,
            |z| 0.5 * norm_sq(z),
            |z| z.to_vec(),
            move |z, g| l1.prox(z, g),
            move |z| l1c.value(z),
        );
        let (fb, _) = forward_backward(&comp, &[3.0], 1.0).unwrap();
        assert_eq!(fb, vec![0.0]); // prox_{|·|}(0) = 0
    }

    #[test]
    fn fbe_matches_hand_computation() {
        let q = quadratic(1);
        // φ = ½z², z = 2, γ = 1 ⇒ z̄ = 0 and Φ = 2 − 4 + 0 + 2 = 0
        let v = fbe(&q, &[2.0], &[0.0], 1.0, 0.0);
        assert_eq!(v, 0.0);
        // fixed point: Φ = ω(z)
        let v = fbe(&q, &[1.5], &[1.5], 0.7, 0.0);
        assert_eq!(v, q.phi(&[1.5]));
    }

    #[test]
    fn gamma0_estimates() {
        let q = quadratic(2);
        let g = estimate_gamma0(&q, &[1.0, 1.0], 0.95);
        assert!((g - 0.9025).abs() < 1e-9, "{g}");

        let linear = CompositeProblem::new(
            1,
            |z| 3.0 * z[0],
            |_| vec![3.0],
            |z, _| Ok((z.to_vec(), 0.0)),
            |_| 0.0,
        );
        assert_eq!(estimate_gamma0(&linear, &[0.0], 0.95), 1.0);

        let stiff = CompositeProblem::new(
            1,
            |z| 50.0 * z[0] * z[0],
            |z| vec![100.0 * z[0]],
            |z, _| Ok((z.to_vec(), 0.0)),
            |_| 0.0,
        );
        let g = estimate_gamma0(&stiff, &[1.0], 0.95);
        assert!((g - 0.009025).abs() < 1e-9, "{g}");
    }

    #[test]
    fn solves_strongly_convex_smooth() {
        let q = quadratic(2);
        let out = panoc_solve(
            &q,
            &[5.0, -3.0],
            &PanocOptions {
                eps: 1e-9,
                ..Default::default()
            },
            None,
        )
        .unwrap();
        assert_eq!(out.exit, PanocExit::Converged);
        assert!(norm(&out.z) <= 1e-8, "‖z‖ = {}", norm(&out.z));
    }

    #[test]
    fn constrained_minimum_at_boundary() {
        // min ½(z−1)² s.t. z ∈ [2,3]: solution is the boundary point 2.
        let comp = CompositeProblem::new(
            1,
            |z| 0.5 * (z[0] - 1.0) * (z[0] - 1.0),
            |z| vec![z[0] - 1.0],
            |z, _| Ok((vec![z[0].clamp(2.0, 3.0)], 0.0)),
            |z| {
                if (2.0..=3.0).contains(&z[0]) {
                    0.0
                } else {
                    f64::INFINITY
                }
            },
        );
        let out = panoc_solve(&comp, &[0.0], &PanocOptions::default(), None).unwrap();
        assert_eq!(out.exit, PanocExit::Converged);
        assert!((out.z[0] - 2.0).abs() <= 1e-6, "z = {}", out.z[0]);
    }

    #[test]
    fn stepsize_collapse_is_reported() {
        // A sign-flipped "gradient" walks uphill, so the quadratic bound
        // fails at every stepsize and γ is halved to its floor.
        let broken = CompositeProblem::new(
            1,
            |z| 1e10 * z[0],
            |_| vec![-1e10],
            |z, _| Ok((z.to_vec(), 0.0)),
            |_| 0.0,
        );
        let opts = PanocOptions {
            gamma0: Some(1.0),
            ..Default::default()
        };
        let err = panoc_solve(&broken, &[1.0], &opts, None);
        assert!(matches!(err, Err(SolverError::StepsizeCollapse { .. })));
    }

    #[test]
    fn nan_oracle_is_named() {
        let bad = CompositeProblem::new(
            1,
            |_| f64::NAN,
            |_| vec![0.0],
            |z, _| Ok((z.to_vec(), 0.0)),
            |_| 0.0,
        );
        match panoc_solve(&bad, &[1.0], &PanocOptions::default(), None) {
            Err(SolverError::OracleNan { oracle }) => assert_eq!(oracle, "phi"),
            other => panic!("expected OracleNan, got {other:?}"),
        }
    }

    #[test]
    fn max_iter_returns_best_iterate() {
        // Plain proximal gradient contracts geometrically and never lands
        // exactly on the minimizer, so the unreachable tolerance forces the
        // iteration cap.
        let q = quadratic(2);
        let out = panoc_solve(
            &q,
            &[100.0, -50.0],
            &PanocOptions {
                eps: 1e-300,
                max_iter: 5,
                acceleration: Acceleration::None,
                ..Default::default()
            },
            None,
        )
        .unwrap();
        assert_eq!(out.exit, PanocExit::MaxIter);
        assert!(out.residual.is_finite());
    }
}
