//! Reference solvers: plain proximal-gradient loops written directly from
//! their textbook statements, used as independent baselines.

use slalom::panoc::CompositeProblem;
use slalom::SolverError;

/// Fixed-step proximal gradient `z ← prox_{γψ}(z − γ∇φ(z))` for `iters`
/// iterations. Returns the final iterate.
pub fn fixed_step_prox_gradient(
    problem: &CompositeProblem,
    z0: &[f64],
    gamma: f64,
    iters: usize,
) -> Result<Vec<f64>, SolverError> {
    let mut z = z0.to_vec();
    for _ in 0..iters {
        let grad = problem.grad_phi(&z);
        let forward: Vec<f64> = z
            .iter()
            .zip(&grad)
            .map(|(zi, gi)| zi - gamma * gi)
            .collect();
        let (next, _) = problem.prox_psi(&forward, gamma)?;
        z = next;
    }
    Ok(z)
}

/// Plain *adaptive* proximal gradient: the same quadratic-bound stepsize
/// test as the accelerated solver, but the next iterate is always the
/// forward-backward point. Records every accepted forward-backward point
/// until the stationarity residual reaches `eps`.
#[allow(clippy::too_many_arguments)]
pub fn adaptive_prox_gradient(
    problem: &CompositeProblem,
    z0: &[f64],
    gamma0: f64,
    alpha: f64,
    eps: f64,
    max_iter: usize,
) -> Result<(Vec<Vec<f64>>, Vec<f64>), SolverError> {
    let mut gamma = gamma0;
    let mut z = z0.to_vec();
    let mut accepted: Vec<Vec<f64>> = Vec::new();
    for _ in 0..max_iter {
        let phi_z = problem.phi(&z);
        let grad_z = problem.grad_phi(&z);
        let (z_fb, phi_fb, step_sq, lin);
        loop {
            let forward: Vec<f64> = z
                .iter()
                .zip(&grad_z)
                .map(|(zi, gi)| zi - gamma * gi)
                .collect();
            let (fb, _) = problem.prox_psi(&forward, gamma)?;
            let step: Vec<f64> = fb.iter().zip(&z).map(|(a, b)| a - b).collect();
            let dist_sq: f64 = step.iter().map(|v| v * v).sum();
            let linear: f64 = grad_z.iter().zip(&step).map(|(a, b)| a * b).sum();
            let value = problem.phi(&fb);
            // same floating-point slack as the solver under comparison
            let tol = 10.0 * f64::EPSILON * (1.0 + value.abs());
            if value > phi_z + linear + alpha / (2.0 * gamma) * dist_sq + tol {
                gamma *= 0.5;
                continue;
            }
            (z_fb, phi_fb, step_sq, lin) = (fb, value, dist_sq, linear);
            break;
        }
        let _ = (phi_fb, step_sq, lin);
        let grad_fb = problem.grad_phi(&z_fb);
        let mut res_sq = 0.0;
        for i in 0..z.len() {
            let r = (z_fb[i] - z[i]) / gamma - grad_fb[i] + grad_z[i];
            res_sq += r * r;
        }
        accepted.push(z_fb.clone());
        if res_sq.sqrt() <= eps {
            return Ok((accepted, z_fb));
        }
        z = z_fb;
    }
    let last = accepted.last().cloned().unwrap_or(z);
    Ok((accepted, last))
}
