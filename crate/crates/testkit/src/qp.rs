//! Brute-force portfolio oracle: support enumeration over capped-simplex
//! quadratic programs.
//!
//! For a fixed support the problem `min ½xᵀQx` over `{1ᵀx = 1, meanᵀx ≥ ϱ,
//! 0 ≤ x ≤ u}` is convex. It is solved by projected gradient over the
//! capped simplex (projection by water-level bisection); the return
//! constraint is handled by bisection on its Lagrange multiplier, which is
//! exact because the dual function of a convex QP in one scalar multiplier
//! is concave with a monotone derivative `ϱ − meanᵀx(η)`.

/// Projection onto `{x : Σx = total, 0 ≤ x ≤ u}` by bisection on the
/// water level λ in `clamp(v − λ, 0, u)`.
pub fn project_capped_simplex(v: &[f64], u: &[f64], total: f64) -> Vec<f64> {
    let n = v.len();
    debug_assert_eq!(u.len(), n);
    debug_assert!(u.iter().sum::<f64>() >= total - 1e-12);
    let mass = |lambda: f64| -> f64 {
        (0..n)
            .map(|i| (v[i] - lambda).clamp(0.0, u[i]))
            .sum::<f64>()
    };
    let mut lo = v.iter().cloned().fold(f64::INFINITY, f64::min)
        - u.iter().cloned().fold(0.0, f64::max)
        - 1.0;
    let mut hi = v.iter().cloned().fold(f64::NEG_INFINITY, f64::max) + 1.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mass(mid) > total {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let lambda = 0.5 * (lo + hi);
    (0..n).map(|i| (v[i] - lambda).clamp(0.0, u[i])).collect()
}

/// Minimizes `½xᵀQx − η·meanᵀx` over the capped simplex by projected
/// gradient. `q` is row-major n×n.
fn projected_gradient_qp(q: &[f64], mean: &[f64], eta: f64, u: &[f64], iters: usize) -> Vec<f64> {
    let n = mean.len();
    let qx = |x: &[f64]| -> Vec<f64> {
        (0..n)
            .map(|i| (0..n).map(|j| q[i * n + j] * x[j]).sum())
            .collect()
    };
    // Lipschitz bound: max row sum of |Q| (≥ spectral norm).
    let lip = (0..n)
        .map(|i| (0..n).map(|j| q[i * n + j].abs()).sum::<f64>())
        .fold(1e-12, f64::max);
    let step = 1.0 / lip;
    let mut x = project_capped_simplex(&vec![1.0 / n as f64; n], u, 1.0);
    for _ in 0..iters {
        let g = qx(&x);
        let v: Vec<f64> = (0..n)
            .map(|i| x[i] - step * (g[i] - eta * mean[i]))
            .collect();
        x = project_capped_simplex(&v, u, 1.0);
    }
    x
}

/// Result of one reduced solve.
#[derive(Debug, Clone)]
pub struct ReducedQpSolution {
    pub x: Vec<f64>,
    /// `½xᵀQx` (no regularizer).
    pub quad_cost: f64,
}

/// Solves `min ½xᵀQx` over `{1ᵀx = 1, meanᵀx ≥ ϱ, 0 ≤ x ≤ u}`; `None` when
/// the feasible set is empty.
pub fn capped_simplex_qp(
    q: &[f64],
    mean: &[f64],
    rho: f64,
    u: &[f64],
    pg_iters: usize,
) -> Option<ReducedQpSolution> {
    let n = mean.len();
    if u.iter().sum::<f64>() < 1.0 - 1e-12 {
        return None;
    }
    // Max achievable return: greedy fill on sorted means.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| mean[j].partial_cmp(&mean[i]).unwrap());
    let mut budget: f64 = 1.0;
    let mut best_ret = 0.0;
    for &i in &order {
        let take = budget.min(u[i]);
        best_ret += take * mean[i];
        budget -= take;
        if budget <= 0.0 {
            break;
        }
    }
    if best_ret < rho - 1e-12 {
        return None;
    }

    let ret = |x: &[f64]| -> f64 { mean.iter().zip(x).map(|(m, xi)| m * xi).sum() };
    let quad = |x: &[f64]| -> f64 {
        0.5 * (0..n)
            .map(|i| (0..n).map(|j| x[i] * q[i * n + j] * x[j]).sum::<f64>())
            .sum::<f64>()
    };

    let x0 = projected_gradient_qp(q, mean, 0.0, u, pg_iters);
    if ret(&x0) >= rho - 1e-9 {
        return Some(ReducedQpSolution {
            quad_cost: quad(&x0),
            x: x0,
        });
    }
    // Return constraint active: bisect its multiplier until meanᵀx ≈ ϱ.
    let mut eta_lo = 0.0;
    let mut eta_hi = 1.0;
    while ret(&projected_gradient_qp(q, mean, eta_hi, u, pg_iters)) < rho && eta_hi < 1e12 {
        eta_hi *= 2.0;
    }
    let mut x_best = None;
    for _ in 0..80 {
        let eta = 0.5 * (eta_lo + eta_hi);
        let x = projected_gradient_qp(q, mean, eta, u, pg_iters);
        if ret(&x) >= rho {
            x_best = Some(x);
            eta_hi = eta;
        } else {
            eta_lo = eta;
        }
    }
    let x = x_best?;
    Some(ReducedQpSolution {
        quad_cost: quad(&x),
        x,
    })
}

/// Outcome of the brute-force support enumeration.
#[derive(Debug, Clone)]
pub struct EnumerationBest {
    /// Best total objective `½xᵀQx + α·|support|`.
    pub objective: f64,
    pub support: Vec<usize>,
    pub x: Vec<f64>,
}

/// Exhaustively enumerates all 2ⁿ support patterns of a (small!) portfolio,
/// solving the reduced convex QP on each feasible support.
pub fn enumerate_l0_portfolio(
    q: &[f64],
    mean: &[f64],
    rho: f64,
    u: &[f64],
    alpha: f64,
    pg_iters: usize,
) -> Option<EnumerationBest> {
    let n = mean.len();
    assert!(n <= 16, "support enumeration is exponential");
    let mut best: Option<EnumerationBest> = None;
    for mask in 1u32..(1 << n) {
        let support: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
        let k = support.len();
        let qs: Vec<f64> = support
            .iter()
            .flat_map(|&i| support.iter().map(move |&j| q[i * n + j]))
            .collect();
        let means: Vec<f64> = support.iter().map(|&i| mean[i]).collect();
        let us: Vec<f64> = support.iter().map(|&i| u[i]).collect();
        if let Some(sol) = capped_simplex_qp(&qs, &means, rho, &us, pg_iters) {
            let objective = sol.quad_cost + alpha * k as f64;
            if best.as_ref().is_none_or(|b| objective < b.objective) {
                let mut x = vec![0.0; n];
                for (slot, &i) in support.iter().enumerate() {
                    x[i] = sol.x[slot];
                }
                best = Some(EnumerationBest {
                    objective,
                    support,
                    x,
                });
            }
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn capped_simplex_projection_is_feasible_and_close() {
        let u = vec![0.6, 0.6, 0.6];
        let p = project_capped_simplex(&[1.0, 0.0, -1.0], &u, 1.0);
        let total: f64 = p.iter().sum();
        assert!((total - 1.0).abs() < 1e-9);
        for (pi, ui) in p.iter().zip(&u) {
            assert!(*pi >= -1e-12 && pi <= ui);
        }
        // the top coordinate should saturate its cap
        assert!((p[0] - 0.6).abs() < 1e-9);
    }

    #[test]
    fn identity_qp_spreads_evenly() {
        // min ½‖x‖² on the simplex is the uniform point.
        let n = 4;
        let q: Vec<f64> = (0..16)
            .map(|i| if i % 5 == 0 { 1.0 } else { 0.0 })
            .collect();
        let sol = capped_simplex_qp(&q, &[0.1; 4], 0.0, &[1.0; 4], 5000).unwrap();
        for xi in &sol.x {
            assert!((xi - 1.0 / n as f64).abs() < 1e-6);
        }
    }

    #[test]
    fn return_constraint_activates() {
        // Two assets, identity Q, mean (0.2, 0.0), ϱ = 0.15 forces 75% into
        // asset 0 even though the unconstrained QP prefers 50/50.
        let q = vec![1.0, 0.0, 0.0, 1.0];
        let sol = capped_simplex_qp(&q, &[0.2, 0.0], 0.15, &[1.0, 1.0], 5000).unwrap();
        assert!((sol.x[0] - 0.75).abs() < 1e-4, "x = {:?}", sol.x);
    }

    #[test]
    fn enumeration_prefers_small_supports_under_heavy_alpha() {
        let q = vec![1.0, 0.0, 0.0, 1.0];
        let best = enumerate_l0_portfolio(&q, &[0.1, 0.1], 0.0, &[1.0, 1.0], 10.0, 4000).unwrap();
        assert_eq!(best.support.len(), 1);
    }
}
