//! Separable proximal operators, scalar rules and their vector lifts.
//!
//! Each rule minimizes `γ·g(z) + ½(z − x)²` per coordinate. Ties between a
//! zero and a nonzero candidate are broken toward zero.

use crate::error::SolverError;

const ROOT_MAX_ITER: usize = 100;

/// Soft threshold: prox of `γ‖·‖₁`.
pub fn prox_l1(x: &[f64], gamma: f64) -> Vec<f64> {
    debug_assert!(gamma > 0.0);
    x.iter().map(|&xi| soft_threshold(xi, gamma)).collect()
}

#[inline]
pub fn soft_threshold(x: f64, t: f64) -> f64 {
    x.signum() * (x.abs() - t).max(0.0)
}

/// Hard threshold: prox of `γσ‖·‖₀` with threshold `√(2γσ)`.
///
/// At exact equality `|x| = √(2γσ)` both candidates attain the same
/// objective; the sparser point 0 is returned.
pub fn prox_l0(x: &[f64], gamma: f64, sigma: f64) -> Vec<f64> {
    debug_assert!(gamma > 0.0 && sigma >= 0.0);
    let threshold = (2.0 * gamma * sigma).sqrt();
    x.iter()
        .map(|&xi| if xi.abs() > threshold { xi } else { 0.0 })
        .collect()
}

/// Exact prox of `α‖·‖₀ + ι_[lo,hi]`, requiring `lo ≤ 0 ≤ hi` componentwise.
///
/// Two candidates per coordinate: zero (cost `xᵢ²/2`) and the clamped point
/// (cost `γα·[z≠0] + (z−xᵢ)²/2`). The cheaper wins, ties go to zero. A box
/// excluding the origin would need a third candidate and is rejected.
pub fn prox_l0_box(
    x: &[f64],
    gamma: f64,
    alpha: f64,
    lo: &[f64],
    hi: &[f64],
) -> Result<Vec<f64>, SolverError> {
    debug_assert!(gamma > 0.0 && alpha >= 0.0);
    if x.len() != lo.len() || x.len() != hi.len() {
        return Err(SolverError::InvalidArgument(
            "prox_l0_box bound dimensions do not match the input".into(),
        ));
    }
    let mut out = Vec::with_capacity(x.len());
    for i in 0..x.len() {
        if !(lo[i] <= 0.0 && 0.0 <= hi[i]) {
            return Err(SolverError::InvalidArgument(format!(
                "prox_l0_box requires 0 ∈ [lo, hi]; coordinate {i} has [{}, {}]",
                lo[i], hi[i]
            )));
        }
        let xi = x[i];
        let clamped = xi.clamp(lo[i], hi[i]);
        let cost_zero = 0.5 * xi * xi;
        let cost_clamped = if clamped != 0.0 { gamma * alpha } else { 0.0 }
            + 0.5 * (clamped - xi) * (clamped - xi);
        out.push(if cost_clamped < cost_zero {
            clamped
        } else {
            0.0
        });
    }
    Ok(out)
}

/// Prox of `γα‖·‖₁ + ι_[lo,hi]`: soft threshold, then clamp.
///
/// The scalar objective is convex, so projecting the unconstrained minimizer
/// onto the interval is exact.
pub fn prox_l1_box(x: &[f64], gamma: f64, alpha: f64, lo: &[f64], hi: &[f64]) -> Vec<f64> {
    debug_assert!(gamma > 0.0 && alpha >= 0.0);
    x.iter()
        .enumerate()
        .map(|(i, &xi)| soft_threshold(xi, gamma * alpha).clamp(lo[i], hi[i]))
        .collect()
}

/// Prox of `γ|·|^p` for `p ∈ (0, 1)`, computed per coordinate.
///
/// For `x > 0` the stationarity map `h(z) = z + γp·z^{p−1} − x` attains its
/// minimum at `z* = (γp(1−p))^{1/(2−p)}`. If `h` has no positive root the
/// answer is 0; otherwise the root `z⁺ ≥ z*` is located by safeguarded
/// Newton/bisection and compared against the zero candidate. Ties go to 0.
pub fn prox_lp_p(x: &[f64], gamma: f64, p: f64) -> Result<Vec<f64>, SolverError> {
    debug_assert!(gamma > 0.0 && 0.0 < p && p < 1.0);
    x.iter().map(|&xi| prox_lp_scalar(xi, gamma, p)).collect()
}

/// Prox of `γα|·|^p + ι_[lo,hi]` with `lo ≤ 0 ≤ hi`.
///
/// The candidate set of the unconstrained problem is `{0, z⁺}`; clamping the
/// nonzero candidate into the box and comparing objectives *after* clamping
/// keeps the composition exact (the constrained scalar objective has no other
/// local minimizer inside the box).
pub fn prox_lp_p_box(
    x: &[f64],
    gamma: f64,
    alpha: f64,
    p: f64,
    lo: &[f64],
    hi: &[f64],
) -> Result<Vec<f64>, SolverError> {
    debug_assert!(gamma > 0.0 && alpha >= 0.0 && 0.0 < p && p < 1.0);
    let mut out = Vec::with_capacity(x.len());
    for i in 0..x.len() {
        if !(lo[i] <= 0.0 && 0.0 <= hi[i]) {
            return Err(SolverError::InvalidArgument(format!(
                "prox_lp_p_box requires 0 ∈ [lo, hi]; coordinate {i} has [{}, {}]",
                lo[i], hi[i]
            )));
        }
        let xi = x[i];
        let (ax, sign, cap) = if xi >= 0.0 {
            (xi, 1.0, hi[i])
        } else {
            (-xi, -1.0, -lo[i])
        };
        let geff = gamma * alpha;
        let z = match positive_branch_root(ax, geff, p)? {
            Some(root) => {
                let zc = root.min(cap);
                let cost_zero = 0.5 * ax * ax;
                let cost_nz = geff * zc.powf(p) + 0.5 * (zc - ax) * (zc - ax);
                if cost_nz < cost_zero {
                    zc
                } else {
                    0.0
                }
            }
            None => 0.0,
        };
        out.push(sign * z);
    }
    Ok(out)
}

fn prox_lp_scalar(x: f64, gamma: f64, p: f64) -> Result<f64, SolverError> {
    if x == 0.0 {
        return Ok(0.0);
    }
    let (ax, sign) = (x.abs(), x.signum());
    match positive_branch_root(ax, gamma, p)? {
        Some(z) => {
            let cost_zero = 0.5 * ax * ax;
            let cost_nz = gamma * z.powf(p) + 0.5 * (z - ax) * (z - ax);
            Ok(if cost_nz < cost_zero { sign * z } else { 0.0 })
        }
        None => Ok(0.0),
    }
}

/// Largest root of `h(z) = z + γp·z^{p−1} − a` on `(0, a]`, or `None` when
/// no root exists (then 0 is the global minimizer).
fn positive_branch_root(a: f64, gamma: f64, p: f64) -> Result<Option<f64>, SolverError> {
    if a <= 0.0 || gamma == 0.0 {
        // gamma == 0 degenerates to the identity; caller treats a as the root.
        return Ok(if gamma == 0.0 && a > 0.0 {
            Some(a)
        } else {
            None
        });
    }
    let h = |z: f64| z + gamma * p * z.powf(p - 1.0) - a;
    let zstar = (gamma * p * (1.0 - p)).powf(1.0 / (2.0 - p));
    if zstar >= a || h(zstar) > 0.0 {
        return Ok(None);
    }
    // h(zstar) ≤ 0 and h(a) = γp·a^{p−1} > 0 bracket the root.
    let (mut lo, mut hi) = (zstar, a);
    let mut z = 0.5 * (lo + hi);
    for _ in 0..ROOT_MAX_ITER {
        let hz = h(z);
        if hz.abs() <= 1e-14 * a.max(1.0) {
            return Ok(Some(z));
        }
        if hz > 0.0 {
            hi = z;
        } else {
            lo = z;
        }
        if hi - lo <= f64::EPSILON * hi {
            return Ok(Some(0.5 * (lo + hi)));
        }
        let dh = 1.0 + gamma * p * (p - 1.0) * z.powf(p - 2.0);
        let newton = z - hz / dh;
        z = if dh > 0.0 && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
    }
    Err(SolverError::RootSolveFailed {
        max_iter: ROOT_MAX_ITER,
    })
}
