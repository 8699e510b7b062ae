//! Small dense linear algebra for the solver stack.
//!
//! Three pieces live here: a one-sided Jacobi SVD for small dense matrices
//! (it feeds the spectral proximal operators), a numerical rank count, and
//! the L-BFGS two-loop recursion with the reset semantics the inner solver
//! relies on.

use crate::error::SolverError;
use crate::mat::Mat;
use crate::vecmath::{dot, norm};

/// Relative off-diagonal tolerance for Jacobi convergence.
const JACOBI_TOL: f64 = 1e-14;
/// Maximum number of Jacobi sweeps before giving up.
const MAX_SWEEPS: usize = 30;
/// Pairs with `⟨Δz, Δr⟩ ≤ eps·‖Δz‖·‖Δr‖` are skipped (Powell-style).
pub const CURVATURE_EPS: f64 = 1e-12;

/// Economy-size SVD `A = U diag(sigma) Vᵀ` with `r = min(N, M)`.
///
/// `U` is N×r and `V` is M×r, both column-orthonormal; `sigma` is
/// nonnegative and sorted nonincreasing.
#[derive(Debug, Clone)]
pub struct SvdResult {
    pub u: Mat,
    pub sigma: Vec<f64>,
    pub v: Mat,
}

impl SvdResult {
    /// Recomposes `U diag(sigma') Vᵀ` with modified singular values.
    pub fn recompose(&self, sigma: &[f64]) -> Mat {
        let (n, m, r) = (self.u.rows(), self.v.rows(), sigma.len());
        assert_eq!(r, self.sigma.len());
        Mat::from_fn(n, m, |i, j| {
            (0..r)
                .map(|k| self.u.get(i, k) * sigma[k] * self.v.get(j, k))
                .sum()
        })
    }
}

/// One-sided Jacobi SVD for small dense matrices (N, M ≤ 512).
///
/// Columns of the working copy are rotated pairwise until every Gram
/// cross-product is below `1e-14` relative to the column norms; singular
/// values are the final column norms. Exactly zero columns are replaced by
/// an orthonormal completion so `U` stays column-orthonormal even for
/// rank-deficient input.
pub fn svd_dense(a: &Mat) -> Result<SvdResult, SolverError> {
    let (n, m) = (a.rows(), a.cols());
    assert!(
        n <= 512 && m <= 512,
        "svd_dense is meant for desk-scale matrices"
    );
    if n < m {
        // Work on the transpose so columns live in the taller space.
        let t = svd_dense(&a.transpose())?;
        return Ok(SvdResult {
            u: t.v,
            sigma: t.sigma,
            v: t.u,
        });
    }

    // Column-major working copies: cols[j] is the j-th column of A.
    let mut cols: Vec<Vec<f64>> = (0..m)
        .map(|j| (0..n).map(|i| a.get(i, j)).collect())
        .collect();
    let mut vcols: Vec<Vec<f64>> = (0..m)
        .map(|j| (0..m).map(|i| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();

    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..m.saturating_sub(1) {
            for q in p + 1..m {
                let app = dot(&cols[p], &cols[p]);
                let aqq = dot(&cols[q], &cols[q]);
                let apq = dot(&cols[p], &cols[q]);
                if apq.abs() <= JACOBI_TOL * (app * aqq).sqrt() {
                    continue;
                }
                rotated = true;
                // Jacobi rotation zeroing the (p, q) Gram entry.
                let zeta = (aqq - app) / (2.0 * apq);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for i in 0..n {
                    let vp = cols[p][i];
                    let vq = cols[q][i];
                    cols[p][i] = c * vp - s * vq;
                    cols[q][i] = s * vp + c * vq;
                }
                for i in 0..m {
                    let vp = vcols[p][i];
                    let vq = vcols[q][i];
                    vcols[p][i] = c * vp - s * vq;
                    vcols[q][i] = s * vp + c * vq;
                }
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged && m > 1 {
        return Err(SolverError::SvdNonConvergence { sweeps: MAX_SWEEPS });
    }

    // Singular values are the column norms, sorted nonincreasing.
    let mut order: Vec<usize> = (0..m).collect();
    let norms: Vec<f64> = cols.iter().map(|c| norm(c)).collect();
    order.sort_by(|&i, &j| norms[j].partial_cmp(&norms[i]).unwrap());

    let r = n.min(m); // == m here since n >= m
    let mut u = Mat::zeros(n, r);
    let mut v = Mat::zeros(m, r);
    let mut sigma = vec![0.0; r];
    let mut placed: Vec<Vec<f64>> = Vec::with_capacity(r);
    for (k, &j) in order.iter().take(r).enumerate() {
        sigma[k] = norms[j];
        let ucol: Vec<f64> = if norms[j] > 0.0 {
            cols[j].iter().map(|x| x / norms[j]).collect()
        } else {
            orthonormal_completion(n, &placed)
        };
        for i in 0..n {
            u.set(i, k, ucol[i]);
        }
        placed.push(ucol);
        for i in 0..m {
            v.set(i, k, vcols[j][i]);
        }
    }
    Ok(SvdResult { u, sigma, v })
}

/// Unit vector orthogonal to everything in `basis`, built by projecting
/// standard basis vectors; the candidate with the largest residual wins.
fn orthonormal_completion(n: usize, basis: &[Vec<f64>]) -> Vec<f64> {
    let mut best: Option<(f64, Vec<f64>)> = None;
    for e in 0..n {
        let mut w = vec![0.0; n];
        w[e] = 1.0;
        for b in basis {
            let proj = dot(&w, b);
            for i in 0..n {
                w[i] -= proj * b[i];
            }
        }
        let nw = norm(&w);
        if best.as_ref().is_none_or(|(bn, _)| nw > *bn) {
            best = Some((nw, w));
        }
        if nw > 0.9 {
            break;
        }
    }
    let (nw, mut w) = best.expect("n > 0");
    assert!(nw > 0.0, "no orthogonal completion exists");
    for x in &mut w {
        *x /= nw;
    }
    w
}

/// Counts singular values above `max(N, M) · ε_machine · σ₁`.
///
/// The zero matrix has rank 0 by convention (its threshold is 0 and no
/// singular value exceeds it).
pub fn numerical_rank(sigma: &[f64], dims: (usize, usize)) -> usize {
    if sigma.is_empty() {
        return 0;
    }
    let threshold = dims.0.max(dims.1) as f64 * f64::EPSILON * sigma[0];
    sigma.iter().filter(|&&s| s > threshold).count()
}

/// Limited-memory quasi-Newton state: a ring buffer of `(Δz, Δr)` pairs.
///
/// The residual differences come from `r^k := z^k − z̄^k`, the fixed-point
/// residual of the inner solver, not from gradients. Pairs failing the
/// curvature condition are skipped rather than stored.
#[derive(Debug, Clone)]
pub struct LbfgsMemory {
    capacity: usize,
    pairs: std::collections::VecDeque<LbfgsPair>,
}

#[derive(Debug, Clone)]
struct LbfgsPair {
    dz: Vec<f64>,
    dr: Vec<f64>,
    rho: f64, // 1 / ⟨dz, dr⟩
}

impl LbfgsMemory {
    pub fn new(capacity: usize) -> Self {
        assert!(capacity > 0, "L-BFGS memory capacity must be positive");
        LbfgsMemory {
            capacity,
            pairs: std::collections::VecDeque::with_capacity(capacity),
        }
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Appends a pair if it passes the curvature test, evicting the oldest
    /// pair beyond capacity. Returns whether the pair was stored.
    pub fn push(&mut self, dz: Vec<f64>, dr: Vec<f64>) -> bool {
        let sy = dot(&dz, &dr);
        if sy <= CURVATURE_EPS * norm(&dz) * norm(&dr) || sy == 0.0 {
            return false;
        }
        if self.pairs.len() == self.capacity {
            self.pairs.pop_front();
        }
        self.pairs.push_back(LbfgsPair {
            dz,
            dr,
            rho: 1.0 / sy,
        });
        true
    }

    /// Empties the buffer. The next direction falls back to `−r`.
    pub fn reset(&mut self) {
        self.pairs.clear();
    }

    /// Two-loop recursion returning `−H·r`. With an empty memory this is
    /// `−r`; otherwise the initial Hessian guess is scaled by
    /// `⟨Δz, Δr⟩ / ⟨Δr, Δr⟩` of the newest pair.
    pub fn direction(&self, r: &[f64]) -> Vec<f64> {
        let mut q: Vec<f64> = r.to_vec();
        if self.pairs.is_empty() {
            for x in &mut q {
                *x = -*x;
            }
            return q;
        }
        let k = self.pairs.len();
        let mut alphas = vec![0.0; k];
        for (idx, pair) in self.pairs.iter().enumerate().rev() {
            let alpha = pair.rho * dot(&pair.dz, &q);
            alphas[idx] = alpha;
            for (qi, yi) in q.iter_mut().zip(&pair.dr) {
                *qi -= alpha * yi;
            }
        }
        let newest = self.pairs.back().unwrap();
        let scale = dot(&newest.dz, &newest.dr) / dot(&newest.dr, &newest.dr);
        for qi in &mut q {
            *qi *= scale;
        }
        for (idx, pair) in self.pairs.iter().enumerate() {
            let beta = pair.rho * dot(&pair.dr, &q);
            for (qi, si) in q.iter_mut().zip(&pair.dz) {
                *qi += (alphas[idx] - beta) * si;
            }
        }
        for x in &mut q {
            *x = -*x;
        }
        q
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SplitMix64;

    fn svd_residuals(a: &Mat) -> (f64, f64, f64) {
        let svd = svd_dense(a).unwrap();
        let recon = svd.recompose(&svd.sigma);
        let mut diff = 0.0;
        for i in 0..a.rows() {
            for j in 0..a.cols() {
                let d = recon.get(i, j) - a.get(i, j);
                diff += d * d;
            }
        }
        let r = svd.sigma.len();
        let mut utu = 0.0;
        let mut vtv = 0.0;
        for i in 0..r {
            for j in 0..r {
                let mut su = 0.0;
                for k in 0..a.rows() {
                    su += svd.u.get(k, i) * svd.u.get(k, j);
                }
                let mut sv = 0.0;
                for k in 0..a.cols() {
                    sv += svd.v.get(k, i) * svd.v.get(k, j);
                }
                let id = if i == j { 1.0 } else { 0.0 };
                utu += (su - id) * (su - id);
                vtv += (sv - id) * (sv - id);
            }
        }
        (diff.sqrt(), utu.sqrt(), vtv.sqrt())
    }

    #[test]
    fn identity_has_unit_singular_values() {
        let svd = svd_dense(&Mat::identity(2)).unwrap();
        assert_eq!(svd.sigma, vec![1.0, 1.0]);
    }

    #[test]
    fn diagonal_signs_and_sorting() {
        let a = Mat::from_vec(2, 2, vec![3.0, 0.0, 0.0, -4.0]);
        let svd = svd_dense(&a).unwrap();
        assert!((svd.sigma[0] - 4.0).abs() < 1e-12);
        assert!((svd.sigma[1] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn zero_matrix_keeps_orthonormal_factors() {
        let a = Mat::zeros(3, 2);
        let (recon, utu, vtv) = svd_residuals(&a);
        assert!(recon <= 1e-12 && utu <= 1e-12 && vtv <= 1e-12);
        let svd = svd_dense(&a).unwrap();
        assert_eq!(svd.sigma, vec![0.0, 0.0]);
    }

    #[test]
    fn random_matrices_reconstruct() {
        let mut rng = SplitMix64::new(2024);
        for &(n, m) in &[(10usize, 10usize), (20, 20), (10, 5), (5, 10)] {
            for _ in 0..10 {
                let a = Mat::from_fn(n, m, |_, _| rng.next_gaussian());
                let scale = a.frob_norm().max(1.0);
                let (recon, utu, vtv) = svd_residuals(&a);
                assert!(recon <= 1e-10 * scale, "recon {recon} for {n}x{m}");
                assert!(utu <= 1e-10, "UtU {utu}");
                assert!(vtv <= 1e-10, "VtV {vtv}");
            }
        }
    }

    #[test]
    fn rank_counts() {
        assert_eq!(numerical_rank(&[0.0, 0.0], (5, 5)), 0);
        assert_eq!(numerical_rank(&[1.0, 1e-20], (10, 10)), 1);
        assert_eq!(numerical_rank(&[2.0, 1.0, 0.5], (3, 3)), 3);
    }

    #[test]
    fn rank_of_low_rank_product() {
        // X is 10x5 generic, so X Xᵀ has rank exactly 5. Cross-checked by
        // counting positive eigenvalues of the 5x5 Gram matrix XᵀX with an
        // independent Jacobi eigensolver.
        let mut rng = SplitMix64::new(99);
        let x = Mat::from_fn(10, 5, |_, _| rng.next_gaussian());
        let b = x.matmul(&x.transpose());
        let svd = svd_dense(&b).unwrap();
        assert_eq!(numerical_rank(&svd.sigma, (10, 10)), 5);

        let gram = x.transpose().matmul(&x);
        let eigs = slalom_testkit::eigen::jacobi_eigenvalues(gram.as_slice(), 5);
        let tol = 10.0 * f64::EPSILON * eigs[0].abs().max(1.0);
        assert_eq!(eigs.iter().filter(|&&e| e > tol).count(), 5);
    }

    #[test]
    fn empty_memory_is_identity() {
        let mem = LbfgsMemory::new(5);
        assert_eq!(mem.direction(&[1.0, 2.0]), vec![-1.0, -2.0]);
    }

    #[test]
    fn single_pair_hand_evaluated() {
        // With the single pair (e1, e1) the two-loop recursion maps e1 to e1,
        // so the direction is exactly -e1.
        let mut mem = LbfgsMemory::new(5);
        assert!(mem.push(vec![1.0, 0.0, 0.0], vec![1.0, 0.0, 0.0]));
        let d = mem.direction(&[1.0, 0.0, 0.0]);
        assert_eq!(d, vec![-1.0, 0.0, 0.0]);
    }

    #[test]
    fn curvature_skip_and_eviction() {
        let mut mem = LbfgsMemory::new(5);
        assert!(!mem.push(vec![1.0, 0.0], vec![0.0, 1.0])); // ⟨dz, dr⟩ = 0
        assert_eq!(mem.len(), 0);
        for i in 0..6 {
            let t = 1.0 + i as f64;
            assert!(mem.push(vec![t, 0.0], vec![t, 0.0]));
        }
        assert_eq!(mem.len(), 5);
        // Oldest pair (t = 1) evicted: scaling comes from the newest anyway.
        mem.reset();
        assert!(mem.is_empty());
        assert_eq!(mem.direction(&[2.0, 0.0]), vec![-2.0, 0.0]);
    }

    #[test]
    fn descent_direction_on_quadratic() {
        // Memory built from gradient-descent steps on φ(z) = ½ zᵀ diag(1,10) z
        // must keep ⟨d, r⟩ < 0 (descent-compatible).
        let grad = |z: &[f64]| vec![z[0], 10.0 * z[1]];
        let mut mem = LbfgsMemory::new(5);
        let mut z = vec![5.0, -3.0];
        let mut g = grad(&z);
        for _ in 0..8 {
            let step = 0.05;
            let zn: Vec<f64> = z.iter().zip(&g).map(|(zi, gi)| zi - step * gi).collect();
            let gn = grad(&zn);
            let dz: Vec<f64> = zn.iter().zip(&z).map(|(a, b)| a - b).collect();
            let dg: Vec<f64> = gn.iter().zip(&g).map(|(a, b)| a - b).collect();
            mem.push(dz, dg);
            z = zn;
            g = gn;
            let d = mem.direction(&g);
            assert!(dot(&d, &g) < 0.0, "not a descent direction");
        }
    }
}
