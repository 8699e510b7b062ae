//! Euclidean distance matrix completion with low-rank regularizers.
//!
//! Ground truth: `N` latent points in `R^ℓ` with Gram matrix `B = XXᵀ`. The
//! observations are squared distances `Δᵢⱼ = Bᵢᵢ + Bⱼⱼ − Bᵢⱼ − Bⱼᵢ` on a
//! sampled pair set `Ω`. The optimization variable is the full `N×N` matrix
//! `B` (flattened row-major); the cost is purely the spectral regularizer
//! (`rank`, nuclear norm, or Schatten p-quasi-norm) and all structure lives
//! in the constraints:
//!
//! * one residual per observed pair, in sample order;
//! * one symmetry residual `Bᵢⱼ − Bⱼᵢ` per `j < i`, row-major.
//!
//! `D = {0}^m`. The constraint map is sparse, so Jacobian-transpose products
//! are assembled entrywise with no dense Jacobian.

use crate::mat::Mat;
use crate::problem::Problem;
use crate::prox::sets::ConstraintSet;
use crate::prox::spectral::{spectral_prox, spectral_value, SpectralReg};
use crate::rng::SplitMix64;

/// One matrix-completion instance.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixCompletionInstance {
    pub n_points: usize,
    /// Latent dimension ℓ of the generating points.
    pub ell: usize,
    /// Observed pairs (i, j), i < j, in sample order.
    pub omega: Vec<(usize, usize)>,
    /// Observed squared distances, aligned with `omega`.
    pub delta: Vec<f64>,
    pub seed: u64,
    /// Generating points, kept for ground-truth checks (N×ℓ).
    pub latent: Mat,
}

impl MatrixCompletionInstance {
    /// Number of symmetry constraints `N(N−1)/2`.
    pub fn m_symmetry(&self) -> usize {
        self.n_points * (self.n_points - 1) / 2
    }

    /// Number of observation constraints.
    pub fn m_observations(&self) -> usize {
        self.omega.len()
    }

    /// Total constraint dimension.
    pub fn m_total(&self) -> usize {
        self.m_observations() + self.m_symmetry()
    }

    /// The feasible ground-truth Gram matrix `X Xᵀ`.
    pub fn ground_truth(&self) -> Mat {
        self.latent.matmul(&self.latent.transpose())
    }
}

/// Generates an instance: `X` is N×ℓ standard Gaussian (row-major sampling
/// order), `Δ` the pairwise squared distances, and `Ω` a uniform sample of
/// `⌊(N² − m_s)/3⌋` distinct unordered off-diagonal pairs.
pub fn gen_matrix_completion(seed: u64, n_points: usize, ell: usize) -> MatrixCompletionInstance {
    assert!(n_points >= 2 && ell >= 1);
    let mut rng = SplitMix64::new(seed);
    let latent = Mat::from_fn(n_points, ell, |_, _| rng.next_gaussian());

    let m_s = n_points * (n_points - 1) / 2;
    let m_o = (n_points * n_points - m_s) / 3;
    assert!(m_o <= m_s, "observation budget exceeds distinct pairs");

    // Partial Fisher-Yates over all unordered pairs in lexicographic order.
    let mut pairs: Vec<(usize, usize)> = (0..n_points)
        .flat_map(|i| ((i + 1)..n_points).map(move |j| (i, j)))
        .collect();
    for t in 0..m_o {
        let pick = t + rng.next_index(pairs.len() - t);
        pairs.swap(t, pick);
    }
    pairs.truncate(m_o);

    let dist_sq = |i: usize, j: usize| -> f64 {
        (0..ell)
            .map(|k| {
                let d = latent.get(i, k) - latent.get(j, k);
                d * d
            })
            .sum()
    };
    let delta = pairs.iter().map(|&(i, j)| dist_sq(i, j)).collect();

    MatrixCompletionInstance {
        n_points,
        ell,
        omega: pairs,
        delta,
        seed,
        latent,
    }
}

/// Spectral regularizer choice.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MatrixReg {
    Rank,
    Nuclear,
    Schatten { p: f64 },
}

impl MatrixReg {
    fn spectral(self) -> SpectralReg {
        match self {
            MatrixReg::Rank => SpectralReg::Rank { weight: 1.0 },
            MatrixReg::Nuclear => SpectralReg::Nuclear { weight: 1.0 },
            MatrixReg::Schatten { p } => SpectralReg::Schatten { weight: 1.0, p },
        }
    }
}

/// Builds the constrained composite problem over the flattened `N×N` matrix.
pub fn matrix_completion_problem(inst: &MatrixCompletionInstance, reg: MatrixReg) -> Problem {
    let np = inst.n_points;
    let n = np * np;
    let m = inst.m_total();
    let omega = inst.omega.clone();
    let omega_j = inst.omega.clone();
    let delta = inst.delta.clone();
    let spectral = reg.spectral();

    let c_eval = move |b: &[f64]| -> Vec<f64> {
        let mut out = Vec::with_capacity(m);
        for (k, &(i, j)) in omega.iter().enumerate() {
            out.push(b[i * np + i] + b[j * np + j] - b[i * np + j] - b[j * np + i] - delta[k]);
        }
        for i in 0..np {
            for j in 0..i {
                out.push(b[i * np + j] - b[j * np + i]);
            }
        }
        out
    };
    let c_jtv = move |_b: &[f64], v: &[f64]| -> Vec<f64> {
        let mut out = vec![0.0; n];
        for (k, &(i, j)) in omega_j.iter().enumerate() {
            let w = v[k];
            out[i * np + i] += w;
            out[j * np + j] += w;
            out[i * np + j] -= w;
            out[j * np + i] -= w;
        }
        let mut idx = omega_j.len();
        for i in 0..np {
            for j in 0..i {
                let w = v[idx];
                out[i * np + j] += w;
                out[j * np + i] -= w;
                idx += 1;
            }
        }
        out
    };

    Problem::builder(n, m)
        .nonsmooth(
            move |b, gamma| {
                let mat = Mat::from_vec(np, np, b.to_vec());
                let (p, value) = spectral_prox(&mat, spectral, gamma)?;
                Ok((p.as_slice().to_vec(), value))
            },
            move |b| {
                let mat = Mat::from_vec(np, np, b.to_vec());
                spectral_value(&mat, spectral).unwrap_or(f64::INFINITY)
            },
        )
        .constraints(c_eval, c_jtv)
        .set(ConstraintSet::zero(m))
        .build()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::smallalg::{numerical_rank, svd_dense};
    use crate::vecmath::norm;

    #[test]
    fn observation_counts() {
        let inst = gen_matrix_completion(1, 10, 5);
        assert_eq!(inst.m_symmetry(), 45);
        assert_eq!(inst.m_observations(), 18); // ⌊(100 − 45)/3⌋
        assert_eq!(inst.m_total(), 63);
        for &(i, j) in &inst.omega {
            assert!(i < j, "diagonal or unordered pair sampled");
        }
        // distinct unordered pairs
        let mut seen = std::collections::HashSet::new();
        for &p in &inst.omega {
            assert!(seen.insert(p));
        }
    }

    #[test]
    fn generation_is_deterministic() {
        let a = gen_matrix_completion(9, 8, 3);
        let b = gen_matrix_completion(9, 8, 3);
        assert_eq!(a, b);
    }

    #[test]
    fn ground_truth_is_feasible() {
        let inst = gen_matrix_completion(4, 10, 5);
        let p = matrix_completion_problem(&inst, MatrixReg::Nuclear);
        let b = inst.ground_truth();
        let c = p.c(b.as_slice());
        assert!(
            norm(&c) <= 1e-12 * b.frob_norm().max(1.0),
            "‖c‖ = {}",
            norm(&c)
        );
    }

    #[test]
    fn ground_truth_rank_is_latent_dimension() {
        let inst = gen_matrix_completion(6, 10, 5);
        let b = inst.ground_truth();
        let svd = svd_dense(&b).unwrap();
        assert_eq!(numerical_rank(&svd.sigma, (10, 10)), 5);
    }

    #[test]
    fn nuclear_value_on_diagonal() {
        let inst = gen_matrix_completion(2, 4, 2);
        let p = matrix_completion_problem(&inst, MatrixReg::Nuclear);
        let mut b = vec![0.0; 16];
        b[0] = 2.0;
        b[5] = 3.0;
        assert!((p.g(&b) - 5.0).abs() < 1e-12);
    }

    #[test]
    fn jacobian_transpose_matches_dense_assembly() {
        let inst = gen_matrix_completion(5, 6, 2);
        let p = matrix_completion_problem(&inst, MatrixReg::Rank);
        let n = 36;
        let m = inst.m_total();
        let b: Vec<f64> = (0..n).map(|i| i as f64 * 0.1).collect();
        // columns of the dense Jacobian via directional differences of the
        // (linear) constraint map
        let c0 = p.c(&b);
        let mut jac = vec![vec![0.0; n]; m];
        for col in 0..n {
            let mut bp = b.clone();
            bp[col] += 1.0;
            let cp = p.c(&bp);
            for row in 0..m {
                jac[row][col] = cp[row] - c0[row];
            }
        }
        let v: Vec<f64> = (0..m).map(|i| (i as f64 * 0.37).sin()).collect();
        let jtv = p.jtv(&b, &v);
        for col in 0..n {
            let expected: f64 = (0..m).map(|row| jac[row][col] * v[row]).sum();
            assert!((jtv[col] - expected).abs() < 1e-9);
        }
    }
}
